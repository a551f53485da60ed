"""Groebner bases for graded submodules of free modules over F_p[x_1..x_m].

Submodules of free modules over a quotient R = S/I are handled by adjoining
the vectors g*e_j (g in a Groebner basis of I) to the generators.  All
inputs are homogeneous, so Buchberger's algorithm runs degree by degree;
that also yields minimal generating sets (graded Nakayama) for free.

The default module order is term-over-position: grevlex on the monomial,
ties broken in favour of the lower component index.  Kernels and lifts use
an elimination variant in which every component of the top block beats
every component of the bottom block.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Sequence

from .caps import active as active_caps
from .field import inv
from .matrix import Vector, vec_degree
from .poly import PolyRing, RawPoly, exps_add, exps_divides, exps_lcm, exps_sub


class CapExceeded(RuntimeError):
    """A resource cap (degree, rank, homological degree) was hit."""


DEFAULT_MAX_DEGREE = 40


class TermOrder:
    """Module term order; ``elim`` is the size of the eliminated top block (0: plain TOP)."""

    __slots__ = ("ring", "elim", "_cache")

    def __init__(self, ring: PolyRing, elim: int = 0):
        self.ring = ring
        self.elim = elim
        self._cache: dict = {}

    def key(self, t):
        k = self._cache.get(t)
        if k is None:
            comp, e = t
            if self.elim:
                k = (comp < self.elim, self.ring.mono_key(e), -comp)
            else:
                k = (self.ring.mono_key(e), -comp)
            self._cache[t] = k
        return k


class GroebnerBasis:
    """A Groebner basis of a graded submodule of the free module with the given degrees."""

    def __init__(self, ring: PolyRing, degrees: Sequence[int], order: TermOrder):
        self.ring = ring
        self.degrees = tuple(degrees)
        self.order = order
        self.elems: list[Vector] = []
        self.leads: list[tuple] = []
        self.by_comp: dict[int, list[int]] = {}
        self.reduced = False

    def __len__(self):
        return len(self.elems)

    def lead_term(self, v: Vector):
        return max(v, key=self.order.key)

    def _find_divisor(self, comp: int, e) -> int | None:
        for i in self.by_comp.get(comp, ()):
            if exps_divides(self.leads[i][1], e):
                return i
        return None

    def _append(self, v: Vector) -> int:
        """Add a vector (made monic) and return its index."""
        p = self.ring.p
        lt = self.lead_term(v)
        c = inv(v[lt], p)
        if c != 1:
            v = {t: (a * c) % p for t, a in v.items()}
        idx = len(self.elems)
        self.elems.append(v)
        self.leads.append(lt)
        self.by_comp.setdefault(lt[0], []).append(idx)
        return idx

    def reduce(self, v: Vector, full: bool = True) -> Vector:
        """Normal form of v; with ``full=False`` only the lead term is reduced."""
        p = self.ring.p
        key = self.order.key
        rem = dict(v)
        out: Vector = {}
        elems, leads = self.elems, self.leads
        while rem:
            t = max(rem, key=key)
            c = rem[t]
            comp, e = t
            d = self._find_divisor(comp, e)
            if d is None:
                if not full:
                    return rem
                out[t] = c
                del rem[t]
                continue
            q = exps_sub(e, leads[d][1])
            for (gk, ge), gc in elems[d].items():
                tt = (gk, exps_add(ge, q))
                x = (rem.get(tt, 0) - c * gc) % p
                if x:
                    rem[tt] = x
                else:
                    rem.pop(tt, None)
        return out

    def contains(self, v: Vector) -> bool:
        return not self.reduce(v, full=False)

    def reduce_with_cofactors(self, v: Vector) -> tuple[Vector, dict[int, dict]]:
        """Full normal form together with v - nf(v) = sum q_i g_i (q_i as raw polys)."""
        p = self.ring.p
        key = self.order.key
        rem = dict(v)
        out: Vector = {}
        quo: dict[int, dict] = {}
        while rem:
            t = max(rem, key=key)
            c = rem[t]
            comp, e = t
            d = self._find_divisor(comp, e)
            if d is None:
                out[t] = c
                del rem[t]
                continue
            q = exps_sub(e, self.leads[d][1])
            qd = quo.setdefault(d, {})
            qd[q] = (qd.get(q, 0) + c) % p
            for (gk, ge), gc in self.elems[d].items():
                tt = (gk, exps_add(ge, q))
                x = (rem.get(tt, 0) - c * gc) % p
                if x:
                    rem[tt] = x
                else:
                    rem.pop(tt, None)
        return out, quo

    def interreduce(self) -> None:
        keep = []
        for i, (comp, e) in enumerate(self.leads):
            if any(j != i and exps_divides(self.leads[j][1], e) and self.leads[j][0] == comp and
                   (self.leads[j][1] != e or j < i) for j in self.by_comp.get(comp, ())):
                continue
            keep.append(i)
        elems = [self.elems[i] for i in keep]
        self.elems, self.leads, self.by_comp = [], [], {}
        for v in elems:
            self._append(v)
        for i, v in enumerate(self.elems):
            lt = self.leads[i]
            tail = dict(v)
            del tail[lt]
            tail = self.reduce(tail)
            tail[lt] = 1
            self.elems[i] = tail
        self.reduced = True

    def lead_monomials(self) -> dict[int, list]:
        """Lead exponents grouped by component."""
        out: dict[int, list] = {}
        for comp, e in self.leads:
            out.setdefault(comp, []).append(e)
        return out


def buchberger(
    ring: PolyRing,
    degrees: Sequence[int],
    gens: Sequence[Vector],
    order: TermOrder | None = None,
    preset: Sequence[Vector] = (),
    max_degree: int | None = None,
    reduce: bool = True,
) -> tuple[GroebnerBasis, list[bool]]:
    """Degree-by-degree Buchberger with Gebauer-Moeller pair elimination.

    ``max_degree`` bounds the working degree relative to the lowest basis
    degree (default: the active cap).  ``preset`` vectors (typically I*e_j) are part of the submodule but are not
    tracked; for ``gens`` the returned flags mark a minimal generating subset
    of the submodule modulo the preset part.
    """
    order = order or TermOrder(ring)
    if max_degree is None:
        max_degree = active_caps().max_degree
    base = min(degrees, default=0)
    gb = GroebnerBasis(ring, degrees, order)
    p = ring.p
    flags = [False] * len(gens)
    pending: dict[int, list] = {}
    for v in preset:
        if v:
            pending.setdefault(vec_degree(v, ring, degrees), []).append((0, -1, v))
    for i, v in enumerate(gens):
        if v:
            pending.setdefault(vec_degree(v, ring, degrees), []).append((1, i, v))

    heap: list = []
    alive: dict = {}
    seq = 0

    def add(v: Vector) -> None:
        nonlocal seq
        t = gb._append(v)
        comp, lt = gb.leads[t]
        others = [i for i in gb.by_comp[comp] if i != t]
        # B criterion on old pairs
        for (i, j), L in list(alive.items()):
            if gb.leads[i][0] != comp:
                continue
            if exps_divides(lt, L) and exps_lcm(gb.leads[i][1], lt) != L and exps_lcm(gb.leads[j][1], lt) != L:
                del alive[(i, j)]
        # M and F criteria on new pairs
        cand = sorted(((ring.deg(L), i, L) for i in others for L in [exps_lcm(gb.leads[i][1], lt)]))
        kept: list = []
        for d, i, L in cand:
            if any(exps_divides(L2, L) for L2 in kept):
                continue
            kept.append(L)
            alive[(i, t)] = L
            seq += 1
            heapq.heappush(heap, (d + degrees[comp], seq, i, t))

    def spoly(i: int, j: int, L) -> Vector:
        gi, gj = gb.elems[i], gb.elems[j]
        qi = exps_sub(L, gb.leads[i][1])
        qj = exps_sub(L, gb.leads[j][1])
        out: Vector = {}
        for (k, e), c in gi.items():
            out[(k, exps_add(e, qi))] = c
        for (k, e), c in gj.items():
            tt = (k, exps_add(e, qj))
            x = (out.get(tt, 0) - c) % p
            if x:
                out[tt] = x
            else:
                out.pop(tt, None)
        return out

    while heap or pending:
        cand = []
        if heap:
            cand.append(heap[0][0])
        if pending:
            cand.append(min(pending))
        deg = min(cand)
        if deg - base > max_degree:
            raise CapExceeded(f"Groebner computation reached relative degree {deg - base} > cap {max_degree}")
        batch = []
        while heap and heap[0][0] == deg:
            _, _, i, j = heapq.heappop(heap)
            L = alive.pop((i, j), None)
            if L is not None:
                batch.append((i, j, L))
        for i, j, L in batch:
            r = gb.reduce(spoly(i, j, L), full=False)
            if r:
                add(r)
        for kind, idx, v in sorted(pending.pop(deg, []), key=lambda t: (t[0], t[1])):
            r = gb.reduce(v, full=False)
            if r:
                add(r)
                if kind == 1:
                    flags[idx] = True
    if reduce:
        gb.interreduce()
    return gb, flags


# ---------- quotient-ring helpers ----------

def ideal_basis(ring: PolyRing, polys: Sequence[RawPoly]) -> list[RawPoly]:
    """Reduced Groebner basis of a homogeneous ideal of S."""
    gens = [{(0, e): c for e, c in f.items()} for f in polys if f]
    gb, _ = buchberger(ring, (0,), gens)
    out = [{e: c for (_, e), c in g.items()} for g in gb.elems]
    # canonical order: ascending leading monomial
    return sorted(out, key=lambda f: ring.mono_key(max(f, key=ring.mono_key)))


def ideal_vectors(ideal: Sequence[RawPoly], comps: Sequence[int]) -> list[Vector]:
    return [{(j, e): c for e, c in g.items()} for j in comps for g in ideal]


def reduce_mod_ideal(ring: PolyRing, ideal: Sequence[RawPoly], v: Vector) -> Vector:
    """Normal form of v modulo I*F (componentwise polynomial reduction)."""
    if not ideal or not v:
        return dict(v)
    p = ring.p
    key = ring.mono_key
    leads = [max(g, key=key) for g in ideal]
    out: Vector = {}
    by_comp: dict[int, dict] = {}
    for (k, e), c in v.items():
        by_comp.setdefault(k, {})[e] = c
    for k, f in by_comp.items():
        rem = dict(f)
        while rem:
            e = max(rem, key=key)
            c = rem[e]
            for g, le in zip(ideal, leads):
                if exps_divides(le, e):
                    q = exps_sub(e, le)
                    lc = inv(g[le], p)
                    m = c * lc
                    for ge, gc in g.items():
                        tt = exps_add(ge, q)
                        x = (rem.get(tt, 0) - m * gc) % p
                        if x:
                            rem[tt] = x
                        else:
                            rem.pop(tt, None)
                    break
            else:
                out[(k, e)] = c
                del rem[e]
    return out


@dataclass
class SubmoduleEngine:
    """Groebner data for the submodule im(A) + I*F of a free module F over R = S/I."""

    ring: PolyRing
    ideal: tuple
    degrees: tuple
    gens: tuple
    max_degree: int | None = None
    _gb: GroebnerBasis | None = field(default=None, repr=False)
    _flags: list | None = field(default=None, repr=False)

    def _compute(self):
        if self._gb is None:
            preset = ideal_vectors(self.ideal, range(len(self.degrees)))
            self._gb, self._flags = buchberger(
                self.ring, self.degrees, list(self.gens), preset=preset, max_degree=self.max_degree
            )

    @property
    def gb(self) -> GroebnerBasis:
        self._compute()
        return self._gb

    @property
    def minimal_flags(self) -> list[bool]:
        self._compute()
        return self._flags

    def reduce(self, v: Vector) -> Vector:
        return self.gb.reduce(v)

    def contains(self, v: Vector) -> bool:
        return self.gb.contains(v)


class ImageEngine:
    """Elimination Groebner basis of the graph of A: F_src -> F_tgt over R = S/I.

    Gives generators of ker A and lifts through A.
    """

    def __init__(self, ring: PolyRing, ideal, tgt_degrees, src_degrees, cols: Sequence[Vector], max_degree=None):
        self.ring = ring
        self.ideal = tuple(ideal)
        self.r = len(tgt_degrees)
        self.n = len(src_degrees)
        self.tgt_degrees = tuple(tgt_degrees)
        self.src_degrees = tuple(src_degrees)
        r, nv = self.r, ring.nvars
        one = (0,) * nv
        aug = []
        for j, col in enumerate(cols):
            v = dict(col)
            v[(r + j, one)] = 1
            aug.append(v)
        preset = ideal_vectors(self.ideal, range(r))
        degrees = self.tgt_degrees + self.src_degrees
        self.gb, _ = buchberger(ring, degrees, aug, order=TermOrder(ring, elim=r), preset=preset,
                                max_degree=max_degree, reduce=True)

    def kernel_gens(self) -> list[Vector]:
        """Generators (not necessarily minimal) of ker A, reduced modulo I."""
        r = self.r
        out = []
        for g, (comp, _) in zip(self.gb.elems, self.gb.leads):
            if comp >= r:
                v = {(k - r, e): c for (k, e), c in g.items()}
                v = reduce_mod_ideal(self.ring, self.ideal, v)
                if v:
                    out.append(v)
        return out

    def lift(self, v: Vector) -> Vector | None:
        """Some u with A u = v modulo I, or None if v is not in the image."""
        nf = self.gb.reduce(v)
        r = self.r
        if any(k < r for (k, _) in nf):
            return None
        p = self.ring.p
        return reduce_mod_ideal(self.ring, self.ideal, {(k - r, e): (-c) % p for (k, e), c in nf.items()})


def minimal_subset(ring: PolyRing, ideal, degrees, vectors: Sequence[Vector], max_degree=None) -> list[int]:
    """Indices of a minimal generating subset of span(vectors) + I*F."""
    eng = SubmoduleEngine(ring, tuple(ideal), tuple(degrees), tuple(vectors), max_degree)
    return [i for i, f in enumerate(eng.minimal_flags) if f]


def kernel(ring: PolyRing, ideal, tgt_degrees, src_degrees, cols: Sequence[Vector], minimal: bool = True,
           max_degree=None) -> list[Vector]:
    """Generators of ker(R^src -> R^tgt); a minimal system when ``minimal``."""
    if len(src_degrees) == 0:
        return []
    eng = ImageEngine(ring, ideal, tgt_degrees, src_degrees, cols, max_degree)
    gens = eng.kernel_gens()
    if minimal and gens:
        keep = minimal_subset(ring, ideal, src_degrees, gens, max_degree)
        gens = [gens[i] for i in keep]
    gens.sort(key=lambda v: vec_degree(v, ring, src_degrees))
    return gens


def syzygies(ring: PolyRing, ideal, tgt_degrees, src_degrees, cols: Sequence[Vector]) -> list[Vector]:
    """Minimal generators of the syzygies of the columns over R = S/I."""
    return kernel(ring, ideal, tgt_degrees, src_degrees, cols)
