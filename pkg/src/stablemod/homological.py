"""Resolutions and the functors built on them: syzygy, transpose, dual,
the biduality map, D, Ext^i(-, R), grade, depth, pd and G-dimension."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

from . import caps as caps_mod
from .groebner import CapExceeded, kernel, reduce_mod_ideal
from .matrix import Vector, vec_degree
from .modcat import (
    IsoVerdict,
    Module,
    ModuleMap,
    Subquotient,
    dual_module,
    evaluation_matrix,
    hom_module,
    is_isomorphic,
    is_stably_isomorphic,
    kernel_of_map,
    minimal_presentation,
    strip_free_summands,
    subquotient,
)
from .rings import RingSpec

INF = math.inf


class NotGorenstein(ValueError):
    pass


# ---------- resolutions ----------

class _Store:
    """Lazily extended minimal resolution of one (minimal) module."""

    def __init__(self, M: Module):
        self.module = M
        self.lock = threading.Lock()
        # degrees[i]: basis degrees of F_i; diffs[i]: columns of d_i: F_i -> F_{i-1}
        self.degrees: list[tuple] = [M.degrees]
        self.diffs: list[list] = [[]]
        if M.rank:
            self.degrees.append(M.rel_degrees)
            self.diffs.append(list(M.rels))

    def extend(self, t: int) -> None:
        if len(self.degrees) > t:
            return
        with self.lock:
            cap = caps_mod.active()
            ring = self.module.ring
            while len(self.degrees) <= t:
                i = len(self.degrees)
                if i > cap.max_hom + 1:
                    raise CapExceeded(f"homological degree {i - 1} exceeds cap {cap.max_hom}")
                prev = self.degrees[i - 1]
                if not prev:
                    self.degrees.append(())
                    self.diffs.append([])
                    continue
                cols = kernel(ring.poly, ring.ideal_gb, self.degrees[i - 2], prev, self.diffs[i - 1])
                if len(cols) > cap.max_rank:
                    raise CapExceeded(f"free rank {len(cols)} exceeds cap {cap.max_rank}")
                degs = tuple(vec_degree(v, ring.poly, prev) for v in cols)
                self.diffs.append(cols)
                self.degrees.append(degs)


@dataclass(frozen=True)
class Resolution:
    """F_0 <- F_1 <- ... <- F_t; ``diffs[i]`` holds the columns of d_i (diffs[0] is empty)."""

    module: Module
    degrees: tuple
    diffs: tuple

    @property
    def ring(self) -> RingSpec:
        return self.module.ring

    @property
    def top(self) -> int:
        return len(self.degrees) - 1

    def ranks(self) -> list[int]:
        return [len(d) for d in self.degrees]

    @property
    def length(self):
        """pd of the module if the resolution visibly stops within range; -inf for 0, else None."""
        r = self.ranks()
        if r[0] == 0:
            return -INF
        for i, n in enumerate(r):
            if n == 0:
                return i - 1
        return None

    @property
    def is_minimal(self) -> bool:
        one = self.ring.poly.one
        return not any(e == one for cols in self.diffs for v in cols for (_, e) in v)

    def betti(self) -> BettiTable:
        entries: dict = {}
        for i, degs in enumerate(self.degrees):
            for d in degs:
                entries[(i, d)] = entries.get((i, d), 0) + 1
        return BettiTable(tuple(sorted(entries.items())))

    def check_complex(self) -> bool:
        """d_i . d_{i+1} = 0 modulo I at every stage."""
        ring = self.ring
        p = ring.p
        from .matrix import apply_columns

        for i in range(1, self.top):
            for v in self.diffs[i + 1]:
                if reduce_mod_ideal(ring.poly, ring.ideal_gb, apply_columns(self.diffs[i], v, p)):
                    return False
        return True

    def check_exact(self) -> bool:
        """im d_{i+1} = ker d_i at each stage below the top, by Groebner membership both ways."""
        ring = self.ring
        from .groebner import SubmoduleEngine

        for i in range(1, self.top):
            ker = kernel(ring.poly, ring.ideal_gb, self.degrees[i - 1], self.degrees[i], self.diffs[i], minimal=False)
            img = SubmoduleEngine(ring.poly, ring.ideal_gb, self.degrees[i], tuple(self.diffs[i + 1]))
            kk = SubmoduleEngine(ring.poly, ring.ideal_gb, self.degrees[i], tuple(ker))
            if not all(img.contains(v) for v in ker) or not all(kk.contains(v) for v in self.diffs[i + 1]):
                return False
        return True


@dataclass(frozen=True)
class BettiTable:
    entries: tuple  # ((i, j), count) sorted

    def as_dict(self) -> dict:
        return dict(self.entries)

    def total(self) -> list[int]:
        out: dict = {}
        for (i, _), c in self.entries:
            out[i] = out.get(i, 0) + c
        return [out.get(i, 0) for i in range(max(out) + 1)] if out else []

    def shifted_homological(self, k: int) -> BettiTable:
        return BettiTable(tuple(((i + k, j), c) for (i, j), c in self.entries if i + k >= 0))

    def format(self) -> str:
        """Macaulay-style table: row j - i, column i."""
        d = self.as_dict()
        if not d:
            return "(zero)"
        cols = range(max(i for i, _ in d) + 1)
        rows = sorted({j - i for i, j in d})
        width = max(len(str(c)) for c in d.values()) + 1
        head = "      " + "".join(f"{i:>{width}}" for i in cols)
        lines = [head, "total:" + "".join(f"{t:>{width}}" for t in self.total())]
        for r in rows:
            cells = "".join(f"{d.get((i, i + r), '.') !s:>{width}}" for i in cols)
            lines.append(f"{r:>5}:" + cells)
        return "\n".join(lines)


def _store(M: Module) -> _Store:
    M = minimal_presentation(M)
    return M.cached("resolution", lambda: _Store(M))


def resolve(M: Module, t: int) -> Resolution:
    """Minimal graded free resolution F_0..F_t (and F_{t+1} when cheap to know)."""
    if t < 0:
        raise ValueError("t must be non-negative")
    st = _store(M)
    st.extend(t + 1)
    n = t + 2 if len(st.degrees) > t + 1 and not st.degrees[t + 1] else t + 1
    return Resolution(st.module, tuple(st.degrees[:n]), tuple(st.diffs[:n]))


def betti_table(M: Module, t: int) -> BettiTable:
    st = _store(M)
    st.extend(t)
    return Resolution(st.module, tuple(st.degrees[:t + 1]), tuple(st.diffs[:t + 1])).betti()


# ---------- syzygy and transpose ----------

def syzygy(M: Module, n: int = 1, strip: bool = True) -> Module:
    """Omega^n M as a minimal model without free summands."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return minimal_presentation(M)
    st = _store(M)
    st.extend(n + 1)
    out = minimal_presentation(Module(M.ring, st.degrees[n], st.diffs[n + 1], check=False))
    return strip_free_summands(out).module if strip else out


def transpose(M: Module, strip: bool = True) -> Module:
    """Tr M = coker(d_1^*), free summands removed."""
    M = minimal_presentation(M)

    def compute():
        # generators: dual basis of F_1 (degree -b_l); relations: rows of d_1
        rels: list[Vector] = [dict() for _ in range(M.rank)]
        for l, v in enumerate(M.rels):
            for (j, e), c in v.items():
                rels[j][(l, e)] = c
        T = Module(M.ring, [-d for d in M.rel_degrees], [v for v in rels if v], check=False)
        T = minimal_presentation(T)
        return strip_free_summands(T).module if strip else T

    return M.cached("transpose" if strip else "transpose_raw", compute)


# ---------- dual, biduality, D ----------

def dual(M: Module) -> Module:
    return dual_module(M).module


@dataclass
class Biduality:
    """sigma_M: M -> M** realised inside R^s, s = number of generators of M*.

    ``phi`` are the columns of the evaluation map F_0 -> R^s, ``psi`` the
    generators of M** in R^s, ``eps_degrees`` the degrees of the basis of R^s.
    """

    module: Module
    eps_degrees: list
    phi: list
    psi: list
    sigma: ModuleMap
    bidual: Module

    def D(self) -> Subquotient:
        return subquotient(self.module.ring, self.eps_degrees, self.phi)

    def kernel(self) -> Module:
        return kernel_of_map(self.sigma).module

    def cokernel(self) -> Module:
        return subquotient(self.module.ring, self.eps_degrees, self.psi, self.phi).module


def bidual_map(M: Module) -> Biduality:
    M = minimal_presentation(M)

    def compute():
        ring = M.ring
        hom = dual_module(M)
        phi = evaluation_matrix(M, hom)
        eps = [-d for d in hom.module.degrees]
        R = Module.free(ring, [0])
        target = Module.free(ring, eps)
        sigma = ModuleMap(M, target, phi)
        if not hom.maps:
            return Biduality(M, [], phi, [], sigma, Module.zero(ring))
        hh = hom_module(hom.module, R)
        psi = []
        for g in hh.maps:
            psi.append({(k, e): c for k, v in enumerate(g.phi0) for (_, e), c in v.items()})
        return Biduality(M, eps, phi, psi, sigma, hh.module)

    return M.cached("bidual", compute)


def d_functor(M: Module) -> Module:
    """D(M) = image of sigma_M."""
    return bidual_map(M).D().module


# ---------- Ext ----------

def ext(M: Module, i: int) -> Module:
    """Ext^i_R(M, R) from the dualised minimal resolution."""
    if i < 0:
        raise ValueError("i must be non-negative")
    if i == 0:
        return dual(M)
    M = minimal_presentation(M)

    def compute():
        ring = M.ring
        st = _store(M)
        st.extend(i + 1)
        Fi = st.degrees[i]
        if not Fi:
            return Module.zero(ring)
        dual_i = [-d for d in Fi]
        # d_{i+1}^*: F_i^* -> F_{i+1}^*, column l = row l of d_{i+1}
        nxt = st.degrees[i + 1]
        if nxt:
            cols = [dict() for _ in Fi]
            for m, v in enumerate(st.diffs[i + 1]):
                for (l, e), c in v.items():
                    cols[l][(m, e)] = c
            G = kernel(ring.poly, ring.ideal_gb, [-d for d in nxt], dual_i, cols, minimal=False)
        else:
            G = [{(l, ring.poly.one): 1} for l in range(len(Fi))]
        # im d_i^*: column j = row j of d_i
        U = [dict() for _ in st.degrees[i - 1]]
        for l, v in enumerate(st.diffs[i]):
            for (j, e), c in v.items():
                U[j][(l, e)] = c
        return subquotient(ring, dual_i, G, [u for u in U if u]).module

    return M.cached(("ext", i), compute)


# ---------- numerical invariants ----------

def ring_depth(ring: RingSpec) -> int:
    if ring.cohen_macaulay or ring.is_polynomial_ring:
        return ring.dim
    return depth(Module.free(ring, [0]))


def grade(M: Module):
    """least i with Ext^i(M, R) != 0; +inf for the zero module."""
    if M.is_zero():
        return INF
    top = ring_depth(M.ring)
    for i in range(top + 1):
        if not ext(M, i).is_zero():
            return i
    raise RuntimeError("no nonvanishing Ext up to depth R for a nonzero module")


def as_ambient_module(M: Module) -> Module:
    """M viewed over the polynomial ring S, presented by [d | I F_0]."""
    ring = M.ring
    S = ring.ambient()
    rels = list(M.rels) + [{(j, e): c for e, c in g.items()} for j in range(M.rank) for g in ring.ideal_gb]
    return Module(S, M.degrees, rels, check=False)


def pd_ambient(M: Module):
    """pd over the ambient polynomial ring (finite by Hilbert's syzygy theorem)."""
    if M.is_zero():
        return -INF
    N = as_ambient_module(M)
    res = resolve(N, N.ring.nvars + 1)
    return res.length


def depth(M: Module):
    """depth_R M = nvars - pd_S M (Auslander-Buchsbaum over S); +inf for 0."""
    if M.is_zero():
        return INF
    return M.ring.nvars - pd_ambient(M)


@dataclass(frozen=True)
class PdValue:
    value: float
    exact: bool

    def __str__(self):
        if self.value == -INF:
            return "-inf"
        return str(int(self.value)) if self.exact else f">={int(self.value)}"


def pd_over_R(M: Module, bound: int) -> PdValue:
    if M.is_zero():
        return PdValue(-INF, True)
    res = resolve(M, bound)
    n = res.length
    if n is not None and n <= bound:
        return PdValue(n, True)
    return PdValue(bound + 1, False)


def gdim_gorenstein(M: Module):
    ring = M.ring
    if not ring.gorenstein:
        raise NotGorenstein(f"ring {ring.name} is not flagged Gorenstein")
    if M.is_zero():
        return -INF
    g = 0
    for i in range(1, ring.dim + 1):
        if not ext(M, i).is_zero():
            g = i
    return g


# ---------- canonical sequences ----------

@dataclass
class SequenceCheck:
    """One certified piece of a canonical exact sequence."""

    name: str
    left: Module
    right: Module
    verdict: IsoVerdict
    hs_ok: bool

    @property
    def certified(self) -> bool:
        return self.verdict.verified and self.hs_ok

    @property
    def failed(self) -> bool:
        return self.verdict.refuted or not self.hs_ok


@dataclass
class CanonicalSequences:
    module: Module
    ext1: Module
    ext2: Module
    D: Module
    bidual: Module
    ker_sigma: Module
    coker_sigma: Module
    checks: list = field(default_factory=list)

    @property
    def status(self) -> str:
        if any(c.failed for c in self.checks):
            return "FAIL"
        if all(c.certified for c in self.checks):
            return "PASS"
        return "UNCERTIFIED"


def canonical_sequences(M: Module, seed: int = 0) -> CanonicalSequences:
    """0 -> Ext^1(Tr M,R) -> M -> D(M) -> 0 and 0 -> Ext^1(Tr M,R) -> M -> M** -> Ext^2(Tr M,R) -> 0."""
    M = minimal_presentation(M)
    bd = bidual_map(M)
    T = transpose(M)
    e1, e2 = ext(T, 1), ext(T, 2)
    Dm = bd.D().module
    K = bd.kernel()
    C = bd.cokernel()
    hs = M.hilbert_series()
    # additivity: HS(M) = HS(ker) + HS(D), HS(M**) = HS(D) + HS(coker)
    ok_a = hs == K.hilbert_series() + Dm.hilbert_series()
    ok_b = bd.bidual.hilbert_series() == Dm.hilbert_series() + C.hilbert_series()
    checks = [
        SequenceCheck("ker sigma = Ext^1(Tr M,R)", K, e1, is_isomorphic(K, e1, seed=seed), ok_a),
        SequenceCheck("coker sigma = Ext^2(Tr M,R)", C, e2, is_isomorphic(C, e2, seed=seed), ok_b),
    ]
    return CanonicalSequences(M, e1, e2, Dm, bd.bidual, K, C, checks)


def omega_tr_omega_tr(M: Module) -> Module:
    return syzygy(transpose(syzygy(transpose(M), 1)), 1)


def stably_equal(M: Module, N: Module, seed: int = 0) -> IsoVerdict:
    return is_stably_isomorphic(M, N, allow_shift=True, seed=seed)
