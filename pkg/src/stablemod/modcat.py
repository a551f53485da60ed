"""Finitely presented graded modules over R = S/I and maps between them.

A module is the cokernel of a homogeneous relation matrix ``F1 -> F0`` over
R.  Everything here is graded; "local" always means local at the irrelevant
ideal, which makes minimal presentations, Betti numbers and free-summand
detection decidable by graded Nakayama.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import field as ff
from .groebner import (
    ImageEngine,
    SubmoduleEngine,
    kernel,
    minimal_subset,
    reduce_mod_ideal,
)
from .hilbert import HilbertSeries
from .matrix import (
    FreeModule,
    Matrix,
    HomogeneityError,
    Vector,
    apply_columns,
    format_vector,
    unit_vector,
    vaxpy,
    vec_degree,
    vmul_term,
)
from .rings import RingSpec


class Module:
    """coker(rels: F1 -> F0) over ``ring``; ``degrees`` are the degrees of the basis of F0.

    Instances are treated as immutable.  Derived data (Groebner basis of the
    relations, Hilbert series, minimal model, resolutions) is cached.
    """

    __slots__ = ("ring", "degrees", "rels", "_cache", "_lock", "__weakref__")

    def __init__(self, ring: RingSpec, degrees: Sequence[int], rels: Sequence[Vector] = (), check: bool = True):
        self.ring = ring
        self.degrees = tuple(int(d) for d in degrees)
        clean = []
        for v in rels:
            v = reduce_mod_ideal(ring.poly, ring.ideal_gb, v)
            if v:
                clean.append(v)
        self.rels = tuple(clean)
        self._cache: dict = {}
        self._lock = threading.RLock()
        if check:
            self._check()

    def _check(self):
        r = len(self.degrees)
        for v in self.rels:
            for (k, e) in v:
                if not 0 <= k < r:
                    raise ValueError("relation refers to a missing generator")
            d = {self.ring.poly.deg(e) + self.degrees[k] for (k, e) in v}
            if len(d) > 1:
                raise HomogeneityError(f"relation {format_vector(v, self.ring.poly, self.gen_names())} is not homogeneous")

    # construction
    @classmethod
    def free(cls, ring: RingSpec, degrees: Sequence[int]) -> Module:
        return cls(ring, degrees, ())

    @classmethod
    def zero(cls, ring: RingSpec) -> Module:
        return cls(ring, (), ())

    @classmethod
    def from_matrix(cls, mat: Matrix, ring: RingSpec) -> Module:
        return cls(ring, mat.tgt.degrees, mat.cols)

    @classmethod
    def cyclic(cls, ring: RingSpec, polys: Sequence[str], degree: int = 0) -> Module:
        """R(-degree)/(polys)."""
        from .textio import parse_poly

        rels = [{(0, e): c for e, c in parse_poly(f, ring.poly).items()} for f in polys]
        return cls(ring, [degree], rels)

    def gen_names(self) -> list[str]:
        return [f"e{i}" for i in range(len(self.degrees))]

    # basic data
    @property
    def rank(self) -> int:
        """Number of generators of this presentation."""
        return len(self.degrees)

    @property
    def F0(self) -> FreeModule:
        return FreeModule(self.degrees)

    @property
    def rel_degrees(self) -> tuple[int, ...]:
        return tuple(vec_degree(v, self.ring.poly, self.degrees) for v in self.rels)

    def relation_matrix(self) -> Matrix:
        return Matrix(self.ring.poly, FreeModule(self.rel_degrees), self.F0, self.rels, check=False)

    @property
    def key(self) -> tuple:
        k = self._cache.get("key")
        if k is None:
            k = (self.ring.key, self.degrees, tuple(tuple(sorted(v.items())) for v in self.rels))
            self._cache["key"] = k
        return k

    def __eq__(self, other):
        return isinstance(other, Module) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def cached(self, name, fn):
        with self._lock:
            if name not in self._cache:
                self._cache[name] = fn()
            return self._cache[name]

    @property
    def engine(self) -> SubmoduleEngine:
        """Groebner data of im(rels) + I*F0."""
        return self.cached("engine", lambda: SubmoduleEngine(self.ring.poly, self.ring.ideal_gb, self.degrees, self.rels))

    def hilbert_series(self) -> HilbertSeries:
        return self.cached(
            "hs", lambda: HilbertSeries.of_initial_module(self.ring.poly, self.degrees, self.engine.gb.lead_monomials())
        )

    def is_zero(self) -> bool:
        return self.hilbert_series().is_zero()

    def krull_dim(self) -> int:
        return self.hilbert_series().dim

    def is_finite_length(self) -> bool:
        return self.hilbert_series().is_polynomial()

    def is_minimal(self) -> bool:
        """No relation entry is a unit (the relation columns may still be redundant)."""
        one = self.ring.poly.one
        return not any(e == one for v in self.rels for (_, e) in v)

    def reduce(self, v: Vector) -> Vector:
        """Normal form of an element of F0 modulo the relations."""
        return self.engine.reduce(v)

    def shifted(self, s: int) -> Module:
        """The twist M(-s): every generator degree increases by s."""
        return Module(self.ring, [d + s for d in self.degrees], self.rels, check=False)

    def direct_sum(self, other: Module) -> Module:
        r = self.rank
        rels = list(self.rels) + [{(k + r, e): c for (k, e), c in v.items()} for v in other.rels]
        return Module(self.ring, self.degrees + other.degrees, rels, check=False)

    def __add__(self, other: Module) -> Module:
        return self.direct_sum(other)

    def format(self, name: str = "M") -> str:
        from .textio import format_module

        return format_module(name, self)

    def __repr__(self):
        rels = "; ".join(format_vector(v, self.ring.poly, self.gen_names()) for v in self.rels)
        return f"Module[{self.ring.name}](gens {list(self.degrees)}; rels {{{rels}}})"


# ---------- minimal presentations ----------

@dataclass
class MinimalModel:
    """A minimal presentation together with the isomorphism to the original.

    ``kept[k]`` is the original generator that became generator k;
    ``to_new[i]`` expresses original generator i in the new generators.
    """

    module: Module
    kept: list
    to_new: list


def _minimal_model(M: Module) -> MinimalModel:
    ring = M.ring
    poly = ring.poly
    p = poly.p
    one = poly.one
    r = M.rank
    cols = [dict(v) for v in M.rels]
    alive = [True] * r
    to_new: list[Vector] = [unit_vector(i, poly.nvars) for i in range(r)]
    while True:
        pivot = None
        for j, col in enumerate(cols):
            for i in range(r):
                if alive[i] and (i, one) in col:
                    pivot = (j, i)
                    break
            if pivot:
                break
        if pivot is None:
            break
        j, i = pivot
        col = cols.pop(j)
        u_inv = ff.inv(col[(i, one)], p)
        expr = {t: (-c * u_inv) % p for t, c in col.items() if t[0] != i}
        for k, other in enumerate(cols):
            f = {e: c for (kk, e), c in other.items() if kk == i}
            if not f:
                continue
            for e, c in f.items():
                vaxpy(other, vmul_term(col, e, 1, p), -c * u_inv, p)
            cols[k] = reduce_mod_ideal(poly, ring.ideal_gb, other)
        alive[i] = False
        for g in range(r):
            v = to_new[g]
            f = {e: c for (kk, e), c in v.items() if kk == i}
            if f:
                v = {t: c for t, c in v.items() if t[0] != i}
                for e, c in f.items():
                    vaxpy(v, vmul_term(expr, e, 1, p), c, p)
                to_new[g] = v
        cols = [c for c in cols if c]
    kept = [i for i in range(r) if alive[i]]
    renum = {old: new for new, old in enumerate(kept)}
    degrees = [M.degrees[i] for i in kept]
    cols = [{(renum[k], e): c for (k, e), c in v.items()} for v in cols]
    cols = [reduce_mod_ideal(poly, ring.ideal_gb, v) for v in cols]
    cols = [v for v in cols if v]
    if cols:
        keep = minimal_subset(poly, ring.ideal_gb, degrees, cols)
        cols = [cols[k] for k in keep]
    cols.sort(key=lambda v: vec_degree(v, poly, degrees))
    to_new = [{(renum[k], e): c for (k, e), c in v.items()} for v in to_new]
    Mmin = Module(ring, degrees, cols, check=False)
    Mmin._cache["minimal"] = MinimalModel(Mmin, list(range(len(degrees))),
                                          [unit_vector(k, poly.nvars) for k in range(len(degrees))])
    return MinimalModel(Mmin, kept, to_new)


def minimal_model(M: Module) -> MinimalModel:
    return M.cached("minimal", lambda: _minimal_model(M))


def minimal_presentation(M: Module) -> Module:
    """An isomorphic module whose relation matrix has entries in the maximal ideal
    and whose relations minimally generate the relation module."""
    return minimal_model(M).module


def betti0(M: Module) -> tuple:
    return tuple(sorted(minimal_presentation(M).degrees))


def betti1(M: Module) -> tuple:
    return tuple(sorted(minimal_presentation(M).rel_degrees))


# ---------- subquotients and maps ----------

@dataclass
class Subquotient:
    """(im G + U)/U inside a free module, presented minimally.

    ``embed[k]`` is the vector of the ambient free module representing
    generator k of ``module``; ``to_new[j]`` writes the j-th input vector of G
    in those generators.
    """

    module: Module
    embed: list
    to_new: list


def subquotient(ring: RingSpec, degrees: Sequence[int], G: Sequence[Vector], U: Sequence[Vector] = ()) -> Subquotient:
    poly = ring.poly
    G = [reduce_mod_ideal(poly, ring.ideal_gb, v) for v in G]
    idx = [j for j, v in enumerate(G) if v]
    gvecs = [G[j] for j in idx]
    gdeg = [vec_degree(v, poly, degrees) for v in gvecs]
    n = len(gvecs)
    if n == 0:
        return Subquotient(Module.zero(ring), [], [dict() for _ in G])
    U = [v for v in U if v]
    cols = gvecs + list(U)
    src = gdeg + [vec_degree(v, poly, degrees) for v in U]
    ker = kernel(poly, ring.ideal_gb, degrees, src, cols, minimal=False)
    rels = []
    for v in ker:
        w = {(k, e): c for (k, e), c in v.items() if k < n}
        if w:
            rels.append(w)
    raw = Module(ring, gdeg, rels, check=False)
    mm = minimal_model(raw)
    embed = [gvecs[k] for k in mm.kept]
    to_new = [dict() for _ in G]
    for pos, j in enumerate(idx):
        to_new[j] = mm.to_new[pos]
    return Subquotient(mm.module, embed, to_new)


class ModuleMap:
    """A graded homomorphism ``source -> target`` of the given degree.

    ``phi0[j]`` is the image of generator j of the source, a vector of the
    target's F0.  The certificate ``phi1`` satisfies
    phi0 . rels_src = rels_tgt . phi1 (mod I) and is computed on demand.
    """

    def __init__(self, source: Module, target: Module, phi0: Sequence[Vector], degree: int = 0, check: bool = False):
        if len(phi0) != source.rank:
            raise ValueError("one image vector per source generator required")
        self.source = source
        self.target = target
        poly = source.ring.poly
        self.phi0 = [reduce_mod_ideal(poly, source.ring.ideal_gb, v) for v in phi0]
        self.degree = degree
        self._phi1 = None
        if check and not self.is_well_defined():
            raise ValueError("map does not respect the relations")

    def image_of(self, v: Vector) -> Vector:
        return apply_columns(self.phi0, v, self.source.ring.p)

    def is_well_defined(self) -> bool:
        tgt = self.target
        poly = self.source.ring.poly
        for j, v in enumerate(self.phi0):
            if v and vec_degree(v, poly, tgt.degrees) != self.source.degrees[j] + self.degree:
                return False
        return all(tgt.engine.contains(self.image_of(r)) for r in self.source.rels)

    @property
    def phi1(self) -> list[Vector]:
        if self._phi1 is None:
            tgt = self.target
            ring = tgt.ring
            if not self.source.rels:
                self._phi1 = []
            else:
                eng = ImageEngine(ring.poly, ring.ideal_gb, tgt.degrees, tgt.rel_degrees, tgt.rels)
                out = []
                for r in self.source.rels:
                    u = eng.lift(self.image_of(r))
                    if u is None:
                        raise ValueError("map does not respect the relations")
                    out.append(u)
                self._phi1 = out
        return self._phi1

    def certificate_holds(self) -> bool:
        """Exact check of phi0 . d_src = d_tgt . phi1 modulo I."""
        ring = self.source.ring
        p = ring.p
        for r, u in zip(self.source.rels, self.phi1):
            lhs = self.image_of(r)
            rhs = apply_columns(self.target.rels, u, p)
            diff = dict(lhs)
            vaxpy(diff, rhs, -1, p)
            if reduce_mod_ideal(ring.poly, ring.ideal_gb, diff):
                return False
        return True

    def compose(self, other: ModuleMap) -> ModuleMap:
        """self . other."""
        return ModuleMap(other.source, self.target, [self.image_of(v) for v in other.phi0], self.degree + other.degree)

    def is_zero(self) -> bool:
        return all(not self.target.reduce(v) for v in self.phi0)

    def equals(self, other: ModuleMap) -> bool:
        p = self.source.ring.p
        for a, b in zip(self.phi0, other.phi0):
            d = dict(a)
            vaxpy(d, b, -1, p)
            if self.target.reduce(d):
                return False
        return True

    @classmethod
    def identity(cls, M: Module) -> ModuleMap:
        nv = M.ring.nvars
        return cls(M, M, [unit_vector(j, nv) for j in range(M.rank)])

    def matrix(self) -> Matrix:
        src = FreeModule(d + self.degree for d in self.source.degrees)
        return Matrix(self.source.ring.poly, src, self.target.F0, self.phi0, check=False)


def kernel_of_map(f: ModuleMap) -> Subquotient:
    """ker f as a submodule of the source (embed vectors live in source F0)."""
    src, tgt = f.source, f.target
    ring = src.ring
    poly = ring.poly
    n = src.rank
    if n == 0:
        return Subquotient(Module.zero(ring), [], [])
    cols = list(f.phi0) + list(tgt.rels)
    sdeg = [d + f.degree for d in src.degrees] + list(tgt.rel_degrees)
    ker = kernel(poly, ring.ideal_gb, tgt.degrees, sdeg, cols, minimal=False)
    G = []
    for v in ker:
        w = {(k, e): c for (k, e), c in v.items() if k < n}
        if w:
            G.append(w)
    return subquotient(ring, src.degrees, G, src.rels)


def cokernel_of_map(f: ModuleMap) -> Module:
    tgt = f.target
    return minimal_presentation(Module(tgt.ring, tgt.degrees, list(tgt.rels) + list(f.phi0), check=False))


def image_of_map(f: ModuleMap) -> Subquotient:
    return subquotient(f.target.ring, f.target.degrees, f.phi0, f.target.rels)


def kernel_module(f: ModuleMap) -> Module:
    return kernel_of_map(f).module


def image_module(f: ModuleMap) -> Module:
    return image_of_map(f).module


# ---------- Hom ----------

@dataclass
class HomModule:
    """Hom_R(M, N) presented, with the map represented by each generator."""

    module: Module
    maps: list
    source: Module
    target: Module


def hom_module(M: Module, N: Module) -> HomModule:
    """Presentation of Hom_R(M, N) via ker(Hom(F0,N) -> Hom(F1,N))."""
    ring = M.ring
    poly = ring.poly
    M = minimal_presentation(M)
    r0, s0 = M.rank, N.rank
    a, b = M.rels, N.rels
    r1, s1 = len(a), len(b)
    if r0 == 0 or s0 == 0:
        return HomModule(Module.zero(ring), [], M, N)
    adeg, bdeg = M.rel_degrees, N.rel_degrees
    # free module Hom(F0, G0): basis (j, i) -> j*s0 + i, degree deg g_i - deg e_j
    hdeg = [N.degrees[i] - M.degrees[j] for j in range(r0) for i in range(s0)]
    # target Hom(F1, G0): basis (l, i) -> l*s0 + i
    tdeg = [N.degrees[i] - adeg[l] for l in range(r1) for i in range(s0)]
    cols = []
    src_deg = []
    a_rows = [dict() for _ in range(r0)]  # a_rows[j][l] = entry a_{jl}
    for l, v in enumerate(a):
        for (j, e), c in v.items():
            a_rows[j].setdefault(l, {})[e] = c
    for j in range(r0):
        for i in range(s0):
            col: Vector = {}
            for l, f in a_rows[j].items():
                for e, c in f.items():
                    col[(l * s0 + i, e)] = c
            cols.append(col)
            src_deg.append(hdeg[j * s0 + i])
    p = poly.p
    for l in range(r1):
        for k in range(s1):
            col = {}
            for (i, e), c in b[k].items():
                col[(l * s0 + i, e)] = (-c) % p
            cols.append(col)
            src_deg.append(bdeg[k] - adeg[l])
    nphi = r0 * s0
    if r1 == 0:
        G = [unit_vector(t, poly.nvars) for t in range(nphi)]
    else:
        ker = kernel(poly, ring.ideal_gb, tdeg, src_deg, cols, minimal=False)
        G = []
        for v in ker:
            w = {(t, e): c for (t, e), c in v.items() if t < nphi}
            if w:
                G.append(w)
    # maps factoring through the relations of N: chi: e_j -> b_k
    U = []
    for j in range(r0):
        for k in range(s1):
            U.append({(j * s0 + i, e): c for (i, e), c in b[k].items()})
    sq = subquotient(ring, hdeg, G, U)
    maps = []
    for k, v in enumerate(sq.embed):
        phi0 = [dict() for _ in range(r0)]
        for (t, e), c in v.items():
            j, i = divmod(t, s0)
            phi0[j][(i, e)] = c
        maps.append(ModuleMap(M, N, phi0, degree=sq.module.degrees[k]))
    return HomModule(sq.module, maps, M, N)


def free_module(ring: RingSpec, degrees=(0,)) -> Module:
    return Module.free(ring, degrees)


def hom_degree0(M: Module, N: Module) -> list[list[Vector]]:
    """A spanning set of the F_p-space Hom(M, N)_0 of degree-0 maps, as phi0 lists.

    Solved as a linear system: every entry of phi0 ranges over the monomials
    of the right degree, and the images of the relations of M must vanish in N.
    """
    poly = M.ring.poly
    p = poly.p
    variables = []  # (j, i, exps)
    for j, dj in enumerate(M.degrees):
        for i, ci in enumerate(N.degrees):
            for e in poly.monomials_of_degree(dj - ci):
                variables.append((j, i, e))
    if not variables:
        return []
    if not M.rels:
        basis = np.eye(len(variables), dtype=np.int64)
    else:
        rows: dict = {}
        entries = []
        for t, (j, i, e) in enumerate(variables):
            for l, r in enumerate(M.rels):
                f = {ee: c for (k, ee), c in r.items() if k == j}
                if not f:
                    continue
                img: Vector = {}
                for ee, c in f.items():
                    img[(i, tuple(x + y for x, y in zip(e, ee)))] = c
                nf = N.reduce(img)
                for term, c in nf.items():
                    rid = rows.setdefault((l, term), len(rows))
                    entries.append((rid, t, c))
        A = np.zeros((len(rows), len(variables)), dtype=np.int64)
        for rid, t, c in entries:
            A[rid, t] = (A[rid, t] + c) % p
        basis = ff.nullspace(A, p)
    out = []
    for row in basis:
        phi0 = [dict() for _ in range(M.rank)]
        for t, c in enumerate(row):
            if c:
                j, i, e = variables[t]
                phi0[j][(i, e)] = int(c)
        out.append(phi0)
    return out


# ---------- free summands ----------

class SearchExhausted(RuntimeError):
    pass


@dataclass
class StripResult:
    module: Module
    free_rank: int
    free_degrees: list
    certified: bool = False

    def __iter__(self):
        return iter((self.module, self.free_rank, self.free_degrees))


def evaluation_matrix(M: Module, hom: HomModule) -> list[Vector]:
    """Columns Phi(e_j) = sum_k phi_k(e_j) eps_k in R^s, eps_k of degree -deg(phi_k)."""
    cols = [dict() for _ in range(hom.source.rank)]
    for k, f in enumerate(hom.maps):
        for j, v in enumerate(f.phi0):
            for (_, e), c in v.items():
                cols[j][(k, e)] = c
    return cols


def constant_rank(M: Module, phi_cols: Sequence[Vector], s: int) -> tuple[int, list[int]]:
    """Rank of Phi modulo the maximal ideal, with a set of independent rows."""
    poly = M.ring.poly
    one = poly.one
    C = np.zeros((s, len(phi_cols)), dtype=np.int64)
    for j, col in enumerate(phi_cols):
        for (k, e), c in col.items():
            if e == one:
                C[k, j] = c
    if C.size == 0:
        return 0, []
    _, piv = ff.rref(C.T.copy(), poly.p)
    return len(piv), piv


def dual_module(M: Module) -> HomModule:
    M = minimal_presentation(M)
    return M.cached("dual", lambda: hom_module(M, Module.free(M.ring, [0])))


def trace_in_maximal_ideal(M: Module) -> bool:
    """tau(M) is contained in the maximal ideal, i.e. M has no free summand."""
    M = minimal_presentation(M)
    hom = dual_module(M)
    rank, _ = constant_rank(M, evaluation_matrix(M, hom), len(hom.maps))
    return rank == 0


def strip_free_summands(M: Module, certify: bool = True) -> StripResult:
    """M = M_red + free; the free rank is the rank of the evaluation pairing mod m."""
    M = minimal_presentation(M)

    def compute():
        hom = dual_module(M)
        phi = evaluation_matrix(M, hom)
        rank, rows = constant_rank(M, phi, len(hom.maps))
        if rank == 0:
            return StripResult(M, 0, [], True)
        poly = M.ring.poly
        sel = {k: n for n, k in enumerate(rows)}
        psi = [{(sel[k], e): c for (k, e), c in col.items() if k in sel} for col in phi]
        tdeg = [-hom.module.degrees[k] for k in rows]
        ker = kernel(poly, M.ring.ideal_gb, tdeg, M.degrees, psi, minimal=False)
        red = subquotient(M.ring, M.degrees, ker, M.rels).module
        return StripResult(red, rank, sorted(tdeg))

    res = M.cached("strip", compute)
    if certify and not res.certified:
        if not trace_in_maximal_ideal(res.module):
            raise SearchExhausted("free summand remains after splitting")
        res.certified = True
    return res


# ---------- isomorphism ----------

class IsoStatus(enum.Enum):
    VERIFIED_ISO = "VERIFIED_ISO"
    REFUTED = "REFUTED"
    UNKNOWN = "UNKNOWN"


@dataclass
class IsoVerdict:
    status: IsoStatus
    shift: int = 0
    f: ModuleMap | None = None
    g: ModuleMap | None = None
    invariant: str = ""
    free_ranks: tuple = ()

    @property
    def verified(self) -> bool:
        return self.status is IsoStatus.VERIFIED_ISO

    @property
    def refuted(self) -> bool:
        return self.status is IsoStatus.REFUTED

    def __bool__(self):
        return self.verified

    def describe(self) -> str:
        s = self.status.value
        if self.verified and self.shift:
            s += f" (shift {self.shift})"
        if self.invariant:
            s += f": {self.invariant}"
        return s

    def recheck(self) -> bool:
        """Witness maps are well defined and mutually inverse."""
        if not self.verified:
            return False
        if self.f is None:
            return True
        f, g = self.f, self.g
        return (f.is_well_defined() and g.is_well_defined()
                and g.compose(f).equals(ModuleMap.identity(f.source))
                and f.compose(g).equals(ModuleMap.identity(f.target)))


ENUMERATION_LIMIT = 10**6
RANDOM_TRIALS = 10**4


def _constant_block(M: Module, N: Module, phi0: list[Vector]) -> np.ndarray:
    one = M.ring.poly.one
    C = np.zeros((N.rank, M.rank), dtype=np.int64)
    for j, v in enumerate(phi0):
        for (i, e), c in v.items():
            if e == one:
                C[i, j] = c
    return C


def _combine(basis: list[list[Vector]], coeffs, p: int, rank: int) -> list[Vector]:
    out = [dict() for _ in range(rank)]
    for c, phi in zip(coeffs, basis):
        c = int(c) % p
        if not c:
            continue
        for j, v in enumerate(phi):
            vaxpy(out[j], v, c, p)
    return out


def _inverse_map(f: ModuleMap) -> ModuleMap | None:
    """Solve g . f = id for g in Hom(N, M)_0."""
    M, N = f.source, f.target
    p = M.ring.p
    basis = hom_degree0(N, M)
    if not basis:
        return None
    rows: dict = {}
    entries = []
    rhs_entries = []
    nv = M.ring.nvars
    for t, phi in enumerate(basis):
        for j in range(M.rank):
            img = apply_columns(phi, f.phi0[j], p)
            for term, c in M.reduce(img).items():
                entries.append((rows.setdefault((j, term), len(rows)), t, c))
    for j in range(M.rank):
        for term, c in M.reduce(unit_vector(j, nv)).items():
            rhs_entries.append((rows.setdefault((j, term), len(rows)), c))
    A = np.zeros((len(rows), len(basis)), dtype=np.int64)
    b = np.zeros(len(rows), dtype=np.int64)
    for r, t, c in entries:
        A[r, t] = (A[r, t] + c) % p
    for r, c in rhs_entries:
        b[r] = (b[r] + c) % p
    x = ff.solve(A, b, p)
    if x is None:
        return None
    return ModuleMap(N, M, _combine(basis, x, p, N.rank))


def _betti_tables_differ(M: Module, N: Module, upto: int = 3) -> str:
    from .homological import betti_table

    try:
        bm = betti_table(M, upto)
        bn = betti_table(N, upto)
    except Exception:
        return ""
    if bm != bn:
        return f"graded Betti tables differ through homological degree {upto}"
    return ""


def is_isomorphic(M: Module, N: Module, allow_shift: bool = False, seed: int = 0, betti_upto: int = 3) -> IsoVerdict:
    """Graded isomorphism test; sound, possibly inconclusive."""
    if M.ring != N.ring:
        raise ValueError("modules over different rings")
    M = minimal_presentation(M)
    N = minimal_presentation(N)
    hm, hn = M.hilbert_series(), N.hilbert_series()
    shift = 0
    if allow_shift:
        s = hm.alignment_shift(hn)
        if s is None:
            return IsoVerdict(IsoStatus.REFUTED, invariant="Hilbert series differ (under every shift)")
        shift = s
    elif hm != hn:
        return IsoVerdict(IsoStatus.REFUTED, invariant="Hilbert series differ")
    if shift:
        M = minimal_presentation(M.shifted(shift))
    if M.rank == 0 and N.rank == 0:
        return IsoVerdict(IsoStatus.VERIFIED_ISO, shift, ModuleMap(M, N, []), ModuleMap(N, M, []))
    if betti0(M) != betti0(N):
        return IsoVerdict(IsoStatus.REFUTED, shift, invariant="minimal generator degrees differ")
    if betti1(M) != betti1(N):
        return IsoVerdict(IsoStatus.REFUTED, shift, invariant="minimal relation degrees differ")
    p = M.ring.p
    basis = hom_degree0(M, N)
    blocks = [_constant_block(M, N, phi) for phi in basis]
    # only maps whose constant block is nonzero matter for invertibility
    active = [t for t, B in enumerate(blocks) if B.any()]
    found = None
    exhaustive = True
    if active:
        flat = np.array([blocks[t].ravel() for t in active], dtype=np.int64)
        dimL = ff.rank(flat, p)
        if p ** dimL <= ENUMERATION_LIMIT:
            _, piv = ff.rref(flat.T.copy(), p)
            span = [active[t] for t in piv]
            batches = _projective_points(len(span), p)
        else:
            span = active
            exhaustive = False
            gen = np.random.default_rng(seed)
            batches = iter([gen.integers(0, p, size=(RANDOM_TRIALS, len(span)))])
        stack = np.array([blocks[t] for t in span], dtype=np.int64)
        for coeffs in batches:
            mats = np.einsum("bk,kij->bij", coeffs, stack) % p
            hit = np.nonzero(ff.batch_invertible(mats, p))[0]
            if hit.size:
                found = _combine([basis[t] for t in span], coeffs[hit[0]], p, M.rank)
                break
    if found is not None:
        f = ModuleMap(M, N, found)
        g = _inverse_map(f)
        if g is not None:
            v = IsoVerdict(IsoStatus.VERIFIED_ISO, shift, f, g)
            if v.recheck():
                return v
    why = _betti_tables_differ(M, N, betti_upto)
    if why:
        return IsoVerdict(IsoStatus.REFUTED, shift, invariant=why)
    if exhaustive and found is None:
        return IsoVerdict(IsoStatus.REFUTED, shift, invariant="no degree-0 map is invertible modulo m (exhaustive)")
    return IsoVerdict(IsoStatus.UNKNOWN, shift, invariant="invariants agree; no isomorphism found")


def _projective_points(k: int, p: int, chunk: int = 65536):
    """All nonzero coefficient vectors up to scaling, in batches."""
    for lead in range(k):
        free = k - lead - 1
        total = p ** free
        for lo in range(0, total, chunk):
            n = np.arange(lo, min(total, lo + chunk), dtype=np.int64)
            out = np.zeros((n.size, k), dtype=np.int64)
            out[:, lead] = 1
            for c in range(k - 1, lead, -1):
                out[:, c] = n % p
                n = n // p
            yield out


def is_stably_isomorphic(M: Module, N: Module, allow_shift: bool = False, seed: int = 0) -> IsoVerdict:
    """Isomorphism after splitting off free summands."""
    a = strip_free_summands(M, certify=False)
    b = strip_free_summands(N, certify=False)
    v = is_isomorphic(a.module, b.module, allow_shift=allow_shift, seed=seed)
    v.free_ranks = (a.free_rank, b.free_rank)
    return v


# ---------- m-torsion ----------

@dataclass
class GammaResult:
    """Gamma_m(M) as a submodule, the quotient M/Gamma_m(M) and the stabilisation index."""

    gamma: Module
    quotient: Module
    embed: list
    index: int
    chain_hilbert: list = field(default_factory=list)


MAX_COLON_STEPS = 100


def colon_and_gamma(M: Module) -> GammaResult:
    """Gamma_m(M) = union of (0 :_M m^t), computed as the stabilising chain U_t = (U_{t-1} : m)."""

    def compute():
        ring = M.ring
        poly = ring.poly
        m, r = poly.nvars, M.rank
        U = list(M.rels)
        hs = M.hilbert_series()
        chain = [hs]
        for t in range(MAX_COLON_STEPS + 1):
            if r == 0:
                break
            cols = []
            src = []
            for j in range(r):
                cols.append({(i * r + j, poly.var(i)): 1 for i in range(m)})
                src.append(M.degrees[j])
            udeg = [vec_degree(u, poly, M.degrees) for u in U]
            for i in range(m):
                for u, d in zip(U, udeg):
                    cols.append({(i * r + k, e): c for (k, e), c in u.items()})
                    src.append(d + poly.weights[i])
            tdeg = [M.degrees[j] + poly.weights[i] for i in range(m) for j in range(r)]
            ker = kernel(poly, ring.ideal_gb, tdeg, src, cols, minimal=False)
            newU = list(M.rels)
            for v in ker:
                w = {(k, e): c for (k, e), c in v.items() if k < r}
                if w:
                    newU.append(w)
            keep = minimal_subset(poly, ring.ideal_gb, M.degrees, newU)
            newU = [newU[k] for k in keep]
            quot = Module(ring, M.degrees, newU, check=False)
            h = quot.hilbert_series()
            if h == chain[-1]:
                break
            chain.append(h)
            U = newU
        else:
            raise RuntimeError("colon chain did not stabilise within the step cap")
        quotient = minimal_presentation(Module(ring, M.degrees, U, check=False))
        extra = [u for u in U if not M.engine.contains(u)]
        sq = subquotient(ring, M.degrees, extra, M.rels)
        return GammaResult(sq.module, quotient, sq.embed, len(chain) - 1, chain)

    return M.cached("gamma", compute)
