"""Mechanical checks of the equivalence theorems on concrete modules."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .classify import (
    GP,
    PROJ,
    CategorySpec,
    G,
    Status,
    Verdict,
    classify_one,
    in_Gmn,
    in_TF,
    is_finite_length,
    is_perfect,
    is_spherical,
    prop_cm_conditions,
)
from .groebner import CapExceeded, reduce_mod_ideal
from .homological import (
    INF,
    canonical_sequences,
    d_functor,
    dual,
    ext,
    grade,
    omega_tr_omega_tr,
    syzygy,
    transpose,
)
from .modcat import IsoVerdict, Module, is_isomorphic, is_stably_isomorphic
from .rings import RingSpec, corpus_rings

PASS, FAIL, UNCERTIFIED = "PASS", "FAIL", "UNCERTIFIED"

THEOREMS = (
    "PROP_KEY_FWD", "PROP_KEY_BWD", "LEMMA_CATEQ", "THM1_SPH", "THM2_GSPH", "PERF_DUALITY",
    "AB26_SEQ", "FOURTERM_SEQ", "DM_IDENTITY", "TRTR_IDENTITY", "EXT_SHIFT", "PROP_CM",
    "THM_D1_REG", "THM_D1_GOR", "COR_REFL",
)


class Inapplicable(ValueError):
    """The input does not satisfy the theorem's hypotheses."""


@dataclass
class TheoremCheck:
    theorem: str
    ring: str
    inputs: dict
    verdict: str = PASS
    transcript: list = field(default_factory=list)
    counterexample: str | None = None

    def log(self, step: str, value) -> None:
        self.transcript.append({"step": step, "result": _show(value)})

    def require(self, ok: bool, what: str) -> None:
        self.log(what, "ok" if ok else "failed")
        if not ok:
            self.verdict = FAIL
            if self.counterexample is None:
                self.counterexample = what

    def iso(self, what: str, v: IsoVerdict) -> None:
        self.log(what, v.describe())
        if v.refuted:
            self.verdict = FAIL
            if self.counterexample is None:
                self.counterexample = f"{what}: {v.describe()}"
        elif not v.verified and self.verdict == PASS:
            self.verdict = UNCERTIFIED

    def member(self, what: str, v: Verdict, expect: bool = True) -> None:
        self.log(what, f"{v.status.value} ({v.witness})")
        if v.status is Status.UNKNOWN:
            if self.verdict == PASS:
                self.verdict = UNCERTIFIED
            return
        self.require(v.member == expect, what)

    def as_dict(self) -> dict:
        return {"theorem": self.theorem, "ring": self.ring, "inputs": self.inputs, "verdict": self.verdict,
                "counterexample": self.counterexample, "transcript": self.transcript}


def _show(value) -> str:
    if isinstance(value, Module):
        return repr(value)
    return str(value)


def _iso(a: Module, b: Module, seed: int) -> IsoVerdict:
    return is_isomorphic(a, b, allow_shift=True, seed=seed)


def _stable(a: Module, b: Module, seed: int) -> IsoVerdict:
    return is_stably_isomorphic(a, b, allow_shift=True, seed=seed)


def in_X(M: Module, X: CategorySpec) -> Verdict:
    return classify_one(M, X)


def _check_X(X: CategorySpec, ring: RingSpec, n: int) -> None:
    if X.tag == "PROJ":
        return
    if X.tag == "GP":
        if not ring.gorenstein:
            raise Inapplicable("GP is decided only over Gorenstein rings")
        return
    if X.tag == "G_MN" and X.n == X.m + 1 and X.m >= n:
        return
    raise Inapplicable(f"{X} is not one of proj, GP, G(m,m+1) with m >= n")


# ---------- Proposition key ----------

def verify_prop_key(M: Module, n: int, X: CategorySpec, seed: int = 0) -> TheoremCheck:
    """(2) => (1): M in G(n-1,0) and D(M) in X give 0 -> Ext^1(Tr M,R) -> M -> D(M) -> 0 with grade >= n."""
    _check_X(X, M.ring, n)
    chk = TheoremCheck("PROP_KEY_BWD", M.ring.name, {"module": repr(M), "n": n, "X": str(X)})
    g = in_Gmn(M, n - 1, 0)
    Dm = d_functor(M)
    dx = in_X(Dm, X)
    chk.log("M in G(n-1,0)", g.status.value)
    chk.log("D(M)", Dm)
    chk.log("D(M) in X", dx.status.value)
    if dx.status is Status.UNKNOWN or g.status is Status.UNKNOWN:
        chk.verdict = UNCERTIFIED
        return chk
    if not (g.member and dx.member):
        raise Inapplicable("M is not in D^-1(X) cap G(n-1,0)")
    cs = canonical_sequences(M, seed=seed)
    L = cs.ext1
    chk.log("L = Ext^1(Tr M,R)", L)
    gl = grade(L)
    chk.log("grade L", "inf" if gl == INF else gl)
    chk.require(gl >= n, "grade L >= n")
    a = cs.checks[0]
    chk.require(a.hs_ok, "Hilbert series additive along 0 -> L -> M -> D(M) -> 0")
    chk.iso("ker(M -> D(M)) = L", a.verdict)
    return chk


def verify_prop_key_split(L: Module, N: Module, n: int, X: CategorySpec, seed: int = 0) -> TheoremCheck:
    """(1) => (2) on M = L + N with grade L >= n and N in X."""
    _check_X(X, L.ring, n)
    chk = TheoremCheck("PROP_KEY_FWD", L.ring.name, {"L": repr(L), "N": repr(N), "n": n, "X": str(X)})
    if grade(L) < n:
        raise Inapplicable("grade L < n")
    nx = in_X(N, X)
    if nx.status is Status.UNKNOWN:
        chk.verdict = UNCERTIFIED
        return chk
    if not nx.member:
        raise Inapplicable("N is not in X")
    M = L.direct_sum(N)
    chk.log("M = L + N", M)
    chk.member("M in G(n-1,0)", in_Gmn(M, n - 1, 0))
    Dm = d_functor(M)
    chk.log("D(M)", Dm)
    chk.member("D(M) in X", in_X(Dm, X))
    chk.iso("D(M) ~ D(N) stably", _stable(Dm, d_functor(N), seed))
    return chk


# ---------- Lemma cateq(2) ----------

def verify_cateq(Mp: Module, n: int, X: CategorySpec, seed: int = 0) -> TheoremCheck:
    """Omega Tr Omega^n M' in X iff Omega^n M' in X."""
    chk = TheoremCheck("LEMMA_CATEQ", Mp.ring.name, {"module": repr(Mp), "n": n, "X": str(X)})
    if X.tag == "GP" and not Mp.ring.gorenstein:
        raise Inapplicable("GP needs a Gorenstein ring")
    On = syzygy(Mp, n)
    left = in_X(syzygy(transpose(On), 1), X)
    right = in_X(On, X)
    chk.log("Omega Tr Omega^n M' in X", left.status.value)
    chk.log("Omega^n M' in X", right.status.value)
    if Status.UNKNOWN in (left.status, right.status):
        chk.verdict = UNCERTIFIED
    else:
        chk.require(left.status is right.status, "memberships agree")
    return chk


# ---------- Theorem sphthm ----------

def tr_omega(M: Module, n: int) -> Module:
    """Tr Omega^{n-1} M."""
    return transpose(syzygy(M, n - 1))


def verify_thm1(N: Module, n: int, seed: int = 0) -> TheoremCheck:
    if n < 1:
        raise Inapplicable("n >= 1 required")
    g = grade(N)
    if g < n:
        raise Inapplicable(f"grade N = {g} < n = {n}")
    chk = TheoremCheck("THM1_SPH", N.ring.name, {"module": repr(N), "n": n})
    M = tr_omega(N, n)
    chk.log("M = Tr Omega^(n-1) N", M)
    chk.member("M is n-spherical", is_spherical(M, n, PROJ))
    E = ext(M, n)
    chk.log("Ext^n(M,R)", E)
    chk.iso("Ext^n(M,R) = N", _iso(E, N, seed))
    back = tr_omega(E, n)
    chk.iso("Tr Omega^(n-1) Ext^n(M,R) ~ M", _stable(back, M, seed))
    return chk


def verify_thm2(M: Module, n: int, m: int | None, seed: int = 0) -> TheoremCheck:
    """m = None stands for m = infinity (X = GP over a Gorenstein ring)."""
    ring = M.ring
    if m is None:
        if not ring.gorenstein:
            raise Inapplicable("m = infinity needs a Gorenstein ring")
        X = GP
    else:
        if m < n:
            raise Inapplicable("m >= n required")
        X = G(m, m + 1)
    chk = TheoremCheck("THM2_GSPH", ring.name, {"module": repr(M), "n": n, "m": "inf" if m is None else m})
    sph = is_spherical(M, n, X)
    chk.log(f"M in Sph_n^{X}", sph.status.value)
    if sph.status is Status.UNKNOWN:
        chk.verdict = UNCERTIFIED
        return chk
    if not sph.member:
        raise Inapplicable("M is not n-X-spherical")
    N = tr_omega(M, n)
    chk.log("N = Tr Omega^(n-1) M", N)
    chk.member("N in G(n-1,0)", in_Gmn(N, n - 1, 0))
    DN = d_functor(N)
    chk.log("D(N)", DN)
    chk.member("D(N) in X", in_X(DN, X))
    chk.iso("Tr Omega^(n-1) N ~ M", _stable(tr_omega(N, n), M, seed))
    On = syzygy(N, n)
    left = in_X(syzygy(transpose(On), 1), X)
    right = in_X(On, X)
    chk.log("cateq: Omega Tr Omega^n N in X", left.status.value)
    chk.log("cateq: Omega^n N in X", right.status.value)
    if Status.UNKNOWN in (left.status, right.status):
        if chk.verdict == PASS:
            chk.verdict = UNCERTIFIED
    else:
        chk.require(left.status is right.status, "cateq memberships agree")
    return chk


def verify_perf_duality(M: Module, n: int, seed: int = 0) -> TheoremCheck:
    if not is_perfect(M, n).member:
        raise Inapplicable("M is not perfect of grade n")
    chk = TheoremCheck("PERF_DUALITY", M.ring.name, {"module": repr(M), "n": n})
    N = ext(M, n)
    chk.log("N = Ext^n(M,R)", N)
    chk.member("N perfect of grade n", is_perfect(N, n))
    chk.iso("Ext^n(N,R) = M", _iso(ext(N, n), M, seed))
    return chk


# ---------- Theorem d-1 ----------

def verify_d1(M: Module, variant: str, seed: int = 0) -> TheoremCheck:
    ring = M.ring
    d = ring.dim
    if variant == "REG":
        if not ring.regular:
            raise Inapplicable("ring is not regular")
        if not is_finite_length(M).member:
            raise Inapplicable("input must have finite length")
        chk = TheoremCheck("THM_D1_REG", ring.name, {"module": repr(M), "d": d})
        X = syzygy(M, d - 1)
        chk.log("Omega^(d-1) L", X)
        chk.member("Omega^(d-1) L in TF_(d-1)", in_TF(X, d - 1))
        E = ext(transpose(X), d)
        chk.log("Ext^d(Tr Omega^(d-1) L, R)", E)
        chk.iso("Ext^d(Tr Omega^(d-1) L, R) = L", _iso(E, M, seed))
        if d == 3:
            E1 = ext(dual(X), 1)
            chk.log("Ext^1((Omega^2 L)*, R)", E1)
            chk.iso("Ext^1((Omega^2 L)*, R) = L", _iso(E1, M, seed))
            chk.iso("both paths agree", _iso(E1, E, seed))
        return chk
    if variant == "GOR":
        if not ring.gorenstein or d <= 0:
            raise Inapplicable("ring is not Gorenstein of positive dimension")
        chk = TheoremCheck("THM_D1_GOR", ring.name, {"module": repr(M), "d": d})
        tf = in_TF(M, d - 1)
        start = M if tf.member else syzygy(M, d - 1)
        chk.log("X in TF_(d-1)", start)
        chk.member("X in TF_(d-1)", in_TF(start, d - 1))
        Y = transpose(syzygy(transpose(start), d - 1))
        chk.log("Y = Tr Omega^(d-1) Tr X", Y)
        chk.member("Y in Sph_d^H", prop_cm_conditions(Y).c)
        chk.iso("Omega^(d-1) Y ~ X", _stable(syzygy(Y, d - 1), start, seed))
        pc = prop_cm_conditions(M)
        if pc.b.member:
            X2 = syzygy(M, d - 1)
            chk.log("M in Sph_d^H; Omega^(d-1) M", X2)
            chk.member("Omega^(d-1) M in TF_(d-1)", in_TF(X2, d - 1))
            chk.iso("Tr Omega^(d-1) Tr Omega^(d-1) M ~ M",
                    _stable(transpose(syzygy(transpose(X2), d - 1)), M, seed))
        return chk
    raise ValueError("variant must be REG or GOR")


def verify_cor_refl(L: Module, seed: int = 0) -> TheoremCheck:
    ring = L.ring
    if not (ring.regular and ring.dim == 3):
        raise Inapplicable("needs a 3-dimensional regular ring")
    if not is_finite_length(L).member:
        raise Inapplicable("input must have finite length")
    chk = TheoremCheck("COR_REFL", ring.name, {"module": repr(L)})
    X = syzygy(L, 2)
    chk.member("Omega^2 L reflexive", classify_one(X, CategorySpec("REF")))
    chk.iso("Ext^1((Omega^2 L)*, R) = L", _iso(ext(dual(X), 1), L, seed))
    return chk


# ---------- Proposition cm ----------

def verify_prop_cm(M: Module) -> TheoremCheck:
    ring = M.ring
    if not ring.cohen_macaulay or ring.dim <= 0:
        raise Inapplicable("needs a Cohen-Macaulay ring of positive dimension")
    chk = TheoremCheck("PROP_CM", ring.name, {"module": repr(M)})
    pc = prop_cm_conditions(M)
    for k in "abcd":
        v = getattr(pc, k)
        chk.log(f"({k})", f"{v.status.value} ({v.witness})")
    chk.require(pc.a.status is pc.b.status is pc.c.status, "(a), (b), (c) agree")
    if pc.d.status is not Status.UNKNOWN:
        chk.require(not pc.b.member or pc.d.member, "(b) implies (d)")
        if ring.dim == 1:
            chk.require(not pc.d.member or pc.c.member, "d = 1: (d) implies (c)")
    return chk


# ---------- functor identities ----------

def verify_trtr(M: Module, seed: int = 0) -> TheoremCheck:
    chk = TheoremCheck("TRTR_IDENTITY", M.ring.name, {"module": repr(M)})
    T = transpose(M)
    chk.log("Tr M", T)
    TT = transpose(T)
    chk.log("Tr Tr M", TT)
    chk.iso("Tr Tr M ~ M", _stable(TT, M, seed))
    return chk


def verify_dm_identity(M: Module, seed: int = 0) -> TheoremCheck:
    chk = TheoremCheck("DM_IDENTITY", M.ring.name, {"module": repr(M)})
    Dm = d_functor(M)
    chk.log("D(M)", Dm)
    W = omega_tr_omega_tr(M)
    chk.log("Omega Tr Omega Tr M", W)
    chk.iso("D(M) ~ Omega Tr Omega Tr M", _stable(Dm, W, seed))
    return chk


def verify_ext_shift(M: Module, upto: int = 2, seed: int = 0) -> TheoremCheck:
    chk = TheoremCheck("EXT_SHIFT", M.ring.name, {"module": repr(M), "upto": upto})
    OM = syzygy(M, 1)
    for i in range(1, upto + 1):
        chk.iso(f"Ext^{i + 1}(M,R) = Ext^{i}(Omega M,R)", _iso(ext(M, i + 1), ext(OM, i), seed))
    return chk


def verify_fourterm(M: Module, seed: int = 0) -> TheoremCheck:
    chk = TheoremCheck("FOURTERM_SEQ", M.ring.name, {"module": repr(M)})
    cs = canonical_sequences(M, seed=seed)
    chk.log("M**", cs.bidual)
    for c in cs.checks:
        chk.require(c.hs_ok, f"Hilbert series additive: {c.name}")
        chk.iso(c.name, c.verdict)
    return chk


def verify_ab26(M: Module, seed: int = 0) -> TheoremCheck:
    chk = TheoremCheck("AB26_SEQ", M.ring.name, {"module": repr(M)})
    cs = canonical_sequences(M, seed=seed)
    chk.log("D(M)", cs.D)
    c = cs.checks[0]
    chk.require(c.hs_ok, "HS(M) = HS(Ext^1(Tr M,R)) + HS(D(M))")
    chk.iso(c.name, c.verdict)
    return chk


# ---------- random modules ----------

@dataclass
class ModuleGenerator:
    """Seeded random graded modules over one ring."""

    ring: RingSpec
    seed: int = 42

    def __post_init__(self):
        self.rng = random.Random(f"{self.seed}:{self.ring.name}")

    def _form(self, d: int) -> dict:
        poly = self.ring.poly
        p = poly.p
        monos = poly.monomials_of_degree(d)
        out = {}
        for e in monos:
            if self.rng.random() < 0.6:
                c = self.rng.randrange(1, p)
                out[e] = c
        if not out and monos:
            out[self.rng.choice(monos)] = 1
        return out

    def random_presentation(self, max_rows: int = 3, max_cols: int = 3, max_deg: int = 2) -> Module:
        ring = self.ring
        poly = ring.poly
        while True:
            r0 = self.rng.randint(1, max_rows)
            r1 = self.rng.randint(1, max_cols)
            gdeg = sorted(self.rng.randint(0, 1) for _ in range(r0))
            cols = []
            for _ in range(r1):
                b = self.rng.randint(max(gdeg) + 1, min(gdeg) + max_deg)
                v = {}
                for j in range(r0):
                    d = b - gdeg[j]
                    if 1 <= d <= max_deg and self.rng.random() < 0.75:
                        for e, c in self._form(d).items():
                            v[(j, e)] = c
                v = reduce_mod_ideal(poly, ring.ideal_gb, v)
                if v:
                    cols.append(v)
            if cols:
                return Module(ring, gdeg, cols)

    def quotient_by_forms(self, degrees) -> Module:
        rels = [{(0, e): c for e, c in self._form(d).items()} for d in degrees]
        return Module(self.ring, [0], rels)

    def finite_length_random(self, power: int = 2) -> Module:
        poly = self.ring.poly
        rels = [{(0, e): 1} for e in poly.monomials_of_degree(power)]
        rels.append({(0, e): c for e, c in self._form(1).items()})
        return Module(self.ring, [0], rels)

    def grade_n_seed(self, n: int) -> Module:
        """R/(n general linear forms): grade n when n <= dim R."""
        return self.quotient_by_forms([1] * n)


# ---------- corpus ----------

def split_inputs(ring: RingSpec, seed: int = 42, count: int = 5) -> list[tuple[Module, Module]]:
    """Pairs (L, N) for the forward direction: L of positive grade, N a free module or a high syzygy."""
    gen = ModuleGenerator(ring, seed)
    Ls = [gen.grade_n_seed(1), gen.grade_n_seed(min(2, ring.dim)), gen.finite_length_random()]
    rand = [gen.random_presentation() for _ in range(count)]
    Ns = [Module.free(ring, [0]), Module.free(ring, [0, 1])]
    Ns += [syzygy(M, 2) for M in rand] + [syzygy(M, ring.dim) for M in rand]
    return [(L, N) for L in Ls for N in Ns if not N.is_zero()]



@dataclass
class CorpusCase:
    index: int
    ring: str
    module: str
    checks: list


def corpus_checks(M: Module, seed: int) -> list[TheoremCheck]:
    """Every identity and theorem check whose hypotheses M meets."""
    ring = M.ring
    out: list[TheoremCheck] = []
    runs = [
        lambda: verify_trtr(M, seed),
        lambda: verify_dm_identity(M, seed),
        lambda: verify_ext_shift(M, 2, seed),
        lambda: verify_fourterm(M, seed),
    ]
    for n in (1, 2):
        runs.append(lambda n=n: verify_prop_key(M, n, PROJ, seed))
        runs.append(lambda n=n: verify_prop_key(M, n, G(2, 3), seed))
        if ring.gorenstein:
            runs.append(lambda n=n: verify_prop_key(M, n, GP, seed))
    if ring.cohen_macaulay and ring.dim > 0:
        runs.append(lambda: verify_prop_cm(M))
    for run in runs:
        try:
            out.append(run())
        except Inapplicable:
            continue
        except CapExceeded as exc:
            chk = TheoremCheck("CAP", ring.name, {"module": repr(M)}, UNCERTIFIED)
            chk.log("cap exceeded", str(exc))
            out.append(chk)
    return out


def corpus_modules(seed: int, count: int) -> list[tuple[str, Module]]:
    mods = []
    for name, ring in corpus_rings().items():
        gen = ModuleGenerator(ring, seed)
        for _ in range(count):
            mods.append((name, gen.random_presentation()))
    return mods


def run_corpus(seed: int = 42, count: int = 20, progress=None) -> dict:
    cases = []
    totals = {PASS: 0, FAIL: 0, UNCERTIFIED: 0}
    for idx, (rname, M) in enumerate(corpus_modules(seed, count)):
        checks = corpus_checks(M, seed)
        for c in checks:
            totals[c.verdict] += 1
        cases.append({"index": idx, "ring": rname, "module": repr(M),
                      "checks": [c.as_dict() for c in checks]})
        if progress:
            progress(idx, rname, checks)
    return {"seed": seed, "count": count, "totals": totals, "cases": cases}
