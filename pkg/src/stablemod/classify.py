"""Membership tests for the module categories and the local-cohomology conditions."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

from .homological import (
    INF,
    NotGorenstein,
    bidual_map,
    depth,
    ext,
    gdim_gorenstein,
    grade,
    syzygy,
    transpose,
)
from .modcat import Module, colon_and_gamma, strip_free_summands


class NotCM(ValueError):
    pass


class Status(enum.Enum):
    MEMBER = "MEMBER"
    NON_MEMBER = "NON_MEMBER"
    UNKNOWN = "UNKNOWN"


@dataclass
class Verdict:
    status: Status
    witness: str = ""

    @classmethod
    def of(cls, flag: bool, witness: str) -> Verdict:
        return cls(Status.MEMBER if flag else Status.NON_MEMBER, witness)

    @property
    def member(self) -> bool:
        return self.status is Status.MEMBER

    @property
    def non_member(self) -> bool:
        return self.status is Status.NON_MEMBER

    def as_dict(self) -> dict:
        return {"status": self.status.value, "witness": self.witness}


def _all(parts: list[tuple[str, Verdict]], empty_witness: str = "vacuous") -> Verdict:
    """Conjunction: first NON_MEMBER decides, any UNKNOWN is contagious."""
    if not parts:
        return Verdict(Status.MEMBER, empty_witness)
    for name, v in parts:
        if v.non_member:
            return Verdict(Status.NON_MEMBER, f"{name}: {v.witness}")
    unk = [f"{name}: {v.witness}" for name, v in parts if v.status is Status.UNKNOWN]
    if unk:
        return Verdict(Status.UNKNOWN, "; ".join(unk))
    return Verdict(Status.MEMBER, "; ".join(f"{n}: {v.witness}" for n, v in parts))


# ---------- category descriptors ----------

@dataclass(frozen=True)
class CategorySpec:
    tag: str
    n: int | None = None
    m: int | None = None
    inner: CategorySpec | None = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown category {self.tag!r}")
        if self.tag == "G_MN" and (self.m is None or self.n is None or self.m < 0 or self.n < 0):
            raise ValueError("G_MN needs finite m, n >= 0")

    def __str__(self):
        if self.tag == "G_MN":
            return f"G({self.m},{self.n})"
        if self.tag == "XSPH":
            return f"XSPH({self.n},{self.inner})"
        return f"{self.tag}{'' if self.n is None else self.n}"


TAGS = {"PROJ", "GP", "G_MN", "TF", "SPH", "GSPH", "XSPH", "GRD", "FL", "CM", "HSPH", "PERF", "REF"}
PROJ = CategorySpec("PROJ")
GP = CategorySpec("GP")


def G(m: int, n: int) -> CategorySpec:
    return CategorySpec("G_MN", n=n, m=m)


_CAT_RE = re.compile(r"^(?:G_?MN|G)\((\d+),(\d+)\)$|^([A-Z]+)(\d*)$")


def parse_category(text: str) -> CategorySpec:
    """Parse names such as TF2, SPH3, GRD1, FL, CM, MCM, G(2,3), XSPH(2,G(2,3))."""
    t = text.strip().upper().replace(" ", "")
    if t.startswith("XSPH(") and t.endswith(")"):
        n, inner = t[5:-1].split(",", 1)
        return CategorySpec("XSPH", n=int(n), inner=parse_category(inner))
    m = _CAT_RE.match(t)
    if not m:
        raise ValueError(f"cannot parse category {text!r}")
    if m.group(1) is not None:
        return G(int(m.group(1)), int(m.group(2)))
    tag, num = m.group(3), m.group(4)
    if tag == "MCM":
        tag = "CM"
    if tag not in TAGS:
        raise ValueError(f"unknown category {text!r}")
    needs_n = tag in {"TF", "SPH", "GSPH", "GRD", "HSPH", "PERF"}
    if needs_n and not num:
        raise ValueError(f"category {tag} needs an index")
    if not needs_n and num:
        raise ValueError(f"category {tag} takes no index")
    return CategorySpec(tag, n=int(num) if num else None)


# ---------- primitive predicates ----------

def ext_vanishing(M: Module, lo: int, hi: int, label: str = "M") -> Verdict:
    for i in range(lo, hi + 1):
        if not ext(M, i).is_zero():
            return Verdict(Status.NON_MEMBER, f"Ext^{i}({label},R) != 0")
    if hi < lo:
        return Verdict(Status.MEMBER, "no Ext condition")
    return Verdict(Status.MEMBER, f"Ext^i({label},R) = 0 for {lo} <= i <= {hi}")


def in_Gmn(M: Module, m: int, n: int) -> Verdict:
    a = ext_vanishing(M, 1, m)
    if a.non_member:
        return a
    b = ext_vanishing(transpose(M), 1, n, "Tr M")
    if b.non_member:
        return b
    return Verdict(Status.MEMBER, f"{a.witness}; {b.witness}")


def in_TF(M: Module, n: int) -> Verdict:
    return in_Gmn(M, 0, n)


def is_projective(M: Module) -> Verdict:
    s = strip_free_summands(M)
    if s.module.is_zero():
        return Verdict(Status.MEMBER, f"free of rank {s.free_rank}")
    return Verdict(Status.NON_MEMBER, f"non-free part with {s.module.rank} generators remains after splitting")


def is_finite_length(M: Module) -> Verdict:
    hs = M.hilbert_series()
    return Verdict.of(hs.is_polynomial(), f"Krull dimension {hs.dim}")


def is_mcm(M: Module) -> Verdict:
    ring = M.ring
    if not ring.cohen_macaulay:
        raise NotCM(f"ring {ring.name} is not flagged Cohen-Macaulay")
    if M.is_zero():
        return Verdict(Status.MEMBER, "zero module")
    dp = depth(M)
    return Verdict.of(dp >= ring.dim, f"depth {dp} vs dim R = {ring.dim}")


def is_gp(M: Module) -> Verdict:
    ring = M.ring
    if not ring.gorenstein:
        v = in_Gmn(M, ring.nvars, ring.nvars + 1)
        return Verdict(Status.UNKNOWN, f"ring not Gorenstein; finite approximation G({ring.nvars},{ring.nvars + 1}): {v.status.value}")
    if M.is_zero():
        return Verdict(Status.MEMBER, "zero module")
    g = gdim_gorenstein(M)
    return Verdict.of(g <= 0, f"G-dimension {g}")


def in_grd(M: Module, n: int) -> Verdict:
    g = grade(M)
    v = Verdict.of(g >= n, f"grade {'inf' if g == INF else g}")
    ring = M.ring
    if ring.cohen_macaulay and n == ring.dim:
        fl = is_finite_length(M)
        if fl.status is not v.status:
            raise AssertionError("Grd_d and FL disagree")
    return v


def _in_category(M: Module, X: CategorySpec) -> Verdict:
    return classify_one(M, X)


def is_spherical(M: Module, n: int, X: CategorySpec = PROJ) -> Verdict:
    """Ext^i(M,R) = 0 for 1 <= i <= n-1 and Omega^n M in X."""
    if n < 1:
        raise ValueError("n >= 1 required")
    a = ext_vanishing(M, 1, n - 1)
    if a.non_member:
        return a
    b = _in_category(syzygy(M, n), X)
    return _all([("Ext", a), (f"Omega^{n} M in {X}", b)])


def is_perfect(M: Module, n: int) -> Verdict:
    if M.is_zero():
        return Verdict(Status.MEMBER, "zero module")
    if n < 0:
        raise ValueError("n >= 0 required")
    g = grade(M)
    if n == 0:
        # grade 0 and pd 0: the nonzero projectives
        return _all([("grade", Verdict.of(g == 0, f"grade {g}")), ("projective", is_projective(M))])
    sph = is_spherical(M, n, PROJ)
    v = _all([("grade", Verdict.of(g == n, f"grade {g}")), ("spherical", sph)])
    # Perf_n = Grd_n and Sph_n
    other = _all([("Grd", in_grd(M, n)), ("Sph", sph)])
    if v.status is not other.status and Status.UNKNOWN not in (v.status, other.status):
        raise AssertionError("Perf_n and Grd_n cap Sph_n disagree")
    return v


def is_reflexive(M: Module) -> Verdict:
    """sigma_M bijective, from the four-term sequence."""
    bd = bidual_map(M)
    k, c = bd.kernel(), bd.cokernel()
    return Verdict.of(k.is_zero() and c.is_zero(),
                      f"ker sigma {'=' if k.is_zero() else '!='} 0, coker sigma {'=' if c.is_zero() else '!='} 0")


# ---------- local cohomology conditions ----------

@dataclass
class PropCMReport:
    a: Verdict
    b: Verdict
    c: Verdict
    d: Verdict
    gamma_index: int
    notes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {k: getattr(self, k).as_dict() for k in "abcd"} | {"gamma_index": self.gamma_index, "notes": self.notes}


def prop_cm_conditions(M: Module) -> PropCMReport:
    ring = M.ring
    if not ring.cohen_macaulay or ring.dim <= 0:
        raise NotCM(f"ring {ring.name} must be Cohen-Macaulay of positive dimension")
    g = colon_and_gamma(M)
    q = g.quotient
    b = is_mcm(q)
    b = Verdict(b.status, f"M/Gamma(M): {b.witness}")
    # the Gamma sequence 0 -> Gamma -> M -> M/Gamma -> 0 as witness for (a)
    fl = is_finite_length(g.gamma).member
    additive = M.hilbert_series() == g.gamma.hilbert_series() + q.hilbert_series()
    torsion_free_quotient = colon_and_gamma(q).gamma.is_zero()
    if not (fl and additive and torsion_free_quotient):
        raise AssertionError("Gamma sequence failed its certificate")
    a = Verdict(b.status, f"0 -> Gamma(M) -> M -> M/Gamma(M) -> 0 with Gamma of finite length; {b.witness}")
    c = Verdict(b.status, "H-sphericality certified via the M/Gamma criterion (b)")
    if ring.gorenstein:
        bad = [i for i in range(1, ring.dim + 1) if not ext(M, i).hilbert_series().is_polynomial()]
        d = Verdict.of(not bad, "Ext^i(M,R) of finite length for 1 <= i <= d" if not bad
                       else f"Ext^{bad[0]}(M,R) has positive dimension")
    else:
        d = Verdict(Status.UNKNOWN, "punctured-spectrum test needs a Gorenstein ring")
    notes = []
    if b.member and d.non_member:
        raise AssertionError("(b) holds but (d) fails")
    if ring.dim == 1 and d.member and not b.member:
        raise AssertionError("d = 1 but (d) does not imply (c)")
    return PropCMReport(a, b, c, d, g.index, notes)


def is_h_spherical(M: Module, n: int) -> Verdict:
    ring = M.ring
    if not ring.cohen_macaulay:
        raise NotCM(f"ring {ring.name} is not flagged Cohen-Macaulay")
    if n != ring.dim or n <= 0:
        return Verdict(Status.UNKNOWN, "H-sphericality is decided only for n = dim R > 0")
    return prop_cm_conditions(M).c


# ---------- dispatcher ----------

def classify_one(M: Module, X: CategorySpec) -> Verdict:
    tag = X.tag
    ring = M.ring
    try:
        if tag == "PROJ":
            return is_projective(M)
        if tag == "GP":
            return is_gp(M)
        if tag == "G_MN":
            return in_Gmn(M, X.m, X.n)
        if tag == "TF":
            return in_TF(M, X.n)
        if tag == "REF":
            v = is_reflexive(M)
            tf2 = in_TF(M, 2)
            if v.status is not tf2.status:
                raise AssertionError("Ref and TF_2 disagree")
            return v
        if tag == "SPH":
            return is_spherical(M, X.n, PROJ)
        if tag == "GSPH":
            if not ring.gorenstein:
                return Verdict(Status.UNKNOWN, "G-spherical needs a Gorenstein ring")
            return is_spherical(M, X.n, GP)
        if tag == "XSPH":
            return is_spherical(M, X.n, X.inner)
        if tag == "GRD":
            return in_grd(M, X.n)
        if tag == "FL":
            return is_finite_length(M)
        if tag == "CM":
            return is_mcm(M)
        if tag == "HSPH":
            return is_h_spherical(M, X.n)
        if tag == "PERF":
            return is_perfect(M, X.n)
    except (NotCM, NotGorenstein) as exc:
        return Verdict(Status.UNKNOWN, str(exc))
    raise ValueError(f"unsupported category {X}")


@dataclass
class ClassificationReport:
    module: str
    ring: str
    verdicts: dict

    def as_dict(self) -> dict:
        return {"module": self.module, "ring": self.ring,
                "verdicts": {k: v.as_dict() for k, v in self.verdicts.items()}}


DEFAULT_CATEGORIES = ("PROJ", "FL", "TF1", "TF2", "REF", "GRD1")


def classify(M: Module, cats=DEFAULT_CATEGORIES, name: str = "M") -> ClassificationReport:
    out = {}
    for c in cats:
        X = c if isinstance(c, CategorySpec) else parse_category(c)
        out[str(c)] = classify_one(M, X)
    return ClassificationReport(name, M.ring.name, out)
