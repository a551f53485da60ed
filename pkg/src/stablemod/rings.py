"""Graded-local rings R = F_p[x_1..x_m]/I and the fixed corpus rings."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .groebner import ideal_basis
from .hilbert import HilbertSeries
from .poly import PolyRing, format_poly, is_homogeneous


class PropertyMismatch(ValueError):
    """A declared ring property disagrees with the computed one."""


@dataclass(eq=False)
class RingSpec:
    """R = S/I with S = F_p[vars] graded by the variable weights.

    The maximal ideal is always the irrelevant ideal (x_1..x_m).  ``dim`` and
    the flags are declared by the user and checked by :meth:`verify`.
    """

    name: str
    poly: PolyRing
    ideal: tuple = ()
    dim: int | None = None
    regular: bool = False
    cohen_macaulay: bool = False
    gorenstein: bool = False
    ideal_gb: tuple = field(init=False)

    def __post_init__(self):
        self.ideal = tuple(dict(f) for f in self.ideal if f)
        for f in self.ideal:
            if not is_homogeneous(f, self.poly):
                raise ValueError(f"ideal generator {format_poly(f, self.poly)} is not homogeneous")
            if self.poly.one in f:
                raise ValueError("ideal must lie in the maximal ideal")
        self.ideal_gb = tuple(ideal_basis(self.poly, self.ideal)) if self.ideal else ()
        if self.regular and self.ideal_gb:
            raise PropertyMismatch(f"ring {self.name}: 'regular' is only supported for polynomial rings (I = 0)")
        if self.regular:
            self.cohen_macaulay = True
            self.gorenstein = True
        if self.gorenstein:
            self.cohen_macaulay = True
        if self.dim is None:
            self.dim = self.hilbert_series().dim

    # identity
    @property
    def key(self) -> tuple:
        return (self.poly.p, self.poly.names, self.poly.weights,
                tuple(tuple(sorted(g.items())) for g in self.ideal_gb))

    def __eq__(self, other):
        return isinstance(other, RingSpec) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @property
    def p(self) -> int:
        return self.poly.p

    @property
    def nvars(self) -> int:
        return self.poly.nvars

    @property
    def is_polynomial_ring(self) -> bool:
        return not self.ideal_gb

    def ambient(self) -> RingSpec:
        """The polynomial ring S this ring is a quotient of."""
        if self.is_polynomial_ring:
            return self
        return RingSpec(f"{self.name}_ambient", self.poly, (), dim=self.nvars, regular=True)

    def hilbert_series(self) -> HilbertSeries:
        leads = {0: [max(g, key=self.poly.mono_key) for g in self.ideal_gb]}
        return HilbertSeries.of_initial_module(self.poly, (0,), leads)

    def depth(self) -> int:
        from .homological import depth
        from .modcat import Module

        return depth(Module.free(self, [0]))

    def verify(self) -> dict:
        """Check the declared properties; raises PropertyMismatch on disagreement."""
        from .homological import resolve
        from .modcat import Module

        report = {"ring": self.name}
        dim = self.hilbert_series().dim
        report["dim"] = dim
        if self.dim != dim:
            raise PropertyMismatch(f"ring {self.name}: declared dim {self.dim} but computed {dim}")
        if self.is_polynomial_ring:
            report.update(depth=self.nvars, cm=True, gorenstein=True)
            return report
        S = self.ambient()
        rel = Module(S, [0], [{(0, e): c for e, c in g.items()} for g in self.ideal_gb])
        res = resolve(rel, self.nvars + 1)
        pd = res.length
        depth_r = self.nvars - pd
        report["depth"] = depth_r
        cm = depth_r == dim
        report["cm"] = cm
        if self.cohen_macaulay and not cm:
            raise PropertyMismatch(f"ring {self.name}: declared Cohen-Macaulay but depth {depth_r} < dim {dim}")
        last = res.ranks()[pd]
        gor = cm and last == 1
        report["gorenstein"] = gor
        if self.gorenstein and not gor:
            raise PropertyMismatch(f"ring {self.name}: declared Gorenstein but last Betti number over S is {last}")
        return report

    def format_ideal(self) -> str:
        return "; ".join(format_poly(f, self.poly) for f in self.ideal)

    def __repr__(self):
        return f"RingSpec({self.name})"


def make_ring(name: str, names: Sequence[str], ideal: Sequence[str] = (), p: int = 101, weights=(), **flags) -> RingSpec:
    from .textio import parse_poly

    poly = PolyRing(tuple(names), tuple(weights), p)
    return RingSpec(name, poly, tuple(parse_poly(f, poly) for f in ideal), **flags)


def corpus_rings() -> dict[str, RingSpec]:
    """S2, S3 (regular), A = k[x,y]/(xy) and Q = k[x,y,z]/(x^2+yz) (Gorenstein)."""
    return {
        "S2": make_ring("S2", "xy", dim=2, regular=True),
        "S3": make_ring("S3", "xyz", dim=3, regular=True),
        "A": make_ring("A", "xy", ["x*y"], dim=1, cohen_macaulay=True, gorenstein=True),
        "Q": make_ring("Q", "xyz", ["x^2 + y*z"], dim=2, cohen_macaulay=True, gorenstein=True),
    }
