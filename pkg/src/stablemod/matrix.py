"""Graded free modules and sparse homogeneous matrices between them.

A vector of a free module of rank r is a ``dict`` mapping ``(component,
exponents)`` to a nonzero residue.  A matrix is stored by columns, each
column a vector of the target free module.  A basis vector e_j of a free
module has degree ``degrees[j]`` (so the module is the sum of the twists
R(-degrees[j])); a homogeneous matrix entry (i, j) then has degree
``src.degrees[j] - tgt.degrees[i]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .poly import PolyRing, RawPoly, exps_add, format_monomial, format_terms, padd, pmul_term

Vector = dict  # dict[(int, Exps), int]


class HomogeneityError(ValueError):
    pass


class ShapeError(ValueError):
    pass


# ---------- raw vector arithmetic ----------

def vadd(u: Vector, v: Vector, p: int) -> Vector:
    out = dict(u)
    for t, c in v.items():
        x = (out.get(t, 0) + c) % p
        if x:
            out[t] = x
        else:
            out.pop(t, None)
    return out


def vaxpy(out: Vector, v: Vector, c: int, p: int) -> None:
    """In place: out += c * v."""
    for t, a in v.items():
        x = (out.get(t, 0) + c * a) % p
        if x:
            out[t] = x
        else:
            out.pop(t, None)


def vscale(v: Vector, c: int, p: int) -> Vector:
    c %= p
    if not c:
        return {}
    return {t: (a * c) % p for t, a in v.items()}


def vmul_term(v: Vector, exps, c: int, p: int) -> Vector:
    c %= p
    if not c:
        return {}
    return {(k, exps_add(e, exps)): (a * c) % p for (k, e), a in v.items()}


def vmul_poly(v: Vector, f: RawPoly, p: int) -> Vector:
    out: Vector = {}
    for e, c in f.items():
        vaxpy(out, vmul_term(v, e, 1, p), c, p)
    return out


def unit_vector(j: int, nvars: int) -> Vector:
    return {(j, (0,) * nvars): 1}


def poly_vector(j: int, f: RawPoly) -> Vector:
    return {(j, e): c for e, c in f.items()}


def component(v: Vector, j: int) -> RawPoly:
    return {e: c for (k, e), c in v.items() if k == j}


def components(v: Vector) -> dict[int, RawPoly]:
    out: dict[int, RawPoly] = {}
    for (k, e), c in v.items():
        out.setdefault(k, {})[e] = c
    return out


def vec_degree(v: Vector, ring: PolyRing, degrees: Sequence[int]) -> int | None:
    """Degree of a homogeneous vector (None for zero)."""
    if not v:
        return None
    (k, e) = next(iter(v))
    return ring.deg(e) + degrees[k]


def vec_is_homogeneous(v: Vector, ring: PolyRing, degrees: Sequence[int]) -> bool:
    return len({ring.deg(e) + degrees[k] for (k, e) in v}) <= 1


def reindex(v: Vector, mapping: dict[int, int]) -> Vector:
    """Rename components; components missing from mapping must be absent."""
    return {(mapping[k], e): c for (k, e), c in v.items()}


def apply_columns(cols: Sequence[Vector], v: Vector, p: int) -> Vector:
    """The image of v under the matrix whose j-th column is cols[j]."""
    out: Vector = {}
    for (j, e), c in v.items():
        col = cols[j]
        for (k, e2), a in col.items():
            t = (k, exps_add(e, e2))
            x = (out.get(t, 0) + a * c) % p
            if x:
                out[t] = x
            else:
                out.pop(t, None)
    return out


def format_vector(v: Vector, ring: PolyRing, gen_names: Sequence[str]) -> str:
    items = sorted(v.items(), key=lambda t: (ring.mono_key(t[0][1]), -t[0][0]), reverse=True)
    terms = []
    for (k, e), c in items:
        mono = format_monomial(e, ring.names)
        terms.append((f"{mono}*{gen_names[k]}" if mono else gen_names[k], c))
    return format_terms(terms, ring.p)


# ---------- free modules and matrices ----------

@dataclass(frozen=True)
class FreeModule:
    """A graded free module; ``degrees[j]`` is the degree of basis vector e_j."""

    degrees: tuple[int, ...]

    def __init__(self, degrees: Iterable[int] = ()):
        object.__setattr__(self, "degrees", tuple(int(d) for d in degrees))

    @property
    def rank(self) -> int:
        return len(self.degrees)

    @property
    def shifts(self) -> tuple[int, ...]:
        """Twists a with F = sum R(a)."""
        return tuple(-d for d in self.degrees)

    def dual(self) -> FreeModule:
        return FreeModule(-d for d in self.degrees)

    def shifted(self, s: int) -> FreeModule:
        return FreeModule(d + s for d in self.degrees)

    def __add__(self, other: FreeModule) -> FreeModule:
        return FreeModule(self.degrees + other.degrees)


class Matrix:
    """A homogeneous matrix ``src -> tgt`` over F_p[x] (entries read modulo nothing).

    Columns are vectors of ``tgt``.  Zero entries are not stored.
    """

    __slots__ = ("ring", "src", "tgt", "cols")

    def __init__(self, ring: PolyRing, src: FreeModule, tgt: FreeModule, cols: Sequence[Vector], check: bool = True):
        if len(cols) != src.rank:
            raise ShapeError(f"{len(cols)} columns for a source of rank {src.rank}")
        self.ring = ring
        self.src = src
        self.tgt = tgt
        self.cols = tuple(cols)
        if check:
            self.check_homogeneous()

    # construction
    @classmethod
    def from_rows(cls, ring: PolyRing, rows: Sequence[Sequence[RawPoly]], src: FreeModule, tgt: FreeModule) -> Matrix:
        ncols = src.rank
        cols: list[Vector] = [dict() for _ in range(ncols)]
        if len(rows) != tgt.rank:
            raise ShapeError("row count does not match target rank")
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ShapeError("ragged rows")
            for j, f in enumerate(row):
                for e, c in f.items():
                    if c % ring.p:
                        cols[j][(i, tuple(e))] = c % ring.p
        return cls(ring, src, tgt, cols)

    @classmethod
    def identity(cls, ring: PolyRing, f: FreeModule) -> Matrix:
        return cls(ring, f, f, [unit_vector(j, ring.nvars) for j in range(f.rank)], check=False)

    @classmethod
    def zero(cls, ring: PolyRing, src: FreeModule, tgt: FreeModule) -> Matrix:
        return cls(ring, src, tgt, [dict() for _ in range(src.rank)], check=False)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.tgt.rank, self.src.rank)

    def entry(self, i: int, j: int) -> RawPoly:
        return {e: c for (k, e), c in self.cols[j].items() if k == i}

    def rows(self) -> list[list[RawPoly]]:
        out = [[dict() for _ in range(self.src.rank)] for _ in range(self.tgt.rank)]
        for j, col in enumerate(self.cols):
            for (i, e), c in col.items():
                out[i][j][e] = c
        return out

    def check_homogeneous(self) -> None:
        ring = self.ring
        for j, col in enumerate(self.cols):
            for (i, e), _ in col.items():
                if not 0 <= i < self.tgt.rank:
                    raise ShapeError(f"column {j} has a component outside the target")
                want = self.src.degrees[j] - self.tgt.degrees[i]
                if ring.deg(e) != want:
                    raise HomogeneityError(
                        f"entry ({i},{j}) has a term of degree {ring.deg(e)}, expected {want}"
                    )

    def is_zero(self) -> bool:
        return not any(self.cols)

    # algebra
    def compose(self, other: Matrix) -> Matrix:
        """self . other (apply other first)."""
        if other.tgt.rank != self.src.rank:
            raise ShapeError("incompatible shapes for composition")
        p = self.ring.p
        cols = [apply_columns(self.cols, c, p) for c in other.cols]
        return Matrix(self.ring, other.src, self.tgt, cols, check=False)

    __matmul__ = compose

    def transpose(self) -> Matrix:
        """The dual map tgt* -> src*; degrees are negated."""
        cols: list[Vector] = [dict() for _ in range(self.tgt.rank)]
        for j, col in enumerate(self.cols):
            for (i, e), c in col.items():
                cols[i][(j, e)] = c
        return Matrix(self.ring, self.tgt.dual(), self.src.dual(), cols, check=False)

    @property
    def T(self) -> Matrix:
        return self.transpose()

    def direct_sum(self, other: Matrix) -> Matrix:
        r = self.tgt.rank
        cols = list(self.cols) + [{(i + r, e): c for (i, e), c in col.items()} for col in other.cols]
        return Matrix(self.ring, self.src + other.src, self.tgt + other.tgt, cols, check=False)

    def hconcat(self, other: Matrix) -> Matrix:
        if self.tgt != other.tgt:
            raise ShapeError("horizontal concatenation needs a common target")
        return Matrix(self.ring, self.src + other.src, self.tgt, list(self.cols) + list(other.cols), check=False)

    def vconcat(self, other: Matrix) -> Matrix:
        if self.src != other.src:
            raise ShapeError("vertical concatenation needs a common source")
        r = self.tgt.rank
        cols = []
        for a, b in zip(self.cols, other.cols):
            col = dict(a)
            for (i, e), c in b.items():
                col[(i + r, e)] = c
            cols.append(col)
        return Matrix(self.ring, self.src, self.tgt + other.tgt, cols, check=False)

    def __add__(self, other: Matrix) -> Matrix:
        if self.src != other.src or self.tgt != other.tgt:
            raise ShapeError("sum of matrices with different shapes")
        p = self.ring.p
        return Matrix(self.ring, self.src, self.tgt, [vadd(a, b, p) for a, b in zip(self.cols, other.cols)], check=False)

    def scale_poly(self, f: RawPoly) -> list[Vector]:
        return [vmul_poly(c, f, self.ring.p) for c in self.cols]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.src == other.src and self.tgt == other.tgt and self.cols == other.cols

    def __hash__(self):
        return hash((self.src, self.tgt, tuple(frozenset(c.items()) for c in self.cols)))

    def __repr__(self):
        from .poly import format_poly

        rows = self.rows()
        body = "; ".join(", ".join(format_poly(f, self.ring) for f in row) for row in rows)
        return f"Matrix[{self.tgt.rank}x{self.src.rank}]({body})"


def poly_add_entry(col: Vector, i: int, f: RawPoly, p: int) -> None:
    for e, c in f.items():
        t = (i, e)
        x = (col.get(t, 0) + c) % p
        if x:
            col[t] = x
        else:
            col.pop(t, None)


__all__ = [
    "FreeModule",
    "Matrix",
    "HomogeneityError",
    "ShapeError",
    "vadd",
    "vaxpy",
    "vscale",
    "vmul_term",
    "vmul_poly",
    "apply_columns",
    "padd",
    "pmul_term",
]
