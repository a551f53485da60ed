"""Multivariate polynomials over F_p with the graded reverse lexicographic order.

Internally a polynomial is a plain ``dict`` mapping exponent tuples to
residues in ``[1, p)``.  The :class:`Polynomial` and :class:`Monomial`
classes wrap that representation for the public API; the Groebner engine
works on the raw dicts directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import total_ordering
from typing import Iterable

from .field import DEFAULT_PRIME, FieldElement, _check_prime, centered

Exps = tuple  # tuple[int, ...]
RawPoly = dict  # dict[Exps, int]


def grevlex_key(exps: Exps, weights: tuple[int, ...]) -> tuple:
    """Sort key: larger key means larger monomial."""
    d = 0
    for a, w in zip(exps, weights):
        d += a * w
    return (d,) + tuple(-a for a in reversed(exps))


def exps_add(a: Exps, b: Exps) -> Exps:
    return tuple(x + y for x, y in zip(a, b))


def exps_sub(a: Exps, b: Exps) -> Exps:
    return tuple(x - y for x, y in zip(a, b))


def exps_lcm(a: Exps, b: Exps) -> Exps:
    return tuple(x if x > y else y for x, y in zip(a, b))


def exps_divides(a: Exps, b: Exps) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


@dataclass(frozen=True)
class PolyRing:
    """The polynomial ring F_p[x_1..x_m] with positive integer variable weights."""

    names: tuple[str, ...]
    weights: tuple[int, ...] = ()
    p: int = DEFAULT_PRIME
    _keys: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        _check_prime(self.p)
        if not self.weights:
            object.__setattr__(self, "weights", (1,) * len(self.names))
        if len(self.weights) != len(self.names):
            raise ValueError("one weight per variable required")
        if any(w <= 0 for w in self.weights):
            raise ValueError("variable weights must be positive")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def one(self) -> Exps:
        return (0,) * self.nvars

    def mono_key(self, exps: Exps) -> tuple:
        k = self._keys.get(exps)
        if k is None:
            k = grevlex_key(exps, self.weights)
            self._keys[exps] = k
        return k

    def deg(self, exps: Exps) -> int:
        return sum(a * w for a, w in zip(exps, self.weights))

    def var(self, i: int) -> Exps:
        e = [0] * self.nvars
        e[i] = 1
        return tuple(e)

    def monomials_of_degree(self, d: int) -> list[Exps]:
        """All exponent vectors of weighted degree d, in descending order."""
        if d < 0:
            return []
        out = []
        m = self.nvars

        def rec(i, rest, acc):
            if i == m:
                if rest == 0:
                    out.append(tuple(acc))
                return
            w = self.weights[i]
            for a in range(rest // w, -1, -1):
                acc.append(a)
                rec(i + 1, rest - a * w, acc)
                acc.pop()

        rec(0, d, [])
        out.sort(key=self.mono_key, reverse=True)
        return out

    def __call__(self, text: str) -> "Polynomial":
        return Polynomial.parse(self, text)

    def gens(self) -> list["Polynomial"]:
        return [Polynomial(self, {self.var(i): 1}) for i in range(self.nvars)]


# ---------- raw polynomial arithmetic ----------

def padd(f: RawPoly, g: RawPoly, p: int) -> RawPoly:
    out = dict(f)
    for e, c in g.items():
        v = (out.get(e, 0) + c) % p
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def pscale(f: RawPoly, c: int, p: int) -> RawPoly:
    c %= p
    if c == 0:
        return {}
    return {e: (a * c) % p for e, a in f.items()}


def pneg(f: RawPoly, p: int) -> RawPoly:
    return {e: (-a) % p for e, a in f.items()}


def psub(f: RawPoly, g: RawPoly, p: int) -> RawPoly:
    return padd(f, pneg(g, p), p)


def pmul_term(f: RawPoly, exps: Exps, c: int, p: int) -> RawPoly:
    c %= p
    if c == 0:
        return {}
    return {exps_add(e, exps): (a * c) % p for e, a in f.items()}


def pmul(f: RawPoly, g: RawPoly, p: int) -> RawPoly:
    out: dict = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = exps_add(e1, e2)
            v = (out.get(e, 0) + c1 * c2) % p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def pdeg(f: RawPoly, ring: PolyRing) -> int | None:
    """Weighted degree of a homogeneous polynomial (None for zero)."""
    if not f:
        return None
    return ring.deg(next(iter(f)))


def is_homogeneous(f: RawPoly, ring: PolyRing) -> bool:
    return len({ring.deg(e) for e in f}) <= 1


def sorted_terms(f: RawPoly, ring: PolyRing) -> list[tuple[Exps, int]]:
    return sorted(f.items(), key=lambda t: ring.mono_key(t[0]), reverse=True)


def format_monomial(exps: Exps, names: Iterable[str]) -> str:
    parts = []
    for a, n in zip(exps, names):
        if a == 1:
            parts.append(n)
        elif a > 1:
            parts.append(f"{n}^{a}")
    return "*".join(parts)


def format_terms(terms: list[tuple[str, int]], p: int) -> str:
    """Join (monomial-string, coefficient) pairs into a signed sum."""
    if not terms:
        return "0"
    out = []
    for i, (mono, c) in enumerate(terms):
        c = centered(c, p)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if mono:
            body = mono if a == 1 else f"{a}*{mono}"
        else:
            body = str(a)
        if i == 0:
            out.append(body if sign == "+" else "-" + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def format_poly(f: RawPoly, ring: PolyRing) -> str:
    return format_terms([(format_monomial(e, ring.names), c) for e, c in sorted_terms(f, ring)], ring.p)


# ---------- public wrappers ----------

@total_ordering
class Monomial:
    """A monomial x^a in a fixed :class:`PolyRing`; ordered by grevlex."""

    __slots__ = ("ring", "exps")

    def __init__(self, ring: PolyRing, exps: Iterable[int]):
        exps = tuple(exps)
        if len(exps) != ring.nvars:
            raise ValueError("exponent vector length does not match the number of variables")
        if any(a < 0 for a in exps):
            raise ValueError("negative exponent")
        self.ring = ring
        self.exps = exps

    @property
    def degree(self) -> int:
        return self.ring.deg(self.exps)

    def _check(self, other: Monomial):
        if len(other.exps) != len(self.exps):
            raise ValueError("monomials over different numbers of variables")

    def __eq__(self, other):
        if not isinstance(other, Monomial):
            return NotImplemented
        self._check(other)
        return self.exps == other.exps

    def __lt__(self, other):
        self._check(other)
        return self.ring.mono_key(self.exps) < self.ring.mono_key(other.exps)

    def __hash__(self):
        return hash(self.exps)

    def __mul__(self, other: Monomial) -> Monomial:
        self._check(other)
        return Monomial(self.ring, exps_add(self.exps, other.exps))

    def divides(self, other: Monomial) -> bool:
        return exps_divides(self.exps, other.exps)

    def __repr__(self):
        return format_monomial(self.exps, self.ring.names) or "1"


def monomial_compare(a: Monomial, b: Monomial) -> int:
    """-1, 0 or 1 as a is smaller than, equal to or larger than b."""
    a._check(b)
    ka, kb = a.ring.mono_key(a.exps), a.ring.mono_key(b.exps)
    return (ka > kb) - (ka < kb)


class Polynomial:
    """An immutable polynomial over a :class:`PolyRing`."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: RawPoly | None = None):
        self.ring = ring
        p = ring.p
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != ring.nvars:
                raise ValueError("exponent vector length mismatch")
            c %= p
            if c:
                clean[e] = c
        self.terms = clean

    @classmethod
    def constant(cls, ring: PolyRing, c: int) -> Polynomial:
        return cls(ring, {ring.one: c})

    @classmethod
    def parse(cls, ring: PolyRing, text: str) -> Polynomial:
        from .textio import parse_poly

        return cls(ring, parse_poly(text, ring))

    def _wrap(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.ring.nvars != self.ring.nvars or other.ring.p != self.ring.p:
                raise ValueError("polynomials over different rings")
            return other
        if isinstance(other, (int, FieldElement)):
            return Polynomial.constant(self.ring, int(other.residue if isinstance(other, FieldElement) else other))
        return NotImplemented

    def __add__(self, other):
        o = self._wrap(other)
        if o is NotImplemented:
            return o
        return Polynomial(self.ring, padd(self.terms, o.terms, self.ring.p))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, pneg(self.terms, self.ring.p))

    def __sub__(self, other):
        o = self._wrap(other)
        if o is NotImplemented:
            return o
        return Polynomial(self.ring, psub(self.terms, o.terms, self.ring.p))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._wrap(other)
        if o is NotImplemented:
            return o
        return Polynomial(self.ring, pmul(self.terms, o.terms, self.ring.p))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Polynomial.constant(self.ring, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._wrap(other)
        if o is NotImplemented:
            return o
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        return is_homogeneous(self.terms, self.ring)

    @property
    def degree(self) -> int | None:
        if not self.terms:
            return None
        return max(self.ring.deg(e) for e in self.terms)

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return Monomial(self.ring, max(self.terms, key=self.ring.mono_key))

    def leading_coefficient(self) -> FieldElement:
        return FieldElement(self.terms[self.leading_monomial().exps], self.ring.p)

    def term_list(self) -> list[tuple[Monomial, FieldElement]]:
        """Terms in strictly descending monomial order."""
        return [(Monomial(self.ring, e), FieldElement(c, self.ring.p)) for e, c in sorted_terms(self.terms, self.ring)]

    def __repr__(self):
        return format_poly(self.terms, self.ring)
