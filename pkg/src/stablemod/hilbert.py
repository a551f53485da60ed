"""Hilbert series of graded modules via their initial (monomial) modules."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .poly import PolyRing, exps_divides


Laurent = dict  # dict[int, int], exponent -> integer coefficient


def _ladd(a: Laurent, b: Laurent, sign: int = 1, shift: int = 0) -> Laurent:
    out = dict(a)
    for k, v in b.items():
        x = out.get(k + shift, 0) + sign * v
        if x:
            out[k + shift] = x
        else:
            out.pop(k + shift, None)
    return out


def _minimalize(gens: list) -> list:
    gens = sorted(set(gens), key=sum)
    out: list = []
    for g in gens:
        if not any(exps_divides(h, g) for h in out):
            out.append(g)
    return out


def monomial_numerator(gens: Sequence[tuple], weights: Sequence[int]) -> Laurent:
    """Numerator of the Hilbert series of S/J over prod(1 - t^w_i), J monomial."""
    gens = _minimalize(list(gens))
    if not gens:
        return {0: 1}
    if any(sum(g) == 0 for g in gens):
        return {}
    # base case: every generator a pure power (necessarily of distinct variables)
    if all(sum(1 for a in g if a) == 1 for g in gens):
        out: Laurent = {0: 1}
        for g in gens:
            d = sum(a * w for a, w in zip(g, weights))
            out = _ladd(out, out, sign=-1, shift=d)
        return out
    # pivot on a variable of a non-pure-power generator
    mixed = [g for g in gens if sum(1 for a in g if a) > 1]
    counts = [sum(1 for g in mixed if g[i]) for i in range(len(weights))]
    i = max(range(len(weights)), key=lambda k: counts[k])
    exps = sorted(g[i] for g in mixed if g[i])
    a = exps[len(exps) // 2]
    piv = tuple(a if k == i else 0 for k in range(len(weights)))
    plus = gens + [piv]
    colon = [tuple(max(x - y, 0) for x, y in zip(g, piv)) for g in gens]
    d = a * weights[i]
    return _ladd(monomial_numerator(plus, weights), monomial_numerator(colon, weights), sign=1, shift=d)


@dataclass(frozen=True)
class HilbertSeries:
    """numerator(t) / prod_i (1 - t^{w_i}), numerator a Laurent polynomial."""

    numerator: tuple  # sorted tuple of (exponent, coefficient)
    weights: tuple

    @classmethod
    def from_dict(cls, num: Laurent, weights) -> HilbertSeries:
        return cls(tuple(sorted((k, v) for k, v in num.items() if v)), tuple(weights))

    @classmethod
    def of_initial_module(cls, ring: PolyRing, degrees: Sequence[int], leads: dict[int, list]) -> HilbertSeries:
        num: Laurent = {}
        for j, d in enumerate(degrees):
            num = _ladd(num, monomial_numerator(leads.get(j, []), ring.weights), shift=d)
        return cls.from_dict(num, ring.weights)

    @property
    def num(self) -> Laurent:
        return dict(self.numerator)

    def is_zero(self) -> bool:
        return not self.numerator

    def shifted(self, s: int) -> HilbertSeries:
        return HilbertSeries(tuple((k + s, v) for k, v in self.numerator), self.weights)

    def __add__(self, other: HilbertSeries) -> HilbertSeries:
        return HilbertSeries.from_dict(_ladd(self.num, other.num), self.weights)

    def __sub__(self, other: HilbertSeries) -> HilbertSeries:
        return HilbertSeries.from_dict(_ladd(self.num, other.num, sign=-1), self.weights)

    def reduced(self) -> tuple[Laurent, int]:
        """(q, k) with numerator = (1-t)^k q and q(1) != 0."""
        q = self.num
        k = 0
        while q and sum(q.values()) == 0:
            lo, hi = min(q), max(q)
            # divide by (1 - t): q = (1 - t) r, r_j = sum_{i<=j} q_i
            r: Laurent = {}
            acc = 0
            for j in range(lo, hi):
                acc += q.get(j, 0)
                if acc:
                    r[j] = acc
            q = r
            k += 1
        return q, k

    @property
    def dim(self) -> int:
        """Krull dimension; -1 for the zero module."""
        if self.is_zero():
            return -1
        _, k = self.reduced()
        return len(self.weights) - k

    def is_polynomial(self) -> bool:
        return self.dim <= 0

    def coefficients(self, lo: int, hi: int) -> list[int]:
        """Hilbert function values in degrees lo..hi."""
        # expand 1/prod(1 - t^w) up to the needed degree
        num = self.num
        if not num:
            return [0] * (hi - lo + 1)
        base = min(num)
        span = hi - base
        if span < 0:
            return [0] * (hi - lo + 1)
        series = [0] * (span + 1)
        series[0] = 1
        for w in self.weights:
            for j in range(w, span + 1):
                series[j] += series[j - w]
        out = []
        for d in range(lo, hi + 1):
            s = 0
            for k, v in num.items():
                j = d - k
                if 0 <= j <= span:
                    s += v * series[j]
            out.append(s)
        return out

    def length(self) -> int | None:
        """Vector-space dimension for finite-length modules, else None."""
        if self.dim > 0:
            return None
        num = self.num
        if not num:
            return 0
        lo = min(num)
        hi = max(num)
        return sum(self.coefficients(lo, hi))

    def alignment_shift(self, other: HilbertSeries) -> int | None:
        """s with other = t^s * self, or None."""
        if self.is_zero() or other.is_zero():
            return 0 if self.is_zero() and other.is_zero() else None
        s = other.numerator[0][0] - self.numerator[0][0]
        return s if self.shifted(s) == other else None

    def __repr__(self):
        terms = [(("t" if k == 1 else f"t^{k}") if k else "", v) for k, v in sorted(self.numerator)]
        num = _fmt_int_poly(terms)
        den = "*".join(f"(1-t^{w})" if w > 1 else "(1-t)" for w in self.weights)
        return f"({num})/({den})" if den else num


def _fmt_int_poly(terms) -> str:
    if not terms:
        return "0"
    out = []
    for i, (mono, c) in enumerate(terms):
        a = abs(c)
        body = (mono if a == 1 else f"{a}*{mono}") if mono else str(a)
        if i == 0:
            out.append(body if c > 0 else "-" + body)
        else:
            out.append((" + " if c > 0 else " - ") + body)
    return "".join(out)
