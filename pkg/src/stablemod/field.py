"""Prime fields F_p and dense linear algebra over them."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

DEFAULT_PRIME = 101
MAX_PRIME = 2**31


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@lru_cache(maxsize=None)
def _check_prime(p: int) -> int:
    if not is_prime(p) or p > MAX_PRIME:
        raise ValueError(f"modulus {p} is not a prime <= 2^31")
    return p


def inv(a: int, p: int) -> int:
    """Inverse of a nonzero residue, via Fermat: a^(p-2)."""
    a %= p
    if a == 0:
        raise ZeroDivisionError("inverse of zero in F_%d" % p)
    return pow(a, p - 2, p)


def centered(a: int, p: int) -> int:
    """Representative of a in (-p/2, p/2], used for printing."""
    a %= p
    return a - p if a > p // 2 else a


class FieldElement:
    """An element of F_p."""

    __slots__ = ("residue", "modulus")

    def __init__(self, residue: int, modulus: int = DEFAULT_PRIME):
        _check_prime(modulus)
        self.modulus = modulus
        self.residue = residue % modulus

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ValueError("elements of different prime fields")
            return other.residue
        if isinstance(other, int):
            return other % self.modulus
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.residue + b, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.residue - b, self.modulus)

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(b - self.residue, self.modulus)

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.residue * b, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.residue, self.modulus)

    def inverse(self) -> FieldElement:
        return FieldElement(inv(self.residue, self.modulus), self.modulus)

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.residue * inv(b, self.modulus), self.modulus)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(pow(self.residue, e, self.modulus), self.modulus)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.modulus == other.modulus and self.residue == other.residue
        if isinstance(other, int):
            return self.residue == other % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.modulus))

    def __bool__(self):
        return self.residue != 0

    def __repr__(self):
        return f"FieldElement({self.residue}, {self.modulus})"


# ---------- dense linear algebra mod p ----------

def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of an integer matrix over F_p.

    Returns the reduced matrix and the list of pivot columns.
    """
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = (m[r] * inv(int(m[r, c]), p)) % p
        col = m[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            m[nzr] = (m[nzr] - np.outer(col[nzr], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right kernel {v : a v = 0} as rows of the result."""
    a = np.asarray(a, dtype=np.int64)
    rows, cols = a.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    m, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for i, pc in enumerate(pivots):
            basis[t, pc] = (-m[i, f]) % p
    return basis


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution x of a x = b over F_p, or None if inconsistent."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    rows, cols = a.shape
    m, pivots = rref(np.hstack([a, b]), p)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = m[i, cols]
    return x


def batch_invertible(mats: np.ndarray, p: int) -> np.ndarray:
    """For a stack of square matrices (B, n, n), which ones are invertible over F_p."""
    m = np.array(mats, dtype=np.int64) % p
    B, n, _ = m.shape
    ok = np.ones(B, dtype=bool)
    idx = np.arange(B)
    for c in range(n):
        sub = m[:, c:, c] != 0
        has = sub.any(axis=1)
        ok &= has
        k = c + np.argmax(sub, axis=1)
        rows_c = m[idx, c].copy()
        m[idx, c] = m[idx, k]
        m[idx, k] = rows_c
        piv = m[:, c, c]
        if p <= 10**6:
            pinv = _inv_table(p)[piv]
        else:
            pinv = np.array([pow(int(x), p - 2, p) for x in piv], dtype=np.int64)
        m[:, c] = (m[:, c] * pinv[:, None]) % p
        f = m[:, c + 1:, c]
        m[:, c + 1:] = (m[:, c + 1:] - f[:, :, None] * m[:, c][:, None, :]) % p
    return ok


_INV_TABLES: dict = {}


def _inv_table(p: int) -> np.ndarray:
    t = _INV_TABLES.get(p)
    if t is None:
        t = np.array([0] + [pow(a, p - 2, p) for a in range(1, p)], dtype=np.int64)
        _INV_TABLES[p] = t
    return t
