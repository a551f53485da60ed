import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stablemod.field import FieldElement, batch_invertible, inv, is_prime, nullspace, rank, rref, solve
from stablemod.poly import Monomial, Polynomial, PolyRing, monomial_compare
from stablemod.textio import parse_poly

P = 101
R2 = PolyRing(("x", "y"))
R3 = PolyRing(("x", "y", "z"))

elems = st.integers(0, P - 1).map(lambda a: FieldElement(a, P))
nonzero = st.integers(1, P - 1).map(lambda a: FieldElement(a, P))


@st.composite
def polys(draw, ring=R2, max_deg=3, max_terms=4):
    terms = draw(st.dictionaries(
        st.tuples(*[st.integers(0, max_deg)] * ring.nvars),
        st.integers(1, P - 1),
        max_size=max_terms,
    ))
    return Polynomial(ring, terms)


@st.composite
def monomials(draw, ring=R3):
    return Monomial(ring, draw(st.tuples(*[st.integers(0, 4)] * ring.nvars)))


# ---------- field ----------

@given(elems, elems, elems)
def test_field_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0


@given(nonzero)
def test_field_inverse(a):
    assert a * a.inverse() == 1
    assert a / a == 1
    assert a ** (P - 1) == 1


def test_field_rejects_zero_division_and_composite_modulus():
    with pytest.raises(ZeroDivisionError):
        FieldElement(0, P).inverse()
    with pytest.raises(ValueError):
        FieldElement(1, 100)
    assert is_prime(101) and not is_prime(91)
    assert inv(2, 101) == 51


def test_mixed_moduli_rejected():
    with pytest.raises(ValueError):
        FieldElement(1, 101) + FieldElement(1, 7)


@settings(max_examples=60)
@given(st.lists(st.lists(st.integers(0, P - 1), min_size=4, max_size=4), min_size=1, max_size=5))
def test_rref_nullspace_consistent(rows):
    a = np.array(rows, dtype=np.int64)
    r = rank(a, P)
    ns = nullspace(a, P)
    assert ns.shape[0] == a.shape[1] - r
    if ns.size:
        assert not ((a @ ns.T) % P).any()
    red, pivots = rref(a, P)
    assert len(pivots) == r


@given(st.lists(st.integers(0, P - 1), min_size=9, max_size=9), st.lists(st.integers(0, P - 1), min_size=3, max_size=3))
def test_solve_returns_a_solution_when_one_exists(entries, x):
    a = np.array(entries, dtype=np.int64).reshape(3, 3)
    b = (a @ np.array(x)) % P
    y = solve(a, b, P)
    assert y is not None
    assert not ((a @ y - b) % P).any()


def test_batch_invertible_matches_rank():
    rng = np.random.default_rng(0)
    mats = rng.integers(0, 3, size=(200, 3, 3))
    got = batch_invertible(mats, P)
    want = np.array([rank(m, P) == 3 for m in mats])
    assert (got == want).all()


# ---------- monomial order ----------

def test_grevlex_examples():
    x2, xy, y, x = (Monomial(R2, e) for e in [(2, 0), (1, 1), (0, 1), (1, 0)])
    assert x2 > xy
    assert monomial_compare(x, x) == 0
    assert y < x2
    # degree 3 in three variables: the last variable's exponent decides first
    assert Monomial(R3, (0, 2, 1)) < Monomial(R3, (1, 2, 0))
    assert Monomial(R3, (2, 0, 1)) < Monomial(R3, (0, 3, 0))


@given(monomials(), monomials(), monomials())
def test_monomial_order_is_admissible(a, b, c):
    assert Monomial(R3, (0, 0, 0)) <= a
    if a < b:
        assert a * c < b * c
    assert (a < b) + (b < a) + (a == b) == 1


def test_monomial_errors():
    with pytest.raises(ValueError):
        Monomial(R2, (1, 2, 3))
    with pytest.raises(ValueError):
        Monomial(R2, (-1, 0))
    with pytest.raises(ValueError):
        monomial_compare(Monomial(R2, (1, 0)), Monomial(R3, (1, 0, 0)))


# ---------- polynomials ----------

def test_polynomial_examples():
    x, y = R2.gens()
    assert (x + y) * (x - y) == x ** 2 - y ** 2
    f = R2("3*x^2 + y")
    assert (f + (-f)).is_zero()
    F2 = PolyRing(("x", "y"), p=2)
    assert F2("x + y") ** 2 == F2("x^2 + y^2")


@given(polys(), polys(), polys())
def test_polynomial_ring_axioms(f, g, h):
    assert f * (g + h) == f * g + f * h
    assert (f * g) * h == f * (g * h)
    assert f + g == g + f


@given(polys(), polys())
def test_product_leading_monomial(f, g):
    if f and g:
        assert (f * g).leading_monomial() == f.leading_monomial() * g.leading_monomial()


@given(polys())
def test_term_list_strictly_descending(f):
    mons = [m for m, _ in f.term_list()]
    assert all(a > b for a, b in zip(mons, mons[1:]))


def test_polynomials_over_different_rings_rejected():
    with pytest.raises(ValueError):
        R2("x") + R3("x")


def test_monomials_of_degree_count():
    # C(d+2, 2) monomials of degree d in three variables
    assert [len(R3.monomials_of_degree(d)) for d in range(5)] == [1, 3, 6, 10, 15]
    W = PolyRing(("a", "b"), (1, 2))
    assert W.monomials_of_degree(4) == [(4, 0), (2, 1), (0, 2)]


@given(polys(R3))
def test_format_parse_round_trip(f):
    assert parse_poly(repr(f), R3) == f.terms
