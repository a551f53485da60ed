import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stablemod.matrix import FreeModule, HomogeneityError, Matrix, ShapeError
from stablemod.poly import PolyRing
from stablemod.textio import parse_poly

P = 101
S = PolyRing(("x", "y", "z"))


def poly(text):
    return parse_poly(text, S)


@st.composite
def forms(draw, d):
    monos = S.monomials_of_degree(d)
    if not monos:
        return {}
    chosen = draw(st.lists(st.sampled_from(monos), max_size=3, unique=True))
    return {e: draw(st.integers(1, P - 1)) for e in chosen}


@st.composite
def homogeneous_matrices(draw, src=None, tgt=None):
    tgt = tgt or FreeModule(draw(st.lists(st.integers(0, 2), min_size=1, max_size=3)))
    src = src or FreeModule(draw(st.lists(st.integers(2, 4), min_size=1, max_size=3)))
    rows = [[draw(forms(s - t)) for s in src.degrees] for t in tgt.degrees]
    return Matrix.from_rows(S, rows, src, tgt)


def test_transpose_of_row_negates_shifts():
    row = Matrix.from_rows(S, [[poly("x"), poly("y"), poly("z")]], FreeModule([1, 1, 1]), FreeModule([0]))
    col = row.T
    assert col.shape == (3, 1)
    assert col.tgt.degrees == (-1, -1, -1) and col.src.degrees == (0,)
    assert [col.entry(i, 0) for i in range(3)] == [poly("x"), poly("y"), poly("z")]


def test_compose_with_identity_and_direct_sum():
    a = Matrix.from_rows(S, [[poly("x"), poly("y^2")]], FreeModule([1, 2]), FreeModule([0]))
    assert a @ Matrix.identity(S, a.src) == a
    assert Matrix.identity(S, a.tgt) @ a == a
    dx = Matrix.from_rows(S, [[poly("x")]], FreeModule([1]), FreeModule([0]))
    dy = Matrix.from_rows(S, [[poly("y")]], FreeModule([1]), FreeModule([0]))
    assert dx.direct_sum(dy).rows() == [[poly("x"), {}], [{}, poly("y")]]


def test_inhomogeneous_entry_rejected():
    with pytest.raises(HomogeneityError):
        Matrix.from_rows(S, [[poly("x + y^2")]], FreeModule([1]), FreeModule([0]))
    with pytest.raises(ShapeError):
        Matrix.from_rows(S, [[poly("x")], [poly("y")]], FreeModule([1]), FreeModule([0]))


@settings(max_examples=40, deadline=None)
@given(homogeneous_matrices())
def test_transpose_is_an_involution(a):
    assert a.T.T == a
    a.T.check_homogeneous()


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_compose_is_associative_and_transposes(data):
    f0 = FreeModule(data.draw(st.lists(st.integers(0, 1), min_size=1, max_size=2)))
    f1 = FreeModule(data.draw(st.lists(st.integers(1, 2), min_size=1, max_size=2)))
    f2 = FreeModule(data.draw(st.lists(st.integers(2, 3), min_size=1, max_size=2)))
    f3 = FreeModule(data.draw(st.lists(st.integers(3, 4), min_size=1, max_size=2)))
    a = data.draw(homogeneous_matrices(f1, f0))
    b = data.draw(homogeneous_matrices(f2, f1))
    c = data.draw(homogeneous_matrices(f3, f2))
    assert (a @ b) @ c == a @ (b @ c)
    assert (a @ b).T == b.T @ a.T
    (a @ b).check_homogeneous()


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_concatenation_shapes(data):
    a = data.draw(homogeneous_matrices())
    b = data.draw(homogeneous_matrices(tgt=a.tgt))
    h = a.hconcat(b)
    assert h.shape == (a.tgt.rank, a.src.rank + b.src.rank)
    v = a.vconcat(a)
    assert v.rows() == a.rows() + a.rows()
