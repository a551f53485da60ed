import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stablemod import library
from stablemod.homological import (
    INF,
    NotGorenstein,
    bidual_map,
    canonical_sequences,
    d_functor,
    depth,
    dual,
    ext,
    gdim_gorenstein,
    grade,
    pd_over_R,
    resolve,
    syzygy,
    transpose,
)
from stablemod.modcat import Module, betti0, betti1, is_isomorphic, is_stably_isomorphic
from stablemod.rings import corpus_rings, make_ring
from stablemod.verify import ModuleGenerator

RINGS = corpus_rings()
S3, A = RINGS["S3"], RINGS["A"]
X, Y = (1, 0), (0, 1)


def lib(name):
    return library.module(name)


def seeded(ring_names):
    return st.builds(
        lambda r, s: ModuleGenerator(RINGS[r], s).random_presentation(),
        st.sampled_from(ring_names),
        st.integers(0, 10**6),
    )


# ---------- resolutions ----------

def test_koszul_resolution():
    res = resolve(lib("k_S3"), 3)
    assert res.ranks() == [1, 3, 3, 1, 0]
    assert res.betti().as_dict() == {(0, 0): 1, (1, 1): 3, (2, 2): 3, (3, 3): 1}
    assert res.length == 3 and res.is_minimal
    assert res.check_complex() and res.check_exact()


def test_free_module_resolution_stops():
    res = resolve(Module.free(S3, [0]), 2)
    assert res.ranks()[0] == 1 and res.length == 0


def test_hypersurface_periodicity():
    res = resolve(lib("x_A"), 4)
    assert res.ranks()[:5] == [1, 1, 1, 1, 1]
    # d_1 = x, d_2 = y, d_3 = x, ...
    for i in range(1, 5):
        (col,) = res.diffs[i]
        assert list(col) == [(0, X if i % 2 else Y)]
    assert res.length is None
    assert res.check_complex() and res.check_exact()


@settings(max_examples=20, deadline=None)
@given(seeded(["S2", "S3"]))
def test_hilbert_series_is_alternating_betti_sum(M):
    """Over a polynomial ring the numerator of HS(M) is sum (-1)^i beta_ij t^j."""
    n = M.ring.nvars
    res = resolve(M, n + 1)
    assert res.length is not None and res.length <= n
    num: dict = {}
    for (i, j), c in res.betti().as_dict().items():
        num[j] = num.get(j, 0) + (-1) ** i * c
    assert M.hilbert_series().num == {j: c for j, c in num.items() if c}


@settings(max_examples=15, deadline=None)
@given(seeded(["A", "Q"]))
def test_resolutions_are_exact_complexes(M):
    res = resolve(M, 3)
    assert res.is_minimal and res.check_complex() and res.check_exact()


# ---------- syzygy, transpose, dual ----------

def test_syzygy_examples():
    assert is_isomorphic(syzygy(lib("k_S2")), lib("m_S2")).verified
    assert syzygy(Module.free(S3, [0, 1])).is_zero()
    O2 = syzygy(lib("k_S3"), 2)
    assert betti0(O2) == (2, 2, 2) and betti1(O2) == (3,)


def test_transpose_examples():
    assert transpose(Module.free(S3, [0])).is_zero()
    S1 = make_ring("S1", "x", dim=1, regular=True)
    k1 = Module.cyclic(S1, ["x"])
    T = transpose(k1)
    # coker of x: R(1) <- R, generated in degree -1
    assert T.degrees == (-1,)
    assert is_isomorphic(T, k1, allow_shift=True).verified


def test_d_functor_examples():
    assert d_functor(lib("k_S3")).is_zero()
    assert is_isomorphic(d_functor(Module.free(S3, [0, 2])), Module.free(S3, [0, 2])).verified
    assert is_isomorphic(d_functor(lib("m_S3")), lib("m_S3")).verified
    assert dual(lib("k_S3")).is_zero()


def test_bidual_of_maximal_ideal():
    bd = bidual_map(lib("m_S3"))
    assert bd.kernel().is_zero()
    assert is_isomorphic(bd.cokernel(), lib("k_S3")).verified


# ---------- Ext and invariants ----------

def test_ext_examples():
    k = lib("k_S3")
    assert [ext(k, i).is_zero() for i in range(4)] == [True, True, True, False]
    v = is_isomorphic(ext(k, 3), k, allow_shift=True)
    assert v.verified and v.shift == 3
    R = Module.free(S3, [0])
    assert all(ext(R, i).is_zero() for i in range(1, 4))
    assert all(ext(lib("x_A"), i).is_zero() for i in range(1, 7))


@settings(max_examples=15, deadline=None)
@given(seeded(["S2", "A", "Q"]), st.integers(1, 2))
def test_ext_dimension_shift(M, i):
    v = is_isomorphic(ext(M, i + 1), ext(syzygy(M, 1), i), allow_shift=True)
    assert v.verified and v.shift == 0


def test_grade_and_depth_examples():
    k, m, R = lib("k_S3"), lib("m_S3"), Module.free(S3, [0])
    assert (grade(k), grade(R), grade(Module.zero(S3))) == (3, 0, INF)
    assert (depth(k), depth(R), depth(m)) == (0, 3, 1)
    assert depth(lib("x_A")) == 1
    assert grade(lib("xy_S3")) == 2


def test_pd_over_ring():
    assert str(pd_over_R(lib("k_S3"), 5)) == "3"
    assert str(pd_over_R(lib("x_A"), 4)) == ">=5"
    assert str(pd_over_R(Module.zero(S3), 2)) == "-inf"


@settings(max_examples=15, deadline=None)
@given(seeded(["S2", "S3"]))
def test_grade_bounded_by_pd_and_depth_by_dim(M):
    if M.is_zero():
        return
    pd = pd_over_R(M, M.ring.nvars)
    assert pd.exact and grade(M) <= pd.value
    assert depth(M) <= M.krull_dim()


def test_gdim():
    assert gdim_gorenstein(lib("x_A")) == 0
    assert gdim_gorenstein(Module.free(A, [0])) == 0
    assert gdim_gorenstein(lib("k_A")) == 1
    B = make_ring("B", "xy", ["x^2", "x*y"], dim=1)
    with pytest.raises(NotGorenstein):
        gdim_gorenstein(Module.free(B, [0]))


# ---------- canonical sequences ----------

def test_canonical_sequences_examples():
    cs = canonical_sequences(Module.free(S3, [0]))
    assert cs.ext1.is_zero() and cs.ext2.is_zero() and cs.status == "PASS"
    cs = canonical_sequences(lib("k_S3"))
    assert cs.D.is_zero() and is_isomorphic(cs.ext1, lib("k_S3")).verified
    assert cs.status == "PASS"


@settings(max_examples=15, deadline=None)
@given(seeded(sorted(RINGS)))
def test_canonical_sequences_certified(M):
    assert canonical_sequences(M).status == "PASS"


@settings(max_examples=15, deadline=None)
@given(seeded(sorted(RINGS)))
def test_tr_tr_is_stable_identity(M):
    assert is_stably_isomorphic(transpose(transpose(M)), M).verified
