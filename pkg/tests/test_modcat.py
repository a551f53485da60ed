import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stablemod import library
from stablemod.homological import syzygy
from stablemod.modcat import (
    IsoStatus,
    Module,
    ModuleMap,
    betti0,
    betti1,
    cokernel_of_map,
    colon_and_gamma,
    dual_module,
    hom_degree0,
    image_module,
    is_isomorphic,
    is_stably_isomorphic,
    kernel_module,
    minimal_presentation,
    strip_free_summands,
)
from stablemod.rings import corpus_rings
from stablemod.verify import ModuleGenerator

RINGS = corpus_rings()
S3, A = RINGS["S3"], RINGS["A"]
P = 101


def lib(name):
    return library.module(name)


random_modules = st.builds(
    lambda r, s: ModuleGenerator(RINGS[r], s).random_presentation(),
    st.sampled_from(sorted(RINGS)),
    st.integers(0, 10**6),
)


# ---------- presentations ----------

def test_minimal_presentation_examples():
    one = (0, 0, 0)
    assert minimal_presentation(Module(S3, [0], [{(0, one): 1}])).is_zero()
    # d1 = [[1, x], [0, y]]: one pivot leaves R/(y)
    M = Module(S3, [0, 0], [{(0, one): 1}, {(0, (1, 0, 0)): 1, (1, (0, 1, 0)): 1}])
    N = minimal_presentation(M)
    assert N.rank == 1 and len(N.rels) == 1
    assert N.hilbert_series() == M.hilbert_series()
    assert is_isomorphic(N, Module.cyclic(S3, ["y"]), allow_shift=True).verified
    k = lib("k_S3")
    assert minimal_presentation(k) == k
    assert minimal_presentation(minimal_presentation(M)) == minimal_presentation(M)


@settings(max_examples=25, deadline=None)
@given(random_modules)
def test_minimal_presentation_keeps_hilbert_series(M):
    N = minimal_presentation(M)
    assert N.hilbert_series() == M.hilbert_series()
    assert betti0(N) == betti0(M)
    assert minimal_presentation(N) == N


# ---------- maps, kernels, cokernels ----------

def test_kernel_and_cokernel_examples():
    m, R = lib("m_S3"), Module.free(S3, [0])
    x, y, z = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    incl = ModuleMap(m, R, [{(0, x): 1}, {(0, y): 1}, {(0, z): 1}], check=True)
    assert is_isomorphic(cokernel_of_map(incl), lib("k_S3")).verified
    assert kernel_module(incl).is_zero()
    assert kernel_module(ModuleMap.identity(m)).is_zero()


def test_ill_defined_map_rejected():
    k, R = lib("k_S3"), Module.free(S3, [0])
    with pytest.raises(ValueError):
        ModuleMap(k, R, [{(0, (0, 0, 0)): 1}], check=True)


@settings(max_examples=20, deadline=None)
@given(random_modules, st.integers(0, 10**6))
def test_hilbert_additivity_along_maps(M, seed):
    gen = ModuleGenerator(M.ring, seed)
    N = gen.random_presentation()
    basis = hom_degree0(M, N)
    if not basis:
        return
    c = [gen.rng.randrange(P) for _ in basis]
    phi0 = []
    for j in range(M.rank):
        v = {}
        for ck, f in zip(c, basis):
            for key, a in f[j].items():
                v[key] = (v.get(key, 0) + ck * a) % P
        phi0.append({k: a for k, a in v.items() if a})
    f = ModuleMap(M, N, phi0, check=True)
    K, I, C = kernel_module(f), image_module(f), cokernel_of_map(f)
    assert M.hilbert_series() == K.hilbert_series() + I.hilbert_series()
    assert N.hilbert_series() == I.hilbert_series() + C.hilbert_series()


# ---------- Hom and duals ----------

def test_dual_of_maximal_ideal_is_free():
    D = dual_module(lib("m_S3")).module
    v = is_isomorphic(D, Module.free(S3, [0]), allow_shift=True)
    # generated by the inclusion, a map of degree 0
    assert v.verified and v.shift == 0


def test_hom_degree0_of_cyclic_modules():
    # Hom_0(A/(x), A/(x)) is spanned by the identity; Hom_0(k, A) = 0 in degree 0
    assert len(hom_degree0(lib("x_A"), lib("x_A"))) == 1
    assert hom_degree0(lib("k_A"), Module.free(A, [0])) == []


# ---------- free summands ----------

def test_strip_examples():
    res = strip_free_summands(lib("kR_S3"))
    assert (res.free_rank, res.free_degrees) == (1, [0])
    assert is_isomorphic(res.module, lib("k_S3")).verified
    res = strip_free_summands(lib("m_S3"))
    assert res.free_rank == 0 and is_isomorphic(res.module, lib("m_S3")).verified
    M = Module(S3, [0, 1], [{(0, (1, 0, 0)): 1, (1, (0, 0, 0)): 1}])
    res = strip_free_summands(M)
    assert res.module.is_zero() and res.free_rank == 1


@settings(max_examples=20, deadline=None)
@given(random_modules)
def test_strip_then_add_back(M):
    red, rho, degs = strip_free_summands(M)
    back = red + Module.free(M.ring, degs) if rho else red
    assert back.hilbert_series() == M.hilbert_series()
    assert is_isomorphic(back, M).status is not IsoStatus.REFUTED


# ---------- isomorphism ----------

def test_iso_examples():
    k, x = lib("k_S3"), lib("x_S3")
    assert is_stably_isomorphic(k, k + Module.free(S3, [2])).verified
    v = is_isomorphic(k, x)
    assert v.refuted and "Hilbert" in v.invariant
    v = is_isomorphic(syzygy(lib("x_A"), 2), lib("x_A"), allow_shift=True)
    assert v.verified and v.shift == -2 and v.recheck()


@settings(max_examples=15, deadline=None)
@given(random_modules, st.integers(-2, 2))
def test_iso_detects_shift_and_permutation(M, s):
    N = ModuleGenerator(M.ring, 7).random_presentation()
    v = is_isomorphic(M + N, N + M)
    assert v.verified and v.recheck()
    w = is_isomorphic(M, M.shifted(s), allow_shift=True)
    assert w.verified and w.shift == s


def test_non_isomorphic_same_hilbert_series_refuted():
    # x_A and the other minimal prime quotient A/(y) have equal Hilbert series
    y_A = Module.cyclic(A, ["y"])
    v = is_isomorphic(lib("x_A"), y_A)
    assert v.refuted


# ---------- torsion ----------

def test_gamma_examples():
    g = colon_and_gamma(lib("kR_S3"))
    assert g.index == 1
    assert is_isomorphic(g.gamma, lib("k_S3")).verified
    assert colon_and_gamma(Module.free(S3, [0])).gamma.is_zero()
    g = colon_and_gamma(lib("x2_A"))
    # Gamma = (x)/(x^2) is k generated in degree 1
    assert g.gamma.degrees == (1,)
    assert is_isomorphic(g.gamma, lib("k_A"), allow_shift=True).shift == -1
    assert is_isomorphic(g.quotient, lib("x_A")).verified


def test_betti_numbers_of_presentation():
    assert betti0(lib("m_S3")) == (1, 1, 1)
    assert betti1(lib("m_S3")) == (2, 2, 2)
