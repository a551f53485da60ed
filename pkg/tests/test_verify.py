import pytest

from stablemod import library
from stablemod.classify import GP, PROJ, G, Status, Verdict
from stablemod.modcat import IsoStatus, IsoVerdict, Module
from stablemod.rings import corpus_rings
from stablemod.verify import (
    FAIL,
    PASS,
    UNCERTIFIED,
    Inapplicable,
    ModuleGenerator,
    TheoremCheck,
    corpus_checks,
    run_corpus,
    verify_ab26,
    verify_cateq,
    verify_cor_refl,
    verify_d1,
    verify_perf_duality,
    verify_prop_cm,
    verify_prop_key,
    verify_prop_key_split,
    verify_thm1,
    verify_thm2,
)

RINGS = corpus_rings()
S2, S3, A = RINGS["S2"], RINGS["S3"], RINGS["A"]


def lib(name):
    return library.module(name)


def test_prop_key_examples():
    for n in (1, 2, 3):
        assert verify_prop_key(Module.free(S3, [0]), n, PROJ).verdict == PASS
    chk = verify_prop_key(lib("kx_A"), 1, GP)
    assert chk.verdict == PASS
    assert verify_prop_key_split(lib("k_A"), lib("x_A"), 1, GP).verdict == PASS
    assert verify_prop_key_split(lib("k_S3"), Module.free(S3, [0]), 3, G(3, 4)).verdict == PASS


def test_prop_key_hypotheses():
    with pytest.raises(Inapplicable):
        verify_prop_key(lib("k_S3"), 1, G(1, 1))
    with pytest.raises(Inapplicable):
        verify_prop_key_split(lib("x_S3"), Module.free(S3, [0]), 2, PROJ)
    with pytest.raises(Inapplicable):
        verify_prop_key_split(lib("k_S3"), lib("m_S3"), 1, PROJ)


def test_thm1_examples():
    assert verify_thm1(lib("k_S3"), 3).verdict == PASS
    assert verify_thm1(lib("x_S3"), 1).verdict == PASS
    assert verify_thm1(Module.zero(S3), 2).verdict == PASS
    with pytest.raises(Inapplicable):
        verify_thm1(lib("x_S3"), 2)


def test_thm2_examples():
    assert verify_thm2(lib("k_A"), 1, None).verdict == PASS
    assert verify_thm2(lib("k_S3"), 3, 3).verdict == PASS
    assert verify_thm2(lib("x_A"), 1, 2).verdict == PASS
    with pytest.raises(Inapplicable):
        verify_thm2(lib("k_A"), 2, 1)


def test_perf_duality_examples():
    assert verify_perf_duality(lib("k_S3"), 3).verdict == PASS
    assert verify_perf_duality(lib("x_S3"), 1).verdict == PASS
    assert verify_perf_duality(lib("xy_S3"), 2).verdict == PASS
    with pytest.raises(Inapplicable):
        verify_perf_duality(lib("m_S3"), 2)


def test_d1_examples():
    for name in ("k_S3", "xyz2_S3"):
        assert verify_d1(lib(name), "REG").verdict == PASS
        assert verify_cor_refl(lib(name)).verdict == PASS
    assert verify_d1(lib("x2_A"), "GOR").verdict == PASS
    assert verify_d1(lib("k_Q"), "GOR").verdict == PASS
    with pytest.raises(Inapplicable):
        verify_d1(lib("m_S3"), "REG")
    with pytest.raises(Inapplicable):
        verify_cor_refl(lib("k_S2"))
    with pytest.raises(ValueError):
        verify_d1(lib("k_S3"), "BOTH")


def test_prop_cm_and_sequences():
    assert verify_prop_cm(lib("m_S3")).verdict == PASS
    assert verify_prop_cm(lib("kx_A")).verdict == PASS
    assert verify_ab26(lib("m_S3")).verdict == PASS
    assert verify_cateq(lib("k_A"), 1, GP).verdict == PASS


def test_failed_certificates_become_fail_with_counterexample():
    chk = TheoremCheck("TRTR_IDENTITY", "S3", {})
    chk.iso("a = b", IsoVerdict(IsoStatus.UNKNOWN))
    assert chk.verdict == UNCERTIFIED
    chk.iso("c = d", IsoVerdict(IsoStatus.REFUTED, invariant="Hilbert series differ"))
    assert chk.verdict == FAIL and chk.counterexample.startswith("c = d")
    chk = TheoremCheck("PROP_CM", "S3", {})
    chk.member("M in X", Verdict(Status.NON_MEMBER, "witness"))
    assert chk.verdict == FAIL
    steps = chk.as_dict()["transcript"]
    assert steps[-2]["result"].startswith("NON_MEMBER") and steps[-1]["result"] == "failed"


def test_generator_is_deterministic():
    a = [ModuleGenerator(S3, 42).random_presentation() for _ in range(3)]
    b = [ModuleGenerator(S3, 42).random_presentation() for _ in range(3)]
    assert a == b
    g = ModuleGenerator(S3, 42)
    assert [g.random_presentation() for _ in range(3)] != [g.random_presentation() for _ in range(3)]
    assert ModuleGenerator(S2, 42).random_presentation().ring == S2


def test_generator_respects_bounds():
    g = ModuleGenerator(RINGS["Q"], 3)
    for _ in range(20):
        M = g.random_presentation()
        assert 1 <= M.rank <= 3 and len(M.rels) <= 3
        assert max(M.degrees) - min(M.degrees) <= 1


def test_corpus_checks_skip_inapplicable():
    names = {c.theorem for c in corpus_checks(lib("k_S3"), 42)}
    assert {"TRTR_IDENTITY", "DM_IDENTITY", "EXT_SHIFT", "FOURTERM_SEQ", "PROP_CM"} <= names


def test_empty_and_small_corpus():
    rep = run_corpus(42, 0)
    assert rep["cases"] == [] and rep["totals"] == {PASS: 0, FAIL: 0, UNCERTIFIED: 0}
    small = run_corpus(7, 2)
    assert len(small["cases"]) == 8 and small["totals"][FAIL] == 0
    assert run_corpus(7, 2) == small
