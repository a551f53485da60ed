import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stablemod import library
from stablemod.classify import (
    GP,
    G,
    NotCM,
    Status,
    classify,
    classify_one,
    in_Gmn,
    in_TF,
    is_gp,
    is_mcm,
    is_perfect,
    is_projective,
    is_spherical,
    parse_category,
    prop_cm_conditions,
)
from stablemod.modcat import Module
from stablemod.rings import corpus_rings, make_ring
from stablemod.verify import ModuleGenerator

RINGS = corpus_rings()
S3, A = RINGS["S3"], RINGS["A"]
M_, N_, U_ = Status.MEMBER, Status.NON_MEMBER, Status.UNKNOWN


def lib(name):
    return library.module(name)


def test_parse_category():
    assert str(parse_category("tf2")) == "TF2"
    assert parse_category("MCM") == parse_category("CM")
    assert parse_category("G(2,3)") == G(2, 3)
    assert str(parse_category("XSPH(2, G(2,3))")) == "XSPH(2,G(2,3))"
    for bad in ("TF", "FL3", "WAT", "G(2)"):
        with pytest.raises(ValueError):
            parse_category(bad)


def test_free_modules_are_in_everything():
    F = Module.free(S3, [0, 1])
    assert is_projective(F).member
    for m, n in [(0, 0), (2, 3), (5, 1)]:
        assert in_Gmn(F, m, n).member
    for n in (1, 2, 3):
        assert is_spherical(F, n).member


def test_perfect_modules():
    assert is_perfect(lib("k_S3"), 3).member
    assert is_perfect(lib("x_S3"), 1).member
    assert all(is_perfect(lib("m_S3"), n).non_member for n in range(4))


def test_mcm_and_gp():
    assert is_mcm(lib("x_A")).member
    assert is_gp(lib("x_A")).member
    assert is_mcm(lib("k_S3")).non_member
    assert classify_one(lib("k_S3"), parse_category("FL")).member
    assert is_gp(lib("k_A")).non_member


def test_torsionfree_examples():
    m = lib("m_S3")
    assert in_TF(m, 1).member and in_TF(m, 2).non_member
    rep = classify(m, ("TF1", "TF2", "REF"), "m_S3")
    assert [v.status for v in rep.verdicts.values()] == [M_, N_, N_]


def test_prop_cm_examples():
    pc = prop_cm_conditions(lib("m_S3"))
    assert (pc.a.status, pc.b.status, pc.c.status, pc.d.status) == (N_, N_, N_, M_)
    pc = prop_cm_conditions(lib("x2_A"))
    assert all(getattr(pc, k).member for k in "abcd")
    pc = prop_cm_conditions(lib("kx_A"))
    assert all(getattr(pc, k).member for k in "abcd")
    assert classify_one(Module.free(S3, [0]), parse_category("HSPH3")).member


def test_prop_cm_needs_cm_ring():
    B = make_ring("B", "xy", ["x^2", "x*y"], dim=1)
    with pytest.raises(NotCM):
        prop_cm_conditions(Module.free(B, [0]))
    assert classify_one(Module.free(B, [0]), parse_category("HSPH1")).status is U_


def test_gp_outside_gorenstein_is_unknown():
    B = make_ring("B", "xy", ["x^2", "x*y"], dim=1)
    assert classify_one(Module.free(B, [0]), GP).status is U_


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(sorted(RINGS)), st.integers(0, 10**6))
def test_category_inclusions(r, seed):
    """PROJ in GP in G(2,3), TF2 in TF1, and GP = MCM over Gorenstein rings."""
    M = ModuleGenerator(RINGS[r], seed).random_presentation()
    if is_projective(M).member:
        assert is_gp(M).member
    gp = is_gp(M)
    if gp.member:
        assert in_Gmn(M, 2, 3).member
    assert gp.status is is_mcm(M).status
    if in_TF(M, 2).member:
        assert in_TF(M, 1).member
    assert classify_one(M, parse_category("REF")).status is in_TF(M, 2).status
