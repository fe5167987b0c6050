from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hybridglue import models
from hybridglue.errors import InvalidParameter, StabilityDomainError
from hybridglue.parabolic import MarkedSurface, ParabolicBundle, ParabolicLine, dual, pardeg


def _domain():
    for p in range(1, 7):
        for g in range(0, 5):
            for s in range(1, 7):
                if 2 * g - 2 + s > 0:
                    yield p, g, s


def test_bag_model():
    m = models.bag_model(2, 1)
    rep = models.stability_report(m)
    assert rep.total_pardeg == 0 and rep.stable
    # the sub-line has pardeg -(g-1) - s/2
    assert rep.subbundles[0][1] == Fraction(-3, 2)
    assert models.residue_nilpotency_order(m) == 2


def test_bag_domain():
    assert models.stability_report(models.bag_model(0, 3)).stable
    with pytest.raises(StabilityDomainError):
        models.bag_model(0, 2)


def test_hitchin_summands_and_truncations():
    m = models.hitchin_model(2, 2, 1)
    # K^j O(jD) has pardeg j(2g-2+s) = 3j here
    assert [pardeg(x) for x in m.bundle] == [-6, -3, 0, 3, 6]
    assert [v for _, v in models.stability_report(m).subbundles] == [-6, -9, -9, -6]


def test_hitchin_p1_is_bag_square():
    m = models.hitchin_model(1, 3, 2)
    assert m.rank == 3
    assert [(x.a, x.b) for x in m.bundle] == [(-1, -1), (0, 0), (1, 1)]


@pytest.mark.parametrize("p", range(1, 6))
def test_hitchin_residue_order(p):
    assert models.residue_nilpotency_order(models.hitchin_model(p, 2, 1)) == 2 * p + 1


def test_hitchin_truncations_match_closed_form():
    # oracle: partial sums of (j - p) * (2g - 2 + s)
    for p, g, s in _domain():
        x = 2 * g - 2 + s
        want = [sum((j - p) * x for j in range(m + 1)) for m in range(2 * p)]
        got = [v for _, v in models.stability_report(models.hitchin_model(p, g, s)).subbundles]
        assert got == want


def test_psi_model_values():
    m = models.psi_model(3, 2, 1, 1)
    assert pardeg(m.bundle.summands[0]) == -2
    assert models.stability_report(models.psi_model(3, 2, 1, 2)).stable
    assert pardeg(models.psi_model(3, 2, 1, 2).bundle.summands[0]) == 0
    sub = [v for _, v in models.stability_report(models.psi_model(2, 2, 1, 1)).subbundles]
    assert sub == [-3, -3]


def test_psi_truncations_match_closed_form():
    for p, g, s in _domain():
        x = 2 * g - 2 + s
        for k in range(1, p + 1):
            want = [sum(j * x for j in range(1 - p, l + 1 - p)) for l in range(1, 2 * p - 1)]
            rep = models.stability_report(models.psi_model(p, g, s, k))
            assert [v for _, v in rep.subbundles] == want
            assert rep.total_pardeg == 0


def test_sweep_all_stable():
    for p, g, s in _domain():
        assert models.stability_report(models.hitchin_model(p, g, s)).stable
        for k in range(1, p + 1):
            assert models.stability_report(models.psi_model(p, g, s, k)).stable


def test_psi_k_out_of_range():
    with pytest.raises(InvalidParameter):
        models.psi_model(3, 2, 1, 4)
    with pytest.raises(InvalidParameter):
        models.psi_model(3, 2, 1, 0)


def test_weight_perturbation_makes_unstable():
    base_model = models.hitchin_model(1, 0, 3)
    lines = list(base_model.bundle)
    assert pardeg(lines[0]) == -1
    lines[0] = ParabolicLine(lines[0].base, lines[0].a, lines[0].b, 0, Fraction(1, 3))
    bumped = models.HiggsModel(ParabolicBundle(tuple(lines)), base_model.higgs_pattern,
                               models.HITCHIN_E1, dict(base_model.params))
    rep = models.stability_report(bumped)
    assert rep.subbundles[0][1] == 0
    assert rep.verdict == "unstable"


@given(st.integers(1, 5), st.integers(0, 4), st.integers(1, 6), st.data())
def test_listed_sets_are_pattern_invariant(p, g, s, data):
    if 2 * g - 2 + s <= 0:
        return
    k = data.draw(st.integers(1, p))
    assert models.listed_sets_are_invariant(models.hitchin_model(p, g, s))
    assert models.listed_sets_are_invariant(models.psi_model(p, g, s, k))


def test_hitchin_has_no_nonnegative_invariant_subbundle():
    assert models.nonnegative_invariant_subbundles(models.hitchin_model(3, 2, 1)) == []


def test_psi_diagnostic_reports_positive_unlisted_line():
    # 2k - 1 > p makes the first summand alone invariant with positive degree
    found = models.nonnegative_invariant_subbundles(models.psi_model(3, 2, 1, 3))
    unlisted = [d for d in found if not d["listed"]]
    assert {"summands": [0], "pardeg": 2} in [
        {"summands": d["summands"], "pardeg": d["pardeg"]} for d in unlisted]
    assert all(not d["listed"] for d in found)


def test_psi_map_matches_psi_model():
    for p, g, s in [(2, 2, 1), (3, 1, 2), (4, 0, 3)]:
        for k in range(1, p + 1):
            ref = models.psi_model(p, g, s, k)
            m_line = ref.bundle.summands[0]
            got = models.psi_map(p, (m_line, dual(m_line)), True, [False] * (p - 1), genus=g, s=s)
            assert sorted(map(repr, got.bundle)) == sorted(map(repr, ref.bundle))


def test_psi_map_shapes():
    m = models.psi_map(3, (1, -1), False, [True, False])
    assert len(m.blocks["eta"]) == 3 and len(m.blocks["eta"][0]) == 4
    assert m.blocks["eta"][0][0] == "eta_hat"
    assert "q2" in {x for row in m.blocks["eta"] for x in row}
    assert "q4" not in {x for row in m.blocks["eta"] for x in row}
    assert m.rank == 7
    ex = models.psi_map(3, (1, -1), True, [True, True], exceptional=True)
    symbols = {x for row in ex.blocks["eta"] for x in row}
    assert {"mu", "nu"} <= symbols
    assert ex.constraints == ("0 != mu != lambda*nu",)


def test_psi_map_degenerate_p1():
    m = models.psi_map(1, (2, -2), False, [])
    assert m.rank == 3
    assert m.blocks["eta"] == (("eta_hat", "eta_hat"),)


def test_psi_map_flag_count():
    with pytest.raises(InvalidParameter):
        models.psi_map(3, (0, 0), True, [True])


def test_general_family_has_no_listed_subbundles():
    with pytest.raises(NotImplementedError):
        models.invariant_subbundles(models.psi_map(2, (0, 0), True, [False]))


def test_report_json():
    blob = models.stability_report(models.bag_model(2, 1)).to_json()
    assert blob["verdict"] == "stable"
    assert blob["total_pardeg"] == [0, 1]
    assert blob["subbundles"][0]["pardeg"] == [-3, 2]
    assert blob["scope"] == "stability relative to the enumerated family"


def test_pattern_shape_checked():
    m = models.bag_model(2, 1)
    with pytest.raises(InvalidParameter):
        models.HiggsModel(m.bundle, (("0",),), models.BAG, {})
