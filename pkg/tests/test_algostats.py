"""Set models, two-part codes, sophistication, clock regions, surveys."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aitbench import (
    Budget,
    Certainty,
    MalformedCode,
    NoSufficientModel,
    NotMember,
    NotProducible,
    NotStabilized,
    UsageError,
    antistochasticity,
    clock_time,
    csoph,
    decode_set,
    desc_profile,
    encode_set,
    equivalence_report,
    k_of,
    models_of,
    producers,
    reconstruct_theta,
    soph,
    soph_free,
    soph_pair_report,
    structure_functions,
    survey,
    sweep,
    theta_profiles,
    two_part,
)
from aitbench.algostats import ALPHA_BITS
from aitbench.core import bitstrings_up_to

element_sets = st.sets(st.text(alphabet="01", max_size=5), min_size=1, max_size=6)


@pytest.fixture(scope="module")
def t15():
    """Smallest budget where a two-element set becomes producible."""
    return sweep("", Budget(15, 10**5))


def test_set_encoding_goldens():
    assert encode_set([""]) == "00"
    assert encode_set(["1"]) == "0101"
    assert encode_set(["", "0"]) == "100100"
    assert encode_set(["0", "1"]) == "10100101"


def test_set_encoding_ignores_presentation_order():
    assert encode_set(["1", "0", "0"]) == encode_set(["0", "1"])


@given(element_sets)
def test_set_encoding_round_trip(elems):
    assert set(decode_set(encode_set(elems))) == elems


def test_set_decoding_rejects_non_canonical():
    with pytest.raises(MalformedCode):
        decode_set("10101100")  # elements out of lenlex order
    with pytest.raises(MalformedCode):
        decode_set("001")  # trailing bits
    with pytest.raises(MalformedCode):
        decode_set("0100100")  # second element under a one-element count
    with pytest.raises(MalformedCode):
        decode_set("1")  # count field never terminated
    with pytest.raises(MalformedCode):
        decode_set("0110")  # element body truncated


def test_models_of_nothing(t14):
    ms = models_of("", t14)
    assert len(ms) == 1
    m = ms[0]
    assert (m.elements, m.encoding, m.k_model) == (("",), "00", 9)
    assert (m.certainty, m.witness_program) == (Certainty.EXACT, "001001000")
    assert (m.log_card, m.total_cost()) == (0, 9 + 0 + ALPHA_BITS)


def test_model_coverage_is_lopsided(t14):
    """The encoding of {"0"} costs one bit too many for this budget while
    {"1"} doubles into reach, so only one of the two gets a model."""
    assert models_of("0", t14) == []
    ms = models_of("1", t14)
    assert [(m.elements, m.encoding, m.k_model) for m in ms] == [
        (("1",), "0101", 12)
    ]


def test_models_always_contain_their_subject(t15):
    for x in bitstrings_up_to(2):
        for m in models_of(x, t15):
            assert x in m.elements


def test_model_count_grows_with_budget(t14, t15):
    ms = models_of("", t15)
    assert len(ms) == 2
    assert [m.encoding for m in ms] == ["00", "100100"]
    assert len(models_of("", t14)) <= len(ms)
    assert [(m.elements, m.encoding) for m in models_of("0", t15)] == [
        (("0",), "0100"),
        (("", "0"), "100100"),
    ]


def test_two_part_through_a_singleton(t14):
    d = two_part(models_of("", t14)[0], "")
    assert d.index == ""
    assert d.total_length == 12
    assert d.verify()


def test_two_part_through_a_pair_set(t15):
    pair = models_of("0", t15)[1]
    d = two_part(pair, "0")
    assert (d.index, d.total_length) == ("1", pair.k_model + 1 + ALPHA_BITS)
    assert d.verify()
    first = two_part(pair, "")
    assert first.index == "0"
    assert first.verify()


def test_two_part_total_formula_everywhere(t15):
    for x in bitstrings_up_to(2):
        for m in models_of(x, t15):
            d = two_part(m, x)
            assert d.total_length == m.k_model + m.log_card + ALPHA_BITS
            assert d.verify()


def test_two_part_rejects_outsiders(t14):
    with pytest.raises(NotMember):
        two_part(models_of("", t14)[0], "0")


def test_desc_profile_of_nothing(t14):
    dp = desc_profile("", t14)
    assert dp.profile.generators == ((9, 12),)
    assert dp.delta.generators == ((9, 9),)
    assert dp.profile.contains(9, 9 + ALPHA_BITS)
    assert (dp.mdl_at(8), dp.mdl_at(9)) == (None, 12)
    assert dp.soph_at(30) == 9


def test_desc_profile_without_models(t14):
    dp = desc_profile("0", t14)
    assert dp.profile.is_empty
    with pytest.raises(NoSufficientModel):
        dp.soph_at(0)
    with pytest.raises(NotProducible):
        desc_profile("0100", t14)


def test_structure_functions_of_nothing(tabs14):
    mdl, card, deficiency = structure_functions("", tabs14)
    assert (mdl.at(8), mdl.at(9)) == (None, 12)
    assert (card.at(8), card.at(9)) == (None, 0)
    assert deficiency.at(9) == -3
    for g in (mdl, card, deficiency):
        vals = [g.at(i) for i in range(20) if g.at(i) is not None]
        assert vals == sorted(vals, reverse=True)
    for i in range(9, 20):
        assert deficiency.at(i) <= card.at(i)


def test_soph_of_nothing(t14):
    assert soph("", 30, t14) == 9
    assert soph("", 9, t14) == 9
    with pytest.raises(NoSufficientModel):
        soph("", 8, t14)
    with pytest.raises(NoSufficientModel):
        soph("0", 30, t14)


def test_soph_is_non_increasing_in_slack(t15):
    vals = []
    for c in range(9, 31):
        try:
            vals.append(soph("", c, t15))
        except NoSufficientModel:
            continue
    assert vals and vals == sorted(vals, reverse=True)


def test_coarse_soph(t14):
    assert csoph("", t14) == 18
    with pytest.raises(NoSufficientModel):
        csoph("0", t14)


def test_coarse_soph_lower_bounds(t15):
    """Coarse never beats any single slack point: it pays the slack."""
    for c in range(0, 25):
        try:
            assert csoph("", t15) <= soph("", c, t15) + c
        except NoSufficientModel:
            continue


def test_theta_regions_by_length(t14):
    want = {0: ((1, 3),), 1: ((1, 6),), 2: ((1, 9),)}
    for y in bitstrings_up_to(2):
        th = theta_profiles(y, t14, t14)
        assert th.tilde.generators == want[len(y)]
        assert th.hat.generators == want[len(y)]
        assert set(th.tilde_flags.values()) == {Certainty.EXACT}


def test_theta_needs_a_producible_string(t14):
    with pytest.raises(NotProducible):
        theta_profiles("0100", t14, t14)


def test_unconditioned_clocks_agree_exactly(t14):
    for y in bitstrings_up_to(3):
        if not producers(t14, y):
            continue
        th = theta_profiles(y, t14, t14)
        assert th.tilde == th.hat


def test_conditional_clock_generators_align_horizontally(tabs14, t14):
    """The two clocks mark each producer at the same height, so generator
    rows agree even when readings differ."""
    t0 = tabs14.get("0")
    for y in bitstrings_up_to(2):
        th = theta_profiles(y, t0, t14)
        assert {g[1] for g in th.tilde.generators} == {
            g[1] for g in th.hat.generators
        }


def test_reconstruction_matches_direct_region(t14):
    sp = k_of("", t14)
    th = theta_profiles("", t14, t14)
    rebuilt = reconstruct_theta(sp.program, clock_time(t14, sp.program)[0], t14)
    assert rebuilt == th.tilde.generators


def test_reconstruction_conditional(tabs14, t14):
    t0 = tabs14.get("0")
    sp = k_of("0", t0)
    rebuilt = reconstruct_theta(sp.program, clock_time(t0, sp.program)[0], t0)
    assert rebuilt == theta_profiles("0", t0, t14).tilde.generators


def test_reconstruction_degenerate_reading(t14):
    assert reconstruct_theta("000", 0, t14) == ((0, 3),)


def test_reconstruction_refusals(t14):
    with pytest.raises(NotStabilized):
        reconstruct_theta("000", 15, t14)
    with pytest.raises(UsageError):
        reconstruct_theta("111", 1, t14)


def test_free_sophistication_is_flat_here(t14, tabs14):
    for y in bitstrings_up_to(2):
        assert soph_free(y, t14, t14) == 1
    assert soph_free("0", tabs14.get("0"), t14) == 1


def test_antistochasticity_scores(t14):
    want = {"": 0, "0": 1, "1": 1, "00": 2, "01": 2, "10": 2, "11": 2}
    for x, score in want.items():
        assert antistochasticity(x, t14) == score
        assert 0 <= score <= max(k_of(x, t14).k, len(x))


def test_equivalence_report_golden(tabs14):
    r = equivalence_report(1, 1, tabs14)
    assert r.columns == (
        "y",
        "z",
        "status",
        "close_model_vs_time",
        "close_hat_vs_time",
        "close_tilde_vs_model",
    )
    assert r.rows[:3] == (
        ("eps", "eps", "ok", "0/9", "2/0", "9/0"),
        ("0", "eps", "ok", "0/not-eps-close", "5/0", "not-eps-close/0"),
        ("1", "eps", "ok", "0/9", "5/0", "11/0"),
    )
    assert len(r.rows) == 9
    assert {row[2] for row in r.rows} == {"ok"}


def test_equivalence_report_is_honest_when_starved(tabs14):
    r = equivalence_report(4, 0, tabs14)
    by_status = {row[2] for row in r.rows}
    assert by_status == {"ok", "out-of-budget"}
    assert ("0100", "eps", "out-of-budget", "-", "-", "-") in r.rows


def test_soph_pair_report_golden(tabs14):
    r = soph_pair_report(1, 1, tabs14)
    ok = [row for row in r.rows if row[-1] == "ok"]
    assert ok == [
        ("", "", 1, 1, 1, 0, 1, 0, "ok"),
        ("", "0", 1, 1, 1, 0, 1, 0, "ok"),
        ("", "1", 1, 1, 1, 0, 1, 0, "ok"),
        ("0", "", 1, 1, 1, 0, 1, 0, "ok"),
    ]
    assert all(
        row[-1] == "pair-out-of-budget" for row in r.rows if row[-1] != "ok"
    )


def test_survey_golden(tabs14):
    s = survey(1, tabs14)
    assert s.main.rows == (
        ("0", "ok", 6, "exact", 6, 1, 1, "7", "gen: (6,6)", "gen:"),
        ("1", "ok", 6, "exact", 6, 1, 1, "6", "gen: (6,6)", "gen: (12,15)"),
    )
    assert "kraft sum over shortest programs: 1/2^5" in s.main.notes
    assert s.splits.rows == (
        (
            "0",
            "eps",
            "0",
            "ok",
            "gen: (3,3)",
            "gen: (6,6)",
            "gen:",
            "gen: (1,6)",
            "gen: (1,6)",
            "0/not-eps-close",
            "5/0",
            "not-eps-close/0",
        ),
        (
            "0",
            "0",
            "eps",
            "ok",
            "gen: (6,6)",
            "gen: (3,3)",
            "gen: (9,12)",
            "gen: (1,3)",
            "gen: (1,3)",
            "0/9",
            "2/0",
            "9/0",
        ),
    )
    assert "time:eps|0" in s.profiles and "theta-tilde:0|eps" in s.profiles
