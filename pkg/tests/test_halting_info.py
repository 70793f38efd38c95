"""Reach curves, mass-prefix surgery, late halters, and ranking."""

import pytest
from hypothesis import given, settings, strategies as st

from aitbench import (
    Budget,
    Certainty,
    NotExact,
    NotProducible,
    NotStabilized,
    PrefixTooShort,
    UsageError,
    build_delta,
    build_gamma,
    busy_beaver,
    hmd,
    holographic_rank,
    late_halter_table,
    late_halters,
    omega_approx,
    reach_comparison,
    reach_curve,
    reach_via_badger,
    reassemble,
    sweep,
)
from aitbench.workspace import Tables


@pytest.fixture(scope="module")
def tabs():
    return Tables(Budget(14, 10**5))


@pytest.fixture(scope="module")
def t14(tabs):
    return tabs.get("")


@pytest.fixture(scope="module")
def t10():
    return sweep("", Budget(10, 10**5))


# --- reach curves ---------------------------------------------------------

EPS_REACH = (
    (0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (5, 0),
    (6, 1), (7, 1), (8, 1),
    (9, 2), (10, 2), (11, 2),
    (12, 3),
)


def test_reach_of_empty_advice(t14):
    rc = reach_curve("", t14, t14, 12)
    assert tuple((i, r) for i, r, _ in rc.points) == EPS_REACH
    assert all(c is Certainty.EXACT for _, _, c in rc.points)


def test_reach_at_lookup(t14):
    rc = reach_curve("", t14, t14, 12)
    assert rc.at(0) == 0
    assert rc.at(6) == 1
    assert rc.at(12) == 3
    with pytest.raises(ValueError):
        rc.at(13)
    with pytest.raises(ValueError):
        rc.at(-1)


def test_reach_is_monotone(t14):
    rc = reach_curve("", t14, t14, 12)
    rs = [r for _, r, _ in rc.points]
    assert all(a <= b for a, b in zip(rs, rs[1:]))


def test_reach_closure_mirrors_the_curve(t14):
    rc = reach_curve("", t14, t14, 12)
    assert rc.closure.generators == ((0, 3), (1, 2), (4, 1), (7, 0))
    assert rc.witness_cap == 22


def test_reach_saturates_past_the_table(t14):
    # no witness longer than the enumerated programs can appear, so the
    # curve flattens at its last certified value
    rc = reach_curve("", t14, t14, 30)
    assert rc.at(30) == rc.at(12) == 3


def test_reach_with_mass_prefix_advice(tabs, t14):
    z = omega_approx(t14).value.prefix_bits(14)
    rc = reach_curve(z, tabs.get(z), t14, 12)
    got = tuple((i, r) for i, r, _ in rc.points)
    assert got[:12] == EPS_REACH[:12]
    assert rc.at(12) == 4


def test_reach_needs_a_certified_reference():
    starved = sweep("", Budget(9, 3))
    with pytest.raises(NotStabilized):
        reach_curve("", starved, starved, 5)


# --- hindsight distance ---------------------------------------------------

def test_hmd_is_reach_minus_advice(tabs, t14):
    rc = reach_curve("", t14, t14, 12)
    h = hmd("", tabs, 12)
    for i in range(13):
        assert h.at(i) == rc.at(i) - i


def test_hmd_of_empty_advice_is_never_positive(tabs):
    h = hmd("", tabs, 12)
    assert [h.at(i) for i in range(13)] == [0, -1, -2, -3, -4, -5, -5, -6, -7, -7, -8, -9, -9]
    assert max(h.at(i) for i in range(13)) == 0


def test_hmd_gain_from_mass_prefix_advice(tabs, t14):
    # copying advice costs three program bits per bit on this machine, so
    # the distance stays nonpositive; the advice still buys one bit at the top
    z = omega_approx(t14).value.prefix_bits(14)
    hz = hmd(z, tabs, 12)
    he = hmd("", tabs, 12)
    assert max(hz.at(i) for i in range(13)) == 0
    assert hz.at(12) - he.at(12) == 1


# --- clock route and the comparison report --------------------------------

def test_badger_route_dominates_the_witness_route(t14):
    rw = reach_curve("", t14, t14, 12)
    rb = reach_via_badger("", t14, t14, 12)
    assert tuple((i, r) for i, r, _ in rb.points) == (
        (0, 1), (1, 1), (2, 2),
    ) + tuple((i, 14) for i in range(3, 13))
    for (i, w, _), (j, c, _) in zip(rw.points, rb.points):
        assert i == j and w <= c


def test_badger_route_tail_loses_certainty(t14):
    rb = reach_via_badger("", t14, t14, 16)
    flags = {i: c for i, _, c in rb.points}
    assert flags[14] is Certainty.EXACT
    assert flags[15] is Certainty.LOWER_BOUND
    assert flags[16] is Certainty.LOWER_BOUND


def test_reach_comparison_report(tabs):
    rep = reach_comparison("", tabs, 12)
    assert rep.name == "reach-routes"
    assert rep.columns == (
        "i", "witness_route", "clock_route", "gap",
        "witness_certainty", "clock_certainty",
    )
    assert rep.rows[0] == (0, 0, 1, -1, "exact", "exact")
    assert rep.rows[6] == (6, 1, 14, -13, "exact", "exact")
    assert rep.rows[12] == (12, 3, 14, -11, "exact", "exact")
    assert all(gap == w - c for _, w, c, gap, _, _ in rep.rows)
    assert rep.notes == (
        "closeness of closed regions (mirrored): witness-to-clock 10, clock-to-witness 0",
    )


# --- splitting and reassembling the mass prefix ---------------------------

def test_gamma_of_no_blocks_is_empty(t10):
    assert build_gamma([], t10) == ""


def test_gamma_of_a_single_block(t10):
    assert build_gamma([(1, 2)], t10) == omega_approx(t10).value.prefix_bits(3)[0:3]


def test_split_and_reassemble_golden(t10):
    blocks = [(1, 2), (2, 3)]
    gamma = build_gamma(blocks, t10)
    delta = build_delta(blocks, 8, t10)
    assert gamma == "0100100"
    assert delta == "1"
    assert reassemble(blocks, gamma, delta) == "01010100"
    assert reassemble(blocks, gamma, delta) == omega_approx(t10).value.prefix_bits(8)


def test_long_remainder_extends_the_span(t10):
    assert reassemble([(1, 2), (2, 3)], "0100100", "11") == "010101001"


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 4), st.integers(1, 4)), min_size=1, max_size=3), st.integers(0, 4))
def test_reassembly_recovers_the_prefix(t14, blocks, tail):
    span = sum(a + b for a, b in blocks) + 1 + tail
    if span > 14:
        return
    gamma = build_gamma(blocks, t14)
    delta = build_delta(blocks, span, t14)
    assert reassemble(blocks, gamma, delta) == omega_approx(t14).value.prefix_bits(span)


def test_gamma_wants_certified_bits(t10):
    with pytest.raises(PrefixTooShort):
        build_gamma([(1, 20)], t10)
    with pytest.raises(PrefixTooShort):
        build_delta([(1, 2), (2, 3)], 20, t10)


def test_split_rejects_bad_shapes(t10):
    with pytest.raises(UsageError):
        build_delta([(1, 2), (2, 3)], 4, t10)
    with pytest.raises(UsageError):
        reassemble([(1, 2), (2, 3)], "010", "1")
    with pytest.raises(UsageError):
        reassemble([(1, 2), (2, 3)], "0100100", "")
    with pytest.raises(ValueError):
        build_gamma([(0, 2)], t10)
    with pytest.raises(ValueError):
        build_gamma([(1, 0)], t10)


# --- late halters ----------------------------------------------------------

def test_late_halters_golden(t14):
    count, rep = late_halters(t14, 6, 3)
    assert count == 7
    assert rep.rows == ((6, 3, 1, 7, "-1"),)


def test_late_halters_more_rows(t14):
    assert late_halters(t14, 9, 3)[1].rows == ((9, 3, 2, 48, "2"),)
    assert late_halters(t14, 14, 5)[1].rows == ((14, 5, 4, 32, "0"),)
    assert late_halters(t14, 6, 6)[1].rows == ((6, 6, 0, 8, "-3"),)


def test_no_late_halters_below_the_floor(t14):
    for k, s in [(6, 0), (6, -1), (3, 0)]:
        count, rep = late_halters(t14, k, s)
        assert count == 0
        assert rep.rows[0][4] == "-"


def test_late_halters_match_a_direct_scan(t14):
    for k in (3, 6, 9, 14):
        for s in range(max(-1, k - 14), k + 1):
            deadline = busy_beaver(t14, k - s)[0]
            want = sum(
                1 for p, (steps, _) in t14.halted.items()
                if len(p) <= k and steps > deadline
            )
            count, rep = late_halters(t14, k, s)
            assert count == want
            assert rep.rows[0][2] == deadline


def test_late_halters_reject_bad_inputs(t14):
    with pytest.raises(ValueError):
        late_halters(t14, 15, 3)
    loose = sweep("", Budget(14, 10**5), certify=False)
    with pytest.raises(NotExact):
        late_halters(loose, 6, 3)


def test_late_halter_table(t14):
    tab = late_halter_table(t14, 6)
    assert tab.name == "late-halters"
    assert tab.columns == ("k", "s", "deadline", "count", "floor_log2_count_minus_s")
    assert len(tab.rows) == sum(k + 2 for k in range(1, 7))
    assert (6, 1, 1, 7, "1") in tab.rows
    assert (6, 4, 0, 8, "-1") in tab.rows
    assert (3, 1, 0, 1, "-1") in tab.rows
    # counts only grow as the lateness bar drops
    by_k = {}
    for k, s, _, count, _ in tab.rows:
        by_k.setdefault(k, []).append((s, count))
    for pairs in by_k.values():
        counts = [c for _, c in sorted(pairs)]
        assert counts == sorted(counts)


# --- holographic rank ------------------------------------------------------

def test_rank_golden(t14):
    assert holographic_rank("", t14) == 1
    assert holographic_rank("0", t14) == 7
    assert holographic_rank("1", t14) == 6
    assert holographic_rank("01", t14) == 47
    assert holographic_rank("00", t14) == 48


def test_rank_is_positive(t14):
    for x in ["", "0", "1", "00", "01", "10", "11"]:
        assert holographic_rank(x, t14) >= 1


def test_rank_needs_a_producible_string(t14):
    with pytest.raises(NotProducible):
        holographic_rank("0100", t14)


def test_rank_guard_tracks_unresolved_peers():
    loose = sweep("", Budget(14, 10**5), certify=False)
    # the unresolved rows all sit above length 5, so short subjects still rank
    assert holographic_rank("", loose) == 1
    with pytest.raises(NotExact):
        holographic_rank("01", loose)
