"""Shortest programs, time-bounded description length, and time profiles.

Everything here is a pure query against settled halting tables.  The
shortest-program order is: shorter beats longer, then fewer steps, then
length-lex of the program text.  Time-bounded quantities measure time on
the busy-beaver scale of the backing table, so their certainty inherits
the table's unknowns: a value is Exact only when no undecided row could
still undercut it.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field

from .core import Certainty, bitstrings_up_to
from .encoding import Dyadic, pair_encode
from .enumeration import (
    HaltingTable,
    busy_beaver,
    clock_time,
    inverse_busy_beaver,
)
from .errors import NotExact, NotProducible
from .profiles import (
    Point,
    Profile,
    close,
    sharp_finish,
    sum_profiles,
    translate,
    x_graph,
    y_graph,
)

_producer_cache: "weakref.WeakKeyDictionary[HaltingTable, dict]" = (
    weakref.WeakKeyDictionary()
)


def producers(t: HaltingTable, x: str) -> list[tuple[str, int]]:
    """Halted programs outputting x, as (program, steps), length-lex order."""
    idx = _producer_cache.get(t)
    if idx is None:
        idx = {}
        for p, (steps, output) in t.halted.items():
            idx.setdefault(output, []).append((p, steps))
        for lst in idx.values():
            lst.sort(key=lambda e: (len(e[0]), e[0]))
        _producer_cache[t] = idx
    return idx.get(x, [])


@dataclass(frozen=True)
class ShortestProgram:
    """Minimal-length producer of a string, fastest among its length."""

    program: str
    k: int
    steps: int
    certainty: Certainty


def k_of(x: str, t: HaltingTable) -> ShortestProgram:
    """Shortest program computing x under t's auxiliary condition.

    Ties at the minimal length go to the fastest program, then to
    length-lex order.  Exact unless a shorter row is still undecided.
    """
    cands = producers(t, x)
    if not cands:
        raise NotProducible(
            f"no program computing {x!r} halts within this table's budget"
        )
    k = len(cands[0][0])
    best = min(
        ((p, s) for p, s in cands if len(p) == k), key=lambda e: (e[1], e[0])
    )
    _, _, unk_upto = t._per_length()
    certainty = (
        Certainty.EXACT if k == 0 or unk_upto[k - 1] == 0 else Certainty.UPPER_BOUND
    )
    return ShortestProgram(best[0], k, best[1], certainty)


def kt_of(x: str, i: int, t: HaltingTable) -> tuple[int, Certainty]:
    """Least length of a producer of x running within the table's longest
    halting time among programs of length <= i."""
    bound, bcert = busy_beaver(t, i)
    if bcert is not Certainty.EXACT:
        raise NotExact(f"running-time bound at {i} is not settled")
    fits = [p for p, steps in producers(t, x) if steps <= bound]
    if not fits:
        raise NotProducible(f"nothing computes {x!r} within {bound} steps")
    k = len(fits[0])
    _, _, unk_upto = t._per_length()
    certainty = (
        Certainty.EXACT if k == 0 or unk_upto[k - 1] == 0 else Certainty.UPPER_BOUND
    )
    return k, certainty


def busy_time(t: HaltingTable, p: str) -> tuple[int, Certainty]:
    """Running time of p on the busy-beaver scale: least length whose
    longest halting time reaches rt(p)."""
    if p not in t.halted:
        raise ValueError("busy time is defined for halted programs only")
    return inverse_busy_beaver(t, t.halted[p][0])


@dataclass(frozen=True)
class TimeProfile:
    """Closure of (busy time, length) over all producers of one string.

    ``depth`` is the same region renormalized by the string's complexity
    (rows shifted down by k), so its Y-graph reads off how long a
    near-shortest program must run.
    """

    x: str
    profile: Profile
    depth: Profile
    shortest: ShortestProgram
    flags: dict[Point, Certainty] = field(compare=False)

    def kt(self, i: int) -> int | None:
        """Least producer length with busy time <= i; None if none yet."""
        return x_graph(self.profile).at(i)

    def bdepth(self, c: int) -> int | None:
        """Least busy time among producers within c bits of the shortest."""
        return y_graph(self.depth).at(c)


def time_profile(x: str, t: HaltingTable) -> TimeProfile:
    """Tradeoff region between producer length and busy running time."""
    cands = producers(t, x)
    if not cands:
        raise NotProducible(
            f"no program computing {x!r} halts within this table's budget"
        )
    points: list[Point] = []
    cert: dict[Point, Certainty] = {}
    for p, steps in cands:
        tau, tcert = inverse_busy_beaver(t, steps)
        pt = (tau, len(p))
        points.append(pt)
        if cert.get(pt) is not Certainty.EXACT:
            cert[pt] = tcert
    profile = close(points)
    sp = k_of(x, t)
    flags = {g: cert[g] for g in profile.generators}
    return TimeProfile(x, profile, translate(profile, -sp.k), sp, flags)


def mutual_info(x: str, y: str, tables) -> int:
    """Information x carries about y: how much x's shortest program, given
    as auxiliary input, shortens y's description."""
    t_eps = tables.get("")
    x_star = k_of(x, t_eps).program
    k_y = k_of(y, t_eps).k
    k_y_given = k_of(y, tables.get(x_star)).k
    return k_y - k_y_given


def expected_theta(
    t: HaltingTable, x: str | None = None
) -> tuple[Dyadic, Certainty]:
    """Mean stabilized-prefix clock reading, program-weighted.

    Sums 2^-|p| * theta(p) exactly over halted rows (all of them, or the
    producers of x).  More rows can only join, hence LowerBound; the
    all-programs sum can never pass 2, and that bound is enforced.
    """
    total = Dyadic.zero()
    for p, (steps, output) in t.halted.items():
        if x is not None and output != x:
            continue
        theta, _ = clock_time(t, p)
        if theta:
            total = total + Dyadic.make(theta, len(p))
    if x is None:
        assert not Dyadic.make(2, 0) < total, "clock mass exceeded its ceiling"
    return total, Certainty.LOWER_BOUND


# -- pair reports -------------------------------------------------------------


@dataclass(frozen=True)
class Report:
    """Deterministic tabular result: fixed columns, row-major values."""

    name: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    notes: tuple[str, ...] = ()


def _kt_or_none(x: str, i: int, t: HaltingTable) -> int | None:
    try:
        return kt_of(x, i, t)[0]
    except (NotProducible, NotExact):
        return None


def chain_rule_report(n: int, tables, i_values=None) -> Report:
    """Pairwise description-length additivity, measured not assumed.

    For every pair of strings up to length n: the defect of K(pair)
    against K(x) + K(y | x's shortest program); per time bound i, the
    least stage shift making the pair side catch up; and the region-level
    closeness of the pair profile to the summed profiles.
    """
    t_eps = tables.get("")
    if i_values is None:
        i_values = range(3, t_eps.budget.max_len + 1)
    cols = (
        "x",
        "y",
        "k_pair",
        "k_x",
        "k_y_cond",
        "defect",
        "i",
        "kt_pair",
        "kt_x",
        "kt_y_cond",
        "shift",
        "closeness_lr",
        "closeness_rl",
        "status",
    )
    rows: list[tuple] = []
    for x in bitstrings_up_to(n):
        for y in bitstrings_up_to(n):
            code = pair_encode(x, y)
            try:
                sp_pair = k_of(code, t_eps)
            except NotProducible:
                rows.append(
                    (x, y) + (None,) * (len(cols) - 3) + ("pair-out-of-budget",)
                )
                continue
            sp_x = k_of(x, t_eps)
            t_x = tables.get(x)
            t_xstar = tables.get(sp_x.program)
            k_y_cond = k_of(y, t_xstar).k
            defect = sp_pair.k - sp_x.k - k_y_cond
            lx = time_profile(x, t_eps).profile
            lyx = time_profile(y, t_x).profile
            lpair = time_profile(code, t_eps).profile
            eps_lr, eps_rl = _profile_closeness(lpair, sum_profiles(lx, lyx))
            wrote = False
            for i in i_values:
                a = _kt_or_none(x, i, t_eps)
                b = _kt_or_none(y, i, t_x)
                m = _kt_or_none(code, i, t_eps)
                if a is None or b is None:
                    continue
                shift = None
                for s in range(t_eps.budget.max_len - i + 1):
                    ms = _kt_or_none(code, i + s, t_eps)
                    if ms is not None and ms <= a + b:
                        shift = s
                        break
                rows.append(
                    (
                        x,
                        y,
                        sp_pair.k,
                        sp_x.k,
                        k_y_cond,
                        defect,
                        i,
                        m,
                        a,
                        b,
                        shift,
                        eps_lr,
                        eps_rl,
                        "ok",
                    )
                )
                wrote = True
            if not wrote:
                rows.append(
                    (
                        x,
                        y,
                        sp_pair.k,
                        sp_x.k,
                        k_y_cond,
                        defect,
                        None,
                        None,
                        None,
                        None,
                        None,
                        eps_lr,
                        eps_rl,
                        "no-certified-stage",
                    )
                )
    return Report("chainrule", cols, tuple(rows))


def _profile_closeness(a: Profile, b: Profile):
    from .profiles import closeness

    return closeness(a, b)


def depth_pair_report(n: int, eps: int, tables) -> Report:
    """Depth of a pair against the deeper of its parts.

    Only pairs whose three time profiles all finish with a drop larger
    than eps qualify; the rest are listed with the reason.
    """
    t_eps = tables.get("")
    cols = (
        "x",
        "y",
        "bdepth0_pair",
        "bdepth0_x",
        "bdepth0_y_cond",
        "defect",
        "status",
    )
    rows: list[tuple] = []
    for x in bitstrings_up_to(n):
        for y in bitstrings_up_to(n):
            code = pair_encode(x, y)
            try:
                tp_pair = time_profile(code, t_eps)
            except NotProducible:
                rows.append((x, y, None, None, None, None, "pair-out-of-budget"))
                continue
            tp_x = time_profile(x, t_eps)
            tp_yx = time_profile(y, tables.get(x))
            if not all(
                sharp_finish(tp.profile, eps) for tp in (tp_pair, tp_x, tp_yx)
            ):
                rows.append((x, y, None, None, None, None, "no-sharp-finish"))
                continue
            d_pair = tp_pair.bdepth(0)
            d_x = tp_x.bdepth(0)
            d_yx = tp_yx.bdepth(0)
            rows.append(
                (x, y, d_pair, d_x, d_yx, d_pair - max(d_x, d_yx), "ok")
            )
    return Report("depthpairs", cols, tuple(rows))


def clock_gap_report(t: HaltingTable) -> Report:
    """Busy running time minus clock reading, tabulated per length class.

    The reading never exceeds the busy running time; the report shows how
    far below it sits (its per-length min and max) and counts programs, so
    regressions in either clock surface as a changed gap range.
    """
    per_len: dict[int, tuple[int, int, int]] = {}
    for p, (steps, _output) in t.halted.items():
        theta, _ = clock_time(t, p)
        tau, _ = inverse_busy_beaver(t, steps)
        lo, hi, count = per_len.get(len(p), (tau - theta, tau - theta, 0))
        gap = tau - theta
        per_len[len(p)] = (min(lo, gap), max(hi, gap), count + 1)
    rows = tuple(
        (ln, count, lo, hi) for ln, (lo, hi, count) in sorted(per_len.items())
    )
    return Report("clock-gaps", ("length", "programs", "min_gap", "max_gap"), rows)
