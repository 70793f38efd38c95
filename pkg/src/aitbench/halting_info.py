"""What auxiliary knowledge buys: reach curves, advice games, late halters.

The central object is the reach curve of a string z: how many leading mass
bits the machine can pin down when it runs with z on the side and a few
bits of advice.  Around it sit the advice-minus-reach distribution, the
block game that turns certified mass bits into curves of any step shape,
and two probes of the appendix flavour: counting programs that outlast a
busy-beaver deadline, and ranking a string's shortest program among all
halters by lateness.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexity import Report, k_of
from .core import Certainty, check_bits
from .encoding import Dyadic, common_prefix_len
from .enumeration import HaltingTable, badger, busy_beaver, omega_approx, stabilized_bits_at
from .errors import NotExact, NotStabilized, PrefixTooShort, UsageError
from .profiles import GraphFn, Profile, close, closeness

WITNESS_SLACK = 8
"""Reach witnesses are scanned up to this many bits past the certified
prefix; longer outputs cannot certify more bits and are skipped."""


@dataclass(frozen=True)
class ReachCurve:
    """Best certified mass prefix per advice budget, with its closed region.

    ``points`` holds (advice bits i, reach r(i), certainty) for i = 0..i_max;
    r is non-decreasing.  ``closure`` is the upwards-and-leftwards closed
    region of the curve, stored mirrored: a point (i, s) of the curve is
    recorded as (i_max - i, s), which turns the closure into the package's
    usual upwards-and-rightwards kind so the closeness metric applies
    unchanged (reflection preserves it).
    """

    z: str
    i_max: int
    points: tuple[tuple[int, int, Certainty], ...]
    closure: Profile
    witness_cap: int

    def at(self, i: int) -> int:
        if not 0 <= i <= self.i_max:
            raise ValueError(f"advice budget out of range: {i}")
        return self.points[i][1]


def _close_mirrored(values: list[int], i_max: int) -> Profile:
    return close((i_max - i, s) for i, s in enumerate(values))


def reach_curve(z: str, t_z: HaltingTable, t_eps: HaltingTable, i_max: int) -> ReachCurve:
    """Longest certified mass prefix a length-<=i program can output given z.

    A halted program of the z-table witnesses reach s when its output w has
    value strictly below the certified upper bound on the total mass and
    starts with the s certified leading bits.  The search caps s at the
    certified prefix length; hitting the cap flags that budget LowerBound,
    as do unresolved rows short enough to hide a better witness.
    """
    check_bits(z, "condition")
    ap = omega_approx(t_eps)
    s_max = ap.stabilized_bits
    if s_max == 0:
        raise NotStabilized("no certified mass prefix to reach for")
    upper = ap.value + t_eps.unknown_mass()
    cap = s_max + WITNESS_SLACK
    best = [0] * (i_max + 1)
    capped = [False] * (i_max + 1)
    for p, (_steps, out) in t_z.halted.items():
        if len(p) > i_max or len(out) > cap:
            continue
        w = Dyadic.make(int(out, 2), len(out)) if out else Dyadic.zero()
        if not w < upper:
            continue
        s = common_prefix_len(w, ap.value, cap=min(len(out), s_max))
        i = len(p)
        if s > best[i]:
            best[i] = s
            capped[i] = s == s_max and len(out) >= s_max
    for i in range(1, i_max + 1):  # more advice never reaches less
        if best[i - 1] > best[i] or (best[i - 1] == best[i] and capped[i - 1]):
            best[i] = best[i - 1]
            capped[i] = capped[i - 1]
    _, _, unk_upto = t_z._per_length()
    points = []
    for i, s in enumerate(best):
        unresolved = unk_upto[min(i, t_z.budget.max_len)] > 0
        flag = Certainty.LOWER_BOUND if (capped[i] or unresolved) else Certainty.EXACT
        points.append((i, s, flag))
    return ReachCurve(z, i_max, tuple(points), _close_mirrored(best, i_max), cap)


def reach_via_badger(z: str, t_z: HaltingTable, t_eps: HaltingTable, i_max: int) -> ReachCurve:
    """Second route to the same curve: feed the conditional mass clock's
    stage for i stabilized bits into the plain clock.  Only defined up to
    the conditional table's own certified prefix; the curve truncates
    there and the tail keeps the last reading as a lower bound.
    """
    check_bits(z, "condition")
    s_max_z = omega_approx(t_z).stabilized_bits
    values: list[int] = []
    flags: list[Certainty] = []
    for i in range(i_max + 1):
        if i <= s_max_z:
            stage, stage_cert = badger(t_z, i)
            reading, read_cert = stabilized_bits_at(t_eps, stage)
            values.append(reading)
            good = stage_cert is Certainty.EXACT and read_cert is Certainty.EXACT
            flags.append(Certainty.EXACT if good else Certainty.LOWER_BOUND)
        else:
            values.append(values[-1] if values else 0)
            flags.append(Certainty.LOWER_BOUND)
    points = tuple((i, v, f) for i, (v, f) in enumerate(zip(values, flags)))
    return ReachCurve(z, i_max, points, _close_mirrored(values, i_max), 0)


def hmd(z: str, tables, i_max: int) -> GraphFn:
    """Advice dividend: reach minus advice spent, per advice budget.

    The identity hmd(i) = reach(i) - i holds by construction; the value at
    small i says how much halting knowledge z surrenders almost for free,
    and the tail value is its total certified dividend at this scale.
    """
    curve = reach_curve(z, tables.get(z), tables.get(""), i_max)
    pts = tuple((i, r - i) for i, r, _ in curve.points)
    return GraphFn("x", pts, pts[-1][1])


def _block_positions(increments) -> list[tuple[int, int]]:
    blocks: list[tuple[int, int]] = []
    base = 0
    for a, b in increments:
        a, b = int(a), int(b)
        if a < 1 or b < 1:
            raise ValueError("block increments must be positive")
        blocks.append((base + a, base + a + b))
        base += a + b
    return blocks


def build_gamma(increments, t_eps: HaltingTable) -> str:
    """Bits of the certified mass prefix along a block pattern.

    ``increments`` lists (gap, rise) pairs of a non-decreasing step curve;
    block k covers prefix positions [c + gap, c + gap + rise] inclusive,
    1-based, where c is the total span of earlier blocks.  The returned
    string concatenates exactly those certified bits; holes are skipped.
    """
    blocks = _block_positions(increments)
    ap = omega_approx(t_eps)
    if blocks and blocks[-1][1] > ap.stabilized_bits:
        raise PrefixTooShort(
            f"pattern needs bit {blocks[-1][1]} but only {ap.stabilized_bits} are certified"
        )
    return "".join(
        str(ap.value.bit(pos)) for lo, hi in blocks for pos in range(lo, hi + 1)
    )


def build_delta(increments, total: int, t_eps: HaltingTable) -> str:
    """Hole-patch advice: certified prefix bits *outside* the blocks, up to
    ``total`` positions."""
    blocks = _block_positions(increments)
    if blocks and total < blocks[-1][1]:
        raise UsageError("total span must cover every block")
    ap = omega_approx(t_eps)
    if total > ap.stabilized_bits:
        raise PrefixTooShort(
            f"span {total} exceeds the {ap.stabilized_bits} certified bits"
        )
    inside = {pos for lo, hi in blocks for pos in range(lo, hi + 1)}
    return "".join(
        str(ap.value.bit(pos)) for pos in range(1, total + 1) if pos not in inside
    )


def reassemble(increments, gamma: str, delta: str) -> str:
    """Interleave block bits and hole bits back into one contiguous prefix."""
    check_bits(gamma, "block bits")
    check_bits(delta, "hole bits")
    blocks = _block_positions(increments)
    inside = {pos for lo, hi in blocks for pos in range(lo, hi + 1)}
    if len(inside) != len(gamma):
        raise UsageError(f"pattern holds {len(inside)} bits, got {len(gamma)}")
    total = len(gamma) + len(delta)
    if inside and max(inside) > total:
        raise UsageError("pattern extends past the assembled span")
    g = iter(gamma)
    d = iter(delta)
    return "".join(next(g) if pos in inside else next(d) for pos in range(1, total + 1))


def late_halters(t: HaltingTable, k: int, s: int) -> tuple[int, Report]:
    """Count programs of length <= k that outlast the busy-beaver time of
    length k - s, and compare the count's log to s."""
    if k > t.budget.max_len:
        raise ValueError(f"k exceeds the table's length budget {t.budget.max_len}")
    _, _, unk_upto = t._per_length()
    if unk_upto[k] > 0:
        raise NotExact(f"{unk_upto[k]} unresolved rows of length <= {k}")
    bound, cert = busy_beaver(t, k - s)
    if cert is not Certainty.EXACT:
        raise NotExact(f"busy-beaver time at length {k - s} is not settled")
    count = sum(
        1 for p, (steps, _) in t.halted.items() if len(p) <= k and steps > bound
    )
    slack = f"{count.bit_length() - 1 - s}" if count else "-"
    report = Report(
        "late-halters",
        ("k", "s", "deadline", "count", "floor_log2_count_minus_s"),
        ((k, s, bound, count, slack),),
    )
    return count, report


def late_halter_table(t: HaltingTable, k_max: int) -> Report:
    """Late-halter counts for every k up to k_max and every sensible s.

    s runs from -1 (sanity row: nothing outlasts the deadline of a longer
    length class) to k; rows whose deadline is not settled at this budget
    are kept with dashes rather than dropped.
    """
    rows: list[tuple] = []
    for k in range(1, k_max + 1):
        for s in range(-1, k + 1):
            try:
                _, single = late_halters(t, k, s)
            except NotExact:
                rows.append((k, s, "-", "-", "-"))
                continue
            rows.append(single.rows[0])
    return Report("late-halters", ("k", "s", "deadline", "count", "floor_log2_count_minus_s"), tuple(rows))


def reach_comparison(z: str, tables, i_max: int) -> Report:
    """Both routes to the reach curve side by side, with their closeness.

    The witness route scans halted outputs for certified mass prefixes;
    the clock route composes the conditional mass clock with the plain
    one.  The two closed regions' mutual closeness lands in the notes.
    """
    t_z, t_eps = tables.get(z), tables.get("")
    witness = reach_curve(z, t_z, t_eps, i_max)
    clock = reach_via_badger(z, t_z, t_eps, i_max)
    rows = tuple(
        (i, rw, rc, rw - rc, str(fw), str(fc))
        for (i, rw, fw), (_, rc, fc) in zip(witness.points, clock.points)
    )
    eps_wc, eps_cw = closeness(witness.closure, clock.closure)
    notes = (
        f"closeness of closed regions (mirrored): witness-to-clock {eps_wc}, "
        f"clock-to-witness {eps_cw}",
    )
    return Report(
        "reach-routes",
        ("i", "witness_route", "clock_route", "gap", "witness_certainty", "clock_certainty"),
        rows,
        notes,
    )


def holographic_rank(x: str, t: HaltingTable) -> int:
    """Position from the end when all halters no longer than x's shortest
    program are ordered by running time; rank 1 is the very last."""
    sp = k_of(x, t)
    _, _, unk_upto = t._per_length()
    if unk_upto[sp.k] > 0:
        raise NotExact(f"{unk_upto[sp.k]} unresolved rows of length <= {sp.k}")
    peers = sorted(
        (steps, p) for p, (steps, _) in t.halted.items() if len(p) <= sp.k
    )
    return len(peers) - peers.index((sp.steps, sp.program))
