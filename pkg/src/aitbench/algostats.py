"""Finite-set models, two-part codes, sophistication, and clock profiles.

A model is a finite set of strings offered as an explanation of any of its
members: describing x as "element number i of the set S" costs a program
for S plus a fixed-width index, plus a constant for the glue.  Everything
here is read off existing halting tables; only the two-part verifier
replays a program, to check one description end to end on the machine.

The machine cannot interpret programs, so the glue that runs S* and reads
the index lives at framework level; its cost is the declared constant
``ALPHA_BITS`` and is carried through every total so description lengths
stay comparable across tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexity import Report, ShortestProgram, k_of, producers, time_profile
from .core import (
    Certainty,
    bitstrings_of_length,
    bitstrings_up_to,
    check_bits,
    lenlex_key,
)
from .encoding import Dyadic, common_prefix_len, pair_encode
from .enumeration import HaltingTable, omega_approx, stabilized_bits_at
from .errors import (
    MalformedCode,
    NoSufficientModel,
    NotExact,
    NotMember,
    NotProducible,
    NotStabilized,
    UsageError,
)
from .machine import run
from .profiles import (
    GraphFn,
    Point,
    Profile,
    _step_graph,
    close,
    closeness,
    translate,
    x_graph,
    y_graph,
)
from .profiles import sharp_finish as sharp_finish  # re-export: part of this API
from .profiles import to_text as profile_text

ALPHA_BITS = 3
"""Declared cost in bits of the fixed two-part executor."""


def encode_set(elements) -> str:
    """Canonical encoding of a nonempty finite set of bit strings.

    Layout, bit-exact: a self-delimiting count ``1^(n-1) 0`` for n
    elements, then each element in increasing length-lex order as a
    self-delimiting length ``1^len 0`` followed by the element's bits.
    Shortest instance: the one-element set of the empty string is "00".
    """
    elems = sorted({check_bits(e, "set element") for e in elements}, key=lenlex_key)
    if not elems:
        raise ValueError("the empty set has no canonical encoding")
    parts = ["1" * (len(elems) - 1) + "0"]
    for e in elems:
        parts.append("1" * len(e) + "0" + e)
    return "".join(parts)


def decode_set(code: str) -> tuple[str, ...]:
    """Invert :func:`encode_set`; rejects anything non-canonical."""
    check_bits(code, "set encoding")
    pos = code.find("0")
    if pos < 0:
        raise MalformedCode("set count field missing its terminator")
    count = pos + 1
    pos += 1
    out: list[str] = []
    for _ in range(count):
        end = code.find("0", pos)
        if end < 0:
            raise MalformedCode("element length field missing its terminator")
        n = end - pos
        pos = end + 1
        if pos + n > len(code):
            raise MalformedCode("element body truncated")
        out.append(code[pos : pos + n])
        pos += n
    if pos != len(code):
        raise MalformedCode("trailing bits after the last element")
    keys = [lenlex_key(e) for e in out]
    if any(b <= a for a, b in zip(keys, keys[1:])):
        raise MalformedCode("elements out of order or repeated")
    return tuple(out)


@dataclass(frozen=True)
class Model:
    """A producible finite set of strings, priced by its shortest producer."""

    elements: tuple[str, ...]
    encoding: str
    k_model: int
    certainty: Certainty
    witness_program: str

    @property
    def log_card(self) -> int:
        """Index width: ceil(log2) of the element count."""
        return (len(self.elements) - 1).bit_length()

    def total_cost(self) -> int:
        """Two-part description length through this set."""
        return self.k_model + self.log_card + ALPHA_BITS


def models_of(x: str, t: HaltingTable) -> list[Model]:
    """Every enumerated set containing ``x``, cheapest first.

    Candidate sets are discovered by decoding the outputs the table
    actually produced, so k_model is honest machine complexity under the
    table's condition; nothing is priced by fiat.
    """
    k_of(x, t)  # raises NotProducible for strings outside the table
    found: list[Model] = []
    for enc in {out for _, out in t.halted.values()}:
        try:
            elems = decode_set(enc)
        except MalformedCode:
            continue
        if x not in elems:
            continue
        sp = k_of(enc, t)
        found.append(Model(elems, enc, sp.k, sp.certainty, sp.program))
    found.sort(key=lambda m: (m.k_model, lenlex_key(m.encoding)))
    return found


@dataclass(frozen=True)
class TwoPartDescription:
    """Description of ``described`` as an index into a priced set."""

    model: Model
    described: str
    index: str
    alpha_cost: int
    total_length: int

    def verify(self, aux: str = "", step_budget: int = 10**5) -> bool:
        """Replay the description: run the set's witness program under
        the table condition, decode, and look the index up."""
        res = run(self.model.witness_program, aux, step_budget)
        if not res.success or res.output != self.model.encoding:
            return False
        elems = decode_set(res.output)
        rank = int(self.index, 2) if self.index else 0
        return rank < len(elems) and elems[rank] == self.described


def two_part(model: Model, x: str) -> TwoPartDescription:
    """Describe ``x`` through ``model``: witness, then fixed-width rank."""
    if x not in model.elements:
        raise NotMember(f"{x!r} is not in the model {model.elements}")
    width = model.log_card
    rank = model.elements.index(x)
    index = format(rank, f"0{width}b") if width else ""
    return TwoPartDescription(model, x, index, ALPHA_BITS, model.total_cost())


@dataclass(frozen=True)
class DescProfile:
    """Tradeoff region between set complexity and two-part total for one string.

    ``delta`` is the same region with the string's plain complexity
    subtracted from every total, so its Y-graph prices the cheapest set
    within a given slack.
    """

    x: str
    models: tuple[Model, ...]
    profile: Profile
    delta: Profile
    shortest: ShortestProgram
    flags: dict[Point, Certainty] = field(compare=False)

    def mdl_at(self, i: int) -> int | None:
        """Least two-part total over sets costing at most i bits."""
        if self.profile.is_empty:
            return None
        return x_graph(self.profile).at(i)

    def soph_at(self, c: int) -> int:
        """Cheapest set whose two-part total is within c of the optimum."""
        if not self.delta.is_empty:
            v = y_graph(self.delta).at(c)
            if v is not None:
                return v
        raise NoSufficientModel(f"no enumerated set explains {self.x!r} within {c} bits")


def desc_profile(x: str, t: HaltingTable) -> DescProfile:
    """Region of (set cost, two-part total) pairs achievable for ``x``."""
    sp = k_of(x, t)
    models = models_of(x, t)
    points: list[Point] = []
    cert: dict[Point, Certainty] = {}
    for m in models:
        pt = (m.k_model, m.total_cost())
        points.append(pt)
        if cert.get(pt) is not Certainty.EXACT:
            cert[pt] = m.certainty
    profile = close(points)
    flags = {g: cert[g] for g in profile.generators}
    return DescProfile(x, tuple(models), profile, translate(profile, -sp.k), sp, flags)


def structure_functions(x: str, tables) -> tuple[GraphFn, GraphFn, GraphFn]:
    """The three classical set-restricted views of one string's tradeoff.

    Returns ``(mdl, card, deficiency)`` as step functions of the set-cost
    budget i:  least two-part total, least index width, and least width
    minus the string's conditional complexity given the set's encoding.
    The third needs one conditional table per set, fetched (and cached)
    through ``tables``; all three are non-increasing, and the deficiency
    may go negative.  With no producible sets all three are empty.
    """
    t = tables.get("")
    dp = desc_profile(x, t)
    if not dp.models:
        empty = GraphFn("x", (), 0)
        return empty, empty, empty
    mdl = x_graph(dp.profile)
    card = _step_graph("x", sorted((m.k_model, m.log_card) for m in dp.models))
    deficiency = _step_graph(
        "x",
        sorted(
            (m.k_model, m.log_card - k_of(x, tables.get(m.encoding)).k)
            for m in dp.models
        ),
    )
    return mdl, card, deficiency


def soph(x: str, c: int, t: HaltingTable) -> int:
    """Complexity of the cheapest set describing ``x`` within slack ``c``."""
    if c < 0:
        raise ValueError("slack must be nonnegative")
    dp = desc_profile(x, t)
    good = [m.k_model for m in dp.models if m.total_cost() <= dp.shortest.k + c]
    if not good:
        raise NoSufficientModel(f"no enumerated set explains {x!r} within {c} bits")
    best = min(good)
    assert best == dp.soph_at(c)  # formula and region must agree, always
    return best


def csoph(x: str, t: HaltingTable) -> int:
    """Slack-free sophistication: best set cost plus the slack it needs."""
    dp = desc_profile(x, t)
    if not dp.models:
        raise NoSufficientModel(f"no enumerated set explains {x!r} at this budget")
    return min(m.k_model + max(m.total_cost() - dp.shortest.k, 0) for m in dp.models)


@dataclass(frozen=True)
class ThetaProfiles:
    """Clock readings at each producer's halt, closed into regions.

    ``tilde`` reads the conditional table's own mass clock; ``hat`` reads
    the unconditional clock at the same schedule stage.  Generators of the
    two regions pair up horizontally: same producer lengths, shifted
    readings.
    """

    y: str
    tilde: Profile
    hat: Profile
    tilde_flags: dict[Point, Certainty] = field(compare=False)
    hat_flags: dict[Point, Certainty] = field(compare=False)


def theta_profiles(y: str, t_z: HaltingTable, t_eps: HaltingTable) -> ThetaProfiles:
    """Region of (clock reading, producer length) for both clocks."""
    k_of(y, t_z)  # raises NotProducible when nothing makes y under z
    dots_t: list[Point] = []
    dots_h: list[Point] = []
    cert_t: dict[Point, Certainty] = {}
    cert_h: dict[Point, Certainty] = {}
    for p, steps in producers(t_z, y):
        j = steps  # shared stage counter: both clocks read at p's halt
        for dots, cert, table in ((dots_t, cert_t, t_z), (dots_h, cert_h, t_eps)):
            reading, flag = stabilized_bits_at(table, j)
            pt = (reading, len(p))
            dots.append(pt)
            if cert.get(pt) is not Certainty.EXACT:
                cert[pt] = flag
    tilde = close(dots_t)
    hat = close(dots_h)
    return ThetaProfiles(
        y,
        tilde,
        hat,
        {g: cert_t[g] for g in tilde.generators},
        {g: cert_h[g] for g in hat.generators},
    )


def reconstruct_theta(x_star: str, theta: int, t: HaltingTable) -> tuple[Point, ...]:
    """Rebuild the clock region's generators from one halted witness.

    Re-runs the schedule to the witness's halt, keeps the first ``theta``
    mass bits seen there, then re-enumerates every producer of the
    witness's output scoring each halt against that recovered prefix.
    The result equals the directly computed generators.
    """
    if theta < 0:
        raise ValueError("clock readings are nonnegative")
    row = t.row(x_star)
    if row[0] != "H":
        raise UsageError("the reconstruction witness must be a halted program")
    ap = omega_approx(t)
    if theta > ap.stabilized_bits:
        raise NotStabilized(f"only {ap.stabilized_bits} mass bits are certified")
    x = row[2]
    snapshot = t.m_at(row[1])
    recovered = Dyadic.zero()
    if theta:
        recovered = Dyadic.make(int(snapshot.prefix_bits(theta), 2), theta)
    dots: list[Point] = []
    for p, steps in producers(t, x):
        reading = common_prefix_len(t.m_at(steps), recovered, cap=theta)
        dots.append((reading, len(p)))
    return close(dots).generators


def soph_free(y: str, t_z: HaltingTable, t_eps: HaltingTable) -> int:
    """Parameter-free sophistication: where the conditional clock region
    reaches the string's own complexity level."""
    th = theta_profiles(y, t_z, t_eps)
    k = k_of(y, t_z).k
    v = y_graph(th.tilde).at(k)
    assert v is not None  # the shortest producer's dot sits at this level
    return v


def antistochasticity(x: str, t: HaltingTable) -> int:
    """Largest uniform discount at which the two-part region misses
    (K - eps, |x| - eps); 0 when the undiscounted point is already inside."""
    dp = desc_profile(x, t)
    k, n = dp.shortest.k, len(x)
    for eps in range(min(k, n), -1, -1):  # the escape set is upward closed
        if not dp.profile.contains(k - eps, n - eps):
            return eps
    return 0


def equivalence_report(n: int, z_max: int, tables) -> Report:
    """How close the three regions of each string run to one another.

    For every y up to length n and condition z up to length z_max, the
    pairwise closeness of the time region, the set-description region and
    the two clock regions, in both directions.  Infinite separations are
    reported as text, never asserted away.
    """
    t_eps = tables.get("")
    cols = (
        "y",
        "z",
        "status",
        "close_model_vs_time",
        "close_hat_vs_time",
        "close_tilde_vs_model",
    )
    rows: list[tuple] = []
    for z in bitstrings_up_to(z_max):
        t_z = tables.get(z)
        for y in bitstrings_up_to(n):
            yl, zl = y or "eps", z or "eps"
            try:
                tp = time_profile(y, t_z)
            except NotProducible:
                rows.append((yl, zl, "out-of-budget", "-", "-", "-"))
                continue
            dp = desc_profile(y, t_z)
            th = theta_profiles(y, t_z, t_eps)
            rows.append(
                (
                    yl,
                    zl,
                    "ok",
                    _closeness_text(dp.profile, tp.profile),
                    _closeness_text(th.hat, tp.profile),
                    _closeness_text(th.tilde, dp.profile),
                )
            )
    return Report("equivalences", cols, tuple(rows))


def soph_pair_report(n: int, eps: int, tables) -> Report:
    """Sophistication of a pair against its parts, reach-corrected.

    The right side prices y's conditional sophistication through x's reach
    curve before taking the maximum with x's own.  Only pairs whose three
    clock regions all finish with a drop larger than eps qualify.
    """
    from .halting_info import reach_curve  # local: avoid a module cycle

    t_eps = tables.get("")
    cols = (
        "x",
        "y",
        "soph_pair",
        "soph_x",
        "soph_y_cond",
        "reach_of_x_at_soph_y",
        "rhs",
        "defect",
        "status",
    )
    rows: list[tuple] = []
    for x in bitstrings_up_to(n):
        for y in bitstrings_up_to(n):
            code = pair_encode(x, y)
            try:
                th_pair = theta_profiles(code, t_eps, t_eps)
            except NotProducible:
                rows.append((x, y) + (None,) * 6 + ("pair-out-of-budget",))
                continue
            t_x = tables.get(x)
            th_x = theta_profiles(x, t_eps, t_eps)
            th_yx = theta_profiles(y, t_x, t_eps)
            if not all(
                sharp_finish(th.tilde, eps) for th in (th_pair, th_x, th_yx)
            ):
                rows.append((x, y) + (None,) * 6 + ("no-sharp-finish",))
                continue
            s_pair = soph_free(code, t_eps, t_eps)
            s_x = soph_free(x, t_eps, t_eps)
            s_yx = soph_free(y, t_x, t_eps)
            reach = reach_curve(x, t_x, t_eps, s_yx).at(s_yx)
            rhs = max(s_x, reach)
            rows.append(
                (x, y, s_pair, s_x, s_yx, reach, rhs, s_pair - rhs, "ok")
            )
    return Report("sophpairs", cols, tuple(rows))


@dataclass(frozen=True)
class SurveyReport:
    """Per-string statistics plus a split analysis of the extremal string."""

    main: Report
    splits: Report
    profiles: dict[str, Profile] = field(compare=False)


def _eps_text(value) -> str:
    return str(value) if value != float("inf") else "not-eps-close"


def _closeness_text(a: Profile, b: Profile) -> str:
    ab, ba = closeness(a, b)
    return f"{_eps_text(ab)}/{_eps_text(ba)}"


def survey(n: int, tables) -> SurveyReport:
    """Catalogue every length-``n`` string and dissect the most lawless one.

    Main rows carry complexity, depth, free sophistication, the
    antistochasticity score, halting rank, and both tradeoff regions.  The
    string with the highest score is then split every way into a prefix
    condition and a remainder, recording the four regions of each split and
    how close they come to each other.
    """
    from .halting_info import holographic_rank  # local: avoid a module cycle

    t_eps = tables.get("")
    columns = (
        "x",
        "status",
        "k",
        "k_certainty",
        "bdepth0",
        "soph_free",
        "antistochasticity",
        "rank",
        "time_gens",
        "model_gens",
    )
    rows: list[tuple] = []
    notes: list[str] = []
    kraft = Dyadic.zero()
    scored: list[tuple[int, str]] = []
    attachments: dict[str, Profile] = {}
    for x in bitstrings_of_length(n):
        label = x or "eps"
        try:
            tp = time_profile(x, t_eps)
        except NotProducible:
            rows.append((label, "out-of-budget") + ("-",) * (len(columns) - 2))
            continue
        dp = desc_profile(x, t_eps)
        score = antistochasticity(x, t_eps)
        scored.append((score, x))
        kraft = kraft + Dyadic.mass(tp.shortest.k)
        try:
            rank = str(holographic_rank(x, t_eps))
        except NotExact:
            rank = "-"
        rows.append(
            (
                label,
                "ok",
                tp.shortest.k,
                str(tp.shortest.certainty),
                tp.bdepth(0),
                soph_free(x, t_eps, t_eps),
                score,
                rank,
                profile_text(tp.profile),
                profile_text(dp.profile),
            )
        )
        attachments[f"time:{label}"] = tp.profile
        attachments[f"model:{label}"] = dp.profile
    one = Dyadic.make(1, 0)
    assert not one < kraft  # shortest producers are distinct halting programs
    notes.append(f"kraft sum over shortest programs: {kraft}")
    notes.append(f"two-part executor constant: {ALPHA_BITS} bits")

    split_columns = (
        "z",
        "x",
        "y",
        "status",
        "time_x_gens",
        "time_y_given_x_gens",
        "model_y_given_x_gens",
        "theta_tilde_gens",
        "theta_hat_gens",
        "close_model_vs_time",
        "close_theta_hat_vs_time",
        "close_theta_tilde_vs_model",
    )
    split_rows: list[tuple] = []
    if scored:
        best = max(s for s, _ in scored)
        z = min((x for s, x in scored if s == best), key=lenlex_key)
        notes.append(f"split subject: {z or 'eps'} (score {best})")
        for cut in range(len(z) + 1):
            xs, ys = z[:cut], z[cut:]
            xl, yl = xs or "eps", ys or "eps"
            t_x = tables.get(xs)
            try:
                tp_x = time_profile(xs, t_eps)
                tp_y = time_profile(ys, t_x)
            except NotProducible:
                split_rows.append(
                    (z or "eps", xl, yl, "out-of-budget") + ("-",) * 8
                )
                continue
            dp_y = desc_profile(ys, t_x)
            th = theta_profiles(ys, t_x, t_eps)
            split_rows.append(
                (
                    z or "eps",
                    xl,
                    yl,
                    "ok",
                    profile_text(tp_x.profile),
                    profile_text(tp_y.profile),
                    profile_text(dp_y.profile),
                    profile_text(th.tilde),
                    profile_text(th.hat),
                    _closeness_text(dp_y.profile, tp_y.profile),
                    _closeness_text(th.hat, tp_y.profile),
                    _closeness_text(th.tilde, dp_y.profile),
                )
            )
            attachments[f"time:{xl}"] = tp_x.profile
            attachments[f"time:{yl}|{xl}"] = tp_y.profile
            attachments[f"model:{yl}|{xl}"] = dp_y.profile
            attachments[f"theta-tilde:{yl}|{xl}"] = th.tilde
            attachments[f"theta-hat:{yl}|{xl}"] = th.hat
    main = Report("survey", columns, tuple(rows), tuple(notes))
    splits = Report("survey-splits", split_columns, tuple(split_rows))
    return SurveyReport(main, splits, attachments)
