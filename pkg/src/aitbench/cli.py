"""Command-line front door: sweeps, caches, profile dumps, reports, exports.

Every command is deterministic given its flags and caches; the worker
count never changes an output byte, and sweeping into an existing cache
is a byte-identical no-op.  Exit status 0 means success, 1 a usage error,
and 2 budget insufficiency: the enumeration gave out before the requested
quantity could be certified (partial artifacts are still written, flagged
by their certainty or status columns).

``--cache`` may point at a table file (its recorded budget then wins over
``--max-len``/``--max-steps``) or at a directory, in which case tables
are stored there under canonical names, one file per (machine, condition,
budget).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algostats import (
    desc_profile,
    equivalence_report,
    soph,
    soph_pair_report,
    survey,
    theta_profiles,
)
from .algostats import profile_text
from .complexity import (
    Report,
    chain_rule_report,
    depth_pair_report,
    k_of,
    time_profile,
)
from .core import Certainty
from .enumeration import Budget, HaltingTable, omega_approx, sweep
from .errors import AitbenchError, MalformedCode, UsageError, VersionMismatch
from .halting_info import (
    build_delta,
    build_gamma,
    hmd,
    late_halter_table,
    reach_curve,
    reassemble,
)
from .workspace import Tables, store

_USAGE_ERRORS = (UsageError, MalformedCode, VersionMismatch, ValueError)
_SHORTFALL_TOKENS = {"out-of-budget", "pair-out-of-budget", "no-certified-stage"}


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; here that status is reserved for
    budget insufficiency, so usage failures are remapped to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _flag(value: Certainty | str) -> str:
    return str(value)


def _table_flag(t: HaltingTable) -> str:
    return "exact" if t.is_exact() else "lower-bound"


# -- cache plumbing -----------------------------------------------------------


def _provider(args) -> Tables:
    jobs = getattr(args, "jobs", 1)
    cache = getattr(args, "cache", None)
    if cache:
        path = Path(cache)
        if path.is_dir():
            return Tables(Budget(args.max_len, args.max_steps), path, jobs)
        if not path.exists():
            raise UsageError(f"cache file {path} does not exist; run sweep first")
        base = HaltingTable.from_text(path.read_text())
        tabs = Tables(base.budget, path.parent, jobs)
        tabs.seed(base)
        return tabs
    return Tables(Budget(args.max_len, args.max_steps), None, jobs)


def _write_if_changed(path: Path, text: str) -> None:
    if path.exists() and path.read_text() == text:
        return
    path.write_text(text)


# -- verb handlers; each returns a list of reports ----------------------------


def _cmd_sweep(args) -> list[Report]:
    budget = Budget(args.max_len, args.max_steps)
    t = sweep(z=args.cond, budget=budget, jobs=args.jobs)
    if args.cache:
        path = Path(args.cache)
        if path.is_dir():
            store(t, path)
        else:
            _write_if_changed(path, t.to_text())
    total = (1 << (budget.max_len + 1)) - 1
    halted, unknown = len(t.halted), t.unknown_count()
    ap = omega_approx(t)
    row = (
        t.z or "eps",
        budget.max_len,
        budget.max_jsteps,
        halted,
        total - halted - unknown,
        unknown,
        str(t.final_m),
        ap.stabilized_bits,
        _flag(ap.certainty),
    )
    cols = ("z", "max_len", "max_steps", "halted", "aborted", "unknown",
            "mass", "stabilized_bits", "certainty")
    return [Report("sweep", cols, (row,))]


def _cmd_omega(args) -> list[Report]:
    t = _provider(args).get(args.cond)
    ap = omega_approx(t)
    row = (
        t.z or "eps",
        str(ap.value),
        ap.stabilized_bits,
        _flag(ap.certainty),
        t.unknown_count(),
        str(t.unknown_mass()),
    )
    cols = ("z", "value", "stabilized_bits", "certainty", "unknown_rows", "unknown_mass")
    return [Report("omega", cols, (row,))]


def _cmd_k(args) -> list[Report]:
    t = _provider(args).get(args.cond)
    sp = k_of(args.x, t)
    row = (args.x or "eps", t.z or "eps", sp.k, sp.program, sp.steps, _flag(sp.certainty))
    return [Report("k", ("x", "z", "k", "program", "steps", "certainty"), (row,))]


def _profile_report(name: str, profile, flags: dict, notes=()) -> Report:
    rows = tuple(
        (i, psi, _flag(flags.get((i, psi), Certainty.EXACT)))
        for i, psi in profile.generators
    )
    return Report(name, ("i", "psi", "certainty"), rows, tuple(notes))


def _cmd_profile(args) -> list[Report]:
    tabs = _provider(args)
    t = tabs.get(args.cond)
    zl = args.cond or "eps"
    if args.kind == "time":
        tp = time_profile(args.x, t)
        return [_profile_report("profile-time", tp.profile, tp.flags,
                                (f"x={args.x or 'eps'} z={zl}",))]
    if args.kind == "desc":
        dp = desc_profile(args.x, t)
        return [_profile_report("profile-desc", dp.profile, dp.flags,
                                (f"x={args.x or 'eps'} z={zl}",))]
    th = theta_profiles(args.y, t, tabs.get(""))
    by_len: dict[int, list] = {}
    for reading, length in th.tilde.generators:
        by_len.setdefault(length, ["", "", "", ""])[0:2] = (
            reading, _flag(th.tilde_flags[(reading, length)]))
    for reading, length in th.hat.generators:
        by_len.setdefault(length, ["", "", "", ""])[2:4] = (
            reading, _flag(th.hat_flags[(reading, length)]))
    rows = tuple((ln, *vals) for ln, vals in sorted(by_len.items()))
    cols = ("length", "tilde", "tilde_certainty", "hat", "hat_certainty")
    return [Report("profile-theta", cols, rows, (f"y={args.y or 'eps'} z={zl}",))]


def _cmd_soph(args) -> list[Report]:
    t = _provider(args).get(args.cond)
    value = soph(args.x, args.c, t)
    dp = desc_profile(args.x, t)
    budget = dp.shortest.k + args.c
    exact = any(
        m.certainty is Certainty.EXACT
        for m in dp.models
        if m.k_model == value and m.total_cost() <= budget
    )
    row = (args.x or "eps", t.z or "eps", args.c, value,
           "exact" if exact else "lower-bound")
    return [Report("soph", ("x", "z", "c", "soph", "certainty"), (row,))]


def _cmd_depth(args) -> list[Report]:
    t = _provider(args).get(args.cond)
    tp = time_profile(args.x, t)
    value = tp.bdepth(args.c)
    row = (args.x or "eps", t.z or "eps", args.c, value, _table_flag(t))
    return [Report("depth", ("x", "z", "c", "bdepth", "certainty"), (row,))]


def _cmd_reach(args) -> list[Report]:
    tabs = _provider(args)
    rc = reach_curve(args.cond, tabs.get(args.cond), tabs.get(""), args.i_max)
    rows = tuple((i, r, _flag(f)) for i, r, f in rc.points)
    notes = (f"z={args.cond or 'eps'}", f"witness_cap={rc.witness_cap}")
    return [Report("reach", ("i", "value", "certainty"), rows, notes)]


def _cmd_hmd(args) -> list[Report]:
    tabs = _provider(args)
    g = hmd(args.cond, tabs, args.i_max)
    rows = tuple(g.points)
    notes = (f"z={args.cond or 'eps'}", f"tail={g.tail}")
    return [Report("hmd", ("i", "dividend"), rows, notes)]


def _parse_blocks(text: str) -> list[tuple[int, int]]:
    blocks = []
    for chunk in text.split(","):
        a, sep, b = chunk.partition(":")
        if not sep:
            raise UsageError(f"block {chunk!r} is not of the form a:b")
        blocks.append((int(a), int(b)))
    return blocks


def _cmd_gamma(args) -> list[Report]:
    t = _provider(args).get("")
    blocks = _parse_blocks(args.blocks)
    gamma = build_gamma(blocks, t)
    if args.total is None:
        row = (args.blocks, "-", gamma, "-", "-")
    else:
        delta = build_delta(blocks, args.total, t)
        row = (args.blocks, args.total, gamma, delta, reassemble(blocks, gamma, delta))
    cols = ("blocks", "total", "gamma", "delta", "reassembled")
    return [Report("gamma", cols, (row,))]


def _cmd_report(args) -> list[Report]:
    tabs = _provider(args)
    if args.kind == "chainrule":
        return [chain_rule_report(args.n, tabs)]
    if args.kind == "pairs":
        return [
            depth_pair_report(args.n, args.eps, tabs),
            soph_pair_report(args.n, args.eps, tabs),
        ]
    if args.kind == "equivalences":
        return [equivalence_report(args.n, args.z_max, tabs)]
    return [late_halter_table(tabs.get(""), args.k_max)]


def _cmd_survey(args) -> list[Report]:
    sr = survey(args.n, _provider(args))
    attachments = tuple(
        f"{key} = {profile_text(p)}" for key, p in sorted(sr.profiles.items())
    )
    splits = Report(
        sr.splits.name, sr.splits.columns, sr.splits.rows,
        sr.splits.notes + attachments,
    )
    return [sr.main, splits]


# -- output -------------------------------------------------------------------


def _emit(reports: list[Report], args) -> int:
    if getattr(args, "format", "csv") == "json":
        from .reporting import report_json

        payloads = [json.loads(report_json(r)) for r in reports]
        text = json.dumps(payloads[0] if len(payloads) == 1 else payloads, indent=2)
        text += "\n"
    else:
        from .reporting import report_csv

        text = "\n".join(report_csv(r) for r in reports)
    out = getattr(args, "out", None)
    if out:
        _write_if_changed(Path(out), text)
    else:
        sys.stdout.write(text)
    short = any(
        cell in _SHORTFALL_TOKENS for r in reports for row in r.rows for cell in row
    )
    return 2 if short else 0


# -- parser -------------------------------------------------------------------


def _add_common(sp, *, budget=True, cond=True, cache=True, fmt=True, jobs=False):
    if budget:
        sp.add_argument("--max-len", type=int, default=14, help="program length horizon")
        sp.add_argument("--max-steps", type=int, default=10**5, help="per-program step cap")
    if cond:
        sp.add_argument("--cond", default="", metavar="BITS", help="auxiliary condition z")
    if cache:
        sp.add_argument("--cache", help="table file or cache directory")
    if fmt:
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", help="write output here instead of stdout")
    if jobs:
        sp.add_argument("--jobs", type=int, default=1, help="sweep workers (never changes bytes)")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="aitbench", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    sp = sub.add_parser("sweep", help="enumerate programs and cache the table")
    _add_common(sp, fmt=True, jobs=True)
    sp.set_defaults(handler=_cmd_sweep)

    sp = sub.add_parser("omega", help="certified mass and its stable prefix")
    _add_common(sp, jobs=True)
    sp.set_defaults(handler=_cmd_omega)

    sp = sub.add_parser("k", help="shortest producer of a string")
    sp.add_argument("--x", required=True, help="target string ('' for the empty one)")
    _add_common(sp, jobs=True)
    sp.set_defaults(handler=_cmd_k)

    sp = sub.add_parser("profile", help="dump a tradeoff region's generators")
    sp.add_argument("kind", choices=("time", "desc", "theta"))
    sp.add_argument("--x", default="", help="target string (time/desc)")
    sp.add_argument("--y", default="", help="target string (theta)")
    _add_common(sp, jobs=True)
    sp.set_defaults(handler=_cmd_profile)

    sp = sub.add_parser("soph", help="least sufficient model complexity")
    sp.add_argument("--x", default="")
    sp.add_argument("--c", type=int, required=True, help="description-length slack")
    _add_common(sp, jobs=True)
    sp.set_defaults(handler=_cmd_soph)

    sp = sub.add_parser("depth", help="busy time of near-shortest producers")
    sp.add_argument("--x", default="")
    sp.add_argument("--c", type=int, default=0, help="length slack")
    _add_common(sp, jobs=True)
    sp.set_defaults(handler=_cmd_depth)

    sp = sub.add_parser("reach", help="certified mass prefix per advice budget")
    sp.add_argument("--i-max", type=int, required=True)
    _add_common(sp, jobs=True)
    sp.set_defaults(handler=_cmd_reach)

    sp = sub.add_parser("hmd", help="reach minus advice spent")
    sp.add_argument("--i-max", type=int, required=True)
    _add_common(sp, jobs=True)
    sp.set_defaults(handler=_cmd_hmd)

    sp = sub.add_parser("gamma", help="mass bits arranged into advice blocks")
    sp.add_argument("--blocks", required=True, metavar="A:B,A:B,...")
    sp.add_argument("--total", type=int, help="also split a length-TOTAL prefix")
    _add_common(sp, cond=False, jobs=True)
    sp.set_defaults(handler=_cmd_gamma)

    sp = sub.add_parser("report", help="defect and closeness tables")
    sp.add_argument("kind", choices=("chainrule", "pairs", "equivalences", "latehalters"))
    sp.add_argument("--n", type=int, default=2, help="string length ceiling")
    sp.add_argument("--eps", type=int, default=1, help="sharp-finish threshold")
    sp.add_argument("--z-max", type=int, default=1, help="condition length ceiling")
    sp.add_argument("--k-max", type=int, default=12, help="late-halter length ceiling")
    _add_common(sp, cond=False, jobs=True)
    sp.set_defaults(handler=_cmd_report)

    sp = sub.add_parser("survey", help="per-string catalogue plus a split analysis")
    sp.add_argument("--n", type=int, required=True)
    _add_common(sp, cond=False, jobs=True)
    sp.set_defaults(handler=_cmd_survey)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        reports = args.handler(args)
    except _USAGE_ERRORS as exc:
        print(f"aitbench: error: {exc}", file=sys.stderr)
        return 1
    except AitbenchError as exc:
        print(f"aitbench: budget insufficiency: {exc}", file=sys.stderr)
        return 2
    return _emit(reports, args)


if __name__ == "__main__":
    sys.exit(main())
