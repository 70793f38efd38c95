"""Render package values as CSV or JSON for files, pipes and plotting.

Output is deterministic down to the byte: fixed column orders, no
locale-dependent formatting, newline-terminated lines.  CSV headers name
the value kind, so a file can be read back without side channels; the
round trip is exact for profiles and curves.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .complexity import Report
from .errors import MalformedCode, UsageError
from .halting_info import ReachCurve
from .profiles import GraphFn, Profile, close

_PROFILE_HEADER = ["i", "psi"]
_CURVE_HEADER = ["i", "value", "certainty"]
_GRAPH_HEADER = ["coord", "value"]


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def report_csv(r: Report) -> str:
    """One CSV table; notes ride along as trailing comment lines."""
    text = _csv_text(r.columns, r.rows)
    for note in r.notes:
        text += f"# {note}\n"
    return text


def report_json(r: Report) -> str:
    payload = {
        "name": r.name,
        "columns": list(r.columns),
        "rows": [list(row) for row in r.rows],
        "notes": list(r.notes),
    }
    return json.dumps(payload, indent=2) + "\n"


def profile_rows(p: Profile) -> list[list[int]]:
    return [[i, y] for i, y in p.generators]


def curve_rows(c: ReachCurve) -> list[list]:
    return [[i, v, str(flag)] for i, v, flag in c.points]


def graph_rows(g: GraphFn) -> list[list[int]]:
    return [[coord, value] for coord, value in g.points]


def export_plot(obj, path, fmt: str = "csv") -> Path:
    """Write a profile, curve or graph as plotting data; returns the path.

    CSV carries the kind in its header; JSON carries it in a "kind" field.
    Profiles export their generator antichain, which reimports exactly.
    """
    path = Path(path)
    if isinstance(obj, Profile):
        kind, header, rows = "profile", _PROFILE_HEADER, profile_rows(obj)
    elif isinstance(obj, ReachCurve):
        kind, header, rows = "curve", _CURVE_HEADER, curve_rows(obj)
    elif isinstance(obj, GraphFn):
        kind, header, rows = "graph", _GRAPH_HEADER, graph_rows(obj)
    else:
        raise UsageError(f"cannot export a {type(obj).__name__} as plot data")
    if fmt == "csv":
        path.write_text(_csv_text(header, rows))
    elif fmt == "json":
        path.write_text(json.dumps({"kind": kind, "points": rows}, indent=2) + "\n")
    else:
        raise UsageError(f"unknown format {fmt!r}")
    return path


def import_plot(path) -> Profile | list:
    """Read back a file written by :func:`export_plot`.

    Profiles come back as equal Profile values; curves and graphs come
    back as their point lists.
    """
    path = Path(path)
    text = path.read_text()
    if text.lstrip().startswith("{"):
        payload = json.loads(text)
        kind, rows = payload["kind"], payload["points"]
    else:
        lines = [row for row in csv.reader(io.StringIO(text)) if row]
        header, rows = lines[0], lines[1:]
        if header == _PROFILE_HEADER:
            kind = "profile"
        elif header == _CURVE_HEADER:
            kind = "curve"
        elif header == _GRAPH_HEADER:
            kind = "graph"
        else:
            raise MalformedCode(f"unrecognized plot header {header!r}")
    if kind == "profile":
        return close((int(i), int(y)) for i, y, *_ in rows)
    if kind == "curve":
        return [[int(i), int(v), str(flag)] for i, v, flag in rows]
    return [[int(c), int(v)] for c, v in rows]


def theta_pair_csv(th) -> str:
    """Aligned readings of both clocks, one row per producer length.

    Generators of the two regions pair up at equal lengths; a length seen
    by only one side leaves the other column empty.
    """
    by_len: dict[int, list] = {}
    for reading, length in th.tilde.generators:
        by_len.setdefault(length, [None, None])[0] = reading
    for reading, length in th.hat.generators:
        by_len.setdefault(length, [None, None])[1] = reading
    rows = [
        [length, pair[0] if pair[0] is not None else "", pair[1] if pair[1] is not None else ""]
        for length, pair in sorted(by_len.items())
    ]
    return _csv_text(["length", "tilde", "hat"], rows)
