"""Byte-stable CSV/JSON rendering and the plot-data round trip."""

import json
from types import SimpleNamespace

import pytest
from hypothesis import given, settings, strategies as st

from aitbench import (
    Budget,
    MalformedCode,
    UsageError,
    clock_gap_report,
    reach_curve,
    sweep,
    theta_profiles,
)
from aitbench.complexity import Report
from aitbench.profiles import close, x_graph
from aitbench.reporting import (
    export_plot,
    import_plot,
    report_csv,
    report_json,
    theta_pair_csv,
)

REP = Report(
    name="demo",
    columns=("a", "b"),
    rows=((1, "x"), (2, "y")),
    notes=("first note",),
)


@pytest.fixture(scope="module")
def t14():
    return sweep("", Budget(14, 10**5))


def test_report_csv_layout():
    assert report_csv(REP) == "a,b\n1,x\n2,y\n# first note\n"


def test_report_csv_golden(t14):
    assert report_csv(clock_gap_report(t14)) == (
        "length,programs,min_gap,max_gap\n"
        "3,1,2,2\n"
        "6,7,5,5\n"
        "9,48,8,8\n"
        "12,326,8,11\n"
    )


def test_report_json_round_trip():
    payload = json.loads(report_json(REP))
    assert payload == {
        "name": "demo",
        "columns": ["a", "b"],
        "rows": [[1, "x"], [2, "y"]],
        "notes": ["first note"],
    }
    assert report_json(REP).endswith("\n")


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_profile_export_reimports_exactly(tmp_path, fmt):
    p = close([(2, 5), (4, 3)])
    path = export_plot(p, tmp_path / f"p.{fmt}", fmt=fmt)
    assert import_plot(path) == p


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_empty_profile_export(tmp_path, fmt):
    path = export_plot(close([]), tmp_path / f"e.{fmt}", fmt=fmt)
    assert import_plot(path) == close([])


@pytest.fixture(scope="module")
def scratch(tmp_path_factory):
    return tmp_path_factory.mktemp("plots")


@settings(max_examples=50, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 50), st.integers(0, 50)), min_size=1, max_size=6))
def test_any_profile_round_trips(scratch, pts):
    p = close(pts)
    assert import_plot(export_plot(p, scratch / "p.csv")) == p


def test_curve_export(tmp_path, t14):
    rc = reach_curve("", t14, t14, 9)
    path = export_plot(rc, tmp_path / "c.csv")
    pts = import_plot(path)
    assert pts == [[i, v, str(flag)] for i, v, flag in rc.points]
    assert pts[6] == [6, 1, "exact"]


def test_graph_export(tmp_path):
    g = x_graph(close([(2, 5), (4, 3)]))
    path = export_plot(g, tmp_path / "g.json", fmt="json")
    assert import_plot(path) == [[c, v] for c, v in g.points]


def test_export_rejects_strays(tmp_path):
    with pytest.raises(UsageError):
        export_plot(42, tmp_path / "x.csv")
    with pytest.raises(UsageError):
        export_plot(close([(1, 1)]), tmp_path / "x.tsv", fmt="tsv")


def test_import_rejects_foreign_headers(tmp_path):
    path = tmp_path / "odd.csv"
    path.write_text("foo,bar\n1,2\n")
    with pytest.raises(MalformedCode):
        import_plot(path)


def test_theta_pair_csv_golden(t14):
    assert theta_pair_csv(theta_profiles("", t14, t14)) == "length,tilde,hat\n3,1,1\n"
    assert theta_pair_csv(theta_profiles("1", t14, t14)) == "length,tilde,hat\n6,1,1\n"


def test_theta_pair_csv_leaves_holes_blank():
    th = SimpleNamespace(tilde=close([(1, 6), (2, 3)]), hat=close([(2, 3)]))
    assert theta_pair_csv(th) == "length,tilde,hat\n3,2,2\n6,1,\n"
