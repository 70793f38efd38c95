"""Cache naming, atomic storage, and the budget-pinned table provider."""

import pytest

from aitbench import Budget, UsageError, sweep
from aitbench.workspace import Tables, load, store, table_filename


@pytest.fixture(scope="module")
def t6():
    return sweep("", Budget(6, 10**5))


def test_filename_spells_out_the_key():
    assert table_filename("", Budget(14, 10**5)) == "u0-v1_zeps_L14_J100000.tbl"
    assert table_filename("01", Budget(9, 50)) == "u0-v1_z01_L9_J50.tbl"


def test_store_load_round_trip(tmp_path, t6):
    path = store(t6, tmp_path)
    assert path.name == table_filename("", t6.budget)
    back = load("", t6.budget, tmp_path)
    assert back.to_text() == t6.to_text()
    assert back.halted == t6.halted


def test_load_miss_returns_none(tmp_path):
    assert load("", Budget(6, 10**5), tmp_path) is None


def test_store_is_idempotent(tmp_path, t6):
    path = store(t6, tmp_path)
    stamp = path.stat().st_mtime_ns
    again = store(t6, tmp_path)
    assert again == path
    assert path.stat().st_mtime_ns == stamp
    assert list(tmp_path.iterdir()) == [path]


def test_provider_reuses_live_tables():
    tabs = Tables(Budget(6, 10**5))
    assert tabs.get("") is tabs.get("")


def test_provider_persists_across_instances(tmp_path):
    budget = Budget(6, 10**5)
    first = Tables(budget, cache_dir=tmp_path).get("1")
    assert (tmp_path / table_filename("1", budget)).exists()
    second = Tables(budget, cache_dir=tmp_path).get("1")
    assert second is not first
    assert second.to_text() == first.to_text()


def test_provider_accepts_matching_seed(t6):
    tabs = Tables(Budget(6, 10**5))
    tabs.seed(t6)
    assert tabs.get("") is t6


def test_provider_rejects_foreign_seed(t6):
    with pytest.raises(UsageError):
        Tables(Budget(9, 10**5)).seed(t6)


def test_provider_checks_the_condition():
    with pytest.raises(ValueError):
        Tables(Budget(6, 10**5)).get("2x")
