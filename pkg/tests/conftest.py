"""Shared fixtures: one disk cache and budget-pinned table providers.

Tables are expensive to sweep, so everything heavier than a toy budget is
session-scoped; tests must treat tables as immutable.
"""

from __future__ import annotations

import pytest

from aitbench import Budget, Tables


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("tables")


@pytest.fixture(scope="session")
def tabs14(cache_dir):
    return Tables(Budget(14, 10**5), cache_dir)


@pytest.fixture(scope="session")
def t14(tabs14):
    return tabs14.get("")


@pytest.fixture(scope="session")
def tabs21(cache_dir):
    return Tables(Budget(21, 10**5), cache_dir)


@pytest.fixture(scope="session")
def t21(tabs21):
    return tabs21.get("")
