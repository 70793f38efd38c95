"""Disk cache of halting tables, keyed by machine, condition and budget.

A table is a pure function of (machine version, z, budget), so the cache
file name spells out the whole key and hits need no further validation.
Writes are atomic and serialization is canonical, which makes repeated
sweeps byte-identical no-ops; a table is never overwritten with different
bytes.
"""

from __future__ import annotations

import os
from pathlib import Path

from .core import check_bits
from .enumeration import Budget, HaltingTable, sweep
from .errors import UsageError
from .machine import MACHINE_VERSION


def table_filename(z: str, budget: Budget) -> str:
    """Canonical cache file name for one table."""
    return (
        f"{MACHINE_VERSION}_z{z or 'eps'}"
        f"_L{budget.max_len}_J{budget.max_jsteps}.tbl"
    )


def store(t: HaltingTable, cache_dir) -> Path:
    """Write a table to its canonical cache path, atomically.

    An existing file with the same bytes is left untouched; the same table
    can therefore be stored any number of times without churn.
    """
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_dir / table_filename(t.z, t.budget)
    data = t.to_text()
    if path.exists() and path.read_text() == data:
        return path
    tmp = path.with_suffix(".tbl.tmp")
    tmp.write_text(data)
    os.replace(tmp, path)
    return path


def load(z: str, budget: Budget, cache_dir) -> HaltingTable | None:
    """Read a cached table back, or None when the key is absent."""
    path = Path(cache_dir) / table_filename(z, budget)
    if not path.exists():
        return None
    return HaltingTable.from_text(path.read_text())


class Tables:
    """Budget-pinned table provider: get(z) loads, sweeps, and caches.

    All tables handed out share one budget and worker count, so clock
    readings taken across them refer to the same schedule.  Results stay
    in memory for the provider's lifetime; with a cache directory they
    also persist across processes.
    """

    def __init__(self, budget: Budget | None = None, cache_dir=None, jobs: int = 1):
        self.budget = budget or Budget(14, 10**5)
        self.cache_dir = Path(cache_dir) if cache_dir is not None else None
        self.jobs = jobs
        self._live: dict[str, HaltingTable] = {}

    def seed(self, t: HaltingTable) -> None:
        """Adopt an already-loaded table under its own condition key."""
        if t.budget != self.budget:
            raise UsageError(
                f"seeded table budget {t.budget} differs from the provider's {self.budget}"
            )
        self._live[t.z] = t

    def get(self, z: str = "") -> HaltingTable:
        check_bits(z, "condition")
        t = self._live.get(z)
        if t is None and self.cache_dir is not None:
            t = load(z, self.budget, self.cache_dir)
        if t is None:
            t = sweep(z=z, budget=self.budget, jobs=self.jobs)
            if self.cache_dir is not None:
                store(t, self.cache_dir)
        self._live[z] = t
        return t
