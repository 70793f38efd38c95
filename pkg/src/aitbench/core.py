"""Bit strings, orderings and certainty flags.

Bit strings are plain Python ``str`` over the alphabet ``{'0', '1'}``; the
empty string is the empty word.  All orderings in the package are
length-lexicographic unless stated otherwise.
"""

from __future__ import annotations

import enum
from collections.abc import Iterator

_BITSET = frozenset("01")


class Certainty(enum.Enum):
    """How far a reported value is pinned down by the backing enumeration."""

    EXACT = "exact"
    LOWER_BOUND = "lower-bound"
    UPPER_BOUND = "upper-bound"

    def __str__(self) -> str:
        return self.value


def check_bits(s: str, what: str = "bit string") -> str:
    """Return ``s`` unchanged after validating its alphabet."""
    if not isinstance(s, str) or not _BITSET.issuperset(s):
        raise ValueError(f"{what} must consist of '0'/'1' characters: {s!r}")
    return s


def lenlex_key(s: str) -> tuple[int, str]:
    """Sorting key for the length-lexicographic order."""
    return (len(s), s)


def bitstrings_of_length(n: int) -> Iterator[str]:
    """All bit strings of length exactly ``n``, lexicographically."""
    if n == 0:
        yield ""
        return
    for v in range(1 << n):
        yield format(v, f"0{n}b")


def bitstrings_up_to(n: int) -> Iterator[str]:
    """All bit strings of length at most ``n``, in length-lex order."""
    for length in range(n + 1):
        yield from bitstrings_of_length(length)


def program_index(p: str) -> int:
    """Dense index of ``p`` in the length-lex enumeration of all strings."""
    return (1 << len(p)) - 1 + (int(p, 2) if p else 0)


def program_count_up_to(n: int) -> int:
    """Number of bit strings of length at most ``n``."""
    return (1 << (n + 1)) - 1
