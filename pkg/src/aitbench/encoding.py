"""Exact dyadic rationals and self-delimiting codes.

Halting masses are sums of powers of two and must never pass through
floating point.  ``Dyadic`` stores ``num / 2**exp`` with a canonical
(odd or zero) numerator, so equality is structural and addition is exact.

The pair code concatenates a self-delimiting header for ``x`` with the raw
bits of ``y``: ``1^{h} 0 bin(|x|) x y`` where ``h`` is the bit length of
``|x|`` (zero for the empty ``x``, making the header the single bit '0').
Decoding consumes the whole string; trailing or missing bits are malformed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import check_bits
from .errors import MalformedCode


@dataclass(frozen=True, order=False)
class Dyadic:
    """Non-negative dyadic rational ``num / 2**exp`` in canonical form."""

    num: int
    exp: int

    def __post_init__(self) -> None:
        if self.num < 0 or self.exp < 0:
            raise ValueError("Dyadic stores non-negative values only")
        if self.num == 0:
            if self.exp != 0:
                raise ValueError("canonical zero is 0/2^0")
        elif self.num % 2 == 0 and self.exp > 0:
            raise ValueError("canonical form divides out shared powers of two")

    @staticmethod
    def make(num: int, exp: int) -> "Dyadic":
        """Build a canonical value from any ``num / 2**exp`` with num >= 0."""
        if num < 0:
            raise ValueError("negative dyadic")
        if num == 0:
            return Dyadic(0, 0)
        while num % 2 == 0 and exp > 0:
            num //= 2
            exp -= 1
        if exp < 0:
            raise ValueError("negative exponent")
        return Dyadic(num, exp)

    @staticmethod
    def zero() -> "Dyadic":
        return Dyadic(0, 0)

    @staticmethod
    def mass(length: int) -> "Dyadic":
        """The weight ``2**-length`` a program of that length contributes."""
        return Dyadic(1, length)

    def is_zero(self) -> bool:
        return self.num == 0

    def __add__(self, other: "Dyadic") -> "Dyadic":
        e = max(self.exp, other.exp)
        num = (self.num << (e - self.exp)) + (other.num << (e - other.exp))
        return Dyadic.make(num, e)

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        e = max(self.exp, other.exp)
        num = (self.num << (e - self.exp)) - (other.num << (e - other.exp))
        return Dyadic.make(num, e)

    def scaled(self, k: int) -> "Dyadic":
        """Exact product with a non-negative integer."""
        if k < 0:
            raise ValueError("negative scale")
        return Dyadic.make(self.num * k, self.exp)

    def _cmp_key(self, other: "Dyadic") -> tuple[int, int]:
        e = max(self.exp, other.exp)
        return (self.num << (e - self.exp), other.num << (e - other.exp))

    def __lt__(self, other: "Dyadic") -> bool:
        a, b = self._cmp_key(other)
        return a < b

    def __le__(self, other: "Dyadic") -> bool:
        a, b = self._cmp_key(other)
        return a <= b

    def __gt__(self, other: "Dyadic") -> bool:
        return other < self

    def __ge__(self, other: "Dyadic") -> bool:
        return other <= self

    def floor_scaled(self, s: int) -> int:
        """``floor(value * 2**s)`` for ``s >= 0``, exactly."""
        if s < 0:
            raise ValueError("negative scale")
        if self.exp >= s:
            return self.num >> (self.exp - s)
        return self.num << (s - self.exp)

    def bit(self, i: int) -> int:
        """Bit ``i`` (1-based) of the fractional part; requires value < 1."""
        if i < 1:
            raise ValueError("fractional bit positions start at 1")
        if self >= Dyadic(1, 0):
            raise ValueError("fractional bits defined for values below 1")
        return self.floor_scaled(i) & 1

    def prefix_bits(self, s: int) -> str:
        """First ``s`` fractional bits as a string; requires value < 1."""
        if self >= Dyadic(1, 0):
            raise ValueError("fractional bits defined for values below 1")
        if s == 0:
            return ""
        return format(self.floor_scaled(s), f"0{s}b")

    def next_boundary(self, s: int) -> "Dyadic":
        """Smallest multiple of ``2**-s`` strictly above this value."""
        return Dyadic.make(self.floor_scaled(s) + 1, s)

    def __str__(self) -> str:
        return f"{self.num}/2^{self.exp}"

    @staticmethod
    def parse(text: str) -> "Dyadic":
        try:
            num_part, exp_part = text.split("/2^")
            return Dyadic(int(num_part), int(exp_part))
        except (ValueError, TypeError) as exc:
            raise MalformedCode(f"bad dyadic literal: {text!r}") from exc


def common_prefix_len(a: Dyadic, b: Dyadic, cap: int) -> int:
    """Length of the longest shared fractional-bit prefix, at most ``cap``."""
    for i in range(1, cap + 1):
        if a.bit(i) != b.bit(i):
            return i - 1
    return cap


def nat_code(n: int) -> str:
    """Self-delimiting code for a natural number: ``1^{h} 0 bin(n)``.

    ``h`` is the bit length of ``n``; zero encodes as the single bit '0'.
    """
    if n < 0:
        raise ValueError("natural numbers only")
    if n == 0:
        return "0"
    body = format(n, "b")
    return "1" * len(body) + "0" + body


def nat_decode(code: str, start: int = 0) -> tuple[int, int]:
    """Decode a nat code at ``start``; return ``(value, next_position)``."""
    h = start
    while h < len(code) and code[h] == "1":
        h += 1
    if h == len(code):
        raise MalformedCode("nat header missing its terminator")
    width = h - start
    body_start = h + 1
    if body_start + width > len(code):
        raise MalformedCode("nat body truncated")
    if width == 0:
        return 0, body_start
    body = code[body_start : body_start + width]
    if body[0] != "1":
        raise MalformedCode("nat body has a leading zero")
    return int(body, 2), body_start + width


def nat_code_len(n: int) -> int:
    """Length of ``nat_code(n)`` without building it."""
    return 1 if n == 0 else 2 * n.bit_length() + 1


def pair_encode(x: str, y: str) -> str:
    """Encode the ordered pair ``(x, y)`` as a single bit string."""
    check_bits(x, "pair component x")
    check_bits(y, "pair component y")
    return nat_code(len(x)) + x + y


def pair_decode(code: str) -> tuple[str, str]:
    """Invert :func:`pair_encode`; the whole string must be consumed."""
    check_bits(code, "pair code")
    xlen, pos = nat_decode(code)
    if pos + xlen > len(code):
        raise MalformedCode("pair code shorter than its declared x")
    x = code[pos : pos + xlen]
    y = code[pos + xlen :]
    return x, y


def pair_code_len(xlen: int, ylen: int) -> int:
    """Length of the code for any pair with these component lengths."""
    return nat_code_len(xlen) + xlen + ylen
