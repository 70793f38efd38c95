"""The reference prefix machine ``u0-v1``.

A program is consumed as a stream of 3-bit opcodes.  An opcode is fetched
only when the program counter reaches the end of the decoded history, so a
backward jump replays history without consuming input.  A run succeeds only
if HALT executes at the moment every program bit has been consumed; halting
early or requesting bits past the end are aborts.  Aborts and budget
exhaustion are ordinary results, not errors.

Opcodes (value = the three bits read as binary):

====  =====  ========================================================
bits  name   effect (cost 1 unless noted)
====  =====  ========================================================
000   HALT   stop; Success iff all program bits were consumed
001   ZERO   append 0 to the output
010   ONE    append 1 to the output
011   AUX    append the next unread auxiliary bit, no-op if exhausted
100   DUP    append a copy of the whole output (cost 1 + |output|)
101   FLIP   invert the last output bit, no-op on empty output
110   CHOP   delete the last output bit, no-op on empty output
111   WHILE  jump to the first opcode if the output ends in 1
====  =====  ========================================================

Success consumes opcodes in threes, so every halting program has length
divisible by three and the halting set is prefix-free: extending a halting
program makes its HALT fire with unconsumed bits, which is an abort.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .core import check_bits

MACHINE_VERSION = "u0-v1"

HALT, ZERO, ONE, AUX, DUP, FLIP, CHOP, WHILE = range(8)

OPCODE_NAMES = ("HALT", "ZERO", "ONE", "AUX", "DUP", "FLIP", "CHOP", "WHILE")


class RunStatus(enum.Enum):
    SUCCESS = "success"
    ABORT_EARLY_HALT = "abort-early-halt"
    ABORT_INPUT_UNDERFLOW = "abort-input-underflow"
    BUDGET_EXCEEDED = "budget-exceeded"


@dataclass(frozen=True)
class ExecutionResult:
    """Outcome of one run: status, output and step accounting.

    ``steps`` is the exact running time of a successful run and None
    otherwise.  ``steps_spent`` is diagnostic for the other statuses: the
    cost consumed before an abort, or the full budget when it ran out.
    """

    status: RunStatus
    output: str | None
    steps: int | None
    steps_spent: int

    @property
    def success(self) -> bool:
        return self.status is RunStatus.SUCCESS


def decode_program(p: str) -> list[int]:
    """Split a bit string into complete opcodes, ignoring a ragged tail."""
    check_bits(p, "program")
    return [int(p[i : i + 3], 2) for i in range(0, len(p) - 2, 3)]


def run(program: str, aux: str = "", step_budget: int = 10**5) -> ExecutionResult:
    """Run ``program`` with auxiliary input ``aux`` under a step budget.

    Pure and deterministic: equal arguments give equal results.  Raising
    the budget can only turn BUDGET_EXCEEDED into a settled status; it
    never changes a settled one.  Underflow is detected before any cost is
    charged for the missing fetch, so it lands even on an exhausted budget.
    """
    check_bits(program, "program")
    check_bits(aux, "auxiliary input")
    if step_budget < 1:
        raise ValueError("step budget must be at least 1")

    n = len(program)
    history: list[int] = []
    pc = 0
    out: list[int] = []
    aux_i = 0
    consumed = 0
    steps = 0

    while True:
        if pc == len(history):
            if consumed + 3 > n:
                return ExecutionResult(
                    RunStatus.ABORT_INPUT_UNDERFLOW, None, None, steps
                )
            history.append(int(program[consumed : consumed + 3], 2))
            consumed += 3
        op = history[pc]
        cost = 1 + len(out) if op == DUP else 1
        if steps + cost > step_budget:
            return ExecutionResult(RunStatus.BUDGET_EXCEEDED, None, None, step_budget)
        steps += cost
        if op == HALT:
            if consumed == n:
                return ExecutionResult(
                    RunStatus.SUCCESS, "".join(map(str, out)), steps, steps
                )
            return ExecutionResult(RunStatus.ABORT_EARLY_HALT, None, None, steps)
        if op == ZERO:
            out.append(0)
        elif op == ONE:
            out.append(1)
        elif op == AUX:
            if aux_i < len(aux):
                out.append(1 if aux[aux_i] == "1" else 0)
                aux_i += 1
        elif op == DUP:
            out.extend(out)
        elif op == FLIP:
            if out:
                out[-1] ^= 1
        elif op == CHOP:
            if out:
                out.pop()
        else:  # WHILE
            if out and out[-1] == 1:
                pc = 0
                continue
        pc += 1


# ---------------------------------------------------------------------------
# Divergence certificates.
#
# Once the machine jumps, no opcode is fetched until some WHILE falls
# through, so it iterates a fixed opcode cycle.  We replay `passes` jumps
# from the first opcode symbolically, over an opaque carry-in word of which
# one fact is assumed: it ends in the concrete suffix `sigma` (at a jump
# the caller knows the real output, so sigma is just its tail).  If every
# branch along the replay is decided by known bits, the replay jumps
# `passes` times without fetching, and the output at the closing jump
# provably ends in `sigma` again, then the same round repeats forever: the
# machine never fetches and never halts.  Reads that would depend on bits
# or lengths outside the known suffix abort the certificate, so a True
# answer is sound; False only means "no certificate".
#
# The symbolic output is a stack of immutable segments over the opaque
# base; DUP snapshots the whole stack as one segment, CHOP pops within a
# segment only while its guaranteed length allows.
# ---------------------------------------------------------------------------


class _Unknown(Exception):
    """A symbolic read or pop depends on unknown carry-in bits."""


_BASE = "w"  # ("w", pops)                opaque carry-in minus `pops` end bits
_LIT = "l"  # ("l", bits)                concrete appended bits, non-empty
_COPY = "c"  # ("c", segments, pops)      snapshot of a stack minus `pops` bits


def _seg_min_len(seg: tuple, known: int) -> int:
    kind = seg[0]
    if kind == _LIT:
        return len(seg[1])
    if kind == _COPY:
        return max(_min_len(seg[1], known) - seg[2], 0)
    return max(known - seg[1], 0)  # the carry-in holds at least its suffix


def _min_len(segments: tuple, known: int) -> int:
    return sum(_seg_min_len(s, known) for s in segments)


def _demand(segments: tuple, back: int, sigma: tuple[int, ...]) -> int:
    """Bit ``back`` positions from the end of a stack, if forced.

    Resolution walks fixed-length literals and may stop inside the
    carry-in's known suffix; any position whose location depends on the
    carry-in's length raises.  A resolved value is therefore the same for
    every admissible carry-in.
    """
    for seg in reversed(segments):
        kind = seg[0]
        if kind == _LIT:
            bits = seg[1]
            if back < len(bits):
                return bits[len(bits) - 1 - back]
            back -= len(bits)
        elif kind == _COPY:
            return _demand(seg[1], back + seg[2], sigma)
        else:
            idx = back + seg[1]
            if idx < len(sigma):
                return sigma[len(sigma) - 1 - idx]
            raise _Unknown
    raise _Unknown


def _push(stack: list, bit: int) -> None:
    last = stack[-1]
    if last[0] == _LIT:
        stack[-1] = (_LIT, last[1] + (bit,))
    else:
        stack.append((_LIT, (bit,)))


def _pop(stack: list, known: int) -> None:
    """Remove the final bit, or raise if the final bit's segment is unclear."""
    last = stack[-1]
    if _seg_min_len(last, known) < 1:
        raise _Unknown  # segment may already be empty for some carry-ins
    if last[0] == _LIT:
        bits = last[1]
        if len(bits) == 1:
            stack.pop()
        else:
            stack[-1] = (_LIT, bits[:-1])
    elif last[0] == _COPY:
        stack[-1] = (_COPY, last[1], last[2] + 1)
    else:
        stack[-1] = (_BASE, last[1] + 1)


def certify_divergence(
    history: list[int],
    aux_exhausted: bool,
    sigma: str = "1",
    passes: int = 1,
) -> bool:
    """Sound check that a history which just jumped can never fetch again.

    Call at a WHILE jump with ``sigma`` a tail of the actual output (its
    last bit is then necessarily 1).  True means the program, and any
    extension of it, loops forever; False decides nothing.
    """
    if not sigma or sigma[-1] != "1" or passes < 1:
        return False
    sig = tuple(int(c) for c in sigma)
    known = len(sig)
    stack: list = [(_BASE, 0)]
    pc = 0
    jumps = 0
    try:
        while pc < len(history):
            op = history[pc]
            if op == HALT:
                return False  # a replayed HALT aborts or succeeds, not loops
            if op == ZERO:
                _push(stack, 0)
            elif op == ONE:
                _push(stack, 1)
            elif op == AUX:
                if not aux_exhausted:
                    return False  # consuming input makes passes differ
            elif op == DUP:
                stack.append((_COPY, tuple(stack), 0))
            elif op == FLIP:
                bit = _demand(tuple(stack), 0, sig)
                _pop(stack, known)
                _push(stack, bit ^ 1)
            elif op == CHOP:
                if _min_len(tuple(stack), known) == 0:
                    raise _Unknown  # no-op on empty, pop otherwise: unclear
                _pop(stack, known)
            else:  # WHILE
                if _demand(tuple(stack), 0, sig) == 1:
                    jumps += 1
                    if jumps == passes:
                        # the round closes; the suffix assumption must
                        # provably hold again for the next round's entry
                        whole = tuple(stack)
                        return all(
                            _demand(whole, b, sig) == sig[known - 1 - b]
                            for b in range(known)
                        )
                    pc = 0
                    continue
            pc += 1
        return False  # the pass exits to a fetch
    except _Unknown:
        return False


def certify_all_ones(history: list[int], out_len: int, aux_exhausted: bool) -> bool:
    """Sound divergence check for a jump whose output is all ones.

    Tracks only a lower bound on the length of an all-ones output.  If the
    pass provably reaches a WHILE while still nonempty and all ones, it
    jumps; if the length bound then covers the entry bound, the invariant
    "all ones, at least ``out_len`` bits" carries to every later pass.
    """
    if out_len < 1:
        return False
    lo = out_len
    for op in history:
        if op == ONE:
            lo += 1
        elif op == AUX:
            if not aux_exhausted:
                return False
        elif op == DUP:
            lo *= 2
        elif op == CHOP:
            lo = max(lo - 1, 0)
        elif op == WHILE:
            return lo >= max(out_len, 1)
        else:
            # HALT cannot be replayed; ZERO and FLIP would break all-ones
            return False
    return False


class JumpCycleDetector:
    """Exact repetition check at jump moments of one fetch-free stretch.

    Between fetches the machine state at a jump is fully described by the
    output and the auxiliary cursor, so seeing the same pair twice proves
    an eternal loop.  Tracking is capped to keep memory flat; programs that
    outgrow the cap simply stay uncertified.
    """

    def __init__(self, max_output_bits: int = 96, max_entries: int = 128) -> None:
        self.max_output_bits = max_output_bits
        self.max_entries = max_entries
        self._seen: set[tuple[str, int]] = set()

    def saw_repeat(self, out: list[int], aux_i: int) -> bool:
        if len(out) > self.max_output_bits or len(self._seen) >= self.max_entries:
            return False
        key = ("".join(map(str, out)), aux_i)
        if key in self._seen:
            return True
        self._seen.add(key)
        return False
