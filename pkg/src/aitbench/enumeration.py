"""Dovetailed enumeration over all short programs.

The sweep realizes the textbook schedule "run every program of length at
most j for j steps, j = 1..J" without simulating it stage by stage: runs
of programs sharing a prefix coincide until the machine fetches past the
prefix, so one walk over the opcode tree executes every distinct run once
at the full budget.  A program's first-halt stage is then max(rt, |p|),
and the mass sum M(j) follows analytically.  Tests cross-check this
against a literal stage-by-stage oracle.

Programs that provably loop (a symbolic one-pass certificate or an exact
state repetition between fetches, see `machine`) are recorded as Aborted,
which is what makes fully settled tables reachable at desk budgets; the
cache header carries a `loopcheck=1` token when these certificates were
in play.  Unknown rows are pure budget exhaustion.
"""

from __future__ import annotations

import bisect
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .core import (
    Certainty,
    bitstrings_up_to,
    check_bits,
    program_count_up_to,
    program_index,
)
from .encoding import Dyadic, common_prefix_len
from .errors import (
    BudgetNotLarger,
    CountNeverReached,
    NotStabilized,
    OutOfBudget,
    PrefixNotReached,
    UsageError,
    VersionMismatch,
)
from .machine import (
    AUX,
    CHOP,
    DUP,
    FLIP,
    HALT,
    MACHINE_VERSION,
    ONE,
    WHILE,
    ZERO,
    JumpCycleDetector,
    certify_all_ones,
    certify_divergence,
)

_H, _A, _U = ord("H"), ord("A"), ord("U")


@dataclass(frozen=True)
class Budget:
    """Sweep bounds: L caps program length in bits, J caps the stage index
    (equivalently the per-program step budget at the final stage)."""

    max_len: int
    max_jsteps: int

    def __post_init__(self) -> None:
        if self.max_len < 3:
            raise ValueError("max_len must be at least 3 (one opcode)")
        if self.max_jsteps < 1:
            raise ValueError("max_jsteps must be at least 1")

    def covers(self, other: "Budget") -> bool:
        return (
            self.max_len >= other.max_len and self.max_jsteps >= other.max_jsteps
        )


@dataclass(frozen=True)
class OmegaApprox:
    """Final mass sum with its certified-stable prefix length."""

    value: Dyadic
    stabilized_bits: int
    certainty: Certainty


class _TreeSweeper:
    """One shared-prefix walk filling a status byte per program.

    All state a run carries between opcode fetches (output, aux cursor,
    step cost) is identical for every program extending the fetched
    prefix, so each tree node is executed once and its fate settles whole
    index ranges at a time.
    """

    def __init__(self, z: str, max_len: int, max_jsteps: int, certify: bool):
        self.z = z
        self.L = max_len
        self.J = max_jsteps
        self.certify = certify
        self.status = bytearray(program_count_up_to(max_len))
        self.halted: dict[str, tuple[int, str]] = {}
        self.certified_nodes = 0
        self.hist: list[int] = []

    def _settle(self, value: int, m: int, byte: int, lo_len: int, hi_len: int):
        # every program whose first m bits encode `value`, lengths lo..hi
        b = bytes([byte])
        for ln in range(lo_len, min(hi_len, self.L) + 1):
            width = 1 << (ln - m)
            lo = (1 << ln) - 1 + (value << (ln - m))
            self.status[lo : lo + width] = b * width

    @staticmethod
    def _certify_deep(hist: list[int], out2: list[int], ax: bool) -> bool:
        if 0 not in out2 and certify_all_ones(hist, len(out2), ax):
            return True
        n = len(out2)
        for slen in (2, 4, 8, 12, 16):
            if slen > n:
                break
            sigma = "".join(map(str, out2[-slen:]))
            for r in (1, 2, 3, 4):
                if certify_divergence(hist, ax, sigma, r):
                    return True
        return False

    def walk(self, pv: int, k: int, out: list[int], aux_i: int, steps: int):
        """At a fetch point after k opcodes: settle the programs that end
        here (their next fetch underflows, detected cost-free) and branch."""
        m = 3 * k
        self._settle(pv, m, _A, m, m + 2)
        if m + 3 > self.L:
            return
        for c in range(8):
            self.child((pv << 3) | c, k, c, out, aux_i, steps)

    def child(self, wv: int, k: int, c: int, out: list[int], aux_i: int, steps: int):
        m = 3 * (k + 1)
        J = self.J
        if c == HALT:
            # exact program halts here; every extension is an early halt
            if steps + 1 > J:
                self._settle(wv, m, _U, m, self.L)
                return
            self._settle(wv, m, _H, m, m)
            self.halted[format(wv, f"0{m}b")] = (
                steps + 1,
                "".join(map(str, out)),
            )
            self._settle(wv, m, _A, m + 1, self.L)
            return
        z = self.z
        zlen = len(z)
        out2 = list(out)
        aux2 = aux_i
        steps2 = steps
        hist = self.hist
        hist.append(c)
        pc = k
        detector: JumpCycleDetector | None = None
        cert_tried = 0
        deep_tries = 0
        try:
            while True:
                if pc > k:  # past the new opcode: the next fetch point
                    self.walk(wv, k + 1, out2, aux2, steps2)
                    return
                op = hist[pc]  # replayed histories never contain HALT
                cost = 1 + len(out2) if op == DUP else 1
                if steps2 + cost > J:
                    self._settle(wv, m, _U, m, self.L)
                    return
                steps2 += cost
                if op == ZERO:
                    out2.append(0)
                elif op == ONE:
                    out2.append(1)
                elif op == AUX:
                    if aux2 < zlen:
                        out2.append(1 if z[aux2] == "1" else 0)
                        aux2 += 1
                elif op == DUP:
                    out2.extend(out2)
                elif op == FLIP:
                    if out2:
                        out2[-1] ^= 1
                elif op == CHOP:
                    if out2:
                        out2.pop()
                else:  # WHILE
                    if out2 and out2[-1] == 1:
                        if self.certify:
                            ax = aux2 >= zlen
                            flag = 2 if ax else 1
                            if not cert_tried & flag:
                                cert_tried |= flag
                                if certify_divergence(hist, ax):
                                    self.certified_nodes += 1
                                    self._settle(wv, m, _A, m, self.L)
                                    return
                            if detector is None:
                                detector = JumpCycleDetector()
                            if detector.saw_repeat(out2, aux2):
                                self.certified_nodes += 1
                                self._settle(wv, m, _A, m, self.L)
                                return
                            # growing loops never repeat a state and defeat
                            # the one-pass replay; retry with invariants
                            # over the concrete tail at a few early jumps
                            if deep_tries < 12:
                                deep_tries += 1
                                if self._certify_deep(hist, out2, ax):
                                    self.certified_nodes += 1
                                    self._settle(wv, m, _A, m, self.L)
                                    return
                        pc = 0
                        continue
                pc += 1
        finally:
            hist.pop()


def _run_subtree(args: tuple) -> tuple[int, bytes, dict, int]:
    z, L, J, certify, c0 = args
    sw = _TreeSweeper(z, L, J, certify)
    sw.child(c0, 0, c0, [], 0, 0)
    return c0, bytes(sw.status), sw.halted, sw.certified_nodes


class HaltingTable:
    """Per-program fates for one machine, auxiliary string and budget.

    Rows are 'H steps output' / 'A' / 'U'; H rows also live in `halted`.
    The stage history M(j) is kept as its change points.  Instances are
    immutable by convention once built.
    """

    def __init__(
        self,
        z: str,
        budget: Budget,
        status: bytearray,
        halted: dict[str, tuple[int, str]],
        loop_certified: bool,
        machine_version: str = MACHINE_VERSION,
    ):
        self.z = z
        self.budget = budget
        self.machine_version = machine_version
        self.loop_certified = loop_certified
        self._status = status
        self.halted = halted
        self._m_js: list[int] = []
        self._m_values: list[Dyadic] = []
        by_j: dict[int, list[str]] = {}
        for p, (steps, _) in halted.items():
            by_j.setdefault(max(steps, len(p)), []).append(p)
        acc = Dyadic.zero()
        for j in sorted(by_j):
            for p in by_j[j]:
                acc = acc + Dyadic.mass(len(p))
            self._m_js.append(j)
            self._m_values.append(acc)
        self._unknown: tuple[int, Dyadic] | None = None
        self._len_stats: tuple[list[int], list[int], list[int]] | None = None

    # -- row access --------------------------------------------------------

    def row(self, p: str) -> tuple:
        b = self._status[program_index(p)]
        if b == _H:
            steps, output = self.halted[p]
            return ("H", steps, output)
        if b == _A:
            return ("A",)
        return ("U", self.budget.max_jsteps)

    def rows(self):
        for p in bitstrings_up_to(self.budget.max_len):
            yield p, self.row(p)

    def j_halt(self, p: str) -> int:
        """First stage whose budget and length admission both cover p."""
        return max(self.halted[p][0], len(p))

    # -- aggregates ---------------------------------------------------------

    def _unknown_stats(self) -> tuple[int, Dyadic]:
        if self._unknown is None:
            count = 0
            mass = Dyadic.zero()
            per_len = [0] * (self.budget.max_len + 1)
            for ln in range(self.budget.max_len + 1):
                base = (1 << ln) - 1
                n = self._status[base : base + (1 << ln)].count(_U)
                per_len[ln] = n
                count += n
            for ln, n in enumerate(per_len):
                if n:
                    mass = mass + Dyadic.make(n, ln)
            self._unknown = (count, mass)
        return self._unknown

    def unknown_count(self) -> int:
        return self._unknown_stats()[0]

    def unknown_mass(self) -> Dyadic:
        return self._unknown_stats()[1]

    def is_exact(self) -> bool:
        return self.unknown_count() == 0

    def halted_mass(self) -> Dyadic:
        return self.final_m

    @property
    def final_m(self) -> Dyadic:
        return self._m_values[-1] if self._m_values else Dyadic.zero()

    def m_at(self, j: int) -> Dyadic:
        """Mass halted by stage j (the sum's value just before stage j+1)."""
        if j < 0:
            raise ValueError("stage index must be nonnegative")
        k = bisect.bisect_right(self._m_js, j)
        return self._m_values[k - 1] if k else Dyadic.zero()

    def m_history(self) -> list[tuple[int, Dyadic]]:
        return list(zip(self._m_js, self._m_values))

    def _per_length(self) -> tuple[list[int], list[int], list[int]]:
        """(max halt steps per exact length, cumulative max, cumulative
        unknown count) indexed by length."""
        if self._len_stats is None:
            L = self.budget.max_len
            bb_at = [0] * (L + 1)
            for p, (steps, _) in self.halted.items():
                if steps > bb_at[len(p)]:
                    bb_at[len(p)] = steps
            bb_upto = [0] * (L + 1)
            unk_upto = [0] * (L + 1)
            run_bb = 0
            run_unk = 0
            for ln in range(L + 1):
                run_bb = max(run_bb, bb_at[ln])
                base = (1 << ln) - 1
                run_unk += self._status[base : base + (1 << ln)].count(_U)
                bb_upto[ln] = run_bb
                unk_upto[ln] = run_unk
            self._len_stats = (bb_at, bb_upto, unk_upto)
        return self._len_stats

    # -- serialization ------------------------------------------------------

    def to_text(self) -> str:
        head = (
            f"aitbench-table v1 machine={self.machine_version}"
            f" z={self.z or '-'}"
            f" L={self.budget.max_len} J={self.budget.max_jsteps}"
        )
        if self.loop_certified:
            head += " loopcheck=1"
        lines = [head]
        for p, r in self.rows():
            name = p or "-"
            if r[0] == "H":
                lines.append(f"{name} H {r[1]} {r[2] or '-'}")
            elif r[0] == "A":
                lines.append(f"{name} A")
            else:
                lines.append(f"{name} U {r[1]}")
        for j, v in zip(self._m_js, self._m_values):
            lines.append(f"M {j} {v}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "HaltingTable":
        lines = text.splitlines()
        if not lines:
            raise ValueError("empty table file")
        head = lines[0].split()
        if len(head) < 6 or head[0] != "aitbench-table" or head[1] != "v1":
            raise VersionMismatch(f"unrecognized table header: {lines[0]!r}")
        fields = dict(tok.split("=", 1) for tok in head[2:])
        if fields.get("machine") != MACHINE_VERSION:
            raise VersionMismatch(
                f"table is for machine {fields.get('machine')!r},"
                f" this build runs {MACHINE_VERSION}"
            )
        z = fields["z"]
        z = "" if z == "-" else z
        check_bits(z, "auxiliary input")
        budget = Budget(int(fields["L"]), int(fields["J"]))
        loop_certified = fields.get("loopcheck") == "1"
        count = program_count_up_to(budget.max_len)
        if len(lines) < 1 + count:
            raise ValueError("table file truncated")
        status = bytearray(count)
        halted: dict[str, tuple[int, str]] = {}
        for idx, p in enumerate(bitstrings_up_to(budget.max_len)):
            parts = lines[1 + idx].split()
            if parts[0] != (p or "-"):
                raise ValueError(f"row {idx} out of order: {lines[1 + idx]!r}")
            st = parts[1]
            if st == "H":
                status[idx] = _H
                out = parts[3]
                halted[p] = (int(parts[2]), "" if out == "-" else out)
            elif st == "A":
                status[idx] = _A
            elif st == "U":
                status[idx] = _U
                if int(parts[2]) != budget.max_jsteps:
                    raise ValueError(f"bad unknown row: {lines[1 + idx]!r}")
            else:
                raise ValueError(f"bad status in row: {lines[1 + idx]!r}")
        table = HaltingTable(z, budget, status, halted, loop_certified)
        recorded = [
            (int(parts[1]), Dyadic.parse(parts[2]))
            for parts in (ln.split() for ln in lines[1 + count :] if ln.strip())
            if parts[0] == "M"
        ]
        if recorded != table.m_history():
            raise ValueError("stored M history disagrees with rows")
        return table


def sweep(
    z: str = "",
    budget: Budget | None = None,
    resume_from: HaltingTable | None = None,
    jobs: int = 1,
    certify: bool = True,
) -> HaltingTable:
    """Build the halting table for auxiliary string ``z`` under ``budget``.

    Deterministic for any ``jobs``: work splits by leading opcode and
    merges in fixed order.  ``resume_from`` asserts monotone refinement: a
    fresh sweep at the larger budget must reproduce every settled row of
    the old table, which is verified, and the fresh table is returned.
    """
    check_bits(z, "auxiliary input")
    if budget is None:
        budget = Budget(14, 10**5)
    if resume_from is not None:
        if resume_from.machine_version != MACHINE_VERSION:
            raise VersionMismatch("resume table built by a different machine")
        if resume_from.z != z:
            raise UsageError("resume table conditions on a different string")
        if not (budget.covers(resume_from.budget) and budget != resume_from.budget):
            raise BudgetNotLarger(
                "resume requires a strictly larger budget in at least one axis"
            )

    L, J = budget.max_len, budget.max_jsteps
    sweeper = _TreeSweeper(z, L, J, certify)
    if jobs <= 1:
        sweeper.walk(0, 0, [], 0, 0)
        status, halted = sweeper.status, sweeper.halted
        certified = sweeper.certified_nodes
    else:
        sweeper._settle(0, 0, _A, 0, 2)  # the root's underflow stubs
        status, halted, certified = sweeper.status, {}, 0
        with ProcessPoolExecutor(max_workers=min(jobs, 8)) as pool:
            parts = list(
                pool.map(_run_subtree, [(z, L, J, certify, c) for c in range(8)])
            )
        parts.sort()  # merge in leading-opcode order: deterministic
        for c0, sub_status, sub_halted, sub_certified in parts:
            for ln in range(3, L + 1):
                width = 1 << (ln - 3)
                lo = (1 << ln) - 1 + c0 * width
                status[lo : lo + width] = sub_status[lo : lo + width]
            halted.update(sub_halted)
            certified += sub_certified
    # stage admission: a program longer than J never entered the schedule
    for ln in range(J + 1, L + 1):
        base = (1 << ln) - 1
        status[base : base + (1 << ln)] = b"U" * (1 << ln)
    if J < L:
        halted = {p: v for p, v in halted.items() if len(p) <= J}

    assert status.count(0) == 0, "sweep left rows unsettled"
    table = HaltingTable(z, budget, status, halted, certify and certified > 0)

    if resume_from is not None:
        for p, old in resume_from.rows():
            if old[0] == "H" and table.row(p) != old:
                raise AssertionError(f"halted row changed on resume: {p}")
            if old[0] == "A" and table.row(p) != old:
                raise AssertionError(f"aborted row changed on resume: {p}")
    return table


# -- derived quantities ------------------------------------------------------


def omega_approx(t: HaltingTable) -> OmegaApprox:
    """Final mass with the longest prefix no admissible future can move.

    A fully settled table pins every bit it can speak about, so the
    certified prefix is the whole precision L.  Otherwise bits 1..s are
    stable when even all Unknown rows halting at once cannot push the sum
    across the next multiple of 2^-s.
    """
    value = t.final_m
    if t.is_exact():
        return OmegaApprox(value, t.budget.max_len, Certainty.EXACT)
    ceiling = value + t.unknown_mass()
    for s in range(t.budget.max_len, 0, -1):
        if ceiling < value.next_boundary(s):
            return OmegaApprox(value, s, Certainty.LOWER_BOUND)
    return OmegaApprox(value, 0, Certainty.LOWER_BOUND)


def busy_beaver(t: HaltingTable, n: int) -> tuple[int, Certainty]:
    """Longest running time among halting programs of length at most n."""
    if n < 0:
        raise ValueError("length bound must be nonnegative")
    if n > t.budget.max_len:
        raise OutOfBudget(f"table only covers lengths up to {t.budget.max_len}")
    _, bb_upto, unk_upto = t._per_length()
    certainty = Certainty.EXACT if unk_upto[n] == 0 else Certainty.LOWER_BOUND
    return bb_upto[n], certainty


def inverse_busy_beaver(t: HaltingTable, n_steps: int) -> tuple[int, Certainty]:
    """Least length of a halting program running at least ``n_steps``.

    Unwitnessed times report (L+1, LowerBound): every admissible witness
    would be longer than the table's horizon.
    """
    # every halt costs at least one step, so thresholds below one ask the
    # same question as 1 (and the 0 entries of bb_at mean "no halter")
    n_steps = max(n_steps, 1)
    bb_at, _, unk_upto = t._per_length()
    for ln in range(t.budget.max_len + 1):
        if bb_at[ln] >= n_steps:
            exact = ln == 0 or unk_upto[ln - 1] == 0
            return ln, Certainty.EXACT if exact else Certainty.LOWER_BOUND
    return t.budget.max_len + 1, Certainty.LOWER_BOUND


def badger(t: HaltingTable, i: int) -> tuple[int, Certainty]:
    """First stage at which the sum agrees with its final value on i bits.

    Needs those i bits certified stable; conditional tables give the
    relativized form.
    """
    if i < 0:
        raise ValueError("prefix length must be nonnegative")
    ap = omega_approx(t)
    if i > ap.stabilized_bits:
        raise NotStabilized(
            f"only {ap.stabilized_bits} bits are certified, asked for {i}"
        )
    if i == 0 or Dyadic.zero().prefix_bits(i) == ap.value.prefix_bits(i):
        return 1, Certainty.EXACT
    target = ap.value.prefix_bits(i)
    for j, v in zip(t._m_js, t._m_values):
        if v.prefix_bits(i) == target:
            return j, Certainty.EXACT
    raise AssertionError("final value must match its own prefix")


def stabilized_bits_at(t: HaltingTable, j: int) -> tuple[int, Certainty]:
    """Clock reading at stage j: how many certified bits the sum shows.

    The count is capped by the certificate; at the cap on a non-exact
    table the true reading may be larger, hence LowerBound.
    """
    ap = omega_approx(t)
    reading = common_prefix_len(t.m_at(j), ap.value, cap=ap.stabilized_bits)
    if reading == ap.stabilized_bits and ap.certainty is not Certainty.EXACT:
        return reading, Certainty.LOWER_BOUND
    return reading, Certainty.EXACT


def clock_time(
    t: HaltingTable,
    p: str,
    which: str = "omega-z",
    reference: HaltingTable | None = None,
) -> tuple[int, Certainty]:
    """Stabilized-prefix clock reading when p's simulation halts.

    ``which`` picks the sum the clock watches: "omega-z" reads t's own
    conditional sum, "omega" reads the unconditional one (pass the z=ε
    table as ``reference`` when t itself is conditional).  Both dovetails
    share the stage counter, so the reading is the reference's stabilized
    bit count at stage rt(p): the clock inverts the badger at p's running
    time, exactly mirroring how the busy running time inverts the beaver.
    """
    if p not in t.halted:
        raise ValueError("clock time is defined for halted programs only")
    if which == "omega-z":
        ref = t
    elif which == "omega":
        ref = t if t.z == "" else reference
        if ref is None or ref.z != "":
            raise UsageError("the unconditional clock needs the z=ε table")
    else:
        raise UsageError(f"unknown clock {which!r}")
    if ref.machine_version != t.machine_version:
        raise VersionMismatch("clock reference from a different machine")
    return stabilized_bits_at(ref, t.halted[p][0])


# -- recovery procedures -----------------------------------------------------


def halting_from_omega(t: HaltingTable, omega_prefix: str) -> dict[str, tuple]:
    """Settle every program of length ≤ |prefix| from the sum's prefix alone.

    Replays the stage history until the sum first shows the given bits;
    one more halt among these lengths would carry mass ≥ 2^-|prefix| and
    push the sum past the prefix's ceiling, so everything still running
    never halts.
    """
    check_bits(omega_prefix, "omega prefix")
    j = len(omega_prefix)
    if j == 0:
        return {}
    if j > t.budget.max_len:
        raise OutOfBudget("prefix speaks about lengths beyond the table")
    stage = None
    for cand_j, v in zip(t._m_js, t._m_values):
        if v.prefix_bits(j) == omega_prefix:
            stage = cand_j
            break
    if Dyadic.zero().prefix_bits(j) == omega_prefix:
        stage = 1
    if stage is None:
        raise PrefixNotReached(
            "the sum never shows this prefix within the table's budget"
        )
    claims: dict[str, tuple] = {}
    for p in bitstrings_up_to(j):
        if p in t.halted and t.j_halt(p) <= stage:
            steps, output = t.halted[p]
            claims[p] = ("H", steps, output)
        else:
            claims[p] = ("A",)
    return claims


def halting_from_count(t: HaltingTable, j: int, omega_j: int) -> dict[str, tuple]:
    """Settle every program of length ≤ j given their true halt count.

    Runs them in lockstep until exactly ``omega_j`` have halted; the rest
    never will.  A count never reached within budget is reported, which is
    the too-large-count signal.
    """
    if j < 0 or omega_j < 0:
        raise ValueError("bounds must be nonnegative")
    if j > t.budget.max_len:
        raise OutOfBudget("count speaks about lengths beyond the table")
    times = sorted(
        steps for p, (steps, _) in t.halted.items() if len(p) <= j
    )
    if omega_j > len(times):
        raise CountNeverReached(
            f"only {len(times)} programs of length <= {j} ever halt here"
        )
    cutoff = times[omega_j - 1] if omega_j else 0
    claims: dict[str, tuple] = {}
    for p in bitstrings_up_to(j):
        if p in t.halted and t.halted[p][0] <= cutoff:
            steps, output = t.halted[p]
            claims[p] = ("H", steps, output)
        else:
            claims[p] = ("A",)
    return claims
