"""A toy prefix-free machine with exact Solomonoff prior, induction and complexity.

The machine reads its program two bits at a time::

    00  emit 0
    01  emit 1
    11  halt; the output is the emitted buffer
    10  halt; the output is the emitted buffer repeated forever
        (an empty buffer gives the empty output)

Valid programs are ``(00|01)^k`` followed by one terminator, so they form a
prefix-free set whose Kraft sum is exactly 1. The machine is not universal;
it is just rich enough that periodic strings compress, and every prior is a
rational number with a closed form.

Strings are ASCII ``'0'``/``'1'`` text throughout. "Explains y" always means
the output has ``y`` as a prefix.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator

from . import limits
from .checks import Check
from .errors import InputError, UndefinedGainError, UnpredictableHistoryError
from .numerics import LOG_SLACK, log2

MACHINE_ID = "toy-v1"

_PROGRAM = re.compile(r"(?:0[01])*1[01]")
_BITS = re.compile(r"[01]*")


def _check_bits(y: str) -> str:
    if not isinstance(y, str) or not _BITS.fullmatch(y):
        raise InputError(f"expected a binary string, got {y!r}")
    return y


@dataclass(frozen=True)
class MachineOutput:
    kind: str
    content: str

    def __post_init__(self):
        if self.kind not in ("finite", "periodic"):
            raise InputError(f"unknown output kind {self.kind!r}")
        if self.kind == "periodic" and not self.content:
            raise InputError("a periodic output needs a nonempty period")

    def prefix(self, length: int) -> str:
        """The first ``length`` output bits (fewer if a finite output ends early)."""
        if self.kind == "finite":
            return self.content[:length]
        reps = -(-length // len(self.content))
        return (self.content * reps)[:length]

    def extends(self, y: str) -> bool:
        return self.prefix(len(y)) == y


@dataclass(frozen=True)
class ToyProgram:
    bits: str

    def __post_init__(self):
        if not isinstance(self.bits, str) or not _PROGRAM.fullmatch(self.bits):
            raise InputError(f"{self.bits!r} is not a valid program")

    def __len__(self) -> int:
        return len(self.bits)


def parse_program(bits: str) -> ToyProgram | None:
    """The program spelled by ``bits``, or None when the string is not exactly one program."""
    _check_bits(bits)
    return ToyProgram(bits) if _PROGRAM.fullmatch(bits) else None


def run_machine(program: ToyProgram) -> MachineOutput:
    bits = program.bits
    buffer = "".join(bits[i + 1] for i in range(0, len(bits) - 2, 2))
    if bits[-2:] == "10" and buffer:
        return MachineOutput("periodic", buffer)
    return MachineOutput("finite", buffer)


def strip_padding(h: str) -> ToyProgram | None:
    """The unique valid-program prefix of ``h``, if any."""
    _check_bits(h)
    for end in range(2, len(h) + 1, 2):
        op = h[end - 2:end]
        if op[0] == "1":
            return ToyProgram(h[:end])
    return None


@dataclass(frozen=True)
class PaddedString:
    bits: str

    def __post_init__(self):
        _check_bits(self.bits)

    @property
    def parse(self) -> tuple[ToyProgram, str] | None:
        program = strip_padding(self.bits)
        return None if program is None else (program, self.bits[len(program):])


def program_count(max_len: int) -> int:
    return sum(2 ** (k + 1) for k in range(max_len // 2) if 2 * k + 2 <= max_len)


def enumerate_programs(max_len: int) -> list[ToyProgram]:
    """Every valid program of length <= max_len, by length then lexicographically."""
    limits.check("program_len", max_len)
    programs = []
    for k in range(max_len // 2):
        for emitted in product("01", repeat=k):
            body = "".join("0" + b for b in emitted)
            programs.extend(ToyProgram(body + t) for t in ("10", "11"))
    programs.sort(key=lambda p: (len(p), p.bits))
    return programs


@lru_cache(maxsize=None)
def _outputs(max_len: int) -> tuple[tuple[int, MachineOutput], ...]:
    return tuple((len(p), run_machine(p)) for p in enumerate_programs(max_len))


def solomonoff_prior_finite(y: str, n: int) -> Fraction:
    """Mass of length-n strings whose stripped program explains ``y``.

    A program of length l <= n is the prefix of 2^(n-l) of the 2^n padded
    strings, so the mass is the sum of 2^-l over explaining programs.
    """
    _check_bits(y)
    limits.check("program_len", n)
    return sum((Fraction(1, 2**length) for length, out in _outputs(n) if out.extends(y)), Fraction(0))


def _has_period(y: str, j: int) -> bool:
    return all(y[i] == y[i - j] for i in range(j, len(y)))


def solomonoff_prior_exact(y: str) -> Fraction:
    """Closed-form prior of ``y``.

    Halting programs emitting k >= |y| bits starting with y contribute
    sum_k 2^(k-|y|) 2^-(2k+2) = 2^-(2|y|+1); repeating programs with period
    length at least |y| contribute the same. Shorter periods j < |y| add
    2^-(2j+2) whenever y has period j.
    """
    _check_bits(y)
    if not y:
        return Fraction(1)
    m = len(y)
    total = Fraction(1, 2 ** (2 * m))
    for j in range(1, m):
        if _has_period(y, j):
            total += Fraction(1, 2 ** (2 * j + 2))
    return total


def prior_tail(y: str, n: int) -> Fraction:
    """Exact prior mass of explaining programs longer than n."""
    _check_bits(y)
    first = n // 2  # smallest emit count k with program length 2k + 2 > n
    if not y:
        return Fraction(1, 2**first)
    m = len(y)
    start = max(m, first)
    total = Fraction(1, 2 ** (m + start))
    for j in range(max(first, 1), m):
        if _has_period(y, j):
            total += Fraction(1, 2 ** (2 * j + 2))
    return total


def solomonoff_predict(history: str, normalized: bool = False) -> tuple[Fraction, Fraction]:
    """Conditional semimeasure ``Q(history + b) / Q(history)`` for b = 0, 1.

    The pair sums to less than one: the deficit is the mass of programs
    whose output stops exactly at ``history``. With ``normalized`` the pair
    is rescaled to a probability distribution.
    """
    base = solomonoff_prior_exact(history)
    if base == 0:
        raise UnpredictableHistoryError(f"history {history!r} has zero prior")
    q0 = solomonoff_prior_exact(history + "0") / base
    q1 = solomonoff_prior_exact(history + "1") / base
    if normalized:
        total = q0 + q1
        return q0 / total, q1 / total
    return q0, q1


def risk_uni(y: str, program: ToyProgram) -> int:
    """Mistakes of the program's output on y; bits missing from a finite output count as mistakes."""
    _check_bits(y)
    out = run_machine(program).prefix(len(y))
    return sum(a != b for a, b in zip(out, y)) + len(y) - len(out)


def theory_risk_uni(y: str, max_len: int) -> int:
    return min(risk_uni(y, p) for p in enumerate_programs(max_len))


def explaining_count(y: str, n: int) -> int:
    """Number of length-n padded strings whose stripped program explains y."""
    return int(solomonoff_prior_finite(y, n) * 2**n)


def hard_falsifiability_uni(y: str, n: int | None = None) -> float:
    """-log2 of the exact prior, or the finite gain n - log2|explaining set| at length n."""
    if n is None:
        prior = solomonoff_prior_exact(y)
        if prior == 0:
            raise UndefinedGainError(f"{y!r} has zero prior")
        return -log2(prior)
    count = explaining_count(y, n)
    if count == 0:
        raise UndefinedGainError(f"no length-{n} string explains {y!r}")
    return n - log2(count)


def kolmogorov_complexity(y: str) -> int:
    """Length of the shortest program whose output has y as a prefix."""
    _check_bits(y)
    limits.check("kolmogorov_len", len(y))
    # Emitting y and halting always works, so lengths up to 2|y| + 2 suffice.
    for length in range(2, 2 * len(y) + 3, 2):
        k = length // 2 - 1
        for emitted in product("01", repeat=k):
            body = "".join("0" + b for b in emitted)
            if any(run_machine(ToyProgram(body + t)).extends(y) for t in ("10", "11")):
                return length
    raise AssertionError("unreachable: the explicit emission program explains y")


@dataclass(frozen=True)
class LedgerStep:
    t: int
    before: int
    after: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.before, self.after)

    @property
    def bits(self) -> float:
        return log2(self.ratio)


@dataclass(frozen=True)
class FalsificationLedger:
    """Strings falsified per observed bit at ambient length n.

    ``baseline`` is the log-count of padded strings that explain nothing at
    all (no program prefix); it plus the steps is the finite gain.
    """

    y: str
    n: int
    steps: tuple[LedgerStep, ...]
    baseline: float

    @property
    def total(self) -> float:
        return sum(s.bits for s in self.steps)

    @property
    def gain(self) -> float:
        return hard_falsifiability_uni(self.y, self.n)


def falsification_ledger(y: str, n: int) -> FalsificationLedger:
    _check_bits(y)
    counts = [explaining_count(y[:t], n) for t in range(len(y) + 1)]
    if counts[-1] == 0:
        raise UndefinedGainError(f"no length-{n} string explains {y!r}")
    steps = tuple(LedgerStep(t + 1, counts[t], counts[t + 1]) for t in range(len(y)))
    return FalsificationLedger(y, n, steps, n - log2(counts[0]))


@dataclass(frozen=True)
class TheoremEReport:
    y: str
    machine: str
    predictions: tuple[Fraction, ...]
    loss: Fraction
    prior: Fraction
    falsifiability: float
    complexity: int
    checks: tuple[Check, ...]

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.checks)


def verify_theorem_E(y: str) -> TheoremEReport:
    """Cumulative expected loss of Solomonoff prediction <= G <= K on the string y."""
    _check_bits(y)
    predictions = []
    for t in range(len(y)):
        q = solomonoff_predict(y[:t])
        predictions.append(q[int(y[t])])
    loss = sum((1 - q for q in predictions), Fraction(0))
    prior = solomonoff_prior_exact(y)
    g = hard_falsifiability_uni(y)
    k = kolmogorov_complexity(y)
    checks = [
        Check("E", "cumulative expected loss <= G", loss, g, slack=LOG_SLACK),
        Check("G<=K", "G <= K", g, k, slack=LOG_SLACK),
    ]
    for t, q in enumerate(predictions, start=1):
        checks.append(Check("E-step", f"1 - q_{t} <= -log2 q_{t}", 1 - q, -log2(q), slack=LOG_SLACK))
    return TheoremEReport(y, MACHINE_ID, tuple(predictions), loss, prior, g, k, tuple(checks))


def all_strings(max_len: int) -> Iterator[str]:
    """The empty string, then every binary string up to ``max_len`` by length and lex order."""
    for length in range(max_len + 1):
        for bits in product("01", repeat=length):
            yield "".join(bits)
