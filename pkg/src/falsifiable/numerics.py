"""Exact rational helpers, base-2 logarithms, and a zero-sum matrix game solver.

All probabilities, risks and falsifiability values are :class:`fractions.Fraction`.
Logarithms are the only inexact quantities; every log is base 2 (bits).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import DomainError, InputError

Rational = Fraction

# Slack used wherever an inequality involves a logarithm.
LOG_SLACK = 1e-9

# log2(e); the constants of the data-dependent bounds are expressed through it.
LOG2_E = 1.0 / math.log(2.0)


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction; reject floats."""
    if isinstance(value, bool):
        raise InputError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError as exc:
            raise InputError(f"not a rational: {value!r}") from exc
    raise InputError(f"expected an exact rational, got {type(value).__name__} {value!r}")


def _power_of_two_exponent(k: int) -> int | None:
    if k > 0 and k & (k - 1) == 0:
        return k.bit_length() - 1
    return None


def log2(r) -> float:
    """Binary logarithm of a positive rational.

    Powers of two (including negative exponents) come back as exact
    integer-valued floats. Otherwise the argument is scaled by a power of two
    into [1/2, 2) before the float log, so the absolute error stays near
    machine epsilon even for huge numerators and denominators.
    """
    r = as_fraction(r)
    if r <= 0:
        raise DomainError(f"log2 undefined for {r}")
    p, q = r.numerator, r.denominator
    ep, eq = _power_of_two_exponent(p), _power_of_two_exponent(q)
    if ep is not None and eq is not None:
        return float(ep - eq)
    shift = p.bit_length() - q.bit_length()
    scaled = r / (Fraction(2) ** shift)
    return math.log2(float(scaled)) + shift


def fraction_str(r: Fraction) -> str:
    r = Fraction(r)
    return f"{r.numerator}/{r.denominator}"


@dataclass(frozen=True)
class MatrixGame:
    """Zero-sum game; the row player minimizes, the column player maximizes."""

    payoff: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(as_fraction(v) for v in row) for row in self.payoff)
        if not rows or not rows[0]:
            raise InputError("a matrix game needs at least one row and one column")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise InputError("payoff matrix is ragged")
        object.__setattr__(self, "payoff", rows)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.payoff), len(self.payoff[0])

    def scaled(self, c) -> "MatrixGame":
        c = as_fraction(c)
        return MatrixGame(tuple(tuple(c * v for v in row) for row in self.payoff))


class GameSolution(NamedTuple):
    value: Fraction
    row_strategy: tuple[Fraction, ...]
    column_strategy: tuple[Fraction, ...]


def expected_payoffs(game: MatrixGame, row_strategy: Sequence[Fraction]) -> list[Fraction]:
    """Expected payoff of every pure column against a row mixture."""
    rows, cols = game.shape
    return [sum(row_strategy[i] * game.payoff[i][j] for i in range(rows)) for j in range(cols)]


def solve_matrix_game(game: MatrixGame) -> GameSolution:
    """Exact minimax value and optimal mixtures of a finite zero-sum game.

    The payoff matrix is affinely normalized to entries in [1, 2], which makes
    the result independent of positive rescaling, and the classical reduction
    ``max 1.u  s.t.  A^T u <= 1, u >= 0`` is solved by a Fraction tableau
    simplex with Bland's rule. Every pivot lands on a basic solution, so the
    value and both strategies are exact rationals.
    """
    rows, cols = game.shape
    entries = [v for row in game.payoff for v in row]
    lo, hi = min(entries), max(entries)
    if lo == hi:
        row_strategy = tuple(Fraction(int(i == 0)) for i in range(rows))
        column_strategy = tuple(Fraction(int(j == 0)) for j in range(cols))
        return GameSolution(lo, row_strategy, column_strategy)
    span = hi - lo
    a = [[(game.payoff[i][j] - lo) / span + 1 for j in range(cols)] for i in range(rows)]

    # Tableau: one constraint per column j, variables u_0..u_{rows-1}, slacks s_0..s_{cols-1}.
    nvars = rows + cols
    tableau = []
    for j in range(cols):
        coeffs = [a[i][j] for i in range(rows)] + [Fraction(int(k == j)) for k in range(cols)]
        tableau.append(coeffs + [Fraction(1)])
    basis = [rows + j for j in range(cols)]
    reduced = [Fraction(1)] * rows + [Fraction(0)] * cols
    objective = Fraction(0)

    while True:
        entering = next((k for k in range(nvars) if reduced[k] > 0), None)
        if entering is None:
            break
        best = None
        for r, line in enumerate(tableau):
            if line[entering] > 0:
                ratio = line[-1] / line[entering]
                key = (ratio, basis[r])
                if best is None or key < best[0]:
                    best = (key, r)
        # a[i][j] >= 1 bounds every u_i, so some row always qualifies.
        pivot_row = best[1]
        pivot = tableau[pivot_row][entering]
        tableau[pivot_row] = [v / pivot for v in tableau[pivot_row]]
        for r, line in enumerate(tableau):
            if r != pivot_row and line[entering] != 0:
                factor = line[entering]
                tableau[r] = [v - factor * w for v, w in zip(line, tableau[pivot_row])]
        factor = reduced[entering]
        reduced = [v - factor * w for v, w in zip(reduced, tableau[pivot_row][:-1])]
        objective += factor * tableau[pivot_row][-1]
        basis[pivot_row] = entering

    u = [Fraction(0)] * rows
    for r, var in enumerate(basis):
        if var < rows:
            u[var] = tableau[r][-1]
    total = sum(u)
    normalized_value = 1 / total
    row_strategy = tuple(x * normalized_value for x in u)
    duals = [-reduced[rows + j] for j in range(cols)]
    column_strategy = tuple(y * normalized_value for y in duals)
    value = (normalized_value - 1) * span + lo
    return GameSolution(value, row_strategy, column_strategy)
