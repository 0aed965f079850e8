"""Recorded inequality checks.

Verification routines never raise on a failed inequality; they return
:class:`Check` records so that sweeps can report every outcome with its
margin, and the caller decides what a failure means.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Number = Union[Fraction, float, int]

RELATIONS = ("<=", "==", "~=")


def _exact(v) -> bool:
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


@dataclass(frozen=True)
class Check:
    """``lhs <relation> rhs``; ``~=`` means ``|lhs - rhs| <= slack``."""

    tag: str
    statement: str
    lhs: Number
    rhs: Number
    relation: str = "<="
    slack: float = 0.0

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")

    @property
    def holds(self) -> bool:
        if self.relation == "==":
            return Fraction(self.lhs) == Fraction(self.rhs)
        if self.relation == "~=":
            return abs(float(self.lhs) - float(self.rhs)) <= self.slack
        if _exact(self.lhs) and _exact(self.rhs) and not self.slack:
            return self.lhs <= self.rhs
        return float(self.lhs) <= float(self.rhs) + self.slack

    @property
    def margin(self) -> Number:
        """rhs - lhs, exact when both sides are rational."""
        if _exact(self.lhs) and _exact(self.rhs):
            return Fraction(self.rhs) - Fraction(self.lhs)
        return float(self.rhs) - float(self.lhs)


def all_hold(checks) -> bool:
    return all(c.holds for c in checks)
