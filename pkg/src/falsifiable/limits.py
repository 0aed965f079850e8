"""Ceilings on exact enumeration.

Every exponential routine checks its size against the active
:class:`Ceilings` and raises :class:`~falsifiable.errors.CapacityError`
when over. Ceilings can be raised for a block of code with
:func:`override`; the CLI only allows that behind ``--unsafe``.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, fields, replace

from .errors import CapacityError, InputError


@dataclass(frozen=True)
class Ceilings:
    rademacher_n: int = 20
    sweep_domain: int = 4
    game_rounds: int = 4
    game_events: int = 8
    cover_depth: int = 3
    cover_theory: int = 8
    tree_depth: int = 3
    lifted_depth: int = 3
    program_len: int = 24
    kolmogorov_len: int = 12
    multiset_states: int = 1 << 20


DEFAULT = Ceilings()
_current: contextvars.ContextVar[Ceilings] = contextvars.ContextVar("ceilings", default=DEFAULT)


def current() -> Ceilings:
    return _current.get()


def names() -> list[str]:
    return [f.name for f in fields(Ceilings)]


@contextlib.contextmanager
def override(**changes: int):
    unknown = set(changes) - set(names())
    if unknown:
        raise InputError(f"unknown ceiling(s): {', '.join(sorted(unknown))}")
    token = _current.set(replace(current(), **changes))
    try:
        yield current()
    finally:
        _current.reset(token)


def check(name: str, value: int) -> None:
    maximum = getattr(current(), name)
    if value > maximum:
        raise CapacityError(name, value, maximum)
