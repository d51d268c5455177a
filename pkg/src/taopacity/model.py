"""Timed automaton syntax: clock constraints, valuations, locations and edges.

Time is exact throughout: every delay and clock value is a
:class:`fractions.Fraction`.  Floats are rejected on purpose, since the
equivalences decided elsewhere in the package compare sums of delays for
exact equality.
"""

from __future__ import annotations

import operator
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

from .errors import ModelError

MASK_SYMBOL = "ε"

OPS = {
    "<": operator.lt,
    "<=": operator.le,
    "==": operator.eq,
    ">=": operator.ge,
    ">": operator.gt,
}
_OP_ALIASES = {"=": "==", "≤": "<=", "≥": ">="}


def as_time(value) -> Fraction:
    """Coerce ``value`` to an exact non-negative-capable rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not time values")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"inexact or unsupported time value {value!r}; use int, str or Fraction")


def fmt_time(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _normalize_op(op: str) -> str:
    op = _OP_ALIASES.get(op, op)
    if op not in OPS:
        raise ModelError(f"unknown comparison operator {op!r}")
    return op


def _check_natural(bound) -> int:
    if isinstance(bound, bool) or not isinstance(bound, int) or bound < 0:
        raise ModelError(f"clock constraint constants must be natural numbers, got {bound!r}")
    return bound


# --------------------------------------------------------------------------
# valuations


class Valuation(Mapping):
    """Immutable total map from clock names to non-negative rationals."""

    __slots__ = ("_items", "_lookup")

    def __init__(self, values: Mapping | Iterable = ()):
        pairs = values.items() if isinstance(values, Mapping) else values
        items = []
        for clock, val in pairs:
            val = as_time(val)
            if val < 0:
                raise ModelError(f"clock {clock!r} has negative value {val}")
            items.append((clock, val))
        items.sort(key=lambda kv: kv[0])
        self._items = tuple(items)
        self._lookup = dict(items)
        if len(self._lookup) != len(self._items):
            raise ModelError("duplicate clock in valuation")

    @classmethod
    def _trusted(cls, items: tuple) -> Valuation:
        # items already sorted, exact and non-negative
        self = cls.__new__(cls)
        self._items = items
        self._lookup = dict(items)
        return self

    @classmethod
    def zero(cls, clocks: Iterable[str]) -> Valuation:
        return cls((c, 0) for c in clocks)

    def __getitem__(self, clock):
        return self._lookup[clock]

    def __iter__(self) -> Iterator[str]:
        return (c for c, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __hash__(self) -> int:
        return hash(self._items)

    def __eq__(self, other) -> bool:
        if isinstance(other, Valuation):
            return self._items == other._items
        return NotImplemented

    def items_tuple(self) -> tuple:
        return self._items

    def __repr__(self) -> str:
        return f"Valuation({dict(self._items)!r})"

    def __str__(self) -> str:
        inner = ", ".join(f"{c}: {fmt_time(v)}" for c, v in self._items)
        return "{" + inner + "}"


_ZERO = Fraction(0)


def reset(u: Valuation, clocks: Iterable[str]) -> Valuation:
    """``u[r]``: clocks in ``clocks`` go to zero, the rest keep their value."""
    r = frozenset(clocks)
    missing = r - set(u)
    if missing:
        raise ModelError(f"reset of undeclared clocks {sorted(missing)}")
    return Valuation._trusted(tuple((c, _ZERO if c in r else v) for c, v in u.items_tuple()))


def elapse(u: Valuation, delay) -> Valuation:
    delay = as_time(delay)
    if delay < 0:
        raise ValueError(f"negative delay {delay}")
    if delay == 0:
        return u
    return Valuation._trusted(tuple((c, v + delay) for c, v in u.items_tuple()))


# --------------------------------------------------------------------------
# clock constraints


class Constraint:
    """Base of the constraint tree; see the concrete node classes below."""

    def holds(self, u: Mapping) -> bool:
        raise NotImplementedError

    def clocks(self) -> frozenset:
        return frozenset()

    def atoms(self) -> Iterator[Constraint]:
        yield self

    @property
    def disjunction_free(self) -> bool:
        return True

    def __and__(self, other: Constraint) -> Constraint:
        return And(self, other)

    def __or__(self, other: Constraint) -> Constraint:
        return Or(self, other)


def _value(u: Mapping, clock: str) -> Fraction:
    try:
        return u[clock]
    except KeyError:
        raise ModelError(f"constraint refers to undeclared clock {clock!r}") from None


@dataclass(frozen=True)
class TrueConstraint(Constraint):
    def holds(self, u):
        return True

    def __str__(self):
        return "true"


TRUE = TrueConstraint()


@dataclass(frozen=True)
class Cmp(Constraint):
    clock: str
    op: str
    bound: int

    def __post_init__(self):
        object.__setattr__(self, "op", _normalize_op(self.op))
        _check_natural(self.bound)

    def holds(self, u):
        return OPS[self.op](_value(u, self.clock), self.bound)

    def clocks(self):
        return frozenset([self.clock])

    def __str__(self):
        return f"{self.clock} {self.op} {self.bound}"


@dataclass(frozen=True)
class DiffCmp(Constraint):
    left: str
    right: str
    op: str
    bound: int

    def __post_init__(self):
        object.__setattr__(self, "op", _normalize_op(self.op))
        _check_natural(self.bound)

    def holds(self, u):
        return OPS[self.op](_value(u, self.left) - _value(u, self.right), self.bound)

    def clocks(self):
        return frozenset([self.left, self.right])

    def __str__(self):
        return f"{self.left} - {self.right} {self.op} {self.bound}"


@dataclass(frozen=True)
class And(Constraint):
    left: Constraint
    right: Constraint

    def holds(self, u):
        # both sides evaluated so undeclared clocks surface regardless of order
        a = self.left.holds(u)
        b = self.right.holds(u)
        return a and b

    def clocks(self):
        return self.left.clocks() | self.right.clocks()

    def atoms(self):
        yield from self.left.atoms()
        yield from self.right.atoms()

    @property
    def disjunction_free(self):
        return self.left.disjunction_free and self.right.disjunction_free

    def __str__(self):
        return f"{_wrap(self.left, Or)} and {_wrap(self.right, (Or, And))}"


@dataclass(frozen=True)
class Or(Constraint):
    left: Constraint
    right: Constraint

    def holds(self, u):
        a = self.left.holds(u)
        b = self.right.holds(u)
        return a or b

    def clocks(self):
        return self.left.clocks() | self.right.clocks()

    def atoms(self):
        yield from self.left.atoms()
        yield from self.right.atoms()

    @property
    def disjunction_free(self):
        return False

    def __str__(self):
        return f"{self.left} or {_wrap(self.right, Or)}"


def _wrap(c: Constraint, kind) -> str:
    return f"({c})" if isinstance(c, kind) else str(c)


def conjunction(*parts: Constraint) -> Constraint:
    parts = [p for p in parts if not isinstance(p, TrueConstraint)]
    if not parts:
        return TRUE
    result = parts[0]
    for p in parts[1:]:
        result = And(result, p)
    return result


def eval_constraint(u: Mapping, phi: Constraint) -> bool:
    return phi.holds(u)


# --------------------------------------------------------------------------
# automata


@dataclass(frozen=True)
class Edge:
    source: str
    event: str
    guard: Constraint = TRUE
    resets: frozenset = frozenset()
    target: str = ""

    def __post_init__(self):
        object.__setattr__(self, "resets", frozenset(self.resets))

    def __str__(self):
        text = f"{self.source} -> {self.target} on {self.event}"
        if not isinstance(self.guard, TrueConstraint):
            text += f" when {self.guard}"
        if self.resets:
            text += " reset " + ", ".join(sorted(self.resets))
        return text


@dataclass(frozen=True)
class State:
    location: str
    valuation: Valuation

    def __str__(self):
        return f"({self.location}, {self.valuation})"


@dataclass(frozen=True)
class TimedAutomaton:
    """A deterministic-candidate timed automaton with one initial location.

    ``invariants`` may be given as a dict; locations without an entry carry
    ``true``.  Invariants must be disjunction-free because the time
    transition is decided by checking both endpoints of the delay interval,
    which is only sound for convex constraints.
    """

    locations: tuple
    initial: str
    clocks: tuple
    events: tuple
    edges: tuple = ()
    invariants: tuple = field(default=())

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "locations", tuple(self.locations))
        set_(self, "clocks", tuple(self.clocks))
        set_(self, "events", tuple(self.events))
        set_(self, "edges", tuple(self.edges))
        inv = self.invariants
        inv = inv.items() if isinstance(inv, Mapping) else inv
        set_(self, "invariants", tuple(sorted(((l, c) for l, c in inv), key=lambda p: p[0])))
        self._validate()

    def _validate(self):
        for kind, names in (("location", self.locations), ("clock", self.clocks), ("event", self.events)):
            seen = set()
            for n in names:
                if not isinstance(n, str) or not n:
                    raise ModelError(f"{kind} ids must be non-empty strings, got {n!r}")
                if n == MASK_SYMBOL:
                    raise ModelError(f"{kind} id {n!r} is reserved for masking")
                if n in seen:
                    raise ModelError(f"duplicate {kind} {n!r}")
                seen.add(n)
        locs, clocks, events = set(self.locations), set(self.clocks), set(self.events)
        if self.initial not in locs:
            raise ModelError(f"initial location {self.initial!r} is not declared")
        for e in self.edges:
            if e.source not in locs or e.target not in locs:
                raise ModelError(f"edge {e} uses an undeclared location")
            if e.event not in events:
                raise ModelError(f"edge {e} uses undeclared event {e.event!r}")
            bad = (e.guard.clocks() | e.resets) - clocks
            if bad:
                raise ModelError(f"edge {e} uses undeclared clocks {sorted(bad)}")
        seen_inv = set()
        for loc, c in self.invariants:
            if loc not in locs:
                raise ModelError(f"invariant on undeclared location {loc!r}")
            if loc in seen_inv:
                raise ModelError(f"two invariants for location {loc!r}")
            seen_inv.add(loc)
            bad = c.clocks() - clocks
            if bad:
                raise ModelError(f"invariant of {loc!r} uses undeclared clocks {sorted(bad)}")
            if not c.disjunction_free:
                raise ModelError(
                    f"invariant of {loc!r} contains a disjunction; location invariants "
                    "must be disjunction-free so time transitions can be checked at the endpoints"
                )

    def invariant(self, location: str) -> Constraint:
        for loc, c in self.invariants:
            if loc == location:
                return c
        return TRUE

    def edges_from(self, location: str, event: str | None = None) -> list[Edge]:
        return [e for e in self.edges if e.source == location and (event is None or e.event == event)]

    def zero(self) -> Valuation:
        return Valuation.zero(self.clocks)

    def is_state(self, s: State) -> bool:
        return (
            s.location in self.locations
            and set(s.valuation) == set(self.clocks)
            and self.invariant(s.location).holds(s.valuation)
        )

    def state(self, location: str, **values) -> State:
        """Convenience constructor: unspecified clocks default to zero."""
        val = {c: values.get(c, 0) for c in self.clocks}
        extra = set(values) - set(self.clocks)
        if extra:
            raise ModelError(f"undeclared clocks {sorted(extra)}")
        return State(location, Valuation(val))
