"""The semantic graph of a timed automaton, explored over a finite delay grid.

States pair a location with a concrete valuation; actions are events or
delays.  The graph itself is infinite, so everything here works either
pointwise (successor functions, validation) or over a bounded
:class:`EnumerationBudget`.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from fractions import Fraction

from .errors import DeterminismError, ModelError, SemanticGraphUndefined
from .model import State, TimedAutomaton, as_time, elapse, fmt_time, reset


@dataclass(frozen=True)
class Event:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Delay:
    amount: Fraction

    def __post_init__(self):
        amount = as_time(self.amount)
        if amount < 0:
            raise ValueError(f"negative delay {amount}")
        object.__setattr__(self, "amount", amount)

    def __str__(self):
        return fmt_time(self.amount)


def action_key(action) -> tuple:
    """Sort key for actions: delays (by amount) before events (by name)."""
    if isinstance(action, Delay):
        return (0, action.amount)
    if isinstance(action, Event):
        return (1, action.name)
    return (2, "")


@dataclass(frozen=True)
class Trace:
    """An alternating sequence ``s0 a0 s1 ... a(n-1) sn``.

    Length is the number of actions, so a single state has length 0.
    """

    initial: object
    steps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple((a, s) for a, s in self.steps))

    def __len__(self):
        return len(self.steps)

    @property
    def states(self) -> tuple:
        return (self.initial,) + tuple(s for _, s in self.steps)

    @property
    def actions(self) -> tuple:
        return tuple(a for a, _ in self.steps)

    @property
    def last(self):
        return self.steps[-1][1] if self.steps else self.initial

    def prefix(self, n: int):
        return type(self)(self.initial, self.steps[:n])

    def then(self, action, state):
        return type(self)(self.initial, self.steps + ((action, state),))

    def __str__(self):
        parts = [str(self.initial)]
        for a, s in self.steps:
            parts.append(f"--{a}--> {s}")
        return " ".join(parts)


class Evolution(Trace):
    """A path of the semantic graph over concrete states."""


def evolution_key(rho: Trace) -> tuple:
    return tuple(action_key(a) for a in rho.actions)


@dataclass(frozen=True)
class EnumerationBudget:
    max_steps: int
    delay_grid: tuple
    include_zero_delay: bool = False
    alternating: bool = False

    def __post_init__(self):
        if isinstance(self.max_steps, bool) or not isinstance(self.max_steps, int) or self.max_steps < 0:
            raise ModelError(f"max_steps must be a natural number, got {self.max_steps!r}")
        grid = sorted({as_time(d) for d in self.delay_grid})
        if not grid:
            raise ModelError("delay grid must not be empty")
        if grid[0] <= 0:
            raise ModelError("delay grid values must be positive")
        object.__setattr__(self, "delay_grid", tuple(grid))

    def delays(self) -> tuple:
        zero = (Fraction(0),) if self.include_zero_delay else ()
        return zero + self.delay_grid

    def as_dict(self) -> dict:
        return {
            "steps": self.max_steps,
            "grid": [fmt_time(d) for d in self.delay_grid],
            "zero_delay": self.include_zero_delay,
            "alternating": self.alternating,
        }


# --------------------------------------------------------------------------
# transitions


def initial_state(A: TimedAutomaton) -> State:
    zero = A.zero()
    if not A.invariant(A.initial).holds(zero):
        raise SemanticGraphUndefined(
            f"semantic graph undefined: zero valuation violates invariant "
            f"{A.invariant(A.initial)} of initial location {A.initial!r}"
        )
    return State(A.initial, zero)


def event_successors(A: TimedAutomaton, s: State, event: str) -> set:
    """All states reachable from ``s`` by one ``event`` transition."""
    if event not in A.events:
        raise ModelError(f"undeclared event {event!r}")
    u = s.valuation
    if not A.invariant(s.location).holds(u):
        return set()
    out = set()
    for e in A.edges_from(s.location, event):
        if not e.guard.holds(u):
            continue
        u2 = reset(u, e.resets)
        if A.invariant(e.target).holds(u2):
            out.add(State(e.target, u2))
    return out


def event_successor(A: TimedAutomaton, s: State, event: str) -> State | None:
    succ = event_successors(A, s, event)
    if len(succ) > 1:
        raise DeterminismError(s, event, sorted(succ, key=str))
    return next(iter(succ), None)


def time_successor(A: TimedAutomaton, s: State, delay) -> State | None:
    delay = as_time(delay)
    if delay < 0:
        raise ValueError(f"negative delay {delay}")
    inv = A.invariant(s.location)
    if not inv.holds(s.valuation):
        return None
    if delay == 0:
        return s
    # invariants are disjunction-free, hence convex along the time ray
    u2 = elapse(s.valuation, delay)
    if not inv.holds(u2):
        return None
    return State(s.location, u2)


def step(A: TimedAutomaton, s: State, action) -> State | None:
    if isinstance(action, Delay):
        return time_successor(A, s, action.amount)
    if isinstance(action, Event):
        return event_successor(A, s, action.name)
    raise TypeError(f"not an action: {action!r}")


def first_invalid_step(A: TimedAutomaton, rho: Evolution, generated: bool = True) -> int | None:
    """Index of the first step that is not a transition, or ``None``.

    ``-1`` denotes a bad starting state (not a state of ``A``, or not the
    initial state when ``generated`` is requested).
    """
    if not A.is_state(rho.initial):
        return -1
    if generated:
        try:
            if rho.initial != initial_state(A):
                return -1
        except SemanticGraphUndefined:
            return -1
    current = rho.initial
    for i, (action, target) in enumerate(rho.steps):
        if isinstance(action, Event):
            ok = target in event_successors(A, current, action.name)
        elif isinstance(action, Delay):
            ok = time_successor(A, current, action.amount) == target
        else:
            ok = False
        if not ok:
            return i
        current = target
    return None


def validate_evolution(A: TimedAutomaton, rho: Evolution, generated: bool = True) -> bool:
    return first_invalid_step(A, rho, generated) is None


def run_actions(A: TimedAutomaton, actions: Iterable, start: State | None = None) -> Evolution | None:
    """Replay ``actions`` from ``start`` (default: initial state)."""
    s = initial_state(A) if start is None else start
    rho = Evolution(s)
    for a in actions:
        if not isinstance(a, (Event, Delay)):
            a = Event(a) if isinstance(a, str) and a in A.events else Delay(a)
        nxt = step(A, s, a)
        if nxt is None:
            return None
        rho = rho.then(a, nxt)
        s = nxt
    return rho


def duration(rho: Trace) -> Fraction:
    return sum((a.amount for a in rho.actions if isinstance(a, Delay)), Fraction(0))


# --------------------------------------------------------------------------
# bounded exploration


def _children(A: TimedAutomaton, s: State, last_action, budget: EnumerationBudget) -> Iterator:
    if not (budget.alternating and isinstance(last_action, Delay)):
        for d in budget.delays():
            nxt = time_successor(A, s, d)
            if nxt is not None:
                yield Delay(d), nxt
    for ev in sorted(A.events):
        nxt = event_successor(A, s, ev)
        if nxt is not None:
            yield Event(ev), nxt


def iter_evolutions(A: TimedAutomaton, budget: EnumerationBudget) -> Iterator[Evolution]:
    """Depth-first, lexicographic by action sequence; prefixes come first."""
    root = Evolution(initial_state(A))
    stack = [root]
    while stack:
        rho = stack.pop()
        yield rho
        if len(rho) >= budget.max_steps:
            continue
        last_action = rho.steps[-1][0] if rho.steps else None
        kids = [rho.then(a, s) for a, s in _children(A, rho.last, last_action, budget)]
        stack.extend(reversed(kids))


def enumerate_evolutions(A: TimedAutomaton, budget: EnumerationBudget) -> tuple:
    """All generated evolutions within ``budget``.

    The automaton is required to be deterministic, so distinct action
    sequences give distinct evolutions and no deduplication pass is needed;
    a determinism violation raises :class:`DeterminismError`.
    """
    return tuple(iter_evolutions(A, budget))


def reachable_states(A: TimedAutomaton, budget: EnumerationBudget) -> set:
    """States visited by some evolution within ``budget``."""
    depth = {initial_state(A): 0}
    frontier = [initial_state(A)]
    for level in range(budget.max_steps):
        nxt = []
        for s in frontier:
            for _, t in _children(A, s, None, budget):
                if t not in depth:
                    depth[t] = level + 1
                    nxt.append(t)
        frontier = nxt
    return set(depth)


def check_determinism(A: TimedAutomaton, budget: EnumerationBudget) -> bool:
    """True iff no state reachable within ``budget`` has two successors for one event.

    The single-initial-location half of determinism holds by construction
    of :class:`TimedAutomaton`.
    """
    try:
        start = initial_state(A)
    except SemanticGraphUndefined:
        return False
    seen = {start}
    frontier = [start]
    for _ in range(budget.max_steps + 1):
        nxt = []
        for s in frontier:
            for ev in A.events:
                succ = event_successors(A, s, ev)
                if len(succ) > 1:
                    return False
                for t in succ:
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
            for d in budget.delays():
                t = time_successor(A, s, d)
                if t is not None and t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return True
