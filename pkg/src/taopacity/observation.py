"""Partial observation of evolutions and the equivalence an observer induces.

An observer sees every delay, but only the locations, clocks and events
listed in an :class:`ObservationConfig`; everything else is replaced by a
mask symbol.  Two evolutions look the same to the observer when their
masked sequences reduce to the same canonical form under three rewrites:

* ``silent``  drop ``o --ε--> o`` (a masked event between equal observed states)
* ``merge``   fuse two consecutive delays into one
* ``zero``    drop ``o --0--> o``

Each rewrite removes one step, so reduction always terminates.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigError
from .model import MASK_SYMBOL, State, TimedAutomaton, as_time, elapse, fmt_time
from .semantics import Delay, Event, Evolution, Trace, action_key


class Mask(enum.Enum):
    LOCATION = "l_ε"
    VALUE = "u_ε"
    EVENT = "σ_ε"

    def __str__(self):
        return MASK_SYMBOL

    def __repr__(self):
        return self.value


L_EPS = Mask.LOCATION
U_EPS = Mask.VALUE
SILENT = Mask.EVENT


@dataclass(frozen=True)
class ObservationConfig:
    observable_locations: frozenset = frozenset()
    observable_clocks: frozenset = frozenset()
    observable_events: frozenset = frozenset()

    def __post_init__(self):
        for name in ("observable_locations", "observable_clocks", "observable_events"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))

    @classmethod
    def of(cls, locations=(), clocks=(), events=()) -> ObservationConfig:
        return cls(frozenset(locations), frozenset(clocks), frozenset(events))

    @classmethod
    def full(cls, A: TimedAutomaton) -> ObservationConfig:
        return cls(A.locations, A.clocks, A.events)

    def validate(self, A: TimedAutomaton) -> None:
        for label, subset, universe in (
            ("locations", self.observable_locations, A.locations),
            ("clocks", self.observable_clocks, A.clocks),
            ("events", self.observable_events, A.events),
        ):
            extra = subset - set(universe)
            if extra:
                raise ConfigError(f"observable {label} {sorted(extra)} are not declared")

    def as_dict(self) -> dict:
        return {
            "locations": sorted(self.observable_locations),
            "clocks": sorted(self.observable_clocks),
            "events": sorted(self.observable_events),
        }


def _fmt_value(v) -> str:
    return str(v) if isinstance(v, Mask) else fmt_time(v)


@dataclass(frozen=True)
class ObservedState:
    location: object
    valuation: tuple = ()

    def __post_init__(self):
        val = self.valuation
        pairs = val.items() if isinstance(val, Mapping) else val
        object.__setattr__(self, "valuation", tuple(sorted(pairs, key=lambda kv: kv[0])))

    def value(self, clock: str):
        return dict(self.valuation)[clock]

    def key(self) -> tuple:
        loc = (0, "") if isinstance(self.location, Mask) else (1, self.location)
        vals = tuple((c, (0, 0) if isinstance(v, Mask) else (1, v)) for c, v in self.valuation)
        return (loc, vals)

    def __str__(self):
        inner = ", ".join(f"{c}: {_fmt_value(v)}" for c, v in self.valuation)
        return f"({self.location}, {{{inner}}})"


class ObservationSequence(Trace):
    """Image of an evolution under the observation mapping."""


class CanonicalObservation(ObservationSequence):
    """An observation sequence on which no rewrite applies."""


# --------------------------------------------------------------------------
# the observation mapping


def observe_state(s: State, cfg: ObservationConfig) -> ObservedState:
    loc = s.location if s.location in cfg.observable_locations else L_EPS
    val = tuple((c, v if c in cfg.observable_clocks else U_EPS) for c, v in s.valuation.items_tuple())
    return ObservedState(loc, val)


def observe_action(action, cfg: ObservationConfig):
    if isinstance(action, Delay):
        return action
    if isinstance(action, Event):
        return action if action.name in cfg.observable_events else SILENT
    raise TypeError(f"not an action: {action!r}")


def observe_evolution(rho: Evolution, cfg: ObservationConfig) -> ObservationSequence:
    return ObservationSequence(
        observe_state(rho.initial, cfg),
        tuple((observe_action(a, cfg), observe_state(s, cfg)) for a, s in rho.steps),
    )


def elapse_observed(v, delay) -> tuple:
    """Let ``delay`` pass on an observed valuation; masked clocks stay masked."""
    delay = as_time(delay)
    if delay < 0:
        raise ValueError(f"negative delay {delay}")
    pairs = v.items() if isinstance(v, Mapping) else v
    return tuple(sorted(((c, x if isinstance(x, Mask) else x + delay) for c, x in pairs), key=lambda kv: kv[0]))


def _advance(state, delay: Fraction):
    if isinstance(state, ObservedState):
        if delay == 0:
            return state
        return ObservedState(
            state.location,
            tuple((c, x if isinstance(x, Mask) else x + delay) for c, x in state.valuation),
        )
    return State(state.location, elapse(state.valuation, delay))


# --------------------------------------------------------------------------
# rewrites


RULES = ("silent", "merge", "zero")


def _applies(trace: Trace, rule: str, i: int) -> bool:
    states = trace.states
    steps = trace.steps
    if i < 0 or i >= len(steps):
        return False
    action = steps[i][0]
    if rule == "silent":
        return action is SILENT and states[i] == states[i + 1]
    if rule == "zero":
        return isinstance(action, Delay) and action.amount == 0 and states[i] == states[i + 1]
    if rule == "merge":
        if i + 1 >= len(steps):
            return False
        nxt = steps[i + 1][0]
        return (
            isinstance(action, Delay)
            and isinstance(nxt, Delay)
            and _advance(states[i], action.amount) == states[i + 1]
            and _advance(states[i + 1], nxt.amount) == states[i + 2]
        )
    raise ValueError(f"unknown rewrite rule {rule!r}")


def rewrite_sites(trace: Trace, rules: Iterable[str] = RULES) -> list:
    """Every ``(rule, index)`` at which a single rewrite applies."""
    rules = tuple(rules)
    return [(r, i) for i in range(len(trace)) for r in rules if _applies(trace, r, i)]


def apply_rewrite(trace: Trace, rule: str, i: int) -> Trace:
    if not _applies(trace, rule, i):
        raise ValueError(f"rule {rule!r} does not apply at step {i}")
    steps = list(trace.steps)
    if rule == "merge":
        total = steps[i][0].amount + steps[i + 1][0].amount
        steps[i : i + 2] = [(Delay(total), steps[i + 1][1])]
    else:
        del steps[i]
    return type(trace)(trace.initial, tuple(steps))


def _reduce(trace: Trace, silent: bool) -> tuple:
    states = [trace.initial]
    out = []
    for action, target in trace.steps:
        cur = states[-1]
        if target == cur:
            if isinstance(action, Delay) and action.amount == 0:
                continue
            if silent and action is SILENT:
                continue
        out.append((action, target))
        states.append(target)
        while (
            len(out) >= 2
            and isinstance(out[-1][0], Delay)
            and isinstance(out[-2][0], Delay)
            and _advance(states[-3], out[-2][0].amount) == states[-2]
            and _advance(states[-2], out[-1][0].amount) == states[-1]
        ):
            merged = (Delay(out[-2][0].amount + out[-1][0].amount), out[-1][1])
            del out[-2:]
            del states[-2:]
            out.append(merged)
            states.append(merged[1])
    return tuple(out)


def canonicalize(o: ObservationSequence) -> CanonicalObservation:
    """Normal form of ``o`` under the silent, merge and zero rewrites.

    Reduces in one left-to-right pass: deleting a step never changes the
    state it starts from, so earlier decisions stay valid.
    """
    return CanonicalObservation(o.initial, _reduce(o, silent=True))


def canonicalize_tau(rho: Evolution) -> Evolution:
    """Normal form of a concrete evolution under delay merging and zero removal."""
    return type(rho)(rho.initial, _reduce(rho, silent=False))


def canonical_key(o: Trace) -> tuple:
    """Total order on observation sequences (locations, rationals, action tags)."""
    head = o.initial.key()
    return (head,) + tuple((action_key(a), s.key()) for a, s in o.steps)


def observation_class(rho: Evolution, cfg: ObservationConfig) -> CanonicalObservation:
    return canonicalize(observe_evolution(rho, cfg))


def obs_equivalent(rho1: Evolution, rho2: Evolution, cfg: ObservationConfig) -> bool:
    return observation_class(rho1, cfg) == observation_class(rho2, cfg)


def random_tau_variant(rho: Evolution, rng, operations: int = 2) -> Evolution:
    """A random delay-equivalent variant of ``rho``.

    Applies ``operations`` random edits, each one of: split a positive delay
    in two, insert a zero delay, or merge two consecutive delays.
    """
    steps = list(rho.steps)
    for _ in range(operations):
        states = [rho.initial] + [s for _, s in steps]
        splittable = [i for i, (a, _) in enumerate(steps) if isinstance(a, Delay) and a.amount > 0]
        mergeable = [
            i for i in range(len(steps) - 1)
            if isinstance(steps[i][0], Delay) and isinstance(steps[i + 1][0], Delay)
        ]
        choice = rng.choice(["split", "zero", "merge"])
        if choice == "split" and splittable:
            i = rng.choice(splittable)
            amount = steps[i][0].amount
            first = amount * Fraction(rng.randint(1, 9), 10)
            mid = _advance(states[i], first)
            steps[i : i + 1] = [(Delay(first), mid), (Delay(amount - first), steps[i][1])]
        elif choice == "merge" and mergeable:
            i = rng.choice(mergeable)
            total = steps[i][0].amount + steps[i + 1][0].amount
            steps[i : i + 2] = [(Delay(total), steps[i + 1][1])]
        else:
            i = rng.randint(0, len(steps))
            steps.insert(i, (Delay(0), states[i]))
    return type(rho)(rho.initial, tuple(steps))
