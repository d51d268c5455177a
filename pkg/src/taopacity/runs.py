"""Execution-time runs: one (delay, event) pair per discrete step."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import fmt_time
from .semantics import Delay, Event, Evolution


@dataclass(frozen=True)
class Run:
    initial: object
    steps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(((Fraction(d), e), s) for (d, e), s in self.steps))

    @property
    def states(self) -> tuple:
        return (self.initial,) + tuple(s for _, s in self.steps)

    @property
    def locations(self) -> tuple:
        return tuple(s.location for s in self.states)

    def __len__(self):
        return len(self.steps)

    def __str__(self):
        parts = [str(self.initial)]
        for (d, e), s in self.steps:
            parts.append(f"({fmt_time(d)}, {e})")
            parts.append(str(s))
        return ", ".join(parts)


@dataclass(frozen=True)
class EtoSpec:
    private_location: str
    final_location: str


def normalize_run(rho: Evolution) -> Run:
    """Fold the delays before each event into that event's step.

    Delays after the last event do not appear in the run.
    """
    pending = Fraction(0)
    steps = []
    for action, state in rho.steps:
        if isinstance(action, Delay):
            pending += action.amount
        elif isinstance(action, Event):
            steps.append(((pending, action.name), state))
            pending = Fraction(0)
    return Run(rho.initial, tuple(steps))


def run_duration(run: Run) -> Fraction:
    return sum((d for (d, _), _ in run.steps), Fraction(0))


def ends_at_first_final(rho: Evolution, final_location: str) -> bool:
    if not rho.steps or not isinstance(rho.steps[-1][0], Event):
        return False
    locations = [s.location for s in rho.states]
    return locations[-1] == final_location and final_location not in locations[:-1]


def _reaches_first_final(run: Run, final_location: str) -> bool:
    locs = run.locations
    return locs[-1] == final_location and final_location not in locs[:-1]


def is_private_run(run: Run, spec: EtoSpec) -> bool:
    return _reaches_first_final(run, spec.final_location) and spec.private_location in run.locations


def is_public_run(run: Run, spec: EtoSpec) -> bool:
    return _reaches_first_final(run, spec.final_location) and spec.private_location not in run.locations
