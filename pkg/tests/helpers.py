"""Shared fixtures-as-functions: corpus loading, hand-built automata, random automata."""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from taopacity import (
    TRUE,
    Cmp,
    Edge,
    EnumerationBudget,
    TimedAutomaton,
    check_determinism,
    enumerate_evolutions,
    parse_model,
)
from taopacity.semantics import Delay, Event, run_actions

CORPUS = ("fig1.ta", "fig2.ta", "fig3.ta", "fig4.ta")


def corpus_text(name: str) -> str:
    return (resources.files("taopacity") / "corpus" / name).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def corpus_doc(name: str):
    return parse_model(corpus_text(name))


@lru_cache(maxsize=None)
def corpus_evolutions(name: str, budget: str | None = None) -> tuple:
    doc = corpus_doc(name)
    b = doc.budgets[budget] if budget else next(iter(doc.budgets.values()))
    return enumerate_evolutions(doc.automaton, b)


def fig2() -> TimedAutomaton:
    return corpus_doc("fig2.ta").automaton


def fig4(c1: int = 1, c2: int = 2) -> TimedAutomaton:
    return TimedAutomaton(
        ["l0", "l1", "l2", "lf"],
        "l0",
        ["x"],
        ["a", "b"],
        [
            Edge("l0", "a", Cmp("x", "==", c1), {"x"}, "l1"),
            Edge("l1", "b", Cmp("x", "==", c2), set(), "lf"),
            Edge("l0", "a", Cmp("x", "==", c2), {"x"}, "l2"),
            Edge("l2", "b", Cmp("x", "==", c1), set(), "lf"),
        ],
    )


def fig3() -> TimedAutomaton:
    return corpus_doc("fig3.ta").automaton


def free_ab() -> TimedAutomaton:
    """One location, two unguarded self-loop events: everything is enabled."""
    return TimedAutomaton(["l"], "l", ["x"], ["a", "b"], [Edge("l", "a", TRUE, set(), "l"), Edge("l", "b", TRUE, {"x"}, "l")])


def acts(*items):
    """Shorthand: identifiers are events, numbers and "p/q" strings are delays."""
    return tuple(Event(a) if isinstance(a, str) and a.isidentifier() else Delay(Fraction(a)) for a in items)


def replay(A, *items):
    rho = run_actions(A, acts(*items))
    assert rho is not None, f"not executable: {items}"
    return rho


# --------------------------------------------------------------------------
# random small deterministic automata


def _random_guard(rng, clocks, constants):
    if rng.random() < 0.2:
        return TRUE
    k = rng.randint(0, 3)
    constants.add(k)
    return Cmp(rng.choice(clocks), rng.choice(["==", "==", "<=", ">=", "<", ">"]), k)


def random_automaton(rng: random.Random, allow_final_self_loops: bool = False, max_tries: int = 500):
    """A random deterministic TA with <= 4 locations, <= 2 clocks, constants <= 3.

    Returns ``(A, budget, private_location, final_location)``.  The last
    location is final and never initial.  Most draws start from a skeleton
    with one branch through the private location and one around it, so
    both private and public runs tend to exist; extra random edges are then
    added.  Unless ``allow_final_self_loops`` the final location has no
    self-loop.  Nondeterministic draws are discarded and resampled.
    """
    for _ in range(max_tries):
        n_loc = rng.randint(3, 4)
        locs = [f"l{i}" for i in range(n_loc)]
        clocks = ["x", "y"][: rng.randint(1, 2)]
        events = ["a", "b"][: rng.randint(1, 2)]
        final, priv = locs[-1], locs[1]
        constants = set()

        def edge(src, dst):
            resets = {c for c in clocks if rng.random() < 0.4}
            return Edge(src, rng.choice(events), _random_guard(rng, clocks, constants), resets, dst)

        edges = []
        if rng.random() < 0.85:
            edges += [edge("l0", priv), edge(priv, final)]
            mid = locs[2] if n_loc == 4 else "l0"
            edges += [edge("l0", mid), edge(mid, final)] if mid != "l0" else [edge("l0", final)]
        for _ in range(rng.randint(0, 3)):
            src, dst = rng.choice(locs), rng.choice(locs)
            if src == dst == final and not allow_final_self_loops:
                continue
            edges.append(edge(src, dst))
        if allow_final_self_loops and not any(e.source == e.target == final for e in edges):
            edges.append(Edge(final, rng.choice(events), TRUE, set(), final))
        invariants = {}
        for l in locs[1:-1]:
            if rng.random() < 0.2:
                k = rng.randint(1, 3)
                invariants[l] = Cmp(rng.choice(clocks), "<=", k)
                constants.add(k)
        A = TimedAutomaton(locs, "l0", clocks, events, edges, invariants)
        grid = sorted({Fraction(k) for k in constants if k > 0} | {Fraction(1, 2)})
        budget = EnumerationBudget(4, grid, include_zero_delay=rng.random() < 0.5)
        if check_determinism(A, budget):
            return A, budget, priv, final
    raise RuntimeError("could not draw a deterministic automaton")


# --------------------------------------------------------------------------
# random observation sequences (plain rng, for fixed-size sweeps)


def random_observation_sequence(rng: random.Random, max_len: int = 12):
    """Like the hypothesis strategy in the observation tests, driven by ``rng``.

    Sequences usually respect elapse consistency; some delays deliberately
    land on an unrelated clock value so the merge rule must refuse them.
    """
    from taopacity.observation import L_EPS, SILENT, U_EPS, ObservationSequence, ObservedState

    visible = rng.random() < 0.5
    val = Fraction(rng.randint(0, 2))

    def mk(loc, v):
        return ObservedState(loc, (("x", v if visible else U_EPS),))

    start = cur = mk(rng.choice(["p", L_EPS]), val)
    steps = []
    for _ in range(rng.randint(0, max_len)):
        kind = rng.choice(["delay", "delay", "zero", "silent", "event", "jump"])
        if kind in ("delay", "zero"):
            d = Fraction(0) if kind == "zero" else Fraction(rng.randint(1, 2))
            val = Fraction(rng.randint(0, 4)) if rng.randint(0, 5) == 0 else val + d
            cur = mk(cur.location, val)
            steps.append((Delay(d), cur))
        elif kind == "silent":
            loc = rng.choice(["p", "q", L_EPS]) if rng.random() < 0.5 else cur.location
            cur = mk(loc, val)
            steps.append((SILENT, cur))
        elif kind == "event":
            if rng.random() < 0.5:
                val = Fraction(0)
            cur = mk(rng.choice(["p", "q", L_EPS]), val)
            steps.append((Event("a"), cur))
        else:
            val = Fraction(rng.randint(0, 3))
            cur = mk(cur.location, val)
            steps.append((Delay(Fraction(rng.randint(0, 1))), cur))
    return ObservationSequence(start, tuple(steps))
