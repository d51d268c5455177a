"""Opacity checkers over finite evolution sets.

Every checker takes an explicit collection of generated evolutions (usually
from :func:`~taopacity.semantics.enumerate_evolutions`) rather than the
automaton.  A "not opaque" verdict is therefore sound, since the witness
really is an uncovered secret, while an "opaque" verdict only speaks for
the evolutions that were supplied.
"""

from __future__ import annotations

import random
from collections import defaultdict
from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import IllFormedSecretError
from .model import TimedAutomaton, as_time, fmt_time
from .observation import (
    ObservationConfig,
    canonical_key,
    canonicalize_tau,
    observation_class,
    random_tau_variant,
)
from .runs import EtoSpec, ends_at_first_final, is_private_run, is_public_run, normalize_run, run_duration
from .semantics import Delay, EnumerationBudget, Event, Evolution, enumerate_evolutions, evolution_key
from .words import TimedLanguage, TimedWord, project_word, to_timed_word


# --------------------------------------------------------------------------
# secrets


class SecretSpec:
    """A finite description of a set of secret evolutions."""

    def contains(self, rho: Evolution) -> bool:
        raise NotImplementedError

    def __call__(self, rho: Evolution) -> bool:
        return self.contains(rho)


@dataclass(frozen=True)
class LocationVisit(SecretSpec):
    location: str

    def contains(self, rho):
        return any(s.location == self.location for s in rho.states)

    def __str__(self):
        return f"location_visit({self.location})"


@dataclass(frozen=True)
class WordInLanguage(SecretSpec):
    language: TimedLanguage

    def contains(self, rho):
        return self.language.contains(to_timed_word(rho))

    def __str__(self):
        return str(self.language)


@dataclass(frozen=True)
class TrailingDelayGreater(SecretSpec):
    """Last event is ``after_event`` and the time elapsed since exceeds ``threshold``."""

    threshold: Fraction
    after_event: str

    def __post_init__(self):
        object.__setattr__(self, "threshold", as_time(self.threshold))

    def contains(self, rho):
        trailing = Fraction(0)
        for a in reversed(rho.actions):
            if isinstance(a, Event):
                return a.name == self.after_event and trailing > self.threshold
            trailing += a.amount
        return False

    def __str__(self):
        return f"trailing_delay_gt({fmt_time(self.threshold)}, after {self.after_event})"


@dataclass(frozen=True)
class PrivateRun(SecretSpec):
    """Evolutions ending on the first arrival at the final location via the private one.

    Judged on the delay-normal form of the evolution, so appending a zero
    delay after the arrival does not change secrecy.
    """

    spec: EtoSpec

    def contains(self, rho):
        rho = canonicalize_tau(rho)
        return ends_at_first_final(rho, self.spec.final_location) and is_private_run(normalize_run(rho), self.spec)

    def __str__(self):
        return f"private_run({self.spec.private_location}, {self.spec.final_location})"


def _as_action(a):
    if isinstance(a, (Event, Delay)):
        return a
    if isinstance(a, str) and a and (a[0].isalpha() or a[0] == "_"):
        return Event(a)
    return Delay(as_time(a))


@dataclass(frozen=True)
class ExplicitList(SecretSpec):
    """Secret iff the action sequence is literally one of ``patterns``."""

    patterns: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(
            self, "patterns", frozenset(tuple(_as_action(a) for a in p) for p in self.patterns)
        )

    def contains(self, rho):
        return rho.actions in self.patterns

    def __str__(self):
        pats = sorted(self.patterns, key=lambda p: tuple(_key(a) for a in p))
        return "explicit(" + ", ".join("[" + ", ".join(str(a) for a in p) + "]" for p in pats) + ")"


def _key(a):
    return (0, a.amount) if isinstance(a, Delay) else (1, a.name)


def convert_lbto(language: TimedLanguage) -> SecretSpec:
    return WordInLanguage(language)


def convert_eto(spec: EtoSpec) -> SecretSpec:
    return PrivateRun(spec)


# --------------------------------------------------------------------------
# verdicts


@dataclass
class Verdict:
    notion: str
    opaque: bool
    budget: EnumerationBudget | None = None
    bounded: bool = True
    witnesses: tuple = ()
    cover_map: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def witness(self):
        return self.witnesses[0] if self.witnesses else None

    def __bool__(self):
        return self.opaque


def _size_key(rho: Evolution) -> tuple:
    # shorter first, then lexicographic by actions
    return (len(rho), evolution_key(rho))


def check_secret_closure(evolutions: Iterable[Evolution], secret: SecretSpec, samples: int = 2, seed: int = 0):
    """Is secrecy invariant under delay fragmentation and zero-delay insertion?

    Returns ``(True, None)`` or ``(False, (rho, variant))`` for the first
    evolution whose secrecy differs from a delay-equivalent variant.  Each
    evolution is compared with its delay-normal form and with ``samples``
    random re-fragmentations.
    """
    rng = random.Random(seed)
    for rho in evolutions:
        verdict = secret.contains(rho)
        normal = canonicalize_tau(rho)
        if secret.contains(normal) != verdict:
            return False, (rho, normal)
        for _ in range(samples):
            variant = random_tau_variant(rho, rng, operations=rng.randint(1, 3))
            if secret.contains(variant) != verdict:
                return False, (rho, variant)
    return True, None


def check_ebto(
    evolutions: Iterable[Evolution],
    secret: SecretSpec,
    cfg: ObservationConfig,
    budget: EnumerationBudget | None = None,
    closure_samples: int = 2,
) -> Verdict:
    """Every secret evolution needs an observationally equivalent non-secret one."""
    evolutions = list(evolutions)
    closed, pair = check_secret_closure(evolutions, secret, samples=closure_samples)
    if not closed:
        raise IllFormedSecretError(pair)

    groups = defaultdict(lambda: ([], []))
    for rho in evolutions:
        groups[observation_class(rho, cfg)][0 if secret.contains(rho) else 1].append(rho)

    uncovered, cover_map = [], {}
    n_secret = 0
    for cls, (secrets, public) in groups.items():
        n_secret += len(secrets)
        if public:
            partner = min(public, key=_size_key)
            for rho in secrets:
                cover_map[rho] = partner
        else:
            uncovered.extend((canonical_key(cls), _size_key(rho), rho) for rho in secrets)
    uncovered.sort(key=lambda t: (t[0], t[1]))
    return Verdict(
        notion="ebto",
        opaque=not uncovered,
        budget=budget,
        witnesses=tuple(rho for _, _, rho in uncovered),
        cover_map=cover_map,
        details={
            "evolutions": len(evolutions),
            "secret_evolutions": n_secret,
            "observation_classes": len(groups),
            "observation": cfg.as_dict(),
        },
    )


def check_lbto(
    evolutions: Iterable[Evolution],
    language: TimedLanguage,
    observable_events: Iterable[str],
    budget: EnumerationBudget | None = None,
) -> Verdict:
    """Every generated secret word needs a generated non-secret word with equal projection."""
    observable_events = frozenset(observable_events)
    generators = {}
    for rho in evolutions:
        w = to_timed_word(rho)
        if w not in generators or _size_key(rho) < _size_key(generators[w]):
            generators[w] = rho
    secret_words = sorted((w for w in generators if language.contains(w)), key=TimedWord.key)
    public_by_projection = {}
    for w in sorted(generators, key=TimedWord.key):
        if not language.contains(w):
            public_by_projection.setdefault(project_word(w, observable_events), w)

    uncovered, cover_map = [], {}
    for w in secret_words:
        partner = public_by_projection.get(project_word(w, observable_events))
        if partner is None:
            uncovered.append(w)
        else:
            cover_map[w] = partner
    return Verdict(
        notion="lbto",
        opaque=not uncovered,
        budget=budget,
        witnesses=tuple(generators[w] for w in uncovered),
        cover_map=cover_map,
        details={
            "generated_words": len(generators),
            "secret_words": len(secret_words),
            "witness_words": [str(w) for w in uncovered],
            "observable_events": sorted(observable_events),
        },
    )


def eto_durations(evolutions: Iterable[Evolution], spec: EtoSpec) -> tuple:
    """Private and public run durations, each mapped to the evolutions realising them."""
    private, public = defaultdict(list), defaultdict(list)
    for rho in evolutions:
        if not ends_at_first_final(rho, spec.final_location):
            continue
        run = normalize_run(rho)
        d = run_duration(run)
        if is_private_run(run, spec):
            private[d].append(rho)
        elif is_public_run(run, spec):
            public[d].append(rho)
    return dict(private), dict(public)


def check_eto(
    evolutions: Iterable[Evolution],
    spec: EtoSpec,
    budget: EnumerationBudget | None = None,
) -> Verdict:
    """Weak execution-time opacity: private durations are a subset of public ones."""
    private, public = eto_durations(evolutions, spec)
    missing = sorted(set(private) - set(public))
    cover_map = {}
    for d, evos in private.items():
        if d in public:
            partner = min(public[d], key=_size_key)
            for rho in evos:
                cover_map[rho] = partner
    return Verdict(
        notion="eto",
        opaque=not missing,
        budget=budget,
        witnesses=tuple(min(private[d], key=_size_key) for d in missing),
        cover_map=cover_map,
        details={
            "private_durations": [fmt_time(d) for d in sorted(private)],
            "public_durations": [fmt_time(d) for d in sorted(public)],
            "uncovered_durations": [fmt_time(d) for d in missing],
        },
    )


def check_word_representable(evolutions: Iterable[Evolution], secret: SecretSpec):
    """Can the secret set be written as the preimage of some timed language?

    Within the given evolutions this holds iff evolutions sharing a timed
    word all agree on secrecy.  Returns ``(True, None)`` or
    ``(False, (secret_rho, public_rho))`` from the smallest mixed word.
    """
    by_word = defaultdict(lambda: ([], []))
    for rho in evolutions:
        by_word[to_timed_word(rho)][0 if secret.contains(rho) else 1].append(rho)
    for w in sorted(by_word, key=TimedWord.key):
        secrets, public = by_word[w]
        if secrets and public:
            return False, (min(secrets, key=_size_key), min(public, key=_size_key))
    return True, None


# --------------------------------------------------------------------------
# convenience


def check_automaton(
    A: TimedAutomaton,
    notion: str,
    budget: EnumerationBudget,
    secret=None,
    cfg: ObservationConfig | None = None,
) -> Verdict:
    """Enumerate ``A`` within ``budget`` and run one checker.

    ``secret`` is a :class:`SecretSpec` for ``ebto``, a timed language for
    ``lbto`` and an :class:`EtoSpec` for ``eto``; languages and ETO specs
    passed to ``ebto`` are converted first.
    """
    evos = enumerate_evolutions(A, budget)
    if notion == "ebto":
        if isinstance(secret, TimedLanguage):
            secret = convert_lbto(secret)
        elif isinstance(secret, EtoSpec):
            secret = convert_eto(secret)
        return check_ebto(evos, secret, cfg, budget)
    if notion == "lbto":
        language = secret.language if isinstance(secret, WordInLanguage) else secret
        return check_lbto(evos, language, cfg.observable_events, budget)
    if notion == "eto":
        spec = secret.spec if isinstance(secret, PrivateRun) else secret
        return check_eto(evos, spec, budget)
    raise ValueError(f"unknown notion {notion!r}")
