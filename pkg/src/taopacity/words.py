"""Timed words, projection onto observable events, and evolution -> word."""

from __future__ import annotations

import re
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigError
from .model import as_time, fmt_time
from .semantics import Delay, Event, Trace


@dataclass(frozen=True)
class TimedWord:
    pairs: tuple = ()

    def __post_init__(self):
        pairs = tuple((str(e), as_time(t)) for e, t in self.pairs)
        prev = Fraction(0)
        for e, t in pairs:
            if t < prev:
                raise ValueError(f"timestamps must be non-negative and non-decreasing: {pairs}")
            prev = t
        object.__setattr__(self, "pairs", pairs)

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def events(self) -> tuple:
        return tuple(e for e, _ in self.pairs)

    def key(self) -> tuple:
        return (len(self.pairs), self.pairs)

    def __str__(self):
        if not self.pairs:
            return "()"
        return "".join(f"({e},{fmt_time(t)})" for e, t in self.pairs)


EMPTY_WORD = TimedWord()

_PAIR = re.compile(r"\(\s*([A-Za-z_][\w]*)\s*,\s*([0-9]+(?:\.[0-9]+)?(?:/[0-9]+)?)\s*\)")


def parse_timed_word(text: str) -> TimedWord:
    """Parse ``(a,1)(b,100)``; ``()`` and ``ε`` denote the empty word."""
    text = text.strip()
    if text in ("", "()", "ε"):
        return EMPTY_WORD
    pairs, pos = [], 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _PAIR.match(text, pos)
        if not m:
            raise ValueError(f"malformed timed word at {text[pos:]!r}")
        pairs.append((m.group(1), Fraction(m.group(2))))
        pos = m.end()
    return TimedWord(tuple(pairs))


def to_timed_word(trace: Trace) -> TimedWord:
    """Event/timestamp pairs of an evolution or observation sequence.

    Timestamps accumulate preceding delays; masked events are skipped and
    delays after the last event are dropped.
    """
    t = Fraction(0)
    pairs = []
    for a in trace.actions:
        if isinstance(a, Delay):
            t += a.amount
        elif isinstance(a, Event):
            pairs.append((a.name, t))
    return TimedWord(tuple(pairs))


def project_word(word: TimedWord, observable_events: Iterable[str]) -> TimedWord:
    keep = frozenset(observable_events)
    return TimedWord(tuple(p for p in word.pairs if p[0] in keep))


# --------------------------------------------------------------------------
# languages


class TimedLanguage:
    def contains(self, word: TimedWord) -> bool:
        raise NotImplementedError

    def __contains__(self, word):
        return self.contains(word)


@dataclass(frozen=True)
class FiniteLanguage(TimedLanguage):
    words: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "words", frozenset(self.words))

    def contains(self, word):
        return word in self.words

    def __str__(self):
        return "word_in_list(" + ", ".join(str(w) for w in sorted(self.words, key=TimedWord.key)) + ")"


def _prefix_of(word, target):
    return word.pairs == target.pairs[: len(word.pairs)]


def _event_count_eq(word, event, count):
    return word.events.count(event) == count


PREDICATES = {
    "word_prefix_of": _prefix_of,
    "event_count_eq": _event_count_eq,
}


@dataclass(frozen=True)
class PredicateLanguage(TimedLanguage):
    """A language given by a named built-in membership predicate.

    ``word_prefix_of(w)`` holds for every prefix of ``w`` (including ``w``);
    ``event_count_eq(e, n)`` holds for words with exactly ``n`` occurrences
    of ``e``.
    """

    name: str
    params: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        if self.name not in PREDICATES:
            raise ConfigError(f"unknown language predicate {self.name!r}")

    def contains(self, word):
        try:
            fn = PREDICATES[self.name]
        except KeyError:
            raise ConfigError(f"unknown language predicate {self.name!r}") from None
        return fn(word, *self.params)

    def __str__(self):
        return f"{self.name}(" + ", ".join(str(p) for p in self.params) + ")"


def word_preimage_member(trace: Trace, language: TimedLanguage) -> bool:
    return language.contains(to_timed_word(trace))
