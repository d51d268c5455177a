from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from helpers import corpus_evolutions, fig2, free_ab, replay
from taopacity import (
    ConfigError,
    FiniteLanguage,
    ObservationConfig,
    PredicateLanguage,
    TimedWord,
    canonicalize,
    observe_evolution,
    project_word,
    to_timed_word,
    word_preimage_member,
)
from taopacity.model import State, elapse
from taopacity.semantics import Delay, Event, Evolution
from taopacity.words import EMPTY_WORD, parse_timed_word

W = parse_timed_word
OMEGA1 = W("(a,1)")
OMEGA2 = W("(a,1)(b,100)")


class TestTimedWord:
    def test_parse_and_print(self):
        w = W("(a, 3/2)(b,2.5)")
        assert w.pairs == (("a", Fraction(3, 2)), ("b", Fraction(5, 2)))
        assert str(w) == "(a,3/2)(b,5/2)"
        assert str(EMPTY_WORD) == "()"
        assert W("()") == W("ε") == W("") == EMPTY_WORD

    def test_decreasing_timestamps_rejected(self):
        with pytest.raises(ValueError):
            TimedWord((("a", 2), ("b", 1)))

    def test_malformed(self):
        with pytest.raises(ValueError):
            W("(a 1)")


class TestToTimedWord:
    def test_worked_example(self):
        rho = replay(free_ab(), "3/2", "a", "7/10", "3/10", "b", "1/5")
        assert to_timed_word(rho) == TimedWord((("a", Fraction(3, 2)), ("b", Fraction(5, 2))))

    def test_zero_length(self):
        assert to_timed_word(Evolution(replay(fig2()).initial)) == EMPTY_WORD

    def test_fig2_full_run(self):
        assert to_timed_word(replay(fig2(), 1, "a", 99, "b")) == OMEGA2

    def test_observation_sequences_skip_silent(self):
        rho = replay(fig2(), 1, "a", 99, "b")
        o = observe_evolution(rho, ObservationConfig.of(events={"a"}))
        assert to_timed_word(o) == OMEGA1


class TestProjection:
    def test_hides_b(self):
        assert project_word(OMEGA2, {"a"}) == OMEGA1

    def test_all_events(self):
        assert project_word(OMEGA2, {"a", "b"}) == OMEGA2

    def test_no_events(self):
        assert project_word(OMEGA2, set()) == EMPTY_WORD
        assert project_word(EMPTY_WORD, {"a"}) == EMPTY_WORD


class TestPreimage:
    def test_trailing_delay_still_omega1(self):
        rho = replay(fig2(), 1, "a", 50)
        assert word_preimage_member(rho, FiniteLanguage({OMEGA1}))

    def test_full_run_is_omega2(self):
        rho = replay(fig2(), 1, "a", 99, "b")
        assert word_preimage_member(rho, FiniteLanguage({OMEGA2}))
        assert not word_preimage_member(rho, FiniteLanguage({OMEGA1}))

    def test_empty_language(self):
        assert not word_preimage_member(replay(fig2(), 1, "a"), FiniteLanguage())

    def test_predicates(self):
        prefix = PredicateLanguage("word_prefix_of", (OMEGA2,))
        assert prefix.contains(OMEGA1) and prefix.contains(EMPTY_WORD) and prefix.contains(OMEGA2)
        assert not prefix.contains(W("(a,2)"))
        count = PredicateLanguage("event_count_eq", ("a", 2))
        assert count.contains(W("(a,1)(b,1)(a,3)")) and not count.contains(OMEGA1)

    def test_unknown_predicate(self):
        with pytest.raises(ConfigError):
            PredicateLanguage("regex", ())

    def test_rendering(self):
        assert str(FiniteLanguage({OMEGA2, OMEGA1})) == "word_in_list((a,1), (a,1)(b,100))"


ALL_EVOS = corpus_evolutions("fig2.ta")[:2000] + corpus_evolutions("fig4.ta") + corpus_evolutions("fig3.ta")


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(ALL_EVOS), st.sets(st.sampled_from(["a", "b"])))
def test_observed_word_is_projected_word(rho, sigma_obs):
    cfg = ObservationConfig.of(events=sigma_obs)
    assert to_timed_word(observe_evolution(rho, cfg)) == project_word(to_timed_word(rho), sigma_obs)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(ALL_EVOS), st.sets(st.sampled_from(["a", "b"])), st.sets(st.sampled_from(["lf", "l1", "l2"])))
def test_y_invariant_under_canonicalization(rho, sigma_obs, locs):
    o = observe_evolution(rho, ObservationConfig.of(locations=locs & {s.location for s in rho.states}, events=sigma_obs))
    assert to_timed_word(canonicalize(o)) == to_timed_word(o)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(ALL_EVOS), st.fractions(min_value=0, max_value=20, max_denominator=4))
def test_suffix_blindness_and_monotone_timestamps(rho, extra):
    longer = rho.then(Delay(extra), State(rho.last.location, elapse(rho.last.valuation, extra)))
    w = to_timed_word(rho)
    assert to_timed_word(longer) == w
    stamps = [t for _, t in w]
    assert stamps == sorted(stamps)


def test_word_matches_oracle():
    for rho in ALL_EVOS[:500]:
        raw = [a.name if isinstance(a, Event) else a.amount for a in rho.actions]
        assert to_timed_word(rho).pairs == oracles.timed_word(raw)
