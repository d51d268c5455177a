"""Opacity of timed automata under partial observation, decided on bounded evolution sets."""

from .errors import (
    CheckError,
    ConfigError,
    DeterminismError,
    IllFormedSecretError,
    InvariantViolation,
    ModelError,
    OpacityError,
    ParseError,
    SemanticGraphUndefined,
)
from .model import (
    TRUE,
    And,
    Cmp,
    DiffCmp,
    Edge,
    Or,
    State,
    TimedAutomaton,
    Valuation,
    elapse,
    eval_constraint,
    reset,
)
from .modelfile import ModelDocument, parse_model, serialize_model
from .observation import (
    L_EPS,
    SILENT,
    U_EPS,
    CanonicalObservation,
    ObservationConfig,
    ObservationSequence,
    ObservedState,
    canonicalize,
    canonicalize_tau,
    elapse_observed,
    obs_equivalent,
    observe_action,
    observe_evolution,
    observe_state,
)
from .opacity import (
    ExplicitList,
    LocationVisit,
    PrivateRun,
    SecretSpec,
    TrailingDelayGreater,
    Verdict,
    WordInLanguage,
    check_automaton,
    check_ebto,
    check_eto,
    check_lbto,
    check_secret_closure,
    check_word_representable,
    convert_eto,
    convert_lbto,
)
from .report import Report, run_checks
from .runs import EtoSpec, Run, ends_at_first_final, is_private_run, is_public_run, normalize_run, run_duration
from .semantics import (
    Delay,
    EnumerationBudget,
    Event,
    Evolution,
    check_determinism,
    duration,
    enumerate_evolutions,
    event_successor,
    initial_state,
    time_successor,
    validate_evolution,
)
from .words import FiniteLanguage, PredicateLanguage, TimedWord, project_word, to_timed_word, word_preimage_member

__version__ = "0.1.0"
