"""Reader and writer for the line-oriented ``.ta`` model format.

A document declares one automaton followed by named observation configs,
secrets, budgets and check requests::

    clocks x;
    events a, b;
    location l0 init;
    location l1 invariant x <= 5;
    edge l0 -> l1 on a when x == 1 reset x;
    obs hide_all { locations: ; clocks: ; events: a; }
    secret s1 = word_in_list((a,1));
    budget small { steps: 6; grid: 1, 50, 99, 100; zero_delay: false; }
    check ebto(s1, hide_all, small);

``#`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ModelError, ParseError
from .model import TRUE, And, Cmp, Constraint, DiffCmp, Edge, Or, TimedAutomaton, fmt_time
from .observation import ObservationConfig
from .opacity import ExplicitList, LocationVisit, PrivateRun, SecretSpec, TrailingDelayGreater, WordInLanguage
from .runs import EtoSpec
from .semantics import Delay, EnumerationBudget, Event
from .words import FiniteLanguage, PredicateLanguage, TimedWord

CHECK_KINDS = {
    # kind -> argument roles
    "ebto": ("secret", "obs", "budget"),
    "lbto": ("secret", "obs", "budget"),
    "eto": ("secret", "budget"),
    "representable": ("secret", "budget"),
    "closure": ("secret", "budget"),
}

LANGUAGE_SECRETS = ("word_in_list", "word_prefix_of", "event_count_eq")


@dataclass(frozen=True)
class CheckRequest:
    name: str
    kind: str
    secret: str
    budget: str
    obs: str | None = None

    def call(self) -> str:
        args = [self.secret] + ([self.obs] if self.obs is not None else []) + [self.budget]
        return f"{self.kind}({', '.join(args)})"


@dataclass
class ModelDocument:
    automaton: TimedAutomaton
    observations: dict = field(default_factory=dict)
    secrets: dict = field(default_factory=dict)
    budgets: dict = field(default_factory=dict)
    checks: tuple = ()

    def check(self, name: str) -> CheckRequest:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


# --------------------------------------------------------------------------
# lexer

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+(?:\.\d+|/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><=|>=|==|->|&&|\|\||[<>=≤≥(){}\[\],;:\-])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens, line, line_start, pos = [], 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind != "ws":
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# --------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "ident")

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        tok = self.tok
        self.i += 1
        return tok

    def ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "ident":
            found = self.tok.text or "end of input"
            raise self.error(f"expected {what}, found {found!r}")
        tok = self.tok
        self.i += 1
        return tok

    def ident_list(self, stop: str) -> list[Token]:
        out = []
        if self.at(stop):
            return out
        out.append(self.ident())
        while self.accept(","):
            out.append(self.ident())
        return out

    def time(self) -> Fraction:
        if self.tok.kind != "num":
            raise self.error(f"expected a non-negative number, found {self.tok.text!r}")
        tok = self.tok
        self.i += 1
        return Fraction(tok.text)

    def natural(self) -> int:
        tok = self.tok
        if self.at("-"):
            raise self.error("non-natural constant: clock constraint constants must be natural numbers")
        if tok.kind != "num":
            raise self.error(f"expected a natural number, found {tok.text!r}")
        if not tok.text.isdigit():
            raise self.error(f"non-natural constant {tok.text}: clock constraint constants must be natural numbers")
        self.i += 1
        return int(tok.text)

    # document
    def parse(self) -> ModelDocument:
        self.clocks, self.events, self.locations = [], [], []
        self.initial: list[Token] = []
        self.invariants, self.edges = {}, []
        self.inv_toks = {}
        self.observations, self.secrets, self.budgets, self.checks = {}, {}, {}, []
        self.refs = []  # (token, table name)
        seen_decl = set()
        while self.tok.kind != "eof":
            kw = self.ident("a declaration keyword")
            handler = getattr(self, f"_stmt_{kw.text}", None)
            if handler is None:
                raise self.error(f"unknown declaration {kw.text!r}", kw)
            if kw.text in ("clocks", "events"):
                if kw.text in seen_decl:
                    raise self.error(f"duplicate '{kw.text}' declaration", kw)
                seen_decl.add(kw.text)
            handler(kw)
        return self._build()

    def _declare(self, table: list, tok: Token, what: str) -> None:
        if tok.text in table:
            raise self.error(f"duplicate {what} {tok.text!r}", tok)
        table.append(tok.text)

    def _stmt_clocks(self, kw):
        for t in self.ident_list(";"):
            self._declare(self.clocks, t, "clock")
        self.expect(";")

    def _stmt_events(self, kw):
        for t in self.ident_list(";"):
            self._declare(self.events, t, "event")
        self.expect(";")

    def _stmt_location(self, kw):
        name = self.ident("location name")
        self._declare(self.locations, name, "location")
        while not self.at(";"):
            if self.accept("init"):
                self.initial.append(name)
            elif self.at("invariant"):
                tok = self.expect("invariant")
                if name.text in self.invariants:
                    raise self.error(f"second invariant for location {name.text!r}", tok)
                self.invariants[name.text] = self.constraint()
                self.inv_toks[name.text] = tok
            else:
                raise self.error(f"expected 'init', 'invariant' or ';', found {self.tok.text!r}")
        self.expect(";")

    def _stmt_edge(self, kw):
        src = self.ident("source location")
        self.expect("->")
        dst = self.ident("target location")
        self.expect("on")
        ev = self.ident("event")
        guard, resets = TRUE, []
        if self.accept("when"):
            guard = self.constraint()
        if self.accept("reset"):
            resets = self.ident_list(";")
        self.expect(";")
        self.refs += [(src, "location"), (dst, "location"), (ev, "event")] + [(t, "clock") for t in resets]
        self.edges.append(Edge(src.text, ev.text, guard, frozenset(t.text for t in resets), dst.text))

    def _stmt_obs(self, kw):
        name = self._new_name(self.observations, "observation config")
        self.expect("{")
        fields = {}
        while not self.accept("}"):
            key = self.ident("'locations', 'clocks' or 'events'")
            if key.text not in ("locations", "clocks", "events"):
                raise self.error(f"unknown observation field {key.text!r}", key)
            if key.text in fields:
                raise self.error(f"duplicate field {key.text!r}", key)
            self.expect(":")
            fields[key.text] = self.ident_list(";")
            self.expect(";")
        self.observations[name.text] = fields

    def _stmt_budget(self, kw):
        name = self._new_name(self.budgets, "budget")
        self.expect("{")
        fields = {}
        while not self.accept("}"):
            key = self.ident("a budget field")
            if key.text in fields:
                raise self.error(f"duplicate field {key.text!r}", key)
            self.expect(":")
            if key.text == "steps":
                fields["steps"] = self.natural()
            elif key.text == "grid":
                grid = [self.time()]
                while self.accept(","):
                    grid.append(self.time())
                fields["grid"] = grid
            elif key.text in ("zero_delay", "alternating"):
                flag = self.ident("true or false")
                if flag.text not in ("true", "false"):
                    raise self.error("expected true or false", flag)
                fields[key.text] = flag.text == "true"
            else:
                raise self.error(f"unknown budget field {key.text!r}", key)
            self.expect(";")
        for required in ("steps", "grid"):
            if required not in fields:
                raise self.error(f"budget {name.text!r} lacks '{required}'", name)
        try:
            self.budgets[name.text] = EnumerationBudget(
                fields["steps"], fields["grid"], fields.get("zero_delay", False), fields.get("alternating", False)
            )
        except ModelError as exc:
            raise self.error(str(exc), name) from None

    def _stmt_secret(self, kw):
        name = self._new_name(self.secrets, "secret")
        self.expect("=")
        self.secrets[name.text] = self.secret()
        self.expect(";")

    def _stmt_check(self, kw):
        first = self.ident("check kind or name")
        if self.accept("="):
            name, kind = first, self.ident("check kind")
        else:
            name, kind = None, first
        if kind.text not in CHECK_KINDS:
            raise self.error(f"unknown check kind {kind.text!r}; expected one of {sorted(CHECK_KINDS)}", kind)
        roles = CHECK_KINDS[kind.text]
        self.expect("(")
        args = {}
        for n, role in enumerate(roles):
            if n:
                self.expect(",")
            tok = self.ident(f"{role} name")
            args[role] = tok.text
            self.refs.append((tok, role))
        self.expect(")")
        self.expect(";")
        req = CheckRequest(
            name=name.text if name else "",
            kind=kind.text,
            secret=args["secret"],
            budget=args["budget"],
            obs=args.get("obs"),
        )
        if not req.name:
            req = CheckRequest(req.call(), req.kind, req.secret, req.budget, req.obs)
        if any(c.name == req.name for c, _ in self.checks):
            raise self.error(f"duplicate check name {req.name!r}", name or kind)
        self.checks.append((req, kind))

    def _new_name(self, table: dict, what: str) -> Token:
        name = self.ident(f"{what} name")
        if name.text in table:
            raise self.error(f"duplicate {what} {name.text!r}", name)
        return name

    # constraints
    def constraint(self) -> Constraint:
        left = self._conj()
        while self.accept("or") or self.accept("||"):
            left = Or(left, self._conj())
        return left

    def _conj(self) -> Constraint:
        left = self._atom()
        while self.accept("and") or self.accept("&&"):
            left = And(left, self._atom())
        return left

    def _atom(self) -> Constraint:
        if self.accept("true"):
            return TRUE
        if self.accept("("):
            inner = self.constraint()
            self.expect(")")
            return inner
        clock = self.ident("clock name")
        self.refs.append((clock, "clock"))
        other = None
        if self.accept("-"):
            other = self.ident("clock name")
            self.refs.append((other, "clock"))
        op = self.tok
        if op.text not in ("<", "<=", "==", "=", ">=", ">", "≤", "≥"):
            raise self.error(f"expected a comparison operator, found {op.text!r}")
        self.i += 1
        bound = self.natural()
        if other is None:
            return Cmp(clock.text, op.text, bound)
        return DiffCmp(clock.text, other.text, op.text, bound)

    # secrets
    def secret(self) -> SecretSpec:
        kind = self.ident("secret kind")
        self.expect("(")
        if kind.text == "location_visit":
            loc = self.ident("location")
            self.refs.append((loc, "location"))
            spec = LocationVisit(loc.text)
        elif kind.text == "word_in_list":
            words = []
            if not self.at(")"):
                words.append(self.word())
                while self.accept(","):
                    words.append(self.word())
            spec = WordInLanguage(FiniteLanguage(words))
        elif kind.text == "word_prefix_of":
            spec = WordInLanguage(PredicateLanguage("word_prefix_of", (self.word(),)))
        elif kind.text == "event_count_eq":
            ev = self.ident("event")
            self.refs.append((ev, "event"))
            self.expect(",")
            spec = WordInLanguage(PredicateLanguage("event_count_eq", (ev.text, self.natural())))
        elif kind.text == "trailing_delay_gt":
            threshold = self.time()
            self.expect(",")
            self.expect("after")
            ev = self.ident("event")
            self.refs.append((ev, "event"))
            spec = TrailingDelayGreater(threshold, ev.text)
        elif kind.text == "private_run":
            priv = self.ident("private location")
            self.expect(",")
            final = self.ident("final location")
            self.refs += [(priv, "location"), (final, "location")]
            spec = PrivateRun(EtoSpec(priv.text, final.text))
        elif kind.text == "explicit":
            patterns = [self.pattern()]
            while self.accept(","):
                patterns.append(self.pattern())
            spec = ExplicitList(frozenset(tuple(p) for p in patterns))
        else:
            raise self.error(f"unknown secret kind {kind.text!r}", kind)
        self.expect(")")
        return spec

    def word(self) -> TimedWord:
        start = self.tok
        self.expect("(")
        if self.accept(")"):
            return TimedWord()
        pairs = [self._pair_tail()]
        while self.at("(") and self.toks[self.i + 1].kind == "ident":
            self.expect("(")
            pairs.append(self._pair_tail())
        try:
            return TimedWord(tuple(pairs))
        except ValueError as exc:
            raise self.error(str(exc), start) from None

    def _pair_tail(self):
        ev = self.ident("event")
        self.refs.append((ev, "event"))
        self.expect(",")
        t = self.time()
        self.expect(")")
        return ev.text, t

    def pattern(self) -> list:
        self.expect("[")
        actions = []
        while not self.accept("]"):
            if actions:
                self.expect(",")
            if self.tok.kind == "ident":
                ev = self.ident()
                self.refs.append((ev, "event"))
                actions.append(Event(ev.text))
            else:
                actions.append(Delay(self.time()))
        return actions

    # assembly and cross-reference checks
    def _build(self) -> ModelDocument:
        if not self.initial:
            raise ParseError("no initial location: mark exactly one location with 'init'", 1, 1)
        if len(self.initial) > 1:
            tok = self.initial[1]
            raise ParseError(
                "multiple initial locations: the automaton must have a single initial location "
                "(required for determinism)",
                tok.line,
                tok.col,
            )
        tables = {
            "location": set(self.locations),
            "clock": set(self.clocks),
            "event": set(self.events),
            "secret": set(self.secrets),
            "obs": set(self.observations),
            "budget": set(self.budgets),
        }
        for tok, kind in self.refs:
            if tok.text not in tables[kind]:
                raise ParseError(f"undeclared {kind} {tok.text!r}", tok.line, tok.col)
        for loc, inv in self.invariants.items():
            if not inv.disjunction_free:
                tok = self.inv_toks[loc]
                raise ParseError(
                    f"invariant of {loc!r} contains a disjunction; location invariants must be "
                    "disjunction-free so time transitions can be checked at the endpoints",
                    tok.line,
                    tok.col,
                )
        try:
            automaton = TimedAutomaton(
                self.locations, self.initial[0].text, self.clocks, self.events, self.edges, self.invariants
            )
        except ModelError as exc:
            raise ParseError(str(exc), 1, 1) from None

        observations = {}
        for name, fields in self.observations.items():
            for key, toks in fields.items():
                for tok in toks:
                    table = {"locations": "location", "clocks": "clock", "events": "event"}[key]
                    if tok.text not in tables[table]:
                        raise ParseError(f"undeclared {table} {tok.text!r}", tok.line, tok.col)
            observations[name] = ObservationConfig(
                *(frozenset(t.text for t in fields.get(k, ())) for k in ("locations", "clocks", "events"))
            )

        checks = []
        for req, tok in self.checks:
            secret = self.secrets[req.secret]
            if req.kind == "lbto" and not isinstance(secret, WordInLanguage):
                raise ParseError(f"lbto needs a language secret ({', '.join(LANGUAGE_SECRETS)})", tok.line, tok.col)
            if req.kind == "eto" and not isinstance(secret, PrivateRun):
                raise ParseError("eto needs a private_run secret", tok.line, tok.col)
            checks.append(req)
        return ModelDocument(automaton, observations, self.secrets, self.budgets, tuple(checks))


def parse_model(text: str) -> ModelDocument:
    """Parse a model document; errors carry 1-based line and column."""
    return _Parser(text).parse()


# --------------------------------------------------------------------------
# writer


def _ids(names) -> str:
    return ", ".join(names)


def serialize_model(doc: ModelDocument) -> str:
    A = doc.automaton
    inv = dict(A.invariants)
    lines = [f"clocks {_ids(A.clocks)};", f"events {_ids(A.events)};"]
    for loc in A.locations:
        text = f"location {loc}"
        if loc == A.initial:
            text += " init"
        if loc in inv:
            text += f" invariant {inv[loc]}"
        lines.append(text + ";")
    lines += [f"edge {e};" for e in A.edges]
    for name, cfg in doc.observations.items():
        d = cfg.as_dict()
        lines.append(
            f"obs {name} {{ locations: {_ids(d['locations'])}; clocks: {_ids(d['clocks'])}; "
            f"events: {_ids(d['events'])}; }}"
        )
    for name, spec in doc.secrets.items():
        lines.append(f"secret {name} = {spec};")
    for name, b in doc.budgets.items():
        lines.append(
            f"budget {name} {{ steps: {b.max_steps}; grid: {_ids(fmt_time(d) for d in b.delay_grid)}; "
            f"zero_delay: {str(b.include_zero_delay).lower()}; alternating: {str(b.alternating).lower()}; }}"
        )
    for c in doc.checks:
        lines.append(f"check {c.name} = {c.call()};" if c.name != c.call() else f"check {c.call()};")
    return "\n".join(lines) + "\n"
