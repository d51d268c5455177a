"""Run the checks requested by a model document and render the results."""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field

from .errors import CheckError, InvariantViolation, OpacityError
from .model import fmt_time
from .modelfile import ModelDocument, serialize_model
from .observation import observation_class
from .opacity import (
    Verdict,
    check_ebto,
    check_eto,
    check_lbto,
    check_secret_closure,
    check_word_representable,
)
from .runs import normalize_run, run_duration
from .semantics import duration, enumerate_evolutions, validate_evolution
from .words import to_timed_word

VERDICT_LABELS = {
    "ebto": ("opaque", "not opaque"),
    "lbto": ("opaque", "not opaque"),
    "eto": ("opaque", "not opaque"),
    "representable": ("representable", "not representable"),
    "closure": ("closed", "not closed"),
}


@dataclass
class CheckResult:
    name: str
    kind: str
    passed: bool
    budget_name: str
    budget: dict
    evolutions: int
    witnesses: list = field(default_factory=list)
    cover_map_size: int = 0
    details: dict = field(default_factory=dict)
    elapsed: float | None = None

    @property
    def verdict(self) -> str:
        yes, no = VERDICT_LABELS[self.kind]
        return yes if self.passed else no

    def as_dict(self) -> dict:
        d = {
            "name": self.name,
            "notion": self.kind,
            "passed": self.passed,
            "verdict": self.verdict,
            "bounded": True,
            "budget": {"name": self.budget_name, **self.budget},
            "evolutions": self.evolutions,
            "witnesses": self.witnesses,
            "cover_map_size": self.cover_map_size,
            "details": self.details,
        }
        if self.elapsed is not None:
            d["elapsed_ms"] = round(self.elapsed * 1000, 3)
        return d


@dataclass
class Report:
    sha256: str
    results: list
    source: str = ""

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    def as_dict(self) -> dict:
        return {
            "source": self.source,
            "sha256": self.sha256,
            "checks": [r.as_dict() for r in self.results],
            "summary": {
                "passed": sum(r.passed for r in self.results),
                "failed": sum(not r.passed for r in self.results),
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        lines = [f"report for {self.source or '<input>'}  sha256 {self.sha256}"]
        for r in self.results:
            b = r.budget
            budget = f"steps={b['steps']} grid={','.join(b['grid'])} zero_delay={str(b['zero_delay']).lower()}"
            if b["alternating"]:
                budget += " alternating"
            timing = f" in {r.elapsed * 1000:.1f} ms" if r.elapsed is not None else ""
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"[{status}] {r.name}: {r.verdict}")
            lines.append(f"    bounded over {r.evolutions} evolutions ({r.budget_name}: {budget}){timing}")
            for key in sorted(r.details):
                value = r.details[key]
                if isinstance(value, list):
                    value = "{" + ", ".join(str(v) for v in value) + "}"
                elif isinstance(value, dict):
                    value = "; ".join(f"{k}: {{{', '.join(map(str, v))}}}" for k, v in sorted(value.items()))
                lines.append(f"    {key}: {value}")
            for n, w in enumerate(r.witnesses, 1):
                for key in sorted(w):
                    label = f"witness {n} {key}" if len(w) > 1 else f"witness {n}"
                    lines.append(f"    {label}: {w[key]}")
        passed = sum(r.passed for r in self.results)
        lines.append(f"summary: {passed} passed, {len(self.results) - passed} failed")
        return "\n".join(lines) + "\n"


def document_digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _revalidate(doc: ModelDocument, req, verdict: Verdict, evolutions, secret, cfg=None) -> None:
    """Every reported witness must be a generated, secret evolution."""
    A = doc.automaton
    for rho in verdict.witnesses:
        if not validate_evolution(A, rho):
            raise InvariantViolation(f"{req.name}: witness is not a generated evolution: {rho}")
        if not secret.contains(rho):
            raise InvariantViolation(f"{req.name}: witness is not secret: {rho}")
    if req.kind == "ebto" and verdict.witnesses:
        target = observation_class(verdict.witness, cfg)
        total = duration(verdict.witness)
        for rho in evolutions:
            # observations keep every delay, so equal classes imply equal durations
            if duration(rho) != total or secret.contains(rho):
                continue
            if observation_class(rho, cfg) == target:
                raise InvariantViolation(f"{req.name}: witness is covered by {rho}")


def _evaluate(doc: ModelDocument, req, evolutions, max_witnesses: int) -> tuple:
    secret = doc.secrets[req.secret]
    budget = doc.budgets[req.budget]
    cfg = doc.observations.get(req.obs) if req.obs else None
    witnesses, details, cover = [], {}, 0

    if req.kind in ("ebto", "lbto", "eto"):
        if req.kind == "ebto":
            cfg.validate(doc.automaton)
            verdict = check_ebto(evolutions, secret, cfg, budget)
        elif req.kind == "lbto":
            cfg.validate(doc.automaton)
            verdict = check_lbto(evolutions, secret.language, cfg.observable_events, budget)
        else:
            verdict = check_eto(evolutions, secret.spec, budget)
        _revalidate(doc, req, verdict, evolutions, secret, cfg)
        passed, cover = verdict.opaque, len(verdict.cover_map)
        details = {k: v for k, v in verdict.details.items() if k not in ("witness_words", "evolutions")}
        for rho in verdict.witnesses[:max_witnesses]:
            entry = {"evolution": str(rho), "word": str(to_timed_word(rho))}
            if cfg is not None and req.kind == "ebto":
                entry["observation"] = str(observation_class(rho, cfg))
            if req.kind == "eto":
                entry["duration"] = fmt_time(run_duration(normalize_run(rho)))
            witnesses.append(entry)
    elif req.kind == "representable":
        passed, pair = check_word_representable(evolutions, secret)
        if pair:
            s, p = pair
            witnesses.append({"secret": str(s), "non_secret": str(p), "word": str(to_timed_word(s))})
    elif req.kind == "closure":
        passed, pair = check_secret_closure(evolutions, secret)
        if pair:
            rho, variant = pair
            witnesses.append({
                "evolution": str(rho),
                "variant": str(variant),
                "duration": fmt_time(duration(rho)),
                "secret": str(secret.contains(rho)).lower(),
            })
    else:  # pragma: no cover - parser rejects other kinds
        raise ValueError(req.kind)
    return passed, witnesses, details, cover


def run_checks(
    doc: ModelDocument,
    only: list[str] | None = None,
    stable: bool = False,
    witnesses: int = 1,
    text: str = "",
    source: str = "",
) -> Report:
    """Evaluate the document's checks, enumerating each budget at most once.

    ``text`` is the document source used for the checksum; when omitted the
    canonical serialization is hashed instead.
    """
    requests = list(doc.checks)
    if only:
        missing = [n for n in only if n not in {r.name for r in requests}]
        if missing:
            raise KeyError(f"no such check: {', '.join(missing)}")
        requests = [r for r in requests if r.name in only]

    enumerations = {}
    results = []
    for req in requests:
        start = time.perf_counter()
        try:
            if req.budget not in enumerations:
                enumerations[req.budget] = enumerate_evolutions(doc.automaton, doc.budgets[req.budget])
            evolutions = enumerations[req.budget]
            passed, wit, details, cover = _evaluate(doc, req, evolutions, witnesses)
        except InvariantViolation:
            raise
        except OpacityError as exc:
            raise CheckError(req.name, exc) from exc
        elapsed = None if stable else time.perf_counter() - start
        results.append(
            CheckResult(
                name=req.name,
                kind=req.kind,
                passed=passed,
                budget_name=req.budget,
                budget=doc.budgets[req.budget].as_dict(),
                evolutions=len(evolutions),
                witnesses=wit,
                cover_map_size=cover,
                details=details,
                elapsed=elapsed,
            )
        )
    digest = document_digest(text if text else serialize_model(doc))
    return Report(digest, results, source)
