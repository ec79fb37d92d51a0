"""Induction of view definitions (sequential covering) and of integrity theories (queue search)."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, Iterable, List, Optional, Sequence, Set

from hybrid_ilp.config import DEFAULT_LIMITS, Limits
from hybrid_ilp.dl import index_atoms, iter_homomorphisms
from hybrid_ilp.errors import InconsistentKBError, KBValidationError, ResourceLimitError
from hybrid_ilp.generality import assert_atoms, skolemize, strictly_more_general_ggs
from hybrid_ilp.kb import constants_of, validate_rule
from hybrid_ilp.reasoner import (
    entails_conjunction, entails_ground, nm_satisfiable, partial_grounding,
)
from hybrid_ilp.refinement import most_general_view, rho_constraint, rho_view
from hybrid_ilp.schemas import (
    Atom, ExampleSet, HybridKB, LanguageBias, Rule, Score, Term, Theory, Variable,
    denial, rule_key,
)

logger = logging.getLogger(__name__)


# ── Traces ─────────────────────────────────────────────────

@dataclass
class CandidateRow:
    rule: Rule
    score: Score

    def to_dict(self) -> dict:
        return {"rule": self.rule.render(), **self.score.to_dict()}


@dataclass
class LearningStep:
    """One inner-loop refinement of the current rule."""
    outer: int
    inner: int
    parent: Rule
    candidates: List[CandidateRow] = field(default_factory=list)
    chosen: Optional[Rule] = None

    def to_dict(self) -> dict:
        return {
            "outer": self.outer,
            "inner": self.inner,
            "parent": self.parent.render(),
            "candidates": [c.to_dict() for c in self.candidates],
            "chosen": self.chosen.render() if self.chosen else None,
        }


@dataclass
class LearningTrace:
    steps: List[LearningStep] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    uncovered: List[Atom] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "steps": [s.to_dict() for s in self.steps],
            "warnings": list(self.warnings),
            "uncovered": [str(a) for a in self.uncovered],
        }


@dataclass
class DiscoveryTrace:
    explored: int = 0
    accepted: int = 0
    rejected: int = 0
    vacuous: int = 0
    dropped: List[Rule] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "explored": self.explored,
            "accepted": self.accepted,
            "rejected": self.rejected,
            "vacuous": self.vacuous,
            "dropped": [r.render() for r in self.dropped],
            "warnings": list(self.warnings),
        }


# ── Coverage ───────────────────────────────────────────────

def _matches(head: Atom, o: Atom) -> bool:
    if head.predicate != o.predicate:
        return False
    theta: Dict[Variable, Term] = {}
    for s, t in zip(head.args, o.args):
        if isinstance(s, Variable):
            if theta.setdefault(s, t) != t:
                return False
        elif s != t:
            return False
    return True


def covers_view(rule: Rule, o: Atom, kb: HybridKB, limits: Limits = DEFAULT_LIMITS) -> bool:
    """kb plus ``rule`` entails the observation ``o``.

    A body-less rule with free head variables (the starting rule of the
    search) is read universally and covers every matching observation.
    """
    report = validate_rule(rule)
    if not report.ok:
        if rule.body_literal_count == 0 and len(rule.head) == 1:
            return _matches(rule.head[0], o)
        raise KBValidationError(list(report.violations))
    return entails_ground(kb.with_rules(rule), o, limits)


def covers_theory(rule: Rule, facts: Iterable[Atom], kb: HybridKB,
                  limits: Limits = DEFAULT_LIMITS) -> bool:
    """kb plus ``rule`` is NM-satisfiable and entails every fact."""
    extended = kb.with_rules(rule)
    if not nm_satisfiable(extended, limits).satisfiable:
        return False
    return entails_conjunction(extended, facts, limits)


def score(rule: Rule, examples: ExampleSet, kb: HybridKB,
          limits: Limits = DEFAULT_LIMITS) -> Score:
    pos = sum(1 for e in examples.positives if covers_view(rule, e, kb, limits))
    neg = sum(1 for e in examples.negatives if covers_view(rule, e, kb, limits))
    return Score(pos, neg, rule.body_literal_count)


def coverage_table(rules: Sequence[Rule], examples: ExampleSet, kb: HybridKB,
                   limits: Limits = DEFAULT_LIMITS) -> Dict[str, Dict[str, bool]]:
    """rule text -> observation text -> covered."""
    observations = list(examples.positives) + list(examples.negatives)
    return {
        r.render(): {str(o): covers_view(r, o, kb, limits) for o in observations}
        for r in rules
    }


# ── View learning ──────────────────────────────────────────

def best_of(rows: Sequence[CandidateRow], kb: HybridKB, limits: Limits = DEFAULT_LIMITS) -> CandidateRow:
    """Fewest negatives, most positives, most general, shortest body, canonical order."""
    if not rows:
        raise ValueError("no candidates")
    top = min((r.score.neg_covered, -r.score.pos_covered) for r in rows)
    tied = [r for r in rows if (r.score.neg_covered, -r.score.pos_covered) == top]
    if len(tied) > 1:
        background = kb.intensional()
        undominated = [
            r for r in tied
            if not any(o is not r and strictly_more_general_ggs(o.rule, r.rule, background, limits)
                       for o in tied)
        ]
        tied = undominated or tied
    return min(tied, key=lambda r: (r.score.body_len, rule_key(r.rule)))


def nmlearn(kb: HybridKB, bias: LanguageBias, examples: ExampleSet,
            limits: Limits = DEFAULT_LIMITS, trace: Optional[LearningTrace] = None) -> Theory:
    """Sequential covering of the positives by view rules that cover no negative."""
    trace = trace if trace is not None else LearningTrace()
    theory = Theory()
    remaining = list(examples.positives)
    outer = 0

    while remaining:
        outer += 1
        rule = most_general_view(bias)
        negatives = [e for e in examples.negatives if covers_view(rule, e, kb, limits)]
        inner = 0
        stalled = False
        while negatives:
            inner += 1
            step = LearningStep(outer, inner, rule)
            local = ExampleSet(tuple(remaining), tuple(negatives))
            for cand in rho_view(rule, bias, kb.tbox):
                s = score(cand, local, kb, limits)
                if s.pos_covered > 0:
                    step.candidates.append(CandidateRow(cand, s))
            trace.steps.append(step)
            if not step.candidates:
                stalled = True
                break
            chosen = best_of(step.candidates, kb, limits)
            step.chosen = chosen.rule
            logger.info("iteration %d.%d: %s (pos=%d, neg=%d)", outer, inner, chosen.rule,
                        chosen.score.pos_covered, chosen.score.neg_covered)
            rule = chosen.rule
            negatives = [e for e in negatives if covers_view(rule, e, kb, limits)]

        if stalled:
            msg = "no rule covers {} without covering a negative".format(
                ", ".join(str(e) for e in remaining))
            logger.warning(msg)
            trace.warnings.append(msg)
            trace.uncovered.extend(remaining)
            break

        covered = [e for e in remaining if covers_view(rule, e, kb, limits)]
        if not covered:
            msg = f"accepted rule {rule} covers no remaining positive"
            logger.warning(msg)
            trace.warnings.append(msg)
            trace.uncovered.extend(remaining)
            break
        theory.add(rule, "covers " + ", ".join(str(e) for e in covered))
        logger.info("accepted %s", rule)
        remaining = [e for e in remaining if e not in covered]

    return theory


# ── Constraint discovery ───────────────────────────────────

def closed_form(rule: Rule) -> Rule:
    """Datalog head atoms become NAF body atoms; DL head atoms stay in the head."""
    datalog_head = tuple(a for a in rule.head if not a.is_dl)
    if not datalog_head:
        return rule
    return Rule(
        tuple(a for a in rule.head if a.is_dl),
        rule.body_pos_datalog,
        rule.body_dl,
        rule.body_naf_datalog + tuple(a for a in datalog_head if a not in rule.body_naf_datalog),
    )


def _supported(rule: Rule, derivable: Iterable[Atom]) -> bool:
    """The positive datalog body has at least one match among the derivable atoms."""
    if not rule.body_pos_datalog:
        return True
    return next(iter_homomorphisms(rule.body_pos_datalog, index_atoms(derivable)), None) is not None


def nmdisc(kb: HybridKB, bias: LanguageBias, limits: Limits = DEFAULT_LIMITS,
           allow_vacuous: bool = False, trace: Optional[DiscoveryTrace] = None) -> Theory:
    """Breadth-first search for constraints satisfied by the facts of ``kb``.

    Accepted rules are not refined further. A candidate whose positive datalog
    body matches nothing derivable is dropped unless ``allow_vacuous`` is set.
    """
    trace = trace if trace is not None else DiscoveryTrace()
    if not nm_satisfiable(kb, limits).satisfiable:
        raise InconsistentKBError("input knowledge base has no NM-model")
    derivable = partial_grounding(kb)[1]

    theory = Theory()
    checked = kb
    start = Rule()
    queue: Deque[Rule] = deque(rho_constraint(start, bias, kb.tbox))
    seen: Set[tuple] = {rule_key(start)} | {rule_key(r) for r in queue}

    while queue:
        rule = queue.popleft()
        trace.explored += 1
        if trace.explored > limits.max_candidates:
            raise ResourceLimitError("max_candidates", trace.explored, limits.max_candidates)

        if not allow_vacuous and not _supported(rule, derivable):
            trace.vacuous += 1
            logger.debug("vacuous, dropped: %s", rule)
            continue

        candidate = checked.with_rules(closed_form(rule))
        if nm_satisfiable(candidate, limits).satisfiable:
            theory.add(rule, f"accepted at candidate {trace.explored}")
            trace.accepted += 1
            checked = candidate
            logger.info("accepted %s", rule)
            continue

        trace.rejected += 1
        for child in rho_constraint(rule, bias, kb.tbox):
            key = rule_key(child)
            if key not in seen:
                seen.add(key)
                queue.append(child)

    if not nm_satisfiable(kb.with_rules(*theory.rules), limits).satisfiable:
        msg = "discovered theory is not NM-satisfiable together with the input"
        logger.warning(msg)
        trace.warnings.append(msg)
    return theory


# ── Theory minimization ────────────────────────────────────

def entails_rule(kb: HybridKB, rule: Rule, limits: Limits = DEFAULT_LIMITS) -> bool:
    """kb |= rule: the Skolemized body, with every head atom and NAF atom denied, has no NM-model."""
    _, g = skolemize(rule, constants_of(kb))
    refutation = assert_atoms(kb, g.body_pos_datalog + g.body_dl)
    refutation = refutation.with_rules(*(denial(a) for a in g.body_naf_datalog + g.head))
    return not nm_satisfiable(refutation, limits).satisfiable


def minimize_theory(theory: Theory, kb: HybridKB, limits: Limits = DEFAULT_LIMITS,
                    dropped: Optional[List[Rule]] = None) -> Theory:
    """Drop, in acceptance order, every rule entailed by kb and the rules still kept."""
    kept = list(zip(theory.rules, theory.provenance))
    i = 0
    while i < len(kept):
        rule = kept[i][0]
        rest = [r for j, (r, _) in enumerate(kept) if j != i]
        if entails_rule(kb.with_rules(*rest), rule, limits):
            logger.info("dropped %s: entailed by the remaining theory", rule)
            if dropped is not None:
                dropped.append(rule)
            del kept[i]
            continue
        i += 1
    out = Theory()
    for r, note in kept:
        out.add(r, note)
    return out
