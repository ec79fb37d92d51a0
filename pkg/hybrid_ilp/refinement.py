"""Downward refinement of view rules and constraint rules under a language bias.

New literals are linked: each shares a variable with the rule unless the rule
has none, and introduces at most one fresh variable. Head literals reuse
variables of the positive datalog body only.
"""

from __future__ import annotations

import itertools
import logging
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from hybrid_ilp.kb import told_closure, validate_rule
from hybrid_ilp.schemas import (
    Atom, AtomTemplate, LanguageBias, Predicate, Rule, TBoxAxiom, Variable, rule_key,
)

logger = logging.getLogger(__name__)

# Operator names, as reported in traces
ADD_BODY = "add-body-literal"
ADD_NAF = "add-naf-literal"
ADD_ONTO_BODY = "add-onto-body-literal"
SPECIALIZE_ONTO = "specialize-onto-literal"
ADD_HEAD = "add-head-literal"
ADD_ONTO_HEAD = "add-onto-head-literal"
GENERALIZE_ONTO = "generalize-onto-head-literal"

VIEW_OPERATORS = (ADD_BODY, ADD_NAF, ADD_ONTO_BODY, SPECIALIZE_ONTO)
CONSTRAINT_OPERATORS = VIEW_OPERATORS + (ADD_HEAD, ADD_ONTO_HEAD, GENERALIZE_ONTO)

_FRESH_NAMES = ("X", "Y", "Z", "U", "V", "W")


def fresh_variable(taken: Iterable[Variable]) -> Variable:
    names = {v.name for v in taken}
    for n in _FRESH_NAMES:
        if n not in names:
            return Variable(n)
    i = 0
    while f"V{i}" in names:
        i += 1
    return Variable(f"V{i}")


def literal_size(atom: Atom) -> int:
    """Symbol occurrences minus distinct variables."""
    return 1 + len(atom.args) - len(atom.variables())


# ── Bias membership ────────────────────────────────────────

def matches_template(atom: Atom, template: AtomTemplate) -> bool:
    if atom.predicate != template.predicate:
        return False
    return all(s is None or s == t for s, t in zip(template.slots, atom.args))


def _in_alphabet(atom: Atom, templates: Sequence[AtomTemplate]) -> bool:
    return any(matches_template(atom, t) for t in templates)


def _onto_member(atom: Atom, bias: LanguageBias) -> bool:
    return atom.predicate in bias.onto_predicates()


def within_bias(rule: Rule, bias: LanguageBias) -> bool:
    """Body length, literal sizes, alphabets and ontology step counts all in bounds."""
    if rule.body_literal_count > bias.max_body_literals:
        return False
    if any(literal_size(a) > bias.max_literal_size for a in rule.atoms()):
        return False
    if any(n > bias.max_onto_steps for _, n in rule.onto_steps):
        return False
    if not all(_in_alphabet(a, bias.datalog_pos) for a in rule.body_pos_datalog):
        return False
    if not all(_in_alphabet(a, bias.datalog_neg) for a in rule.body_naf_datalog):
        return False
    if not all(_onto_member(a, bias) for a in rule.body_dl):
        return False
    if bias.target is not None:
        return len(rule.head) == 1 and matches_template(rule.head[0], bias.target)
    if len(rule.head) > bias.max_head_literals:
        return False
    for a in rule.head:
        if a.is_dl and not _onto_member(a, bias):
            return False
        if not a.is_dl and not _in_alphabet(a, bias.datalog_pos):
            return False
    return True


# ── Literal generation ─────────────────────────────────────

def _fill(template: AtomTemplate, existing: Sequence[Variable], fresh: Optional[Variable],
          require_link: bool) -> Iterator[Atom]:
    """Instantiate open slots from ``existing`` plus at most the one ``fresh`` variable."""
    options = list(existing) + ([fresh] if fresh is not None else [])
    for combo in itertools.product(options, repeat=len(template.open_slots)):
        atom = template.instantiate(combo)
        if require_link and atom.variables() and not any(v in existing for v in combo):
            continue
        yield atom


def _onto_templates(bias: LanguageBias) -> List[AtomTemplate]:
    return [AtomTemplate.open(p) for p in bias.onto_predicates()]


def _told_below(p: Predicate, q: Predicate, closure) -> bool:
    """p told-subsumed by q; reflexive."""
    return p == q or q.name in closure.get((p.kind, p.name), frozenset())


def _body_literals(templates: Sequence[AtomTemplate], rule: Rule) -> Iterator[Atom]:
    existing = rule.variables()
    fresh = fresh_variable(existing)
    for t in templates:
        yield from _fill(t, existing, fresh, require_link=bool(existing))


def _head_literals(templates: Sequence[AtomTemplate], rule: Rule) -> Iterator[Atom]:
    bound: List[Variable] = []
    for a in rule.body_pos_datalog:
        for v in a.variables():
            if v not in bound:
                bound.append(v)
    for t in templates:
        yield from _fill(t, bound, None, require_link=False)


def _moved_steps(rule: Rule, old: Atom, new: Atom) -> Tuple[Tuple[Atom, int], ...]:
    """Step counts after replacing ``old`` by ``new``, one more step on ``new``."""
    kept = tuple((a, n) for a, n in rule.onto_steps if a not in (old, new))
    return kept + ((new, rule.steps_of(old) + 1),)


def _replace(atoms: Tuple[Atom, ...], old: Atom, new: Atom) -> Tuple[Atom, ...]:
    out = tuple(new if a == old else a for a in atoms)
    return tuple(dict.fromkeys(out))


# ── Operators ──────────────────────────────────────────────

def _body_steps(rule: Rule, bias: LanguageBias,
                tbox: Tuple[TBoxAxiom, ...]) -> Iterator[Tuple[str, Rule]]:
    closure = told_closure(tuple(tbox))
    body = set(rule.body_atoms())

    for atom in _body_literals(bias.datalog_pos, rule):
        if atom in body:
            continue
        yield ADD_BODY, Rule(rule.head, rule.body_pos_datalog + (atom,), rule.body_dl,
                             rule.body_naf_datalog, rule.onto_steps)

    for atom in _body_literals(bias.datalog_neg, rule):
        if atom in body:
            continue
        yield ADD_NAF, Rule(rule.head, rule.body_pos_datalog, rule.body_dl,
                            rule.body_naf_datalog + (atom,), rule.onto_steps)

    for atom in _body_literals(_onto_templates(bias), rule):
        # blocked when some body DL predicate already subsumes the new one
        if any(_told_below(atom.predicate, b.predicate, closure) for b in rule.body_dl):
            continue
        yield ADD_ONTO_BODY, Rule(rule.head, rule.body_pos_datalog, rule.body_dl + (atom,),
                                  rule.body_naf_datalog, rule.onto_steps)

    for old in rule.body_dl:
        for p in bias.onto_predicates():
            if p == old.predicate or p.kind != old.predicate.kind:
                continue
            if not _told_below(p, old.predicate, closure):
                continue
            new = Atom(p, old.args)
            yield SPECIALIZE_ONTO, Rule(rule.head, rule.body_pos_datalog,
                                        _replace(rule.body_dl, old, new),
                                        rule.body_naf_datalog, _moved_steps(rule, old, new))


def _head_steps(rule: Rule, bias: LanguageBias,
                tbox: Tuple[TBoxAxiom, ...]) -> Iterator[Tuple[str, Rule]]:
    closure = told_closure(tuple(tbox))
    head = set(rule.head)
    positive = set(rule.body_pos_datalog)

    for atom in _head_literals(bias.datalog_pos, rule):
        if atom in head or atom in positive:
            continue
        yield ADD_HEAD, Rule(rule.head + (atom,), rule.body_pos_datalog, rule.body_dl,
                             rule.body_naf_datalog, rule.onto_steps)

    for atom in _head_literals(_onto_templates(bias), rule):
        if any(_told_below(atom.predicate, h.predicate, closure) for h in rule.head if h.is_dl):
            continue
        yield ADD_ONTO_HEAD, Rule(rule.head + (atom,), rule.body_pos_datalog, rule.body_dl,
                                  rule.body_naf_datalog, rule.onto_steps)

    for old in rule.head:
        if not old.is_dl:
            continue
        for p in bias.onto_predicates():
            if p == old.predicate or p.kind != old.predicate.kind:
                continue
            if not _told_below(old.predicate, p, closure):
                continue
            new = Atom(p, old.args)
            yield GENERALIZE_ONTO, Rule(_replace(rule.head, old, new), rule.body_pos_datalog,
                                        rule.body_dl, rule.body_naf_datalog,
                                        _moved_steps(rule, old, new))


def _admissible(candidate: Rule, bias: LanguageBias) -> bool:
    if set(candidate.body_pos_datalog) & set(candidate.body_naf_datalog):
        return False
    return validate_rule(candidate).ok and within_bias(candidate, bias)


def refinements(rule: Rule, bias: LanguageBias, tbox: Iterable[TBoxAxiom],
                constraint: bool) -> List[Tuple[str, Rule]]:
    """One-step refinements tagged with the operator that produced them.

    Candidates that are unsafe or fall outside the bias are discarded; equal
    rules (modulo renaming) are kept once, under the first operator that
    produced them.
    """
    tbox = tuple(tbox)
    if not within_bias(rule, bias):
        logger.warning("rule outside the language bias, not refined: %s", rule)
        return []
    steps = list(_body_steps(rule, bias, tbox))
    if constraint:
        steps.extend(_head_steps(rule, bias, tbox))
    out: Dict[tuple, Tuple[str, Rule]] = {}
    for op, cand in steps:
        if not _admissible(cand, bias):
            continue
        out.setdefault(rule_key(cand), (op, cand))
    return [out[k] for k in sorted(out)]


def rho_view(rule: Rule, bias: LanguageBias, tbox: Iterable[TBoxAxiom]) -> List[Rule]:
    """Body refinements of a view rule; the head stays the target."""
    return [r for _, r in refinements(rule, bias, tbox, constraint=False)]


def rho_constraint(rule: Rule, bias: LanguageBias, tbox: Iterable[TBoxAxiom]) -> List[Rule]:
    """Body and head refinements of a constraint rule."""
    return [r for _, r in refinements(rule, bias, tbox, constraint=True)]


def most_general_view(bias: LanguageBias) -> Rule:
    """``p(X, ...) <-``: the target with a fresh variable in every open slot."""
    if bias.target is None:
        raise ValueError("bias has no target")
    taken: List[Variable] = []
    for _ in bias.target.open_slots:
        taken.append(fresh_variable(taken))
    return Rule(head=(bias.target.instantiate(taken),))
