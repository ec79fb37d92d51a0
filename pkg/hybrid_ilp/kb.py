"""Rule admissibility, constant pools and told subsumption over a hybrid KB."""

from __future__ import annotations

import logging
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from hybrid_ilp.errors import (
    ArityMismatchError, KBValidationError, KindClashError, UnknownPredicateError,
)
from hybrid_ilp.schemas import (
    CONCEPT, ROLE, Atom, ConceptInclusion, Constant, HybridKB, Predicate,
    RoleInclusion, Rule, Span, TBoxAxiom, ValidationReport, Variable, Violation,
)

logger = logging.getLogger(__name__)

Signature = Dict[Tuple[str, int], Predicate]

DATALOG_SAFENESS = "datalog-safeness"
WEAK_DL_SAFENESS = "weak-dl-safeness"
NAF_ON_DL_ATOM = "naf-on-dl-atom"


# ── Signature checks ───────────────────────────────────────

def resolve_predicate(pred: Predicate, signature: Signature) -> None:
    """Raise unless ``pred`` is declared in ``signature`` with its arity and kind."""
    declared = signature.get(pred.signature_key)
    if declared is None:
        arities = sorted(a for (n, a) in signature if n == pred.name)
        if arities:
            raise ArityMismatchError(
                f"{pred.name} used with arity {pred.arity}, declared with "
                f"{', '.join(str(a) for a in arities)}"
            )
        raise UnknownPredicateError(f"unknown predicate {pred}")
    if declared.kind != pred.kind:
        raise KindClashError(f"{pred} used as {pred.kind}, declared as {declared.kind}")


def check_signature(kb: HybridKB) -> Signature:
    """Build the KB signature, rejecting a name used with two kinds or two DL arities."""
    table: Signature = {}
    by_name: Dict[str, Predicate] = {}
    for pred in kb.predicates().values():
        other = by_name.get(pred.name)
        if other is not None and other != pred and (pred.is_dl or other.is_dl):
            raise KindClashError(
                f"{pred.name} used both as {other.kind}/{other.arity} "
                f"and {pred.kind}/{pred.arity}"
            )
        by_name.setdefault(pred.name, pred)
        table[pred.signature_key] = pred
    return table


# ── Safeness ───────────────────────────────────────────────

def _vars(atoms: Iterable[Atom]) -> Set[Variable]:
    return {v for a in atoms for v in a.variables()}


def validate_rule(rule: Rule, signature: Optional[Signature] = None,
                  span: Optional[Span] = None) -> ValidationReport:
    """Check datalog-safeness and weak DL-safeness of ``rule``.

    Every rule variable must occur in a positive body atom (datalog or DL), and
    every head variable in a positive datalog body atom. Variables that occur
    only in DL body atoms are reported as weakly safe: they stay existential.
    """
    if signature is not None:
        for a in rule.atoms():
            resolve_predicate(a.predicate, signature)

    text = rule.render()
    violations: List[Violation] = []
    positive = _vars(rule.body_pos_datalog) | _vars(rule.body_dl)
    datalog_bound = _vars(rule.body_pos_datalog)

    for v in rule.variables():
        if v not in positive:
            violations.append(Violation(text, DATALOG_SAFENESS, v.name, span))
    for v in _ordered(rule.head):
        if v not in datalog_bound:
            violations.append(Violation(text, WEAK_DL_SAFENESS, v.name, span))
    for a in rule.body_naf_datalog:
        if a.is_dl:
            violations.append(Violation(text, NAF_ON_DL_ATOM, str(a), span))
    for a in rule.body_pos_datalog:
        if a.is_dl:
            violations.append(Violation(text, "dl-atom-in-datalog-body", str(a), span))

    datalog_vars = _vars(rule.body_pos_datalog) | _vars(rule.body_naf_datalog) | _vars(rule.head)
    weakly = tuple(v for v in _ordered(rule.body_dl) if v not in datalog_vars)
    return ValidationReport(violations=tuple(violations), weakly_safe=weakly)


def _ordered(atoms: Iterable[Atom]) -> List[Variable]:
    seen: List[Variable] = []
    for a in atoms:
        for v in a.variables():
            if v not in seen:
                seen.append(v)
    return seen


def is_admissible(rule: Rule) -> bool:
    return validate_rule(rule).ok


def validate_kb(kb: HybridKB, spans: Optional[Dict[int, Span]] = None,
                source: str = "") -> Signature:
    """Validate every rule and fact of ``kb``; raise KBValidationError on failure."""
    signature = check_signature(kb)
    violations: List[Violation] = []
    for i, rule in enumerate(kb.rules):
        report = validate_rule(rule, signature, (spans or {}).get(i))
        violations.extend(report.violations)
    for fact in kb.facts:
        if not fact.is_ground or fact.is_dl:
            violations.append(Violation(f"{fact}.", "ground-datalog-fact"))
    if violations:
        raise KBValidationError(violations, source)
    return signature


# ── Constants ──────────────────────────────────────────────

def constants_of(kb: HybridKB) -> FrozenSet[Constant]:
    """C_Pi: constants of the rules and facts, plus every ABox individual."""
    pool: Set[Constant] = set()
    for r in kb.rules:
        pool.update(r.constants())
    for a in kb.facts:
        pool.update(a.constants())
    for a in kb.abox_atoms():
        pool.update(a.constants())
    return frozenset(pool)


def sorted_constants(constants: Iterable[Constant]) -> List[Constant]:
    return sorted(set(constants), key=lambda c: c.name)


# ── Told subsumption ───────────────────────────────────────

def _told_edges(tbox: Tuple[TBoxAxiom, ...]) -> Tuple[Dict[str, Set[str]], Dict[str, Set[str]]]:
    concepts: Dict[str, Set[str]] = {}
    roles: Dict[str, Set[str]] = {}
    for ax in tbox:
        if isinstance(ax, ConceptInclusion) and ax.is_atomic:
            concepts.setdefault(ax.lhs[0], set()).add(ax.rhs)
        elif isinstance(ax, RoleInclusion) and ax.sub.inverse == ax.sup.inverse:
            # inv(R) subRoleOf inv(S) is the same statement as R subRoleOf S
            roles.setdefault(ax.sub.name, set()).add(ax.sup.name)
    return concepts, roles


def _reach(edges: Dict[str, Set[str]], start: str) -> FrozenSet[str]:
    seen = {start}
    stack = [start]
    while stack:
        for nxt in edges.get(stack.pop(), ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return frozenset(seen)


@lru_cache(maxsize=256)
def told_closure(tbox: Tuple[TBoxAxiom, ...]) -> Dict[Tuple[str, str], FrozenSet[str]]:
    """(kind, name) -> told superclasses/superroles, reflexively and transitively."""
    concepts, roles = _told_edges(tbox)
    closure: Dict[Tuple[str, str], FrozenSet[str]] = {}
    for kind, edges in ((CONCEPT, concepts), (ROLE, roles)):
        names = set(edges) | {n for sups in edges.values() for n in sups}
        for name in names:
            closure[(kind, name)] = _reach(edges, name)
    return closure


def told_subsumption(p: Predicate, q: Predicate, tbox: Tuple[TBoxAxiom, ...]) -> bool:
    """True iff q is reachable from p through atomic inclusion axioms."""
    if p.kind != q.kind or not p.is_dl:
        raise KindClashError(f"told subsumption between {p.kind} {p} and {q.kind} {q}")
    if p.name == q.name:
        return True
    return q.name in told_closure(tuple(tbox)).get((p.kind, p.name), frozenset())
