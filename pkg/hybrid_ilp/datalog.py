"""Ground disjunctive datalog with negation: grounding, reduct and stable models."""

from __future__ import annotations

import itertools
import logging
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from hybrid_ilp.config import DEFAULT_LIMITS, Limits
from hybrid_ilp.errors import GroundingError, ResourceLimitError
from hybrid_ilp.schemas import (
    Atom, Constant, GroundProgram, Interpretation, Rule, interpretation_key,
)

logger = logging.getLogger(__name__)


# ── Grounding ──────────────────────────────────────────────

def ground(rules: Iterable[Rule], pool: Iterable[Constant]) -> GroundProgram:
    """Instantiate every variable of every rule over ``pool``; each instance once."""
    constants = sorted(set(pool), key=lambda c: c.name)
    out: Dict[Rule, None] = {}
    for rule in rules:
        for a in rule.atoms():
            if a.is_dl:
                raise GroundingError(f"DL atom {a} in datalog program: {rule}")
        variables = rule.variables()
        if not variables:
            out.setdefault(_strip(rule), None)
            continue
        if not constants:
            raise GroundingError(f"empty constant pool for non-ground rule {rule}")
        for combo in itertools.product(constants, repeat=len(variables)):
            out.setdefault(_strip(rule.substitute(dict(zip(variables, combo)))), None)
    return GroundProgram(tuple(out))


def _strip(rule: Rule) -> Rule:
    if not rule.onto_steps:
        return rule
    return Rule(rule.head, rule.body_pos_datalog, rule.body_dl, rule.body_naf_datalog)


def herbrand_base(program: GroundProgram) -> FrozenSet[Atom]:
    return program.herbrand_base()


# ── Reduct and model checks ────────────────────────────────

def reduct(program: GroundProgram, interp: Iterable[Atom]) -> GroundProgram:
    """Gelfond-Lifschitz reduct of ``program`` with respect to ``interp``."""
    true = set(interp)
    kept: List[Rule] = []
    for r in program.rules:
        if any(a in true for a in r.body_naf_datalog):
            continue
        kept.append(Rule(r.head, r.body_pos_datalog, r.body_dl))
    return GroundProgram(tuple(kept))


def satisfies(interp: Iterable[Atom], program: GroundProgram) -> bool:
    true = set(interp)
    for r in program.rules:
        if (all(a in true for a in r.body_pos_datalog)
                and not any(a in true for a in r.body_naf_datalog)
                and not any(a in true for a in r.head)):
            return False
    return True


def least_model(program: GroundProgram) -> FrozenSet[Atom]:
    """Least model of the single-headed NAF-free rules; contained in every model."""
    definite = [r for r in program.rules if len(r.head) == 1 and not r.body_naf_datalog]
    return _fixpoint(definite, lambda r: r.head)


def possibly_true(program: GroundProgram) -> FrozenSet[Atom]:
    """Atoms derivable when negation is ignored and every head disjunct fires."""
    return _fixpoint(program.rules, lambda r: r.head)


def _fixpoint(rules: Sequence[Rule], heads) -> FrozenSet[Atom]:
    derived: Set[Atom] = set()
    changed = True
    while changed:
        changed = False
        for r in rules:
            if all(a in derived for a in r.body_pos_datalog):
                for h in heads(r):
                    if h not in derived:
                        derived.add(h)
                        changed = True
    return frozenset(derived)


# ── Search ─────────────────────────────────────────────────

_Clause = Tuple[Tuple[Atom, ...], Tuple[Atom, ...], Tuple[Atom, ...]]


def _clauses(program: GroundProgram) -> List[_Clause]:
    return [(r.head, r.body_pos_datalog, r.body_naf_datalog) for r in program.rules]


def _propagate(clauses: List[_Clause], true: Set[Atom], false: Set[Atom]) -> bool:
    """Unit-propagate in place; False on conflict."""
    changed = True
    while changed:
        changed = False
        for head, pos, naf in clauses:
            if not all(a in true for a in pos) or not all(a in false for a in naf):
                continue
            if any(h in true for h in head):
                continue
            open_heads = [h for h in head if h not in false]
            if not open_heads:
                return False
            if len(open_heads) == 1:
                true.add(open_heads[0])
                changed = True
    return True


def _models(clauses: List[_Clause], free: List[Atom],
            true: Set[Atom], false: Set[Atom]) -> Iterator[FrozenSet[Atom]]:
    """Every total assignment over ``free`` extending (true, false) that satisfies ``clauses``."""
    true, false = set(true), set(false)
    if not _propagate(clauses, true, false):
        return
    pending = [a for a in free if a not in true and a not in false]
    if not pending:
        yield frozenset(true)
        return
    atom, rest = pending[0], pending[1:]
    yield from _models(clauses, rest, true, false | {atom})
    yield from _models(clauses, rest, true | {atom}, false)


def _is_minimal(interp: FrozenSet[Atom], program: GroundProgram) -> bool:
    """No proper subset of ``interp`` satisfies the reduct."""
    positive = reduct(program, interp)
    clauses = _clauses(positive)
    lower = least_model(positive) & interp
    if lower == interp:
        return True
    free = sorted(interp - lower, key=str)
    outside = positive.herbrand_base() - interp
    for model in _models(clauses, free, set(lower), set(outside)):
        if model != interp:
            return False
    return True


def is_stable_model(interp: Iterable[Atom], program: GroundProgram) -> bool:
    candidate = frozenset(interp)
    if not satisfies(candidate, reduct(program, candidate)):
        return False
    return _is_minimal(candidate, program)


def stable_models(program: GroundProgram,
                  limits: Limits = DEFAULT_LIMITS) -> List[Interpretation]:
    """All stable models of ``program``, in canonical order."""
    base = program.herbrand_base()
    if len(base) > limits.max_herbrand:
        raise ResourceLimitError("max_herbrand", len(base), limits.max_herbrand)
    lower = least_model(program)
    upper = possibly_true(program)
    clauses = _clauses(program)
    free = sorted(upper - lower, key=str)
    found = []
    for model in _models(clauses, free, set(lower), set(base - upper)):
        if _is_minimal(model, program):
            found.append(model)
    found.sort(key=interpretation_key)
    logger.debug("%d stable model(s) over %d atoms", len(found), len(base))
    return found


def has_stable_model(program: GroundProgram,
                     limits: Limits = DEFAULT_LIMITS) -> Tuple[bool, Optional[Interpretation]]:
    """Existence of a stable model, with the lexicographically least one as witness."""
    models = stable_models(program, limits)
    if not models:
        return False, None
    return True, models[0]
