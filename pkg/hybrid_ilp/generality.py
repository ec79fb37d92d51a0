"""Generality orders between rules, decided by refutation against a background KB."""

from __future__ import annotations

import itertools
import logging
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from hybrid_ilp.config import DEFAULT_LIMITS, Limits
from hybrid_ilp.kb import constants_of
from hybrid_ilp.reasoner import nm_satisfiable, partial_grounding, rewrite_fol
from hybrid_ilp.schemas import (
    DATALOG, Atom, Constant, GroundSubstitution, HybridKB, Predicate, Rule, SkolemContext,
    Term, Variable, assertion_from_atom, denial,
)

logger = logging.getLogger(__name__)

NOT_PREFIX = "not_"
SKOLEM_PREFIX = "sk"


# ── Skolemization ──────────────────────────────────────────

def skolemize(rule: Rule, reserved: Iterable[Constant] = ()) -> Tuple[SkolemContext, Rule]:
    """Replace each variable, by first occurrence, with a fresh sk<i> constant."""
    reserved = frozenset(reserved)
    taken = {c.name for c in reserved} | {c.name for c in rule.constants()}
    sigma: List[Tuple[Variable, Constant]] = []
    i = 0
    for v in rule.variables():
        while f"{SKOLEM_PREFIX}{i}" in taken:
            i += 1
        sigma.append((v, Constant(f"{SKOLEM_PREFIX}{i}")))
        i += 1
    ctx = SkolemContext(tuple(sigma), reserved)
    return ctx, rule.substitute(ctx.as_dict())


# ── Shared plumbing ────────────────────────────────────────

def naf_as_atom(atom: Atom) -> Atom:
    """Read ``not u(W)`` as the positive atom ``not_u(W)``."""
    return Atom(Predicate(NOT_PREFIX + atom.predicate.name, atom.predicate.arity, DATALOG), atom.args)


def positive_body(rule: Rule) -> Tuple[Atom, ...]:
    return rule.body_pos_datalog + tuple(naf_as_atom(a) for a in rule.body_naf_datalog) + rule.body_dl


def _naf_free(rule: Rule) -> Rule:
    return Rule(rule.head, rule.body_pos_datalog + tuple(naf_as_atom(a) for a in rule.body_naf_datalog),
                rule.body_dl)


def assert_atoms(kb: HybridKB, atoms: Iterable[Atom]) -> HybridKB:
    """Add ground datalog atoms as facts and ground DL atoms as ABox assertions."""
    atoms = list(dict.fromkeys(atoms))
    facts = [a for a in atoms if not a.is_dl]
    abox = [assertion_from_atom(a) for a in atoms if a.is_dl]
    return kb.with_facts(*facts).with_abox(*abox)


def _reserved(background: HybridKB, *rules: Rule) -> FrozenSet[Constant]:
    pool = set(constants_of(background))
    for r in rules:
        pool.update(r.constants())
    return frozenset(pool)


def _candidates(ctx: SkolemContext, reserved: FrozenSet[Constant]) -> List[Constant]:
    """Skolem constants first, then the remaining pool by name."""
    skolems = ctx.constants()
    rest = sorted((c for c in reserved if c not in skolems), key=lambda c: c.name)
    return skolems + rest


def ground_substitutions(variables: Sequence[Variable], candidates: Sequence[Constant],
                         fixed: Optional[Dict[Variable, Term]] = None) -> Iterator[GroundSubstitution]:
    """Every extension of ``fixed`` to ``variables`` over ``candidates``, in candidate order."""
    fixed = fixed or {}
    free = [v for v in variables if v not in fixed]
    for combo in itertools.product(candidates, repeat=len(free)):
        binding = {**fixed, **dict(zip(free, combo))}
        yield GroundSubstitution(tuple((v, binding[v]) for v in variables))


def _unify_heads(h1: Sequence[Atom], h2: Sequence[Atom]) -> Optional[Dict[Variable, Term]]:
    """Match the first head onto the (ground) second one, position by position."""
    if len(h1) != len(h2):
        return None
    theta: Dict[Variable, Term] = {}
    for a, b in zip(h1, h2):
        if a.predicate != b.predicate:
            return None
        for s, t in zip(a.args, b.args):
            if isinstance(s, Variable):
                if theta.setdefault(s, t) != t:
                    return None
            elif s != t:
                return None
    return theta


# ── Generalized subsumption (view rules) ───────────────────

def more_general_ggs(r1: Rule, r2: Rule, kb: HybridKB, limits: Limits = DEFAULT_LIMITS) -> bool:
    """r1 is at least as general as r2 relative to the intensional part of ``kb``.

    True iff some ground theta unifies head(r1) with the Skolemized head(r2)
    and the background plus body(r2)sigma entails body(r1)theta.
    """
    if len(r1.head) > 1 or len(r2.head) > 1:
        return False
    background = rewrite_fol(kb.intensional())
    reserved = _reserved(background, r1, r2)
    ctx, g2 = skolemize(r2, reserved)
    fixed = _unify_heads(r1.head, g2.head)
    if fixed is None:
        return False

    premises = positive_body(g2)
    premise_set = set(premises)
    base = assert_atoms(background, premises)
    base_sat = None
    derivable: Optional[FrozenSet[Atom]] = None
    goal_body = positive_body(r1)

    for theta in ground_substitutions(r1.variables(), _candidates(ctx, reserved), fixed):
        goal = tuple(a.substitute(theta.as_dict()) for a in goal_body)
        if set(goal) <= premise_set:
            return True
        if base_sat is None:
            base_sat = nm_satisfiable(base, limits).satisfiable
            if not base_sat:
                return True
            derivable = partial_grounding(base)[1]
        if any(not a.is_dl and a not in derivable for a in goal):
            continue
        if not nm_satisfiable(base.with_rules(denial(*goal)), limits).satisfiable:
            logger.debug("%s >= %s via %s", r1, r2, theta)
            return True
    return False


def strictly_more_general_ggs(r1: Rule, r2: Rule, kb: HybridKB,
                              limits: Limits = DEFAULT_LIMITS) -> bool:
    return more_general_ggs(r1, r2, kb, limits) and not more_general_ggs(r2, r1, kb, limits)


def equivalent_ggs(r1: Rule, r2: Rule, kb: HybridKB, limits: Limits = DEFAULT_LIMITS) -> bool:
    return more_general_ggs(r1, r2, kb, limits) and more_general_ggs(r2, r1, kb, limits)


# ── Relative subsumption (constraint rules) ────────────────

def more_general_rel(r1: Rule, r2: Rule, kb: HybridKB, limits: Limits = DEFAULT_LIMITS) -> bool:
    """Background |= forall(r1 theta -> r2) for some ground theta.

    Refutation: assert body(r2)sigma, deny every head atom of r2 sigma, add
    r1 theta, and look for an NM-model.
    """
    background = rewrite_fol(kb.without_facts())
    reserved = _reserved(background, r1, r2)
    ctx, g2 = skolemize(r2, reserved)
    base = assert_atoms(background, positive_body(g2)).with_rules(*(denial(h) for h in g2.head))
    if not nm_satisfiable(base, limits).satisfiable:
        return True
    derivable = partial_grounding(base)[1]
    open_r1 = _naf_free(r1)

    for theta in ground_substitutions(r1.variables(), _candidates(ctx, reserved)):
        inst = theta.apply(open_r1)
        if any(a not in derivable for a in inst.body_pos_datalog):
            continue
        if not nm_satisfiable(base.with_rules(inst), limits).satisfiable:
            logger.debug("%s >= %s via %s", r1, r2, theta)
            return True
    return False


def strictly_more_general_rel(r1: Rule, r2: Rule, kb: HybridKB,
                              limits: Limits = DEFAULT_LIMITS) -> bool:
    return more_general_rel(r1, r2, kb, limits) and not more_general_rel(r2, r1, kb, limits)


def equivalent_rel(r1: Rule, r2: Rule, kb: HybridKB, limits: Limits = DEFAULT_LIMITS) -> bool:
    return more_general_rel(r1, r2, kb, limits) and more_general_rel(r2, r1, kb, limits)
