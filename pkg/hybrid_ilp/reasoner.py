"""NM-satisfiability of hybrid KBs by partition guessing over the DL-grounding."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from hybrid_ilp.config import DEFAULT_LIMITS, Limits
from hybrid_ilp.datalog import has_stable_model
from hybrid_ilp.dl import chase, index_atoms, iter_homomorphisms, find_homomorphism
from hybrid_ilp.errors import KBValidationError, ResourceLimitError
from hybrid_ilp.kb import constants_of, sorted_constants
from hybrid_ilp.schemas import (
    Atom, BooleanCQ, CanonicalInstance, Constant, GroundProgram, GroundingUnit,
    HybridKB, Partition, Rule, SatResult, Term, Variable, denial, fact_rule,
    Violation, unit_sort_key,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroundInstance:
    """A rule with every datalog-reachable variable grounded; DL-only ones stay."""
    rule: Rule
    body_unit: Optional[GroundingUnit]
    head_units: Tuple[GroundingUnit, ...]

    @property
    def datalog_head(self) -> Tuple[Atom, ...]:
        return tuple(a for a in self.rule.head if not a.is_dl)


# ── Grounding ──────────────────────────────────────────────

def _grounded_variables(rule: Rule) -> List[Variable]:
    """Variables occurring in some datalog or head atom; the rest stay existential."""
    dl_only = set(v for a in rule.body_dl for v in a.variables())
    out = []
    for v in rule.variables():
        in_datalog = any(v in a.variables() for a in
                         rule.head + rule.body_pos_datalog + rule.body_naf_datalog)
        if in_datalog or v not in dl_only:
            out.append(v)
    return out


class _UnitTable:
    """Merges units that are equal modulo renaming of existential variables."""

    def __init__(self):
        self.by_key: Dict[tuple, GroundingUnit] = {}

    def get(self, atoms: Iterable[Atom], kind: str, origin: str) -> GroundingUnit:
        unit = GroundingUnit(BooleanCQ(frozenset(atoms)), kind, origin)
        return self.by_key.setdefault(unit.key, unit)

    def sorted(self) -> List[GroundingUnit]:
        return sorted(self.by_key.values(), key=unit_sort_key)


def _instance(rule: Rule, theta: Dict[Variable, Term], table: _UnitTable) -> GroundInstance:
    g = rule.substitute(theta)
    g = Rule(g.head, g.body_pos_datalog, g.body_dl, g.body_naf_datalog)
    origin = rule.render()
    body_unit = table.get(g.body_dl, "body", origin) if g.body_dl else None
    heads = tuple(table.get((a,), "head", origin) for a in g.head if a.is_dl)
    return GroundInstance(g, body_unit, heads)


def _extensions(rule: Rule, theta: Dict[Variable, Term],
                pool: Sequence[Constant]) -> Iterable[Dict[Variable, Term]]:
    free = [v for v in _grounded_variables(rule) if v not in theta]
    if not free:
        yield theta
        return
    for combo in itertools.product(pool, repeat=len(free)):
        yield {**theta, **dict(zip(free, combo))}


def full_grounding(kb: HybridKB) -> Tuple[List[GroundInstance], List[GroundingUnit]]:
    """pgr(Pi, C_Pi): every instantiation of the grounded variables over the pool."""
    pool = sorted_constants(constants_of(kb))
    table = _UnitTable()
    instances = []
    for rule in kb.rules:
        for theta in _extensions(rule, {}, pool):
            instances.append(_instance(rule, theta, table))
    return instances, table.sorted()


def dl_grounding(kb: HybridKB) -> List[GroundingUnit]:
    """gr_p(Pi): one unit per rule-body DL part and per head DL atom, merged."""
    return full_grounding(kb)[1]


def partial_grounding(kb: HybridKB) -> Tuple[List[GroundInstance], FrozenSet[Atom]]:
    """Ground instances that can matter in some stable model, and the derivable atoms.

    An instance is dropped when a positive datalog body atom is not derivable
    by any rule, or when one of its NAF atoms is a database fact.
    """
    pool = sorted_constants(constants_of(kb))
    facts = frozenset(kb.facts)
    derivable: Set[Atom] = set(facts)
    while True:
        index = index_atoms(derivable)
        table = _UnitTable()
        seen: Dict[Rule, GroundInstance] = {}
        new: Set[Atom] = set()
        for rule in kb.rules:
            for theta in iter_homomorphisms(rule.body_pos_datalog, index):
                for full in _extensions(rule, theta, pool):
                    inst = _instance(rule, full, table)
                    if inst.rule in seen:
                        continue
                    if any(a in facts for a in inst.rule.body_naf_datalog):
                        continue
                    seen[inst.rule] = inst
                    new.update(inst.datalog_head)
        if new <= derivable:
            return list(seen.values()), frozenset(derivable)
        derivable |= new


def relevant_units(instances: Iterable[GroundInstance]) -> List[GroundingUnit]:
    units: Dict[tuple, GroundingUnit] = {}
    for inst in instances:
        for u in ((inst.body_unit,) if inst.body_unit else ()) + inst.head_units:
            units.setdefault(u.key, u)
    return sorted(units.values(), key=unit_sort_key)


# ── Residual program ───────────────────────────────────────

def _residual(instances: Iterable[GroundInstance], facts: Iterable[Atom],
              g_pos: Set[tuple], g_neg: Set[tuple]) -> GroundProgram:
    rules: Dict[Rule, None] = {fact_rule(a): None for a in facts}
    for inst in instances:
        if inst.body_unit is not None and inst.body_unit.key in g_neg:
            continue
        if any(u.key in g_pos for u in inst.head_units):
            continue
        r = inst.rule
        rules.setdefault(Rule(inst.datalog_head, r.body_pos_datalog, (), r.body_naf_datalog), None)
    return GroundProgram(tuple(rules))


def residual_program(kb: HybridKB, partition: Partition) -> GroundProgram:
    """Pi(G_P, G_N): the datalog program left once the DL guess is fixed."""
    instances, _ = full_grounding(kb)
    return _residual(instances, kb.facts,
                     {u.key for u in partition.g_pos}, {u.key for u in partition.g_neg})


# ── DL side ────────────────────────────────────────────────

def _frozen_units(units: Sequence[Tuple[int, GroundingUnit]]) -> Set[Atom]:
    atoms: Set[Atom] = set()
    for i, u in units:
        theta = {v: Constant(f"_f{i}_{v.name}") for v in u.cq.variables()}
        atoms.update(a.substitute(theta) for a in u.cq.atoms)
    return atoms


def _dl_state(kb: HybridKB, pos: Sequence[Tuple[int, GroundingUnit]], depth: int) -> CanonicalInstance:
    seed = set(kb.abox_atoms()) | _frozen_units(pos)
    return chase(seed, kb.tbox, depth)


def _holds(instance: CanonicalInstance, unit: GroundingUnit) -> bool:
    return instance.clash or find_homomorphism(unit.cq, instance.atoms) is not None


def complete_partition(kb: HybridKB, partition: Partition,
                       limits: Limits = DEFAULT_LIMITS) -> Partition:
    """Extend a witness over relevant units to all of gr_p(Pi) by DL entailment."""
    units = dl_grounding(kb)
    assigned = {u.key for u in partition.units()}
    pos = sorted(partition.g_pos, key=unit_sort_key)
    depth = max([limits.chase_depth] + [len(u.cq) for u in units])
    state = _dl_state(kb, list(enumerate(pos)), depth)
    g_pos, g_neg = set(partition.g_pos), set(partition.g_neg)
    for u in units:
        if u.key in assigned:
            continue
        (g_pos if _holds(state, u) else g_neg).add(u)
    return Partition(frozenset(g_pos), frozenset(g_neg))


# ── Search ─────────────────────────────────────────────────

class _Search:
    """Depth-first partition search in binary-counter order with pruning."""

    def __init__(self, kb: HybridKB, limits: Limits):
        self.kb = kb
        self.limits = limits
        self.instances, _ = partial_grounding(kb)
        self.units = relevant_units(self.instances)
        n = len(self.units)
        if 2 ** n > limits.max_partitions:
            raise ResourceLimitError("max_partitions", 2 ** n, limits.max_partitions)
        self.index = {u.key: i for i, u in enumerate(self.units)}
        self.depth = max([limits.chase_depth] + [len(u.cq) for u in self.units])
        self.explored = 0
        self.horn = [
            (inst, self._uid(inst.body_unit), tuple(self.index[u.key] for u in inst.head_units))
            for inst in self.instances
            if not inst.rule.body_naf_datalog and len(inst.datalog_head) <= 1
        ]

    def _uid(self, unit: Optional[GroundingUnit]) -> Optional[int]:
        return None if unit is None else self.index[unit.key]

    def run(self) -> SatResult:
        logger.debug("searching %d relevant unit(s), %d ground instance(s)",
                     len(self.units), len(self.instances))
        found = self._descend(len(self.units) - 1, {})
        if found is None:
            return SatResult(False, explored=self.explored)
        assignment, model = found
        partition = Partition(
            frozenset(self.units[i] for i, p in assignment.items() if p),
            frozenset(self.units[i] for i, p in assignment.items() if not p),
        )
        return SatResult(True, partition, model, self.explored)

    def _pos(self, assignment: Dict[int, bool]) -> List[Tuple[int, GroundingUnit]]:
        return [(i, self.units[i]) for i in sorted(assignment) if assignment[i]]

    def _dl_ok(self, assignment: Dict[int, bool]) -> Tuple[bool, CanonicalInstance]:
        state = _dl_state(self.kb, self._pos(assignment), self.depth)
        if state.clash:
            return False, state
        for i, p in assignment.items():
            if not p and _holds(state, self.units[i]):
                return False, state
        return True, state

    def _datalog_ok(self, assignment: Dict[int, bool]) -> bool:
        """False when a denial must fire over the atoms every residual model contains."""
        active = []
        for inst, body, heads in self.horn:
            if body is not None and assignment.get(body) is not True:
                continue
            if any(assignment.get(h) is not False for h in heads):
                continue
            active.append(inst)
        derived = set(self.kb.facts)
        changed = True
        while changed:
            changed = False
            for inst in active:
                head = inst.datalog_head
                if head and head[0] not in derived and all(a in derived for a in inst.rule.body_pos_datalog):
                    derived.add(head[0])
                    changed = True
        return not any(
            not inst.datalog_head and all(a in derived for a in inst.rule.body_pos_datalog)
            for inst in active
        )

    def _descend(self, i: int, assignment: Dict[int, bool]):
        ok, state = self._dl_ok(assignment)
        if not ok or not self._datalog_ok(assignment):
            return None
        if i < 0:
            return self._leaf(assignment)
        choices = (True,) if _holds(state, self.units[i]) else (False, True)
        for choice in choices:
            found = self._descend(i - 1, {**assignment, i: choice})
            if found is not None:
                return found
        return None

    def _leaf(self, assignment: Dict[int, bool]):
        self.explored += 1
        g_pos = {self.units[i].key for i, p in assignment.items() if p}
        g_neg = {self.units[i].key for i, p in assignment.items() if not p}
        program = _residual(self.instances, self.kb.facts, g_pos, g_neg)
        ok, model = has_stable_model(program, self.limits)
        logger.debug("partition %d: |G_P|=%d residual=%d rules -> %s",
                     self.explored, len(g_pos), len(program), ok)
        return (assignment, model) if ok else None


def nm_satisfiable(kb: HybridKB, limits: Limits = DEFAULT_LIMITS,
                   complete: bool = False) -> SatResult:
    """Decide whether ``kb`` has an NM-model.

    A partition (G_P, G_N) is accepted when its residual program has a stable
    model and some model of the ontology satisfies the ABox and G_P while
    refuting every member of G_N. With ``complete`` the witness partition is
    extended to the whole DL-grounding.
    """
    result = _Search(kb, limits).run()
    if complete and result.partition is not None:
        full = complete_partition(kb, result.partition, limits)
        return SatResult(True, full, result.model, result.explored)
    return result


# ── Entailment ─────────────────────────────────────────────

def entails_ground(kb: HybridKB, atom: Atom, limits: Limits = DEFAULT_LIMITS) -> bool:
    """kb |= atom iff kb plus the denial of atom is NM-unsatisfiable."""
    if not atom.is_ground:
        raise ValueError(f"query {atom} is not ground")
    if not atom.is_dl and atom in kb.facts:
        return True
    return not nm_satisfiable(kb.with_rules(denial(atom)), limits).satisfiable


def entails_conjunction(kb: HybridKB, atoms: Iterable[Atom],
                        limits: Limits = DEFAULT_LIMITS) -> bool:
    """A single denial over the whole conjunction; the empty conjunction always holds."""
    atoms = tuple(atoms)
    if not atoms:
        return True
    for a in atoms:
        if not a.is_ground:
            raise ValueError(f"query {a} is not ground")
    if all(not a.is_dl and a in kb.facts for a in atoms):
        return True
    return not nm_satisfiable(kb.with_rules(denial(*atoms)), limits).satisfiable


# ── First-order reading ────────────────────────────────────

def rewrite_rule(rule: Rule) -> Rule:
    """Move every NAF body atom into the head as a positive disjunct."""
    if not rule.body_naf_datalog:
        return rule
    head = rule.head + tuple(a for a in rule.body_naf_datalog if a not in rule.head)
    rewritten = Rule(head, rule.body_pos_datalog, rule.body_dl, (), rule.onto_steps)
    bound = {v for a in rule.body_pos_datalog for v in a.variables()}
    if any(v not in bound for a in rewritten.head for v in a.variables()):
        raise KBValidationError([Violation(rule.render(), "weak-dl-safeness", "", None)])
    return rewritten


def rewrite_fol(kb: HybridKB) -> HybridKB:
    return HybridKB(kb.tbox, kb.abox, tuple(rewrite_rule(r) for r in kb.rules), kb.facts)
