"""Bounded restricted chase and Boolean CQ/UCQ containment for the ontology fragment.

The fragment is DL-Lite with role hierarchies and conjunctive left-hand sides:
``A1 and ... and An subClassOf B``, ``... subClassOf not B``,
``... subClassOf some [inv] R B|Top`` and ``[inv] R subRoleOf [inv] S``.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

from hybrid_ilp.config import DEFAULT_CHASE_DEPTH
from hybrid_ilp.schemas import (
    CONCEPT, ROLE, TOP, Atom, BooleanCQ, BooleanUCQ, CanonicalInstance,
    ConceptInclusion, Constant, Predicate, RoleExpr, RoleInclusion, TBoxAxiom,
    Term, Variable,
)

logger = logging.getLogger(__name__)

NULL_PREFIX = "_n"
FROZEN_PREFIX = "_f"


def is_null(c: Term) -> bool:
    return isinstance(c, Constant) and c.name.startswith(NULL_PREFIX)


def _concept(name: str, x: Constant) -> Atom:
    return Atom(Predicate(name, 1, CONCEPT), (x,))


def _role(role: RoleExpr, x: Constant, y: Constant) -> Atom:
    """Atom stating role(x, y), flipping arguments for an inverse role."""
    args = (y, x) if role.inverse else (x, y)
    return Atom(Predicate(role.name, 2, ROLE), args)


class _Chase:
    """Mutable working state of one chase run."""

    def __init__(self, seed: Iterable[Atom], tbox: Tuple[TBoxAxiom, ...], bound: int):
        self.tbox = tbox
        self.bound = bound
        self.atoms: Set[Atom] = set()
        self.depth: Dict[Constant, int] = {}
        self.counter = 0
        self.concepts: Dict[Constant, Set[str]] = {}
        # (role name, subject) -> objects
        self.edges: Dict[Tuple[str, Constant], Set[Constant]] = {}
        self.back: Dict[Tuple[str, Constant], Set[Constant]] = {}
        for a in seed:
            for t in a.args:
                self.depth.setdefault(t, 0)
            self.add(a)

    def add(self, a: Atom) -> bool:
        if a in self.atoms:
            return False
        self.atoms.add(a)
        if a.predicate.kind == CONCEPT:
            self.concepts.setdefault(a.args[0], set()).add(a.predicate.name)
        elif a.predicate.kind == ROLE:
            s, o = a.args
            self.edges.setdefault((a.predicate.name, s), set()).add(o)
            self.back.setdefault((a.predicate.name, o), set()).add(s)
        return True

    def successors(self, role: RoleExpr, x: Constant) -> Set[Constant]:
        table = self.back if role.inverse else self.edges
        return table.get((role.name, x), set())

    def individuals(self) -> List[Constant]:
        return sorted(self.depth, key=lambda c: (self.depth[c], c.name))

    def has(self, x: Constant, concept: str) -> bool:
        return concept == TOP or concept in self.concepts.get(x, ())

    def fresh(self, parent: Constant) -> Constant:
        self.counter += 1
        null = Constant(f"{NULL_PREFIX}{self.counter}")
        self.depth[null] = self.depth[parent] + 1
        return null

    def saturate(self) -> None:
        """Apply atomic concept and role inclusions to a fixpoint."""
        changed = True
        while changed:
            changed = False
            for ax in self.tbox:
                if isinstance(ax, RoleInclusion):
                    for a in list(self.atoms):
                        if a.predicate.kind != ROLE or a.predicate.name != ax.sub.name:
                            continue
                        s, o = a.args
                        x, y = (o, s) if ax.sub.inverse else (s, o)
                        changed |= self.add(_role(ax.sup, x, y))
                elif ax.role is None and not ax.negated:
                    for x in self.individuals():
                        if all(self.has(x, c) for c in ax.lhs) and ax.rhs != TOP:
                            changed |= self.add(_concept(ax.rhs, x))

    def fire_existentials(self) -> bool:
        fired = False
        for ax in self.tbox:
            if not isinstance(ax, ConceptInclusion) or ax.role is None:
                continue
            for x in self.individuals():
                if not all(self.has(x, c) for c in ax.lhs):
                    continue
                if any(self.has(y, ax.rhs) for y in self.successors(ax.role, x)):
                    continue
                if self.depth[x] >= self.bound:
                    continue
                y = self.fresh(x)
                self.add(_role(ax.role, x, y))
                if ax.rhs != TOP:
                    self.add(_concept(ax.rhs, y))
                fired = True
        return fired

    def clash(self) -> str:
        for ax in self.tbox:
            if isinstance(ax, ConceptInclusion) and ax.negated:
                for x in self.individuals():
                    if all(self.has(x, c) for c in ax.lhs) and self.has(x, ax.rhs):
                        return f"{x} violates {ax}"
        return ""

    def run(self) -> CanonicalInstance:
        while True:
            self.saturate()
            if not self.fire_existentials():
                break
        reason = self.clash()
        depth = tuple(sorted(self.depth.items(), key=lambda kv: kv[0].name))
        return CanonicalInstance(frozenset(self.atoms), depth, bool(reason), reason)


@lru_cache(maxsize=8192)
def _chase_cached(seed: FrozenSet[Atom], tbox: Tuple[TBoxAxiom, ...], bound: int) -> CanonicalInstance:
    return _Chase(sorted(seed, key=str), tbox, bound).run()


def chase(seed: Iterable[Atom], tbox: Iterable[TBoxAxiom],
          depth_bound: int = DEFAULT_CHASE_DEPTH) -> CanonicalInstance:
    """Restricted chase of ``seed`` under ``tbox``; nulls stop at ``depth_bound``."""
    return _chase_cached(frozenset(seed), tuple(tbox), depth_bound)


def is_abox_consistent(tbox: Iterable[TBoxAxiom], abox: Iterable[Atom],
                       depth_bound: int = DEFAULT_CHASE_DEPTH) -> bool:
    atoms = [a.to_atom() if hasattr(a, "to_atom") else a for a in abox]
    return not chase(atoms, tbox, depth_bound).clash


# ── Query matching ─────────────────────────────────────────

def _compatible(atom: Atom, fact: Atom, mapping: Dict[Variable, Term]) -> Optional[Dict[Variable, Term]]:
    extension: Dict[Variable, Term] = {}
    for t, v in zip(atom.args, fact.args):
        if isinstance(t, Variable):
            bound = mapping.get(t, extension.get(t))
            if bound is None:
                extension[t] = v
            elif bound != v:
                return None
        elif t != v:
            return None
    return extension


def _match(atoms: List[Atom], index: Dict[Predicate, List[Atom]],
           mapping: Dict[Variable, Term]) -> Iterator[Dict[Variable, Term]]:
    if not atoms:
        yield mapping
        return
    # most constrained atom first
    best_i, best_options = 0, None
    for i, a in enumerate(atoms):
        options = []
        for fact in index.get(a.predicate, ()):
            ext = _compatible(a, fact, mapping)
            if ext is not None:
                options.append(ext)
        if not options:
            return
        if best_options is None or len(options) < len(best_options):
            best_i, best_options = i, options
    rest = atoms[:best_i] + atoms[best_i + 1:]
    for ext in best_options:
        yield from _match(rest, index, {**mapping, **ext})


def index_atoms(atoms: Iterable[Atom]) -> Dict[Predicate, List[Atom]]:
    index: Dict[Predicate, List[Atom]] = {}
    for a in sorted(atoms, key=str):
        index.setdefault(a.predicate, []).append(a)
    return index


def iter_homomorphisms(query: Iterable[Atom], index: Dict[Predicate, List[Atom]],
                       mapping: Optional[Dict[Variable, Term]] = None) -> Iterator[Dict[Variable, Term]]:
    """Every extension of ``mapping`` sending ``query`` into the indexed atoms."""
    yield from _match(sorted(query, key=str), index, dict(mapping or {}))


def find_homomorphism(cq: BooleanCQ, atoms: Iterable[Atom]) -> Optional[Dict[Variable, Term]]:
    """Map the query into ``atoms``, constants fixed and variables free."""
    return next(iter_homomorphisms(cq.atoms, index_atoms(atoms)), None)


def entailed(instance: CanonicalInstance, cq: BooleanCQ) -> bool:
    """A clashing instance entails everything."""
    if instance.clash:
        return True
    return find_homomorphism(cq, instance.atoms) is not None


# ── Containment ────────────────────────────────────────────

def freeze(cq: BooleanCQ) -> Tuple[FrozenSet[Atom], Dict[Variable, Constant]]:
    """Replace the query's variables by fresh individuals."""
    theta = {v: Constant(f"{FROZEN_PREFIX}{i}") for i, v in enumerate(cq.variables())}
    return frozenset(a.substitute(theta) for a in cq.atoms), theta


def containment_depth(q2: BooleanUCQ, override: Optional[int] = None) -> int:
    if override is not None:
        return override
    return max([1] + [len(d) for d in q2.disjuncts])


def cq_ucq_containment(tbox: Iterable[TBoxAxiom], q1: BooleanCQ, q2: BooleanUCQ,
                       depth_bound: Optional[int] = None) -> bool:
    """T |= q1 -> q2: frozen q1 clashes, or some disjunct maps into its chase."""
    seed, _ = freeze(q1)
    instance = chase(seed, tbox, containment_depth(q2, depth_bound))
    if instance.clash:
        return True
    return any(find_homomorphism(d, instance.atoms) is not None for d in q2.disjuncts)
