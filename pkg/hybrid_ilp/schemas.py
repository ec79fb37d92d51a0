"""Data models for hybrid DL+Datalog knowledge bases and the learners built on them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, asdict, replace
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from hybrid_ilp.config import (
    BIAS_DEFAULTS, DEFAULT_MAX_CANDIDATES, DEFAULT_MAX_HERBRAND, DEFAULT_MAX_PARTITIONS, Limits,
)

CONCEPT = "concept"
ROLE = "role"
DATALOG = "datalog"
KINDS = (CONCEPT, ROLE, DATALOG)

TOP = "Top"

# Beyond this many variables the canonical key falls back to first-occurrence naming
_MAX_PERMUTED_VARIABLES = 6


# ── Terms ──────────────────────────────────────────────────

@dataclass(frozen=True, order=True)
class Variable:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable name must be nonempty")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, order=True)
class Constant:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("constant name must be nonempty")

    def __str__(self) -> str:
        return self.name


Term = Union[Variable, Constant]


# ── Predicates and atoms ───────────────────────────────────

@dataclass(frozen=True, order=True)
class Predicate:
    """A predicate symbol; concepts are unary and roles binary."""
    name: str
    arity: int
    kind: str = DATALOG  # concept | role | datalog

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown predicate kind {self.kind!r}")
        if self.kind == CONCEPT and self.arity != 1:
            raise ValueError(f"concept {self.name} must be unary")
        if self.kind == ROLE and self.arity != 2:
            raise ValueError(f"role {self.name} must be binary")

    @property
    def is_dl(self) -> bool:
        return self.kind != DATALOG

    @property
    def signature_key(self) -> Tuple[str, int]:
        return (self.name, self.arity)

    def __str__(self) -> str:
        return f"{self.name}/{self.arity}"


@dataclass(frozen=True, order=True)
class Atom:
    predicate: Predicate
    args: Tuple[Term, ...] = ()

    def __post_init__(self):
        if len(self.args) != self.predicate.arity:
            raise ValueError(
                f"{self.predicate.name} expects {self.predicate.arity} "
                f"arguments, got {len(self.args)}"
            )

    @property
    def is_dl(self) -> bool:
        return self.predicate.is_dl

    @property
    def is_ground(self) -> bool:
        return not any(isinstance(t, Variable) for t in self.args)

    def variables(self) -> List[Variable]:
        seen: List[Variable] = []
        for t in self.args:
            if isinstance(t, Variable) and t not in seen:
                seen.append(t)
        return seen

    def constants(self) -> List[Constant]:
        return [t for t in self.args if isinstance(t, Constant)]

    def substitute(self, theta: Dict[Variable, Term]) -> Atom:
        if not theta:
            return self
        return Atom(self.predicate, tuple(theta.get(t, t) if isinstance(t, Variable) else t
                                          for t in self.args))

    def render(self, names: Optional[Dict[Variable, str]] = None) -> str:
        if not self.args:
            return self.predicate.name
        parts = []
        for t in self.args:
            if names is not None and isinstance(t, Variable):
                parts.append(names[t])
            else:
                parts.append(t.name)
        return f"{self.predicate.name}({','.join(parts)})"

    def __str__(self) -> str:
        return self.render()


def atom_sort_key(a: Atom) -> str:
    return str(a)


def _ordered_variables(groups: Iterable[Iterable[Atom]]) -> List[Variable]:
    seen: List[Variable] = []
    for group in groups:
        for a in group:
            for v in a.variables():
                if v not in seen:
                    seen.append(v)
    return seen


def _canonical_key(parts: Sequence[Sequence[Atom]]) -> Tuple[Tuple[str, ...], ...]:
    """Order- and renaming-independent key for a sequence of atom groups."""
    variables = _ordered_variables(parts)

    def render(names: Dict[Variable, str]) -> Tuple[Tuple[str, ...], ...]:
        return tuple(tuple(sorted({a.render(names) for a in part})) for part in parts)

    if len(variables) > _MAX_PERMUTED_VARIABLES:
        return render({v: f"V{i}" for i, v in enumerate(variables)})
    best = None
    for perm in itertools.permutations(range(len(variables))):
        candidate = render({v: f"V{perm[i]}" for i, v in enumerate(variables)})
        if best is None or candidate < best:
            best = candidate
    return best if best is not None else render({})


# ── Rules ──────────────────────────────────────────────────

@dataclass(frozen=True)
class Rule:
    """A DL+log rule: disjunctive head, positive datalog, DL and NAF body parts.

    An empty head makes the rule a denial. ``onto_steps`` records how many
    ontology specialization/generalization moves produced each DL literal; it
    does not take part in equality.
    """
    head: Tuple[Atom, ...] = ()
    body_pos_datalog: Tuple[Atom, ...] = ()
    body_dl: Tuple[Atom, ...] = ()
    body_naf_datalog: Tuple[Atom, ...] = ()
    onto_steps: Tuple[Tuple[Atom, int], ...] = field(default=(), compare=False)

    @property
    def is_denial(self) -> bool:
        return not self.head

    @property
    def is_empty(self) -> bool:
        return not self.head and not self.body_literal_count

    @property
    def body_literal_count(self) -> int:
        return len(self.body_pos_datalog) + len(self.body_dl) + len(self.body_naf_datalog)

    def body_atoms(self) -> Tuple[Atom, ...]:
        return self.body_pos_datalog + self.body_dl + self.body_naf_datalog

    def atoms(self) -> Tuple[Atom, ...]:
        return self.head + self.body_atoms()

    def variables(self) -> List[Variable]:
        return _ordered_variables(
            (self.head, self.body_pos_datalog, self.body_dl, self.body_naf_datalog)
        )

    def constants(self) -> List[Constant]:
        seen: List[Constant] = []
        for a in self.atoms():
            for c in a.constants():
                if c not in seen:
                    seen.append(c)
        return seen

    @property
    def is_ground(self) -> bool:
        return all(a.is_ground for a in self.atoms())

    def substitute(self, theta: Dict[Variable, Term]) -> Rule:
        def sub(atoms: Tuple[Atom, ...]) -> Tuple[Atom, ...]:
            return tuple(a.substitute(theta) for a in atoms)

        return Rule(
            head=sub(self.head),
            body_pos_datalog=sub(self.body_pos_datalog),
            body_dl=sub(self.body_dl),
            body_naf_datalog=sub(self.body_naf_datalog),
            onto_steps=tuple((a.substitute(theta), n) for a, n in self.onto_steps),
        )

    def steps_of(self, atom: Atom) -> int:
        for a, n in self.onto_steps:
            if a == atom:
                return n
        return 0

    def key(self) -> Tuple[Tuple[str, ...], ...]:
        """Canonical key: equal iff equal as sets modulo variable renaming."""
        return rule_key(self)

    def render(self) -> str:
        head = " v ".join(str(a) for a in self.head)
        body = [str(a) for a in self.body_pos_datalog]
        body += [str(a) for a in self.body_dl]
        body += [f"not {a}" for a in self.body_naf_datalog]
        if not body:
            return f"{head}." if head else ":- ."
        if head:
            return f"{head} :- {', '.join(body)}."
        return f":- {', '.join(body)}."

    def __str__(self) -> str:
        return self.render()

    def to_dict(self) -> dict:
        return {"text": self.render()}


@lru_cache(maxsize=65536)
def rule_key(rule: Rule) -> Tuple[Tuple[str, ...], ...]:
    return _canonical_key(
        (rule.head, rule.body_pos_datalog, rule.body_dl, rule.body_naf_datalog)
    )


def same_rule(a: Rule, b: Rule) -> bool:
    return rule_key(a) == rule_key(b)


def fact_rule(atom: Atom) -> Rule:
    return Rule(head=(atom,))


def denial(*atoms: Atom) -> Rule:
    """A denial over ground or non-ground atoms, split by kind."""
    return Rule(
        body_pos_datalog=tuple(a for a in atoms if not a.is_dl),
        body_dl=tuple(a for a in atoms if a.is_dl),
    )


# ── Ontology axioms ────────────────────────────────────────

@dataclass(frozen=True, order=True)
class RoleExpr:
    name: str
    inverse: bool = False

    def __str__(self) -> str:
        return f"inv({self.name})" if self.inverse else self.name


@dataclass(frozen=True)
class ConceptInclusion:
    """lhs_1 and ... and lhs_n subClassOf rhs.

    With ``role`` set the right-hand side is ``some role rhs`` (``rhs`` may be
    Top); with ``negated`` it is ``not rhs``.
    """
    lhs: Tuple[str, ...]
    rhs: str
    negated: bool = False
    role: Optional[RoleExpr] = None

    def __post_init__(self):
        if not self.lhs:
            raise ValueError("concept inclusion needs a nonempty left-hand side")
        if self.negated and self.role is not None:
            raise ValueError("negated existential is outside the fragment")

    @property
    def is_atomic(self) -> bool:
        return len(self.lhs) == 1 and not self.negated and self.role is None

    def concept_names(self) -> List[str]:
        names = list(self.lhs)
        if self.rhs != TOP:
            names.append(self.rhs)
        return names

    def role_names(self) -> List[str]:
        return [self.role.name] if self.role else []

    def __str__(self) -> str:
        lhs = " and ".join(self.lhs)
        if self.role is not None:
            return f"{lhs} subClassOf some {self.role} {self.rhs}."
        if self.negated:
            return f"{lhs} subClassOf not {self.rhs}."
        return f"{lhs} subClassOf {self.rhs}."


@dataclass(frozen=True)
class RoleInclusion:
    sub: RoleExpr
    sup: RoleExpr

    def concept_names(self) -> List[str]:
        return []

    def role_names(self) -> List[str]:
        return [self.sub.name, self.sup.name]

    def __str__(self) -> str:
        return f"{self.sub} subRoleOf {self.sup}."


TBoxAxiom = Union[ConceptInclusion, RoleInclusion]


@dataclass(frozen=True, order=True)
class ConceptAssertion:
    concept: str
    individual: str

    def to_atom(self) -> Atom:
        return Atom(Predicate(self.concept, 1, CONCEPT), (Constant(self.individual),))

    def __str__(self) -> str:
        return f"{self.concept}({self.individual})."


@dataclass(frozen=True, order=True)
class RoleAssertion:
    role: str
    subject: str
    object: str

    def to_atom(self) -> Atom:
        return Atom(Predicate(self.role, 2, ROLE),
                    (Constant(self.subject), Constant(self.object)))

    def __str__(self) -> str:
        return f"{self.role}({self.subject},{self.object})."


ABoxAssertion = Union[ConceptAssertion, RoleAssertion]


def assertion_from_atom(atom: Atom) -> ABoxAssertion:
    if not atom.is_dl or not atom.is_ground:
        raise ValueError(f"{atom} is not a ground DL atom")
    if atom.predicate.kind == CONCEPT:
        return ConceptAssertion(atom.predicate.name, atom.args[0].name)
    return RoleAssertion(atom.predicate.name, atom.args[0].name, atom.args[1].name)


# ── Knowledge base ─────────────────────────────────────────

@dataclass(frozen=True)
class HybridKB:
    """B = (Sigma, Pi): TBox and ABox plus rules and ground datalog facts."""
    tbox: Tuple[TBoxAxiom, ...] = ()
    abox: Tuple[ABoxAssertion, ...] = ()
    rules: Tuple[Rule, ...] = ()
    facts: Tuple[Atom, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not (self.tbox or self.abox or self.rules or self.facts)

    def abox_atoms(self) -> Tuple[Atom, ...]:
        return tuple(a.to_atom() for a in self.abox)

    def with_rules(self, *rules: Rule) -> HybridKB:
        return replace(self, rules=self.rules + tuple(rules))

    def with_facts(self, *facts: Atom) -> HybridKB:
        return replace(self, facts=self.facts + tuple(facts))

    def with_abox(self, *assertions: ABoxAssertion) -> HybridKB:
        return replace(self, abox=self.abox + tuple(assertions))

    def intensional(self) -> HybridKB:
        """K = (T, Pi_R): the part that generality checks reason with."""
        return HybridKB(tbox=self.tbox, rules=self.rules)

    def without_facts(self) -> HybridKB:
        return replace(self, facts=())

    def predicates(self) -> Dict[Tuple[str, int], Predicate]:
        """Signature table keyed by (name, arity)."""
        table: Dict[Tuple[str, int], Predicate] = {}
        for ax in self.tbox:
            for name in ax.concept_names():
                table[(name, 1)] = Predicate(name, 1, CONCEPT)
            for name in ax.role_names():
                table[(name, 2)] = Predicate(name, 2, ROLE)
        atoms: List[Atom] = list(self.abox_atoms()) + list(self.facts)
        for r in self.rules:
            atoms.extend(r.atoms())
        for a in atoms:
            table.setdefault(a.predicate.signature_key, a.predicate)
        return table

    def to_dict(self) -> dict:
        return {
            "tbox": [str(a) for a in self.tbox],
            "abox": [str(a) for a in self.abox],
            "rules": [str(r) for r in self.rules],
            "facts": [f"{a}." for a in self.facts],
        }


# ── Validation reports ─────────────────────────────────────

@dataclass(frozen=True)
class Span:
    line: int
    column: int
    end_line: int = 0
    end_column: int = 0

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class Violation:
    """One violated admissibility condition of a rule."""
    rule: str
    condition: str  # datalog-safeness | weak-dl-safeness | naf-on-dl-atom
    variable: str = ""
    span: Optional[Span] = None

    def describe(self) -> str:
        where = f"{self.span}: " if self.span else ""
        var = f" (variable {self.variable})" if self.variable else ""
        return f"{where}{self.condition} violated by {self.rule}{var}"


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()
    # Body variables kept existential: weakly safe but not DL-safe
    weakly_safe: Tuple[Variable, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


# ── Datalog engine ─────────────────────────────────────────

Interpretation = FrozenSet[Atom]


@dataclass(frozen=True)
class GroundProgram:
    """Ground rules over datalog atoms only; facts are empty-body rules."""
    rules: Tuple[Rule, ...] = ()

    def herbrand_base(self) -> FrozenSet[Atom]:
        return frozenset(a for r in self.rules for a in r.atoms())

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.rules)


def interpretation_key(interp: Iterable[Atom]) -> Tuple[str, ...]:
    return tuple(sorted(str(a) for a in interp))


# ── DL kernel ──────────────────────────────────────────────

@dataclass(frozen=True)
class BooleanCQ:
    """Existentially closed conjunction of DL atoms."""
    atoms: FrozenSet[Atom] = frozenset()

    def variables(self) -> List[Variable]:
        return _ordered_variables([sorted(self.atoms, key=atom_sort_key)])

    def key(self) -> Tuple[Tuple[str, ...], ...]:
        return cq_key(self)

    def __len__(self) -> int:
        return len(self.atoms)

    def __str__(self) -> str:
        body = ", ".join(sorted(str(a) for a in self.atoms)) or "true"
        vs = self.variables()
        if not vs:
            return body
        return f"exists {','.join(v.name for v in vs)}: {body}"


@lru_cache(maxsize=65536)
def cq_key(cq: BooleanCQ) -> Tuple[Tuple[str, ...], ...]:
    return _canonical_key((sorted(cq.atoms, key=atom_sort_key),))


@dataclass(frozen=True)
class BooleanUCQ:
    """Disjunction of Boolean CQs; the empty UCQ is unsatisfiable."""
    disjuncts: Tuple[BooleanCQ, ...] = ()

    def __len__(self) -> int:
        return len(self.disjuncts)


@dataclass(frozen=True)
class CanonicalInstance:
    atoms: FrozenSet[Atom]
    depth: Tuple[Tuple[Constant, int], ...] = ()
    clash: bool = False
    clash_reason: str = ""

    def depth_of(self, c: Constant) -> int:
        for k, d in self.depth:
            if k == c:
                return d
        return 0

    def nulls(self) -> List[Constant]:
        return [c for c, d in self.depth if d > 0]


# ── Hybrid reasoner ────────────────────────────────────────

@dataclass(frozen=True)
class GroundingUnit:
    """An element of the DL-grounding: a rule body's DL part or a head DL atom.

    Units are identified by their query alone, so identical conjunctions coming
    from different rules are merged.
    """
    cq: BooleanCQ
    kind: str = field(default="body", compare=False)  # body | head
    origin: str = field(default="", compare=False)

    @property
    def key(self) -> Tuple[Tuple[str, ...], ...]:
        return cq_key(self.cq)

    def __str__(self) -> str:
        return str(self.cq)


def unit_sort_key(u: GroundingUnit):
    return u.key


@dataclass(frozen=True)
class Partition:
    g_pos: FrozenSet[GroundingUnit] = frozenset()
    g_neg: FrozenSet[GroundingUnit] = frozenset()

    def __post_init__(self):
        if self.g_pos & self.g_neg:
            raise ValueError("partition blocks must be disjoint")

    def units(self) -> FrozenSet[GroundingUnit]:
        return self.g_pos | self.g_neg

    def to_dict(self) -> dict:
        return {
            "g_pos": sorted(str(u) for u in self.g_pos),
            "g_neg": sorted(str(u) for u in self.g_neg),
        }


@dataclass(frozen=True)
class SatResult:
    satisfiable: bool
    partition: Optional[Partition] = None
    model: Optional[Interpretation] = None
    explored: int = 0

    def __bool__(self) -> bool:
        return self.satisfiable

    def to_dict(self) -> dict:
        return {
            "satisfiable": self.satisfiable,
            "partition": self.partition.to_dict() if self.partition else None,
            "model": list(interpretation_key(self.model)) if self.model is not None else None,
            "explored": self.explored,
        }


# ── Generality ─────────────────────────────────────────────

@dataclass(frozen=True)
class SkolemContext:
    sigma: Tuple[Tuple[Variable, Constant], ...] = ()
    reserved: FrozenSet[Constant] = frozenset()

    def as_dict(self) -> Dict[Variable, Term]:
        return dict(self.sigma)

    def constants(self) -> List[Constant]:
        return [c for _, c in self.sigma]


@dataclass(frozen=True)
class GroundSubstitution:
    """A total map from the variables of one rule to constants."""
    theta: Tuple[Tuple[Variable, Constant], ...] = ()

    def as_dict(self) -> Dict[Variable, Term]:
        return dict(self.theta)

    def apply(self, rule: Rule) -> Rule:
        missing = [v for v in rule.variables() if v not in self.as_dict()]
        if missing:
            raise ValueError(f"substitution leaves {', '.join(v.name for v in missing)} unbound")
        return rule.substitute(self.as_dict())

    def __str__(self) -> str:
        return "{" + ", ".join(f"{v}/{c}" for v, c in self.theta) + "}"


# ── Language bias ──────────────────────────────────────────

@dataclass(frozen=True)
class AtomTemplate:
    """A predicate with open slots (None) and fixed constant slots."""
    predicate: Predicate
    slots: Tuple[Optional[Constant], ...] = ()

    def __post_init__(self):
        if len(self.slots) != self.predicate.arity:
            raise ValueError(f"template for {self.predicate} has {len(self.slots)} slots")

    @classmethod
    def open(cls, predicate: Predicate) -> AtomTemplate:
        return cls(predicate, (None,) * predicate.arity)

    @property
    def open_slots(self) -> List[int]:
        return [i for i, s in enumerate(self.slots) if s is None]

    def instantiate(self, fill: Sequence[Term]) -> Atom:
        it = iter(fill)
        args = tuple(next(it) if s is None else s for s in self.slots)
        return Atom(self.predicate, args)

    def __str__(self) -> str:
        if not self.slots:
            return self.predicate.name
        inner = ",".join("_" if s is None else s.name for s in self.slots)
        return f"{self.predicate.name}({inner})"


@dataclass(frozen=True)
class LanguageBias:
    target: Optional[AtomTemplate] = None
    datalog_pos: Tuple[AtomTemplate, ...] = ()
    datalog_neg: Tuple[AtomTemplate, ...] = ()
    concepts: Tuple[Predicate, ...] = ()
    roles: Tuple[Predicate, ...] = ()
    max_body_literals: int = BIAS_DEFAULTS["max_body_literals"]
    max_literal_size: int = BIAS_DEFAULTS["max_literal_size"]
    max_onto_steps: int = BIAS_DEFAULTS["max_onto_steps"]
    max_head_literals: int = BIAS_DEFAULTS["max_head_literals"]

    def bounds(self) -> Dict[str, int]:
        return {k: getattr(self, k) for k in BIAS_DEFAULTS}

    def onto_predicates(self) -> Tuple[Predicate, ...]:
        return self.concepts + self.roles

    def to_dict(self) -> dict:
        d = {
            "target": str(self.target) if self.target else None,
            "datalog_pos": [str(t) for t in self.datalog_pos],
            "datalog_neg": [str(t) for t in self.datalog_neg],
            "concepts": [p.name for p in self.concepts],
            "roles": [p.name for p in self.roles],
        }
        d.update(self.bounds())
        return d


# ── Learning ───────────────────────────────────────────────

@dataclass(frozen=True)
class ExampleSet:
    positives: Tuple[Atom, ...] = ()
    negatives: Tuple[Atom, ...] = ()

    def __post_init__(self):
        overlap = set(self.positives) & set(self.negatives)
        if overlap:
            names = ", ".join(sorted(str(a) for a in overlap))
            raise ValueError(f"examples both positive and negative: {names}")

    def to_dict(self) -> dict:
        return {
            "positives": [str(a) for a in self.positives],
            "negatives": [str(a) for a in self.negatives],
        }


@dataclass
class Theory:
    """An induced rule set, in acceptance order, with a trace entry per rule."""
    rules: List[Rule] = field(default_factory=list)
    provenance: List[str] = field(default_factory=list)

    def add(self, rule: Rule, note: str = "") -> None:
        self.rules.append(rule)
        self.provenance.append(note)

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def keys(self) -> List[Tuple[Tuple[str, ...], ...]]:
        return [rule_key(r) for r in self.rules]

    def to_dict(self) -> dict:
        return {
            "rules": [
                {"text": r.render(), "provenance": p}
                for r, p in zip(self.rules, self.provenance)
            ],
        }

    @classmethod
    def from_rules(cls, rules: Iterable[Rule], note: str = "") -> Theory:
        t = cls()
        for r in rules:
            t.add(r, note)
        return t


@dataclass(frozen=True)
class Score:
    pos_covered: int = 0
    neg_covered: int = 0
    body_len: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


# ── Source documents ───────────────────────────────────────

@dataclass
class Section:
    kind: str  # tbox | abox | rules | facts | bias | examples
    items: list = field(default_factory=list)
    spans: List[Span] = field(default_factory=list)
    span: Optional[Span] = None


@dataclass
class SourceDocument:
    sections: List[Section] = field(default_factory=list)
    source: str = ""

    def section(self, kind: str) -> Optional[Section]:
        for s in self.sections:
            if s.kind == kind:
                return s
        return None


# ── Run configuration ──────────────────────────────────────

@dataclass
class RunConfig:
    """Everything one CLI invocation or YAML task needs."""
    kb_path: str
    bias_path: Optional[str] = None
    examples_path: Optional[str] = None
    max_partitions: int = DEFAULT_MAX_PARTITIONS
    max_herbrand: int = DEFAULT_MAX_HERBRAND
    max_candidates: int = DEFAULT_MAX_CANDIDATES
    output_format: str = "text"  # text | json
    trace: bool = False
    deterministic: bool = True
    command: str = ""
    name: str = ""
    description: str = ""
    minimize: bool = False
    allow_vacuous: bool = False
    output_dir: Optional[str] = None

    def __post_init__(self):
        if min(self.max_partitions, self.max_herbrand, self.max_candidates) < 1:
            raise ValueError("caps must be positive")
        if self.output_format not in ("text", "json"):
            raise ValueError(f"unknown output format {self.output_format!r}")
        # Determinism is not negotiable
        self.deterministic = True

    def limits(self) -> Limits:
        return Limits(max_partitions=self.max_partitions, max_herbrand=self.max_herbrand,
                      max_candidates=self.max_candidates)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> RunConfig:
        return cls(**{k: v for k, v in d.items() if k in cls.__dataclass_fields__})


# ── Run state ──────────────────────────────────────────────

@dataclass
class RunState:
    """Outcome of one learn-view or discover run, as written to run_state.json."""
    command: str
    task: str = ""
    kb_path: str = ""
    bias_path: str = ""
    examples_path: str = ""
    limits: Dict[str, int] = field(default_factory=dict)
    rules: List[str] = field(default_factory=list)
    provenance: List[str] = field(default_factory=list)
    dropped: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    trace: Dict[str, object] = field(default_factory=dict)

    @property
    def num_rules(self) -> int:
        return len(self.rules)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> RunState:
        return cls(**{k: v for k, v in d.items() if k in cls.__dataclass_fields__})
