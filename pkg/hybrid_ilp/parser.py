"""Surface syntax for knowledge bases, language biases, example sets and theories."""

from __future__ import annotations

import logging
from typing import Dict, Iterable, List, Optional, Tuple, Union

from lark import Lark, Transformer, v_args
from lark.exceptions import LarkError, UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, VisitError

from hybrid_ilp.config import BIAS_DEFAULTS
from hybrid_ilp.errors import (
    BiasError, HybridILPError, KBValidationError, KindClashError, ParseError,
)
from hybrid_ilp.kb import Signature, validate_kb, validate_rule
from hybrid_ilp.schemas import (
    CONCEPT, DATALOG, ROLE, Atom, AtomTemplate, ConceptInclusion, Constant,
    ExampleSet, HybridKB, LanguageBias, Predicate, RoleExpr, RoleInclusion,
    Rule, Section, SourceDocument, Span, Theory, Variable, assertion_from_atom,
)

logger = logging.getLogger(__name__)

GRAMMAR = r"""
start: _block*

_block: tbox | abox | rules | facts | bias | examples

tbox: "tbox" "{" _axiom* "}"
abox: "abox" "{" fact* "}"
rules: "rules" "{" rule* "}"
facts: "facts" "{" fact* "}"
bias: "bias" "{" _bias_field* "}"
examples: "examples" "{" _example_field* "}"

atom_query: atom "."?
rule_query: rule

// ontology axioms
_axiom: concept_inclusion | role_inclusion
concept_inclusion: conjunction "subClassOf" superclass "."
conjunction: UNAME ("and" UNAME)*
superclass: UNAME                  -> atomic_super
          | "not" UNAME            -> negated_super
          | "some" role filler     -> exists_super
filler: UNAME | TOP
role: UNAME                        -> plain_role
    | "inv" "(" UNAME ")"          -> inverse_role
role_inclusion: role "subRoleOf" role "."

// rules and facts
rule: head ":-" body "."           -> full_rule
    | head ":-"? "."               -> head_rule
    | ":-" body "."                -> denial_rule
    | ":-" "."                     -> empty_rule
head: atom ("v" atom)*
body: literal ("," literal)*
literal: atom                      -> positive
       | "not" atom                -> negative
fact: atom "."
atom: (UNAME | LNAME) ("(" term ("," term)* ")")?
term: UNAME                        -> variable
    | LNAME                        -> constant

// language bias
_bias_field: target | datalog_pos | datalog_neg | concepts | roles | bound
target: "target" ":" template "."
datalog_pos: "datalog_pos" ":" _templates? "."
datalog_neg: "datalog_neg" ":" _templates? "."
_templates: template ("," template)*
template: LNAME "/" INT                  -> arity_template
        | LNAME "(" slot ("," slot)* ")" -> slot_template
        | LNAME                          -> bare_template
slot: "_"                          -> open_slot
    | LNAME                        -> fixed_slot
concepts: "concepts" ":" _unames? "."
roles: "roles" ":" _unames? "."
_unames: UNAME ("," UNAME)*
bound: BOUND ":" INT "."
BOUND: "max_body_literals" | "max_literal_size" | "max_onto_steps" | "max_head_literals"

// examples
_example_field: pos | neg
pos: "pos" ":" _atoms? "."
neg: "neg" ":" _atoms? "."
_atoms: atom ("," atom)*

TOP.2: "Top"
UNAME: /[A-Z][A-Za-z0-9_]*/
LNAME: /[a-z0-9][A-Za-z0-9_]*/
COMMENT: /%[^\n]*/

%import common.INT
%import common.WS
%ignore WS
%ignore COMMENT
"""

_PARSER = Lark(
    GRAMMAR,
    parser="lalr",
    lexer="contextual",
    propagate_positions=True,
    start=["start", "atom_query", "rule_query"],
)

def _span(meta) -> Optional[Span]:
    if getattr(meta, "empty", True):
        return None
    return Span(meta.line, meta.column, meta.end_line, meta.end_column)


def _at(span: Optional[Span]) -> Tuple[int, int]:
    return (span.line, span.column) if span else (1, 1)


# ── Tree to domain objects ─────────────────────────────────

@v_args(meta=True)
class _DocumentTransformer(Transformer):
    """Builds domain objects; names take their kind from capitalization."""

    def __init__(self, source: str = ""):
        super().__init__()
        self.source = source

    # terms and atoms
    def variable(self, meta, children):
        return Variable(str(children[0]))

    def constant(self, meta, children):
        return Constant(str(children[0]))

    def atom(self, meta, children):
        name, args = children[0], tuple(children[1:])
        if name.type == "UNAME":
            if len(args) == 1:
                return Atom(Predicate(str(name), 1, CONCEPT), args)
            if len(args) == 2:
                return Atom(Predicate(str(name), 2, ROLE), args)
            line, column = _at(_span(meta))
            raise KindClashError(
                f"{line}:{column}: {name} is a concept or role name but has {len(args)} arguments"
            )
        return Atom(Predicate(str(name), len(args), DATALOG), args)

    # rules
    def positive(self, meta, children):
        return ("pos", children[0])

    def negative(self, meta, children):
        return ("naf", children[0])

    def head(self, meta, children):
        return tuple(children)

    def body(self, meta, children):
        return list(children)

    def _rule(self, meta, head, body) -> Tuple[Rule, Optional[Span]]:
        pos = tuple(a for k, a in body if k == "pos" and not a.is_dl)
        dl = tuple(a for k, a in body if k == "pos" and a.is_dl)
        naf = tuple(a for k, a in body if k == "naf")
        return Rule(head, pos, dl, naf), _span(meta)

    def full_rule(self, meta, children):
        return self._rule(meta, children[0], children[1])

    def head_rule(self, meta, children):
        return self._rule(meta, children[0], [])

    def denial_rule(self, meta, children):
        return self._rule(meta, (), children[0])

    def empty_rule(self, meta, children):
        return self._rule(meta, (), [])

    def fact(self, meta, children):
        return children[0], _span(meta)

    # axioms
    def conjunction(self, meta, children):
        return tuple(str(t) for t in children)

    def atomic_super(self, meta, children):
        return {"rhs": str(children[0])}

    def negated_super(self, meta, children):
        return {"rhs": str(children[0]), "negated": True}

    def exists_super(self, meta, children):
        return {"rhs": children[1], "role": children[0]}

    def filler(self, meta, children):
        return str(children[0])

    def plain_role(self, meta, children):
        return RoleExpr(str(children[0]))

    def inverse_role(self, meta, children):
        return RoleExpr(str(children[0]), inverse=True)

    def concept_inclusion(self, meta, children):
        return ConceptInclusion(lhs=children[0], **children[1]), _span(meta)

    def role_inclusion(self, meta, children):
        return RoleInclusion(children[0], children[1]), _span(meta)

    # bias
    def arity_template(self, meta, children):
        return AtomTemplate.open(Predicate(str(children[0]), int(children[1]), DATALOG))

    def slot_template(self, meta, children):
        slots = tuple(children[1:])
        return AtomTemplate(Predicate(str(children[0]), len(slots), DATALOG), slots)

    def bare_template(self, meta, children):
        return AtomTemplate(Predicate(str(children[0]), 0, DATALOG), ())

    def open_slot(self, meta, children):
        return None

    def fixed_slot(self, meta, children):
        return Constant(str(children[0]))

    def target(self, meta, children):
        return ("target", children[0]), _span(meta)

    def datalog_pos(self, meta, children):
        return ("datalog_pos", tuple(children)), _span(meta)

    def datalog_neg(self, meta, children):
        return ("datalog_neg", tuple(children)), _span(meta)

    def concepts(self, meta, children):
        return ("concepts", tuple(str(t) for t in children)), _span(meta)

    def roles(self, meta, children):
        return ("roles", tuple(str(t) for t in children)), _span(meta)

    def bound(self, meta, children):
        return (str(children[0]), int(children[1])), _span(meta)

    # examples
    def pos(self, meta, children):
        return ("pos", tuple(children)), _span(meta)

    def neg(self, meta, children):
        return ("neg", tuple(children)), _span(meta)

    # blocks
    def _section(self, kind, meta, children) -> Section:
        return Section(
            kind=kind,
            items=[item for item, _ in children],
            spans=[span for _, span in children],
            span=_span(meta),
        )

    def tbox(self, meta, children):
        return self._section("tbox", meta, children)

    def abox(self, meta, children):
        return self._section("abox", meta, children)

    def rules(self, meta, children):
        return self._section("rules", meta, children)

    def facts(self, meta, children):
        return self._section("facts", meta, children)

    def bias(self, meta, children):
        return self._section("bias", meta, children)

    def examples(self, meta, children):
        return self._section("examples", meta, children)

    def start(self, meta, children):
        seen = set()
        for section in children:
            if section.kind in seen:
                line, column = _at(section.span)
                raise ParseError(f"duplicate {section.kind} block", line, column, source=self.source)
            seen.add(section.kind)
        return SourceDocument(list(children), self.source)

    def atom_query(self, meta, children):
        return children[0]

    def rule_query(self, meta, children):
        return children[0][0]


def _describe(e: UnexpectedInput) -> str:
    if isinstance(e, UnexpectedEOF):
        return "unexpected end of input"
    if isinstance(e, UnexpectedCharacters):
        return f"unexpected character {e.char!r}"
    token = getattr(e, "token", None)
    if token is not None:
        return f"unexpected {token.type} {str(token)!r}"
    return str(e).splitlines()[0] if str(e) else "syntax error"


def _parse(text: Union[str, bytes], start: str, source: str = ""):
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError("input is not valid UTF-8", 1, 1, source=source) from e
    try:
        tree = _PARSER.parse(text, start=start)
    except UnexpectedInput as e:
        try:
            context = e.get_context(text)
        except Exception:
            context = ""
        raise ParseError(_describe(e), getattr(e, "line", 1), getattr(e, "column", 1),
                         context, source) from e
    except LarkError as e:
        raise ParseError(str(e), source=source) from e
    try:
        return _DocumentTransformer(source).transform(tree)
    except VisitError as e:
        orig = e.orig_exc
        if isinstance(orig, HybridILPError):
            raise orig from None
        meta = getattr(e.obj, "meta", None)
        line, column = _at(_span(meta)) if meta is not None else (1, 1)
        raise ParseError(str(orig), line, column, source=source) from orig


# ── Public entry points ────────────────────────────────────

def parse_document(text: Union[str, bytes], source: str = "") -> SourceDocument:
    return _parse(text, "start", source)


def parse_atom(text: Union[str, bytes], source: str = "") -> Atom:
    return _parse(text, "atom_query", source)


def parse_rule(text: Union[str, bytes], source: str = "") -> Rule:
    return _parse(text, "rule_query", source)


def kb_from_document(doc: SourceDocument) -> HybridKB:
    """Assemble and validate the KB blocks of ``doc``; other blocks are ignored."""
    tbox: Tuple = ()
    abox: List = []
    rules: Tuple[Rule, ...] = ()
    facts: List[Atom] = []
    spans: Dict[int, Span] = {}

    section = doc.section("tbox")
    if section:
        tbox = tuple(section.items)
    section = doc.section("abox")
    if section:
        for atom, span in zip(section.items, section.spans):
            if not atom.is_dl or not atom.is_ground:
                line, column = _at(span)
                raise ParseError(f"abox assertion {atom} must be a ground concept or role atom",
                                 line, column, source=doc.source)
            abox.append(assertion_from_atom(atom))
    section = doc.section("rules")
    if section:
        rules = tuple(section.items)
        spans = {i: s for i, s in enumerate(section.spans) if s is not None}
    section = doc.section("facts")
    if section:
        for atom, span in zip(section.items, section.spans):
            if atom.is_dl or not atom.is_ground:
                line, column = _at(span)
                raise ParseError(f"fact {atom} must be a ground datalog atom",
                                 line, column, source=doc.source)
            facts.append(atom)

    kb = HybridKB(tbox=tbox, abox=tuple(abox), rules=rules, facts=tuple(facts))
    validate_kb(kb, spans, doc.source)
    return kb


def parse_kb(text: Union[str, bytes], source: str = "") -> HybridKB:
    """Parse and validate a knowledge base."""
    return kb_from_document(parse_document(text, source))


def bias_from_section(section: Optional[Section], signature: Optional[Signature] = None,
                      source: str = "") -> LanguageBias:
    fields: Dict[str, object] = {}
    if section is not None:
        for (name, value), span in zip(section.items, section.spans):
            if name in fields:
                line, column = _at(span)
                raise ParseError(f"duplicate bias field {name}", line, column, source=source)
            fields[name] = value

    bounds = {k: fields.get(k, v) for k, v in BIAS_DEFAULTS.items()}
    for k, v in bounds.items():
        if v < 1:
            raise BiasError(f"{k} must be at least 1, got {v}")

    target = fields.get("target")
    d_pos = tuple(fields.get("datalog_pos", ()))
    d_neg = tuple(fields.get("datalog_neg", ()))
    concepts = tuple(Predicate(n, 1, CONCEPT) for n in fields.get("concepts", ()))
    roles = tuple(Predicate(n, 2, ROLE) for n in fields.get("roles", ()))

    if target is not None and any(t.predicate == target.predicate for t in d_neg):
        raise BiasError(f"target {target.predicate} is declared in datalog_neg")

    if signature is not None:
        templates = list(d_pos) + list(d_neg)
        for pred in [t.predicate for t in templates] + list(concepts) + list(roles):
            _check_bias_predicate(pred, signature)
        # the target is usually new to the KB; it only has to fit any declaration
        if target is not None and target.predicate.signature_key in signature:
            _check_bias_predicate(target.predicate, signature)

    return LanguageBias(
        target=target, datalog_pos=d_pos, datalog_neg=d_neg,
        concepts=concepts, roles=roles, **bounds,
    )


def _check_bias_predicate(pred: Predicate, signature: Signature) -> None:
    declared = signature.get(pred.signature_key)
    if declared is None:
        arities = sorted(a for (n, a) in signature if n == pred.name)
        if arities:
            raise BiasError(f"{pred.name} used with arity {pred.arity} in the bias, "
                            f"declared with {', '.join(str(a) for a in arities)}")
        raise BiasError(f"bias mentions unknown predicate {pred}")
    if declared.kind != pred.kind:
        raise BiasError(f"bias declares {pred} as {pred.kind}, KB uses it as {declared.kind}")


def parse_bias(text: Union[str, bytes], signature: Optional[Signature] = None,
               source: str = "") -> LanguageBias:
    """Parse a ``bias { ... }`` block; omitted bounds take their defaults."""
    doc = parse_document(text, source)
    return bias_from_section(doc.section("bias"), signature, source)


def examples_from_section(section: Optional[Section], source: str = "") -> ExampleSet:
    pos: Tuple[Atom, ...] = ()
    neg: Tuple[Atom, ...] = ()
    if section is None:
        return ExampleSet()
    for (name, atoms), span in zip(section.items, section.spans):
        for a in atoms:
            if not a.is_ground:
                line, column = _at(span)
                raise ParseError(f"example {a} is not ground", line, column, source=source)
        if name == "pos":
            pos += tuple(atoms)
        else:
            neg += tuple(atoms)
    try:
        return ExampleSet(positives=pos, negatives=neg)
    except ValueError as e:
        line, column = _at(section.span)
        raise ParseError(str(e), line, column, source=source) from e


def parse_examples(text: Union[str, bytes], source: str = "") -> ExampleSet:
    return examples_from_section(parse_document(text, source).section("examples"), source)


def parse_theory(text: Union[str, bytes], source: str = "") -> Tuple[Rule, ...]:
    """Rules of a ``rules { ... }`` block, each checked for safeness."""
    doc = parse_document(text, source)
    section = doc.section("rules")
    if section is None:
        return ()
    violations = []
    for rule, span in zip(section.items, section.spans):
        violations.extend(validate_rule(rule, span=span).violations)
    if violations:
        raise KBValidationError(violations, source)
    return tuple(section.items)


# ── Serialization ──────────────────────────────────────────

def _block(kind: str, lines: Iterable[str]) -> str:
    body = "".join(f"  {line}\n" for line in lines)
    return f"{kind} {{\n{body}}}\n"


def _serialize_bias(bias: LanguageBias) -> str:
    lines = []
    if bias.target is not None:
        lines.append(f"target: {bias.target}.")
    lines.append(f"datalog_pos: {', '.join(str(t) for t in bias.datalog_pos)}.")
    lines.append(f"datalog_neg: {', '.join(str(t) for t in bias.datalog_neg)}.")
    lines.append(f"concepts: {', '.join(p.name for p in bias.concepts)}.")
    lines.append(f"roles: {', '.join(p.name for p in bias.roles)}.")
    for k, v in bias.bounds().items():
        lines.append(f"{k}: {v}.")
    return _block("bias", lines)


def serialize(obj) -> str:
    """Render a KB, bias, example set or theory in the surface syntax."""
    if isinstance(obj, HybridKB):
        parts = []
        if obj.tbox:
            parts.append(_block("tbox", (str(a) for a in obj.tbox)))
        if obj.abox:
            parts.append(_block("abox", (str(a) for a in obj.abox)))
        if obj.rules:
            parts.append(_block("rules", (r.render() for r in obj.rules)))
        if obj.facts:
            parts.append(_block("facts", (f"{a}." for a in obj.facts)))
        return "\n".join(parts)
    if isinstance(obj, LanguageBias):
        return _serialize_bias(obj)
    if isinstance(obj, ExampleSet):
        return _block("examples", [
            f"pos: {', '.join(str(a) for a in obj.positives)}.",
            f"neg: {', '.join(str(a) for a in obj.negatives)}.",
        ])
    if isinstance(obj, Theory):
        return _block("rules", (r.render() for r in obj.rules))
    if isinstance(obj, (list, tuple)) and all(isinstance(r, Rule) for r in obj):
        return _block("rules", (r.render() for r in obj))
    raise TypeError(f"cannot serialize {type(obj).__name__}")
