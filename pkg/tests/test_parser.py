"""Tests for hybrid_ilp.parser."""

import random

import pytest

from hybrid_ilp.errors import BiasError, KBValidationError, KindClashError, ParseError
from hybrid_ilp.kb import check_signature
from hybrid_ilp.parser import (
    parse_atom, parse_bias, parse_document, parse_examples, parse_kb, parse_rule,
    parse_theory, serialize,
)
from hybrid_ilp.schemas import (
    CONCEPT, DATALOG, ROLE, ConceptInclusion, Constant, HybridKB, RoleInclusion,
    Theory, rule_key,
)


def kb_key(kb):
    """Structure of a KB modulo rule variable names."""
    return (
        tuple(str(a) for a in kb.tbox),
        tuple(str(a) for a in kb.abox),
        tuple(rule_key(r) for r in kb.rules),
        tuple(str(a) for a in kb.facts),
    )


class TestAtoms:
    def test_kind_from_capitalization(self):
        assert parse_atom("RICH(mary)").predicate.kind == CONCEPT
        assert parse_atom("LOVES(john, mary)").predicate.kind == ROLE
        assert parse_atom("famous(mary)").predicate.kind == DATALOG

    def test_variables_and_constants(self):
        a = parse_atom("enrolled(X, c1, ft)")
        assert [type(t).__name__ for t in a.args] == ["Variable", "Constant", "Constant"]

    def test_uppercase_name_needs_one_or_two_args(self):
        with pytest.raises(KindClashError):
            parse_atom("R(a, b, c)")

    def test_zero_arity(self):
        a = parse_atom("ready")
        assert a.predicate.arity == 0


class TestRules:
    def test_body_split(self):
        r = parse_rule("boy(X) :- enrolled(X, c1, ft), PERSON(X), not girl(X).")
        assert [str(a) for a in r.body_pos_datalog] == ["enrolled(X,c1,ft)"]
        assert [str(a) for a in r.body_dl] == ["PERSON(X)"]
        assert [str(a) for a in r.body_naf_datalog] == ["girl(X)"]

    def test_disjunctive_head(self):
        r = parse_rule("boy(X) v girl(X) :- enrolled(X, c3, ft), PERSON(X).")
        assert len(r.head) == 2

    def test_denial_and_empty(self):
        assert parse_rule(":- enrolled(X, c2), MALE(X).").is_denial
        assert parse_rule(":- .").is_empty

    def test_predicate_starting_with_not(self):
        r = parse_rule(":- b(X), notable(X).")
        assert [a.predicate.name for a in r.body_pos_datalog] == ["b", "notable"]


class TestAxioms:
    def test_all_forms(self):
        kb = parse_kb("""
        tbox {
          RICH and UNMARRIED subClassOf some inv(WANTS_TO_MARRY) Top.
          FEMALE subClassOf not MALE.
          MALE subClassOf PERSON.
          inv(W) subRoleOf inv(LOVES).
        }
        """)
        ci, neg, atomic, ri = kb.tbox
        assert isinstance(ci, ConceptInclusion) and ci.lhs == ("RICH", "UNMARRIED")
        assert ci.role.inverse and ci.rhs == "Top"
        assert neg.negated
        assert atomic.is_atomic
        assert isinstance(ri, RoleInclusion) and ri.sub.inverse and ri.sup.inverse


class TestKB:
    def test_persons(self, persons_kb):
        assert len(persons_kb.tbox) == 4
        assert len(persons_kb.abox) == 4
        assert len(persons_kb.rules) == 6
        assert len(persons_kb.facts) == 5

    def test_comments_ignored(self):
        kb = parse_kb("% nothing\nfacts { a(b). % trailing\n }")
        assert len(kb.facts) == 1

    def test_abox_must_be_ground_dl(self):
        with pytest.raises(ParseError):
            parse_kb("abox { famous(mary). }")
        with pytest.raises(ParseError):
            parse_kb("abox { RICH(X). }")

    def test_facts_must_be_ground_datalog(self):
        with pytest.raises(ParseError):
            parse_kb("facts { RICH(mary). }")

    def test_unsafe_rule_rejected_with_span(self):
        with pytest.raises(KBValidationError) as e:
            parse_kb("rules {\n  p(X).\n}")
        assert e.value.violations[0].span.line == 2

    def test_empty_body_after_arrow(self):
        with pytest.raises(KBValidationError) as e:
            parse_kb("rules { p(X) :- . }")
        violation = e.value.violations[0]
        assert violation.variable == "X"
        assert violation.span.line == 1 and violation.span.column == 9

    def test_duplicate_block(self):
        with pytest.raises(ParseError):
            parse_document("facts { a(b). } facts { a(c). }")


class TestErrors:
    def test_position_reported(self):
        with pytest.raises(ParseError) as e:
            parse_kb("facts {\n  a(b) \n}")
        assert e.value.line >= 2
        assert e.value.column >= 1

    def test_unexpected_eof(self):
        with pytest.raises(ParseError) as e:
            parse_kb("rules { h(X) :- b(X)")
        assert e.value.line == 1

    def test_invalid_utf8(self):
        with pytest.raises(ParseError) as e:
            parse_kb(b"facts { a(\xff). }")
        assert (e.value.line, e.value.column) == (1, 1)

    def test_random_bytes_never_escape(self):
        rng = random.Random(7)
        alphabet = b"abcXY(),.:-{} \n%vnot_\xc3\xff0123"
        for _ in range(500):
            data = bytes(rng.choice(alphabet) for _ in range(rng.randint(0, 40)))
            try:
                parse_document(data)
            except ParseError as e:
                assert e.line >= 1 and e.column >= 1
            except (KBValidationError, KindClashError):
                pass


class TestBias:
    def test_happy(self, happy_bias):
        assert str(happy_bias.target) == "happy(_)"
        assert [str(t) for t in happy_bias.datalog_pos] == ["famous(_)"]
        assert happy_bias.datalog_neg == ()
        assert [p.name for p in happy_bias.roles] == ["LOVES", "WANTS_TO_MARRY"]
        assert happy_bias.max_body_literals == 2
        assert happy_bias.max_onto_steps == 2

    def test_slot_templates(self, students_bias):
        assert [str(t) for t in students_bias.datalog_pos] == [
            "boy(_)", "girl(_)", "enrolled(_,c1)", "enrolled(_,c2)", "enrolled(_,c3)",
        ]
        assert students_bias.datalog_pos[2].slots[1] == Constant("c1")

    def test_unknown_predicate(self, students_kb):
        with pytest.raises(BiasError):
            parse_bias("bias { datalog_pos: teaches/2. }", check_signature(students_kb))

    def test_arity_mismatch(self, students_kb):
        with pytest.raises(BiasError):
            parse_bias("bias { datalog_pos: enrolled/3. }", check_signature(students_kb))

    def test_target_in_negative_alphabet(self):
        with pytest.raises(BiasError):
            parse_bias("bias { target: happy/1. datalog_neg: happy/1. }")

    def test_bound_below_one(self):
        with pytest.raises(BiasError):
            parse_bias("bias { max_body_literals: 0. }")

    def test_duplicate_field(self):
        with pytest.raises(ParseError):
            parse_bias("bias { concepts: A. concepts: B. }")

    def test_new_target_allowed(self, happy_kb):
        bias = parse_bias("bias { target: happy/1. }", check_signature(happy_kb))
        assert bias.target.predicate.name == "happy"


class TestExamples:
    def test_happy(self, happy_examples):
        assert [str(a) for a in happy_examples.positives] == ["happy(mary)", "happy(joe)"]
        assert [str(a) for a in happy_examples.negatives] == ["happy(paul)"]

    def test_non_ground_rejected(self):
        with pytest.raises(ParseError):
            parse_examples("examples { pos: happy(X). }")

    def test_overlap_rejected(self):
        with pytest.raises(ParseError):
            parse_examples("examples { pos: happy(a). neg: happy(a). }")


class TestTheory:
    def test_parse(self):
        rules = parse_theory("rules { PERSON(X) :- enrolled(X, c1). :- enrolled(X, c2), MALE(X). }")
        assert len(rules) == 2

    def test_unsafe(self):
        with pytest.raises(KBValidationError):
            parse_theory("rules { p(X). }")

    def test_no_block(self):
        assert parse_theory("") == ()


class TestSerialize:
    def test_students_roundtrip(self, students_kb):
        assert kb_key(parse_kb(serialize(students_kb))) == kb_key(students_kb)

    def test_persons_roundtrip(self, persons_kb):
        assert kb_key(parse_kb(serialize(persons_kb))) == kb_key(persons_kb)

    def test_bias_roundtrip(self, students_bias, students_kb):
        again = parse_bias(serialize(students_bias), check_signature(students_kb))
        assert again == students_bias

    def test_examples_roundtrip(self, happy_examples):
        assert parse_examples(serialize(happy_examples)) == happy_examples

    def test_theory(self):
        t = Theory.from_rules([parse_rule("PERSON(X) :- enrolled(X, c1).")])
        assert serialize(t) == "rules {\n  PERSON(X) :- enrolled(X,c1).\n}\n"
        assert len(parse_theory(serialize(t))) == 1

    def test_unsupported(self):
        with pytest.raises(TypeError):
            serialize(42)


class TestRoundTripProperty:
    """Randomly generated valid KBs survive serialize then parse."""

    CONCEPTS = ["A", "B", "C", "PERSON"]
    ROLES = ["R", "S"]
    PREDS = [("p", 1), ("q", 1), ("e", 2)]
    CONSTS = ["a", "b", "c1"]

    def _datalog_atom(self, rng, variables):
        name, arity = rng.choice(self.PREDS)
        return f"{name}({', '.join(rng.choice(variables) for _ in range(arity))})"

    def _kb_text(self, rng):
        lines = ["tbox {"]
        for _ in range(rng.randint(0, 3)):
            lhs = " and ".join(rng.sample(self.CONCEPTS, rng.randint(1, 2)))
            kind = rng.randrange(3)
            if kind == 0:
                lines.append(f"{lhs} subClassOf {rng.choice(self.CONCEPTS)}.")
            elif kind == 1:
                lines.append(f"{lhs} subClassOf not {rng.choice(self.CONCEPTS)}.")
            else:
                role = rng.choice(self.ROLES)
                if rng.random() < 0.5:
                    role = f"inv({role})"
                lines.append(f"{lhs} subClassOf some {role} {rng.choice(self.CONCEPTS + ['Top'])}.")
        lines.append("}")
        lines.append("abox {")
        for _ in range(rng.randint(0, 3)):
            lines.append(f"{rng.choice(self.CONCEPTS)}({rng.choice(self.CONSTS)}).")
        lines.append("}")
        lines.append("rules {")
        for _ in range(rng.randint(0, 3)):
            body_vars = ["X", "Y"][: rng.randint(1, 2)]
            pos = [f"e({body_vars[0]}, {body_vars[-1]})"]
            if rng.random() < 0.5:
                pos.append(f"{rng.choice(self.CONCEPTS)}({rng.choice(body_vars)})")
            if rng.random() < 0.5:
                pos.append(f"not q({rng.choice(body_vars)})")
            head = [f"p({rng.choice(body_vars)})"]
            if rng.random() < 0.3:
                head.append(f"{rng.choice(self.CONCEPTS)}({rng.choice(body_vars)})")
            if rng.random() < 0.2:
                head = []
            lines.append(f"{' v '.join(head)} :- {', '.join(pos)}.")
        lines.append("}")
        lines.append("facts {")
        for _ in range(rng.randint(0, 4)):
            name, arity = rng.choice(self.PREDS)
            lines.append(f"{name}({', '.join(rng.choice(self.CONSTS) for _ in range(arity))}).")
        lines.append("}")
        return "\n".join(lines)

    def test_roundtrip(self):
        rng = random.Random(2024)
        for _ in range(500):
            kb = parse_kb(self._kb_text(rng))
            again = parse_kb(serialize(kb))
            assert kb_key(again) == kb_key(kb)

    def test_empty_kb(self):
        assert serialize(HybridKB()) == ""
