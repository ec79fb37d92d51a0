"""Tests for hybrid_ilp.generality."""

import itertools

import pytest

from hybrid_ilp.generality import (
    assert_atoms, equivalent_ggs, equivalent_rel, ground_substitutions, more_general_ggs,
    more_general_rel, naf_as_atom, positive_body, skolemize, strictly_more_general_ggs,
    strictly_more_general_rel,
)
from hybrid_ilp.parser import parse_atom, parse_rule
from hybrid_ilp.refinement import rho_constraint, rho_view
from hybrid_ilp.schemas import Constant, HybridKB, Variable


def order_matrix(rules, kb, relation):
    return {(a, b): relation(rules[a], rules[b], kb) for a in rules for b in rules}


def assert_transitive(matrix, names):
    for a, b, c in itertools.product(names, repeat=3):
        if matrix[a, b] and matrix[b, c]:
            assert matrix[a, c], (a, b, c)


CONSTRAINTS = {
    "C0": ":- enrolled(X, c1).",
    "C1": ":- enrolled(X, c1), boy(X).",
    "C2": ":- enrolled(X, c1), boy(X), MALE(X).",
    "C3": "boy(X) :- enrolled(X, c1).",
    "C4": "MALE(X) :- enrolled(X, c1).",
    "C5": "PERSON(X) :- enrolled(X, c1).",
}


class TestSkolemize:
    def test_first_occurrence_order(self, happy_rules):
        ctx, ground = skolemize(happy_rules["R3"])
        assert ctx.as_dict() == {Variable("X"): Constant("sk0"), Variable("Y"): Constant("sk1")}
        assert ground.render() == "happy(sk0) :- famous(sk0), LOVES(sk1,sk0)."
        assert ground.is_ground

    def test_reserved_names_skipped(self, happy_rules):
        ctx, _ = skolemize(happy_rules["R3"], [Constant("sk0")])
        assert [c.name for c in ctx.constants()] == ["sk1", "sk2"]
        assert ctx.reserved == frozenset({Constant("sk0")})

    def test_rule_constants_skipped(self):
        ctx, _ = skolemize(parse_rule(":- e(X, sk0)."))
        assert ctx.constants() == [Constant("sk1")]

    def test_ground_rule(self):
        ctx, ground = skolemize(parse_rule(":- enrolled(paul, c1)."))
        assert ctx.sigma == ()
        assert ground == parse_rule(":- enrolled(paul, c1).")


class TestPlumbing:
    def test_naf_as_atom(self):
        a = naf_as_atom(parse_atom("girl(X)"))
        assert str(a) == "not_girl(X)" and not a.is_dl

    def test_positive_body_order(self):
        r = parse_rule("boy(X) :- enrolled(X, c1), PERSON(X), not girl(X).")
        assert [str(a) for a in positive_body(r)] == ["enrolled(X,c1)", "not_girl(X)", "PERSON(X)"]

    def test_assert_atoms_splits_kinds(self):
        kb = assert_atoms(HybridKB(), [parse_atom("famous(sk0)"), parse_atom("RICH(sk0)"),
                                        parse_atom("famous(sk0)")])
        assert [str(a) for a in kb.facts] == ["famous(sk0)"]
        assert [str(a) for a in kb.abox_atoms()] == ["RICH(sk0)"]

    def test_ground_substitutions_extend_fixed(self):
        x, y = Variable("X"), Variable("Y")
        a, b = Constant("a"), Constant("b")
        thetas = list(ground_substitutions([x, y], [b, a], {x: a}))
        assert [str(t) for t in thetas] == ["{X/a, Y/b}", "{X/a, Y/a}"]

    def test_substitution_must_be_total(self):
        rule = parse_rule("happy(X) :- famous(X), LOVES(Y, X).")
        partial = next(ground_substitutions([Variable("X")], [Constant("mary")]))
        with pytest.raises(ValueError):
            partial.apply(rule)
        theta = next(ground_substitutions(rule.variables(), [Constant("mary")]))
        assert theta.apply(rule).render() == "happy(mary) :- famous(mary), LOVES(mary,mary)."


class TestGeneralizedSubsumption:
    def test_disjunctive_heads_incomparable(self):
        r = parse_rule("boy(X) v girl(X) :- enrolled(X, c1).")
        assert not more_general_ggs(r, r, HybridKB())

    def test_different_targets(self, happy_kb, happy_rules):
        other = parse_rule("sad(X) :- famous(X).")
        assert not more_general_ggs(other, happy_rules["R1"], happy_kb)

    def test_renaming_is_equivalent(self, happy_kb, happy_rules):
        renamed = parse_rule("happy(A) :- famous(A), LOVES(B, A).")
        assert equivalent_ggs(renamed, happy_rules["R3"], happy_kb)

    def test_background_rules_read_first_order(self, happy_kb):
        # RICH(X) :- famous(X), not scientist(X) is read as RICH(X) v scientist(X) :- famous(X)
        r1 = parse_rule("happy(X) :- famous(X), RICH(X).")
        r2 = parse_rule("happy(X) :- famous(X), not scientist(X).")
        assert not more_general_ggs(r1, r2, happy_kb)

    def test_transitive(self, happy_kb, happy_rules):
        names = ["R1", "R2", "R3", "R4"]
        rules = {n: happy_rules[n] for n in names}
        assert_transitive(order_matrix(rules, happy_kb, more_general_ggs), names)

    def test_refinements_are_less_general(self, happy_kb, happy_bias, happy_rules):
        for parent in ("R0", "R1", "R3"):
            for child in rho_view(happy_rules[parent], happy_bias, happy_kb.tbox):
                assert strictly_more_general_ggs(happy_rules[parent], child, happy_kb), (parent, child)


class TestRelativeSubsumption:
    def test_denial_above_its_extension(self, students_kb):
        c0, c1 = parse_rule(CONSTRAINTS["C0"]), parse_rule(CONSTRAINTS["C1"])
        assert strictly_more_general_rel(c0, c1, students_kb)

    def test_theta_over_pool_constants(self, students_kb):
        open_rule = parse_rule(":- enrolled(X, c1).")
        ground = parse_rule(":- enrolled(paul, c1).")
        assert more_general_rel(open_rule, ground, students_kb)
        assert not more_general_rel(ground, open_rule, students_kb)

    def test_ontology_head_generalization(self, students_kb):
        male, person = parse_rule(CONSTRAINTS["C4"]), parse_rule(CONSTRAINTS["C5"])
        assert strictly_more_general_rel(male, person, students_kb)

    def test_facts_ignored(self, students_kb):
        # enrolled(paul, c1) is a fact, but only the rules and the ontology take part
        ground = parse_rule(":- enrolled(paul, c1).")
        boys = parse_rule(":- boy(X).")
        assert not more_general_rel(ground, boys, students_kb)

    def test_renaming_is_equivalent(self, students_kb):
        assert equivalent_rel(parse_rule(CONSTRAINTS["C1"]),
                              parse_rule(":- boy(A), enrolled(A, c1)."), students_kb)

    def test_transitive(self, students_kb):
        rules = {n: parse_rule(t) for n, t in CONSTRAINTS.items()}
        assert_transitive(order_matrix(rules, students_kb, more_general_rel), list(rules))

    def test_refinements_are_less_general(self, students_kb, students_bias):
        parent = parse_rule(CONSTRAINTS["C0"])
        children = rho_constraint(parent, students_bias, students_kb.tbox)
        assert len(children) == 16
        for child in children:
            assert more_general_rel(parent, child, students_kb), child.render()
