"""Tests for hybrid_ilp.learners."""

import pytest

from hybrid_ilp.config import Limits
from hybrid_ilp.errors import InconsistentKBError, KBValidationError, ResourceLimitError
from hybrid_ilp.learners import (
    CandidateRow, DiscoveryTrace, LearningTrace, best_of, closed_form, covers_theory,
    covers_view, entails_rule, minimize_theory, nmdisc, nmlearn, score,
)
from hybrid_ilp.parser import parse_atom, parse_bias, parse_kb, parse_rule
from hybrid_ilp.schemas import ExampleSet, Score, Theory, rule_key

TINY_BIAS = """
bias {
  datalog_pos: p/1, q/1.
  datalog_neg: .
  concepts: .
  roles: .
  max_body_literals: 1.
  max_head_literals: 1.
}
"""


def row(rule, pos, neg):
    return CandidateRow(rule, Score(pos, neg, rule.body_literal_count))


class TestCoverage:
    def test_starting_rule_matches_by_head(self, happy_kb, happy_rules):
        assert covers_view(happy_rules["R0"], parse_atom("happy(paul)"), happy_kb)
        assert not covers_view(happy_rules["R0"], parse_atom("sad(paul)"), happy_kb)

    def test_other_unsafe_rules_rejected(self, happy_kb):
        with pytest.raises(KBValidationError):
            covers_view(parse_rule("happy(X) :- RICH(X)."), parse_atom("happy(mary)"), happy_kb)

    def test_view_rule(self, happy_kb, happy_rules):
        assert covers_view(happy_rules["R3"], parse_atom("happy(mary)"), happy_kb)
        assert not covers_view(happy_rules["R3"], parse_atom("happy(paul)"), happy_kb)

    def test_score_of_starting_rule(self, happy_kb, happy_examples, happy_rules):
        assert score(happy_rules["R0"], happy_examples, happy_kb) == Score(2, 1, 0)

    def test_covers_theory(self, students_kb):
        person = parse_rule("PERSON(X) :- enrolled(X, c1).")
        assert covers_theory(person, students_kb.facts, students_kb)
        assert not covers_theory(person, [parse_atom("boy(mary)")], students_kb)

    def test_covers_theory_needs_a_model(self, students_kb):
        assert not covers_theory(parse_rule(":- enrolled(X, c1)."), [], students_kb)


class TestBestOf:
    def test_fewest_negatives_first(self, happy_kb, happy_rules):
        rows = [row(happy_rules["R2"], 1, 1), row(happy_rules["R4"], 1, 0)]
        assert best_of(rows, happy_kb).rule is happy_rules["R4"]

    def test_more_general_wins_a_tie(self, happy_kb, happy_rules):
        rows = [row(happy_rules["R4"], 1, 0), row(happy_rules["R3"], 1, 0)]
        assert best_of(rows, happy_kb).rule is happy_rules["R3"]

    def test_empty(self, happy_kb):
        with pytest.raises(ValueError):
            best_of([], happy_kb)


class TestNMLearn:
    def test_no_positives(self, happy_kb, happy_bias):
        trace = LearningTrace()
        theory = nmlearn(happy_kb, happy_bias, ExampleSet((), (parse_atom("happy(paul)"),)),
                         trace=trace)
        assert len(theory) == 0
        assert trace.steps == [] and trace.warnings == []

    def test_single_positive(self, happy_kb, happy_bias, happy_rules):
        examples = ExampleSet((parse_atom("happy(mary)"),), (parse_atom("happy(paul)"),))
        trace = LearningTrace()
        theory = nmlearn(happy_kb, happy_bias, examples, trace=trace)
        assert theory.keys() == [rule_key(happy_rules["R3"])]
        assert theory.provenance == ["covers happy(mary)"]
        assert trace.uncovered == []

    def test_trace_serializes(self, happy_kb, happy_bias, happy_examples):
        trace = LearningTrace()
        nmlearn(happy_kb, happy_bias, happy_examples, trace=trace)
        d = trace.to_dict()
        assert d["uncovered"] == ["happy(joe)"]
        assert d["steps"][0]["parent"] == "happy(X)."
        assert d["steps"][0]["chosen"] == "happy(X) :- famous(X)."


class TestClosedForm:
    def test_datalog_heads_move_under_naf(self):
        r = closed_form(parse_rule("boy(X) v girl(X) :- enrolled(X, c1)."))
        assert r.render() == ":- enrolled(X,c1), not boy(X), not girl(X)."

    def test_dl_heads_stay(self):
        r = closed_form(parse_rule("MALE(X) v boy(X) :- enrolled(X, c1)."))
        assert r.render() == "MALE(X) :- enrolled(X,c1), not boy(X)."

    def test_denial_unchanged(self):
        r = parse_rule(":- enrolled(X, c2), MALE(X).")
        assert closed_form(r) is r


class TestNMDisc:
    def test_vacuous_candidates_dropped(self):
        kb = parse_kb("facts { p(a). }")
        trace = DiscoveryTrace()
        theory = nmdisc(kb, parse_bias(TINY_BIAS), trace=trace)
        assert len(theory) == 0
        assert (trace.explored, trace.accepted, trace.rejected, trace.vacuous) == (3, 0, 2, 1)

    def test_allow_vacuous(self):
        kb = parse_kb("facts { p(a). }")
        theory = nmdisc(kb, parse_bias(TINY_BIAS), allow_vacuous=True)
        assert [r.render() for r in theory] == [":- q(X)."]

    def test_candidate_cap(self):
        kb = parse_kb("facts { p(a). }")
        with pytest.raises(ResourceLimitError) as e:
            nmdisc(kb, parse_bias(TINY_BIAS), Limits(max_candidates=2))
        assert e.value.limit == "max_candidates"

    def test_inconsistent_input(self):
        kb = parse_kb("rules { :- p(X). } facts { p(a). }")
        with pytest.raises(InconsistentKBError):
            nmdisc(kb, parse_bias(TINY_BIAS))


class TestMinimize:
    def test_entails_rule(self, students_kb):
        assert entails_rule(students_kb, parse_rule("MALE(X) :- boy(X)."))
        assert entails_rule(students_kb, parse_rule("PERSON(X) :- boy(X)."))
        assert not entails_rule(students_kb, parse_rule("boy(X) :- enrolled(X, c1)."))

    def test_drops_entailed_rule(self, students_kb):
        person = parse_rule("PERSON(X) :- enrolled(X, c1).")
        male = parse_rule("MALE(X) :- enrolled(X, c1).")
        theory = Theory()
        theory.add(person, "first")
        theory.add(male, "second")
        dropped = []
        kept = minimize_theory(theory, students_kb, dropped=dropped)
        assert kept.rules == [male] and kept.provenance == ["second"]
        assert dropped == [person]

    def test_duplicate_dropped_once(self, students_kb):
        person = parse_rule("PERSON(X) :- enrolled(X, c1).")
        dropped = []
        kept = minimize_theory(Theory.from_rules([person, person]), students_kb, dropped=dropped)
        assert len(kept) == 1 and len(dropped) == 1

    def test_singleton_unchanged(self, students_kb):
        person = parse_rule("PERSON(X) :- enrolled(X, c1).")
        kept = minimize_theory(Theory.from_rules([person]), students_kb)
        assert kept.rules == [person]
