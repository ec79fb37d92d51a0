"""Shared fixtures: the bundled knowledge bases and the happy/1 rule chain."""

import os

import pytest

from hybrid_ilp.loader import load_bias, load_examples, load_kb
from hybrid_ilp.parser import parse_rule

REPO_ROOT = os.path.dirname(os.path.dirname(__file__))
KBS_DIR = os.path.join(REPO_ROOT, "kbs")
TASKS_DIR = os.path.join(REPO_ROOT, "tasks")


def kb_path(name):
    return os.path.join(KBS_DIR, name)


@pytest.fixture
def persons_kb():
    return load_kb(kb_path("persons.hkb"))


@pytest.fixture
def students_kb():
    return load_kb(kb_path("students.hkb"))


@pytest.fixture
def students_bias(students_kb):
    return load_bias(kb_path("students.bias"), students_kb)


@pytest.fixture
def happy_kb():
    return load_kb(kb_path("happy.hkb"))


@pytest.fixture
def happy_bias(happy_kb):
    return load_bias(kb_path("happy.bias"), happy_kb)


@pytest.fixture
def happy_examples():
    return load_examples(kb_path("happy.ex"))


@pytest.fixture
def happy_rules():
    """R0 (the target alone) down to R4, keyed by name."""
    return {
        "R0": parse_rule("happy(X)."),
        "R1": parse_rule("happy(X) :- famous(X)."),
        "R2": parse_rule("happy(X) :- famous(X), RICH(X)."),
        "R3": parse_rule("happy(X) :- famous(X), LOVES(Y, X)."),
        "R4": parse_rule("happy(X) :- famous(X), WANTS_TO_MARRY(Y, X)."),
    }
