"""Tests for hybrid_ilp.loader."""

import os

import pytest
import yaml

from hybrid_ilp.errors import BiasError, ParseError
from hybrid_ilp.loader import (
    COMMANDS, discover_files, load_bias, load_examples, load_kb, load_task, load_theory,
    validate_task,
)
from hybrid_ilp.schemas import RunConfig

from tests.conftest import TASKS_DIR, kb_path


def write_task(tmp_path, data, name="task.yaml"):
    path = tmp_path / name
    with open(path, "w") as f:
        yaml.dump(data, f)
    return str(path)


class TestLoadTask:
    def test_full_manifest(self, tmp_path):
        path = write_task(tmp_path, {
            "name": "happy",
            "description": "Learn happy/1",
            "command": "learn-view",
            "kb": kb_path("happy.hkb"),
            "bias": kb_path("happy.bias"),
            "examples": kb_path("happy.ex"),
            "trace": True,
            "limits": {"max_partitions": 1024, "max_herbrand": 12, "max_candidates": 50},
        })
        config = load_task(path)
        assert config.name == "happy"
        assert config.command == "learn-view"
        assert config.kb_path == kb_path("happy.hkb")
        assert config.examples_path == kb_path("happy.ex")
        assert config.trace and not config.minimize
        limits = config.limits()
        assert (limits.max_partitions, limits.max_herbrand, limits.max_candidates) == (1024, 12, 50)

    def test_defaults(self, tmp_path):
        path = write_task(tmp_path, {"command": "check-sat", "kb": kb_path("persons.hkb")},
                          name="persons.yaml")
        config = load_task(path)
        assert config.name == "persons"
        assert config.bias_path is None and config.examples_path is None
        assert config.limits() == RunConfig(kb_path="x").limits()

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("")
        config = load_task(str(path))
        assert config.kb_path == "" and config.command == ""

    def test_relative_paths_resolve_to_repository(self):
        config = load_task(os.path.join(TASKS_DIR, "happy_view.yaml"))
        assert os.path.exists(config.kb_path)
        assert config.bias_path.endswith("happy.bias")

    def test_non_positive_cap(self, tmp_path):
        path = write_task(tmp_path, {"command": "discover", "kb": kb_path("students.hkb"),
                                     "limits": {"max_candidates": 0}})
        with pytest.raises(ValueError):
            load_task(path)

    def test_bundled_tasks_valid(self):
        for path, _ in discover_files(TASKS_DIR):
            assert validate_task(load_task(path)) == [], path


class TestValidateTask:
    def test_unknown_command(self):
        warnings = validate_task(RunConfig(kb_path=kb_path("persons.hkb"), command="explain"))
        assert len(warnings) == 1
        assert "unknown command" in warnings[0]

    def test_missing_inputs(self):
        warnings = validate_task(RunConfig(kb_path=kb_path("happy.hkb"), command="learn-view"))
        assert warnings == ["learn-view: no bias file given", "learn-view: no examples file given"]

    def test_file_not_found(self, tmp_path):
        config = RunConfig(kb_path=str(tmp_path / "missing.hkb"), command="check-sat")
        assert "not found" in validate_task(config)[0]

    def test_commands(self):
        assert COMMANDS == ("check-sat", "query", "learn-view", "discover")


class TestDiscoverFiles:
    def test_finds_yaml_and_yml(self, tmp_path):
        for name in ("b.yaml", "a.yml", "_draft.yaml", "notes.txt"):
            (tmp_path / name).write_text("")
        found = discover_files(str(tmp_path))
        assert [stem for _, stem in found] == ["a", "b"]

    def test_other_suffix(self, tmp_path):
        (tmp_path / "x.hkb").write_text("")
        (tmp_path / "y.yaml").write_text("")
        assert [stem for _, stem in discover_files(str(tmp_path), ".hkb")] == ["x"]

    def test_missing_directory(self, tmp_path):
        assert discover_files(str(tmp_path / "nope")) == []

    def test_bundled(self):
        stems = [stem for _, stem in discover_files(TASKS_DIR)]
        assert stems == ["happy_view", "persons_check", "students_discover"]


class TestLoadDocuments:
    def test_kb(self, tmp_path):
        path = tmp_path / "tiny.hkb"
        path.write_text("facts { p(a). }\n", encoding="utf-8")
        assert [str(a) for a in load_kb(str(path)).facts] == ["p(a)"]

    def test_source_named_in_errors(self, tmp_path):
        path = tmp_path / "broken.hkb"
        path.write_text("facts { p(a) }\n", encoding="utf-8")
        with pytest.raises(ParseError) as e:
            load_kb(str(path))
        assert "broken.hkb" in str(e.value)

    def test_bias_checked_against_kb(self, tmp_path, students_kb):
        path = tmp_path / "bad.bias"
        path.write_text("bias { datalog_pos: teaches/2. }\n", encoding="utf-8")
        assert load_bias(str(path)).datalog_pos[0].predicate.name == "teaches"
        with pytest.raises(BiasError):
            load_bias(str(path), students_kb)

    def test_examples(self):
        assert len(load_examples(kb_path("happy.ex")).positives) == 2

    def test_theory(self, tmp_path):
        path = tmp_path / "theory.hkb"
        path.write_text("rules {\n  PERSON(X) :- enrolled(X, c1).\n}\n", encoding="utf-8")
        assert [r.render() for r in load_theory(str(path))] == ["PERSON(X) :- enrolled(X,c1)."]

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_kb(str(tmp_path / "absent.hkb"))
