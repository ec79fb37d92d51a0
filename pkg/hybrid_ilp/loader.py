"""File loaders for knowledge bases, biases, examples and YAML task manifests."""

from __future__ import annotations

from pathlib import Path
from typing import List, Optional, Tuple

import yaml

from hybrid_ilp.kb import check_signature
from hybrid_ilp.parser import parse_bias, parse_examples, parse_kb, parse_theory
from hybrid_ilp.schemas import ExampleSet, HybridKB, LanguageBias, Rule, RunConfig

COMMANDS = ("check-sat", "query", "learn-view", "discover")


def _resolve_path(path: str) -> Path:
    """Resolve a path relative to the package root if not absolute."""
    p = Path(path)
    if p.is_absolute():
        return p
    # Try relative to CWD first, then package root
    if p.exists():
        return p
    pkg_root = Path(__file__).parent.parent
    candidate = pkg_root / p
    if candidate.exists():
        return candidate
    return p  # Return original, let caller handle missing


def _read(path: str) -> Tuple[str, str]:
    p = _resolve_path(path)
    with open(p, "r", encoding="utf-8") as f:
        return f.read(), str(path)


def load_kb(path: str) -> HybridKB:
    text, source = _read(path)
    return parse_kb(text, source)


def load_bias(path: str, kb: Optional[HybridKB] = None) -> LanguageBias:
    """Load a bias; with ``kb`` its templates are checked against the KB signature."""
    text, source = _read(path)
    signature = check_signature(kb) if kb is not None else None
    return parse_bias(text, signature, source)


def load_examples(path: str) -> ExampleSet:
    text, source = _read(path)
    return parse_examples(text, source)


def load_theory(path: str) -> Tuple[Rule, ...]:
    text, source = _read(path)
    return parse_theory(text, source)


def load_task(path: str) -> RunConfig:
    """Load a YAML task manifest.

    Relative input paths are resolved against the current directory and
    then the repository root, like the manifest itself.
    """
    p = _resolve_path(path)
    with open(p, "r", encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}

    limits = data.get("limits", {}) or {}

    def resolved(key: str) -> Optional[str]:
        value = data.get(key)
        return str(_resolve_path(value)) if value else None

    return RunConfig.from_dict({
        "name": data.get("name", p.stem),
        "description": data.get("description", ""),
        "command": data.get("command", ""),
        "kb_path": resolved("kb") or "",
        "bias_path": resolved("bias"),
        "examples_path": resolved("examples"),
        "minimize": bool(data.get("minimize", False)),
        "allow_vacuous": bool(data.get("allow_vacuous", False)),
        "trace": bool(data.get("trace", False)),
        **{k: int(v) for k, v in limits.items()},
    })


def validate_task(config: RunConfig) -> List[str]:
    """Check that a task names a known command and the inputs it needs.

    Returns a list of warning messages (empty = valid).
    """
    warnings = []
    if config.command not in COMMANDS:
        warnings.append(f"unknown command '{config.command}' (expected one of {', '.join(COMMANDS)})")
    needed = [("kb", config.kb_path)]
    if config.command in ("learn-view", "discover"):
        needed.append(("bias", config.bias_path))
    if config.command == "learn-view":
        needed.append(("examples", config.examples_path))
    for label, path in needed:
        if not path:
            warnings.append(f"{config.command}: no {label} file given")
        elif not _resolve_path(path).exists():
            warnings.append(f"{config.command}: {label} file '{path}' not found")
    return warnings


def discover_files(directory: str, suffix: str = ".yaml") -> List[Tuple[str, str]]:
    """Find all files with ``suffix`` in a directory. Returns [(path, stem), ...]."""
    d = _resolve_path(directory)
    if not d.is_dir():
        return []
    results = []
    suffixes = (suffix, ".yml") if suffix == ".yaml" else (suffix,)
    for f in sorted(d.iterdir()):
        if f.suffix in suffixes and not f.name.startswith("_"):
            results.append((str(f), f.stem))
    return results
