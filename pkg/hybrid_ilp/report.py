"""Markdown report generator from a run state."""

from __future__ import annotations

from typing import List

from hybrid_ilp import __version__
from hybrid_ilp.schemas import RunState


def generate_report(state: RunState) -> str:
    """Generate a Markdown report from a completed learn-view or discover run."""

    lines: List[str] = []
    w = lines.append

    title = state.task or state.command
    w(f"# {title}\n")
    w(f"## {_heading(state.command)}\n")
    w(f"**Command**: {state.command}")
    w(f"**Knowledge base**: {state.kb_path}")
    if state.bias_path:
        w(f"**Bias**: {state.bias_path}")
    if state.examples_path:
        w(f"**Examples**: {state.examples_path}")
    if state.limits:
        caps = ", ".join(f"{k}={v}" for k, v in sorted(state.limits.items()))
        w(f"**Limits**: {caps}")
    w(f"**Rules**: {state.num_rules}\n")

    w("## Theory\n")
    if state.rules:
        w("| # | Rule | Provenance |")
        w("|---|------|------------|")
        for i, (rule, note) in enumerate(zip(state.rules, state.provenance), 1):
            w(f"| {i} | `{rule}` | {note or '-'} |")
    else:
        w("*(empty theory)*")
    w("")

    if state.command == "learn-view":
        _write_learning(w, state.trace)
    else:
        _write_discovery(w, state.trace)

    if state.dropped:
        w("## Minimization\n")
        for rule in state.dropped:
            w(f"- dropped `{rule}`")
        w("")

    if state.warnings:
        w("## Warnings\n")
        for msg in state.warnings:
            w(f"- {msg}")
        w("")

    w("---\n")
    w(f"*Generated by hybrid-ilp v{__version__}*\n")

    return "\n".join(lines)


def _heading(command: str) -> str:
    return {
        "learn-view": "View Learning Report",
        "discover": "Constraint Discovery Report",
    }.get(command, "Run Report")


def _write_learning(w, trace: dict):
    """Per-iteration candidate tables."""
    steps = trace.get("steps", [])
    if not steps:
        return
    w("## Search Trace\n")
    for step in steps:
        w(f"### Iteration {step['outer']}.{step['inner']}\n")
        w(f"Refining `{step['parent']}`\n")
        if not step["candidates"]:
            w("No candidate covers a remaining positive example.\n")
            continue
        w("| Candidate | Pos | Neg | Body |")
        w("|-----------|-----|-----|------|")
        for c in step["candidates"]:
            marker = " **(chosen)**" if c["rule"] == step["chosen"] else ""
            w(f"| `{c['rule']}`{marker} | {c['pos_covered']} | {c['neg_covered']} | {c['body_len']} |")
        w("")
    uncovered = trace.get("uncovered", [])
    if uncovered:
        w(f"**Uncovered positives**: {', '.join(uncovered)}\n")


def _write_discovery(w, trace: dict):
    if not trace:
        return
    w("## Search Statistics\n")
    for key in ("explored", "accepted", "rejected", "vacuous"):
        w(f"- **{key.capitalize()}**: {trace.get(key, 0)}")
    w("")
