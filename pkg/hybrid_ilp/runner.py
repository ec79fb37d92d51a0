"""TaskRunner: orchestrates view learning and constraint discovery runs."""

from __future__ import annotations

import json
import logging
import os
from typing import Optional

from hybrid_ilp.learners import (
    DiscoveryTrace, LearningTrace, minimize_theory, nmdisc, nmlearn,
)
from hybrid_ilp.loader import load_bias, load_examples, load_kb
from hybrid_ilp.parser import serialize
from hybrid_ilp.report import generate_report
from hybrid_ilp.schemas import HybridKB, RunConfig, RunState, Theory

logger = logging.getLogger(__name__)


class TaskRunner:
    """Runs one learn-view or discover task and saves its results."""

    def __init__(self, config: RunConfig, output_dir: Optional[str] = None, echo: bool = True):
        self.config = config
        self.limits = config.limits()
        self.echo = echo
        self.output_dir = output_dir or config.output_dir
        if self.output_dir:
            os.makedirs(self.output_dir, exist_ok=True)

        self.kb: HybridKB = load_kb(config.kb_path)
        self.bias = load_bias(config.bias_path, self.kb) if config.bias_path else None
        self.examples = load_examples(config.examples_path) if config.examples_path else None
        self.theory = Theory()

    def _print(self, text: str = "") -> None:
        if self.echo:
            print(text)

    def _banner(self, title: str) -> None:
        self._print(f"\n{'=' * 60}")
        self._print(title)
        self._print(f"{'=' * 60}")

    def _state(self, theory: Theory) -> RunState:
        c = self.config
        return RunState(
            command=c.command,
            task=c.name,
            kb_path=c.kb_path,
            bias_path=c.bias_path or "",
            examples_path=c.examples_path or "",
            limits=self.limits.to_dict(),
            rules=[r.render() for r in theory.rules],
            provenance=list(theory.provenance),
        )

    def run(self) -> RunState:
        if self.config.command == "learn-view":
            return self.learn_view()
        if self.config.command == "discover":
            return self.discover()
        raise ValueError(f"TaskRunner cannot run command '{self.config.command}'")

    def learn_view(self) -> RunState:
        if self.bias is None or self.examples is None:
            raise ValueError("learn-view needs a bias and an example set")
        self._banner(f"LEARN VIEW: {self.config.name or self.config.kb_path}")
        self._print(f"Target: {self.bias.target}")
        self._print(f"Examples: {len(self.examples.positives)} positive, "
                    f"{len(self.examples.negatives)} negative")

        trace = LearningTrace()
        theory = nmlearn(self.kb, self.bias, self.examples, self.limits, trace)

        if self.config.trace:
            for step in trace.steps:
                self._print(f"\n  Iteration {step.outer}.{step.inner}: refining {step.parent}")
                for row in step.candidates:
                    mark = "*" if row.rule == step.chosen else " "
                    self._print(f"  {mark} pos={row.score.pos_covered} neg={row.score.neg_covered}"
                                f"  {row.rule}")

        state = self._state(theory)
        state.warnings = list(trace.warnings)
        state.trace = trace.to_dict()
        self._finish(state, theory)
        return state

    def discover(self) -> RunState:
        if self.bias is None:
            raise ValueError("discover needs a bias")
        self._banner(f"DISCOVER: {self.config.name or self.config.kb_path}")
        self._print(f"Facts: {len(self.kb.facts)}")

        trace = DiscoveryTrace()
        theory = nmdisc(self.kb, self.bias, self.limits, self.config.allow_vacuous, trace)
        self._print(f"Explored {trace.explored} candidates, accepted {trace.accepted}, "
                    f"vacuous {trace.vacuous}")
        if self.config.minimize:
            theory = minimize_theory(theory, self.kb, self.limits, trace.dropped)
            self._print(f"Minimization dropped {len(trace.dropped)} rules")

        state = self._state(theory)
        state.dropped = [r.render() for r in trace.dropped]
        state.warnings = list(trace.warnings)
        state.trace = trace.to_dict()
        self._finish(state, theory)
        return state

    def _finish(self, state: RunState, theory: Theory) -> None:
        self.theory = theory
        self._banner("RUN COMPLETE")
        for rule in state.rules:
            self._print(f"  {rule}")
        if not state.rules:
            self._print("  (empty theory)")
        for msg in state.warnings:
            self._print(f"[WARN] {msg}")

        if not self.output_dir:
            return

        theory_file = os.path.join(self.output_dir, "theory.hkb")
        with open(theory_file, "w", encoding="utf-8") as f:
            f.write(serialize(theory))

        state_file = os.path.join(self.output_dir, "run_state.json")
        with open(state_file, "w", encoding="utf-8") as f:
            json.dump(state.to_dict(), f, indent=2, ensure_ascii=False, sort_keys=True)

        report_file = os.path.join(self.output_dir, "report.md")
        with open(report_file, "w", encoding="utf-8") as f:
            f.write(generate_report(state))

        logger.info("results written to %s", self.output_dir)
        self._print(f"\n[SAVED] Results in: {self.output_dir}")
        self._print(f"  - theory.hkb ({state.num_rules} rules)")
        self._print("  - run_state.json")
        self._print("  - report.md")
