"""CLI for the hybrid-ilp reasoner and learners."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from hybrid_ilp.config import EXIT_CODES
from hybrid_ilp.errors import HybridILPError, InconsistentKBError, ResourceLimitError


def _config(args, command: str):
    """RunConfig from --task (if any), with explicit flags taking precedence."""
    from hybrid_ilp.loader import load_task, validate_task
    from hybrid_ilp.schemas import RunConfig

    base = load_task(args.task).to_dict() if getattr(args, "task", None) else {"kb_path": ""}
    overrides = {
        "kb_path": args.kb,
        "bias_path": getattr(args, "bias", None),
        "examples_path": getattr(args, "examples", None),
        "max_partitions": args.max_partitions,
        "max_herbrand": args.max_herbrand,
        "output_dir": getattr(args, "output_dir", None),
    }
    base.update({k: v for k, v in overrides.items() if v is not None})
    base["command"] = command
    base["output_format"] = args.format
    base["trace"] = args.trace or base.get("trace", False)
    for flag in ("minimize", "allow_vacuous"):
        if getattr(args, flag, False):
            base[flag] = True
    if not base.get("kb_path"):
        raise ValueError("no knowledge base given (use --kb or --task)")
    config = RunConfig.from_dict(base)

    for w in validate_task(config):
        print(f"[WARN] {w}", file=sys.stderr)
    return config


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))


def cmd_check_sat(args):
    """Decide NM-satisfiability of a knowledge base."""
    from hybrid_ilp.loader import load_kb
    from hybrid_ilp.reasoner import nm_satisfiable

    config = _config(args, "check-sat")
    kb = load_kb(config.kb_path)
    result = nm_satisfiable(kb, config.limits(), complete=config.trace)
    verdict = "SAT" if result.satisfiable else "UNSAT"

    if config.output_format == "json":
        _emit_json({"command": "check-sat", "kb": config.kb_path, "verdict": verdict,
                    **result.to_dict()})
        return

    print(f"\n{'=' * 60}")
    print(f"CHECK-SAT: {config.kb_path}")
    print(f"{'=' * 60}")
    print(verdict)
    if config.trace and result.satisfiable:
        print(f"\nPartitions explored: {result.explored}")
        print("\nG_P:")
        for u in sorted(str(u) for u in result.partition.g_pos):
            print(f"  {u}")
        print("G_N:")
        for u in sorted(str(u) for u in result.partition.g_neg):
            print(f"  {u}")
        print("\nStable model:")
        for a in sorted(str(a) for a in result.model):
            print(f"  {a}")


def cmd_query(args):
    """Answer a ground atomic query by NM-entailment."""
    from hybrid_ilp.loader import load_kb, load_theory
    from hybrid_ilp.parser import parse_atom
    from hybrid_ilp.reasoner import entails_ground

    config = _config(args, "query")
    kb = load_kb(config.kb_path)
    if args.theory:
        kb = kb.with_rules(*load_theory(args.theory))
    atom = parse_atom(args.atom, source="<query>")
    if not atom.is_ground:
        raise ValueError(f"query {atom} is not ground")
    verdict = entails_ground(kb, atom, config.limits())
    text = "entailed" if verdict else "not entailed"

    if config.output_format == "json":
        _emit_json({"command": "query", "kb": config.kb_path, "query": str(atom),
                    "entailed": verdict, "verdict": text})
        return
    print(f"{atom}: {text}")


def _run_task(args, command: str):
    from hybrid_ilp.parser import serialize
    from hybrid_ilp.runner import TaskRunner

    config = _config(args, command)
    runner = TaskRunner(config, echo=config.output_format == "text")
    state = runner.run()

    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(serialize(runner.theory))
        if config.output_format == "text":
            print(f"\nTheory written to {args.out}")

    if config.output_format == "json":
        _emit_json(state.to_dict())


def cmd_learn_view(args):
    """Learn view rules for a target predicate from examples."""
    _run_task(args, "learn-view")


def cmd_discover(args):
    """Discover integrity constraints satisfied by the database facts."""
    _run_task(args, "discover")


def cmd_list(args):
    """List bundled task manifests."""
    from hybrid_ilp.loader import discover_files, load_task

    pkg_root = os.path.dirname(os.path.dirname(__file__))
    tasks_dir = args.tasks_dir or os.path.join(pkg_root, "tasks")

    print(f"\n{'=' * 60}")
    print("AVAILABLE TASKS")
    print(f"{'=' * 60}")
    tasks = discover_files(tasks_dir)
    if tasks:
        for path, stem in tasks:
            try:
                task = load_task(path)
                print(f"  {stem}: {task.command} on {os.path.basename(task.kb_path)}")
                if task.description:
                    print(f"    {task.description[:80]}")
            except Exception as e:
                print(f"  {stem}: [ERROR] {e}")
    else:
        print("  (none found)")

    print()


def _add_common(p):
    p.add_argument("--kb", default=None, help="Path to the knowledge base (.hkb)")
    p.add_argument("--task", default=None, help="Path to a YAML task manifest")
    p.add_argument("--format", choices=("text", "json"), default="text", help="Output format")
    p.add_argument("--trace", action="store_true", help="Print witnesses and search traces")
    p.add_argument("--max-partitions", type=int, default=None,
                   help="Cap on the partitions one satisfiability check may enumerate")
    p.add_argument("--max-herbrand", type=int, default=None,
                   help="Cap on the Herbrand base of one residual program")


def _add_learning(p):
    p.add_argument("--bias", default=None, help="Path to the language bias")
    p.add_argument("--out", default=None, help="Write the learned theory to this file")
    p.add_argument("--output-dir", default=None,
                   help="Write theory.hkb, run_state.json and report.md here")


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="hybrid-ilp",
        description="Reasoning and rule induction over ontologies combined with disjunctive Datalog",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for progress, -vv for search detail")
    sub = parser.add_subparsers(dest="command", help="Available commands")

    # ── check-sat ──
    p_sat = sub.add_parser("check-sat", help="Decide NM-satisfiability")
    _add_common(p_sat)
    p_sat.set_defaults(func=cmd_check_sat)

    # ── query ──
    p_query = sub.add_parser("query", help="Check entailment of a ground atom")
    p_query.add_argument("atom", help="Ground atom, e.g. 'FEMALE(mary)'")
    p_query.add_argument("--theory", default=None, help="Extra rules to add to the KB")
    _add_common(p_query)
    p_query.set_defaults(func=cmd_query)

    # ── learn-view ──
    p_learn = sub.add_parser("learn-view", help="Learn view rules from examples")
    _add_common(p_learn)
    _add_learning(p_learn)
    p_learn.add_argument("--examples", default=None, help="Path to the example set")
    p_learn.set_defaults(func=cmd_learn_view)

    # ── discover ──
    p_disc = sub.add_parser("discover", help="Discover integrity constraints")
    _add_common(p_disc)
    _add_learning(p_disc)
    p_disc.add_argument("--minimize", action="store_true",
                        help="Drop rules entailed by the rest of the theory")
    p_disc.add_argument("--allow-vacuous", action="store_true",
                        help="Accept rules whose body matches no fact")
    p_disc.set_defaults(func=cmd_discover)

    # ── list ──
    p_list = sub.add_parser("list", help="List bundled tasks")
    p_list.add_argument("--tasks-dir", default=None)
    p_list.set_defaults(func=cmd_list)

    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        sys.exit(1)

    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    try:
        args.func(args)
    except ResourceLimitError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        sys.exit(EXIT_CODES["resource_limit"])
    except InconsistentKBError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        sys.exit(EXIT_CODES["inconsistent_kb"])
    except (HybridILPError, OSError, ValueError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        sys.exit(EXIT_CODES["input_error"])


if __name__ == "__main__":
    main()
