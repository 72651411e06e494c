"""Command line entry point: ``lab states|dynamics|qpca|bounds``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import ConfigError, ResourceLimitError, ValidationError
from .harness import TASKS, ExperimentPlan, emit_report, load_plan, resume_record, run_plan

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RESOURCE = 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lab", description="Run seeded learning-experiment sweeps.")
    p.add_argument("task", choices=TASKS)
    p.add_argument("--config", help="TOML plan; a default plan is used when omitted")
    p.add_argument("--seed", type=int, help="master seed (overrides the plan)")
    p.add_argument("--out", help="output directory (overrides the plan)")
    p.add_argument("--noise", help="readout profile JSON (overrides the plan)")
    p.add_argument("--format", help="comma-separated subset of csv,json,svg")
    p.add_argument("--fresh", action="store_true", help="ignore a persisted record in the output directory")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _plan(args) -> ExperimentPlan:
    formats = None if args.format is None else [f.strip() for f in args.format.split(",") if f.strip()]
    overrides = {"seed": args.seed, "out_dir": args.out, "noise": args.noise, "formats": formats}
    if args.config is None:
        return ExperimentPlan.from_json({"task": args.task, **{k: v for k, v in overrides.items() if v is not None}})
    plan = load_plan(args.config, **overrides)
    if plan.task != args.task:
        raise ConfigError(f"config is for task {plan.task!r}, not {args.task!r}")
    return plan


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        plan = _plan(args)
        out = Path(plan.out_dir)
        checkpoint = out / "record.json"
        record = None if args.fresh else resume_record(plan, checkpoint)
        record = run_plan(plan, record, checkpoint if "json" in plan.formats else None)
        for path in emit_report(record, out, plan.formats):
            print(path)
    except (ConfigError, ValidationError) as exc:
        print(f"lab: invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceLimitError as exc:
        print(f"lab: resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
