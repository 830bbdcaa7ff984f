"""Command-line entry point.

Exit codes: 0 every task passed, 1 some check failed, 2 a search ran out of
budget (and nothing failed), 3 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time

from . import __version__
from .catalog import EXAMPLES, UnknownExample, build_example
from .dimension import verify_generation_witness
from .io import (
    SCHEMA_VERSION,
    InputError,
    base_field_from_json,
    category_to_json,
    dumps,
    load_workspace,
    loads,
    witness_from_json,
)
from .tasks import COMMANDS, RunOptions, run_task

EXIT_PASS, EXIT_FAIL, EXIT_EXHAUSTED, EXIT_INPUT = 0, 1, 2, 3


def _exit_code(statuses) -> int:
    if "fail" in statuses:
        return EXIT_FAIL
    if "exhausted" in statuses:
        return EXIT_EXHAUSTED
    return EXIT_PASS


def _select_tasks(ws, command, only):
    tasks = [(i, t) for i, t in enumerate(ws.tasks) if command == "run" or t["command"] == command]
    if only:
        tasks = [(i, t) for i, t in tasks if t.get("name") in only]
    if not tasks and not only and command in ("validate", "run"):
        # no explicit tasks: validate every category
        tasks = [(-1, {"name": f"validate:{name}", "command": "validate", "category": name}) for name in sorted(ws.categories)]
    return sorted(tasks, key=lambda it: it[1].get("name", f"task{it[0]}"))


def cmd_workspace(args) -> int:
    if not args.workspace:
        raise InputError("--workspace is required")
    ws = load_workspace(args.workspace)
    tasks = _select_tasks(ws, args.command, args.task)
    if not tasks:
        raise InputError(f"workspace has no {args.command!r} tasks", args.workspace)
    budget = {}
    if args.budget_shifts is not None:
        budget["shift_window"] = args.budget_shifts
    if args.budget_nodes is not None:
        budget["node_limit"] = args.budget_nodes
    opts = RunOptions(budget=budget, k=args.k, seed=args.seed)
    reports = []
    for i, task in tasks:
        t0 = time.perf_counter()
        rep, wits = run_task(ws, task, i, opts)
        elapsed = time.perf_counter() - t0
        reports.append(rep)
        if args.out and wits:
            os.makedirs(args.out, exist_ok=True)
            for j, w in enumerate(wits):
                suffix = "" if len(wits) == 1 else f".{j}"
                stem = re.sub(r"[^A-Za-z0-9_.()+-]+", "_", rep["task"])
                with open(os.path.join(args.out, f"{stem}{suffix}.witness.json"), "w") as fh:
                    fh.write(dumps(w))
        if not args.json:
            _print_human(rep, elapsed)
    if args.json:
        sys.stdout.write(dumps({"schema": SCHEMA_VERSION, "tool": "scalext", "version": __version__, "reports": reports}))
    return _exit_code([r["status"] for r in reports])


def _print_human(rep, elapsed):
    line = f"{rep['status'].upper():9} {rep['task']} ({rep['command']}) {elapsed:.2f}s"
    extra = []
    if "level" in rep:
        extra.append(f"level {rep['level']}")
    if rep.get("exhausted"):
        extra.append(rep["reason"])
    if "error" in rep:
        extra.append(rep["error"])
    failed = [c for c in rep.get("checks", []) if not c["pass"]]
    if failed and rep["status"] != "pass":
        f = failed[0]
        extra.append(f"first failure {f['name']}" + (f" at {json.dumps(f['counterexample'])}" if "counterexample" in f else ""))
    print(line + (": " + "; ".join(extra) if extra else ""))


def cmd_verify_witness(args) -> int:
    if not args.files:
        raise InputError("no witness files given")
    results = []
    for path in args.files:
        try:
            with open(path) as fh:
                data = loads(fh.read(), path)
            codec, W = witness_from_json(data, check_digest=not args.no_digest)
            rep = verify_generation_witness(codec.H, W)
            ok = rep.passed
            fail = rep.first_failure()
            reason = None if ok else f"{fail.name}" + (f": {fail.counterexample}" if fail.counterexample else "")
            level = W.level
        except InputError as exc:
            ok, reason, level = False, str(exc), None
        except OSError as exc:
            raise InputError(str(exc), path) from None
        results.append({"file": path, "pass": ok, "level": level, "reason": reason})
        if not args.json:
            print(f"{'ACCEPT' if ok else 'REJECT':7} {path}" + (f" level {level}" if ok else f": {reason}"))
    if args.json:
        sys.stdout.write(dumps({"schema": SCHEMA_VERSION, "tool": "scalext", "version": __version__, "results": results}))
    return EXIT_PASS if all(r["pass"] for r in results) else EXIT_FAIL


def cmd_examples(args) -> int:
    if args.write_workspaces:
        from .workspaces import SHIPPED, render

        os.makedirs(args.write_workspaces, exist_ok=True)
        for name in sorted(SHIPPED):
            with open(os.path.join(args.write_workspaces, name), "w") as fh:
                fh.write(render(name))
            print(os.path.join(args.write_workspaces, name))
        return EXIT_PASS
    if not args.name:
        for name in sorted(EXAMPLES):
            print(name)
        return EXIT_PASS
    try:
        desc = json.loads(args.field) if args.field.startswith("{") else (
            "Q" if args.field == "Q" else {"Fp": int(args.field)}
        )
        F = base_field_from_json(desc, "--field")
    except (ValueError, json.JSONDecodeError):
        raise InputError('--field must be "Q", a prime, or a JSON base descriptor') from None
    params = {"n": args.n} if args.n is not None else {}
    try:
        A = build_example(args.name, F, **params)
    except UnknownExample:
        raise InputError(f"unknown example {args.name!r}; known: {', '.join(sorted(EXAMPLES))}") from None
    except ValueError as exc:
        raise InputError(str(exc)) from None
    frag = {"fields": [{"name": "K", "base": F.to_json(), "minpoly": [], "trusted": False}],
            "categories": [{"name": args.name, "field": "K", **category_to_json(A)}]}
    sys.stdout.write(dumps(frag))
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="scalext", description="Exact checks for DG-categories, scalar extension and generation witnesses.")
    p.add_argument("--version", action="version", version=f"scalext {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in sorted(COMMANDS) + ["run"]:
        s = sub.add_parser(name, help=f"run the {name!r} tasks of a workspace" if name != "run" else "run every task")
        s.add_argument("--workspace", metavar="FILE")
        s.add_argument("--task", action="append", metavar="NAME", help="only this task (repeatable)")
        s.add_argument("--budget-shifts", type=int, metavar="W")
        s.add_argument("--budget-nodes", type=int, metavar="N")
        s.add_argument("--k", type=int)
        s.add_argument("--seed", type=int, metavar="S", help="exploration order only")
        s.add_argument("--json", action="store_true")
        s.add_argument("--out", metavar="DIR", help="write emitted witnesses here")
    v = sub.add_parser("verify-witness", help="re-verify witness files")
    v.add_argument("files", nargs="*")
    v.add_argument("--json", action="store_true")
    v.add_argument("--no-digest", action="store_true", help="skip the sha256 check; verify the mathematics only")
    e = sub.add_parser("examples", help="list examples or print one as a workspace fragment")
    e.add_argument("name", nargs="?")
    e.add_argument("--field", default="Q")
    e.add_argument("--n", type=int)
    e.add_argument("--write-workspaces", metavar="DIR", help="write the shipped workspaces to DIR")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify-witness":
            return cmd_verify_witness(args)
        if args.command == "examples":
            return cmd_examples(args)
        return cmd_workspace(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
