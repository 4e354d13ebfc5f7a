"""Command-line driver: validate, generate, solve, check, fmt, parse.

Exit codes are stable for scripting:

====  =====================================================
0     success
1     unreadable input, parse error, or bad arguments
2     validation findings, compile errors, rejected plan
3     no plan exists (or the external planner found none)
4     search hit the expansion cap
====  =====================================================

Every subcommand that writes files renders all output first and then moves
it into place with ``os.replace``, so a failure never leaves partial files.
"""

from __future__ import annotations

import argparse
import os
import shlex
import subprocess
import sys
import tempfile
from pathlib import Path

from . import __version__
from .compiler import compile_domain, compile_problem, load_instance
from .diagnostics import DiagnosticError, dump_json, has_errors
from .ingest import load_model
from .pddl import PddlDomain, parse_any, parse_domain, parse_problem, parse_syntax, print_domain, print_problem
from .planner import (
    DEFAULT_MAX_EXPANSIONS,
    GroundingError,
    PlanFormatError,
    SearchLimitExceeded,
    format_cost,
    format_plan,
    ground,
    parse_plan,
    resolve_plan,
    solve,
    validate_plan,
)
from .planner.search import Plan
from .validate import RuleSet, validate

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_FINDINGS = 2
EXIT_UNSOLVABLE = 3
EXIT_LIMIT = 4


class _Exit(Exception):
    """Abort a subcommand with an exit code and a message for stderr."""

    def __init__(self, code: int, message: str = ""):
        self.code = code
        self.message = message


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise _Exit(EXIT_INPUT, f"{path}: cannot read: {exc}") from None


def _report(path: str, diagnostics) -> None:
    for d in diagnostics:
        print(f"{path}: {d.render()}", file=sys.stderr)


def write_atomically(files: dict[Path, str]) -> None:
    """Write all ``files`` or none of them."""
    staged: list[tuple[str, Path]] = []
    try:
        for target, text in files.items():
            target.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
            staged.append((tmp, target))
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        for tmp, target in staged:
            os.replace(tmp, target)
    except OSError as exc:
        raise _Exit(EXIT_INPUT, f"cannot write output: {exc}") from None
    finally:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)


def _rules(args) -> RuleSet:
    try:
        return RuleSet.parse(args.rules) if args.rules else RuleSet.all()
    except ValueError as exc:
        raise _Exit(EXIT_INPUT, str(exc)) from None


def _model(path: str):
    try:
        return load_model(_read(path))
    except DiagnosticError as exc:
        _report(path, exc.diagnostics)
        raise _Exit(EXIT_INPUT) from None


def cmd_validate(args) -> int:
    model = _model(args.model)
    diags = validate(model, _rules(args), generation=args.generation)
    if args.json:
        sys.stderr.write(dump_json(diags))
    else:
        _report(args.model, diags)
    return EXIT_FINDINGS if has_errors(diags) else EXIT_OK


def _pick_domain(model, wanted: str | None) -> str:
    domains = model.domains()
    if wanted is not None:
        hits = [d for d in domains if wanted in (d.id, d.name)]
        if len(hits) != 1:
            raise _Exit(EXIT_FINDINGS, f"no unique Domain package matches {wanted!r}")
        return hits[0].id
    if len(domains) != 1:
        names = ", ".join(d.name for d in domains) or "none"
        raise _Exit(EXIT_FINDINGS, f"model has {len(domains)} Domain packages ({names}); pick one with --domain")
    return domains[0].id


def cmd_generate(args) -> int:
    model = _model(args.model)
    instance = None
    if args.instance:
        try:
            instance = load_instance(_read(args.instance))
        except DiagnosticError as exc:
            _report(args.instance, exc.diagnostics)
            return EXIT_INPUT
    diags = validate(model, _rules(args), generation=True)
    _report(args.model, diags)
    if has_errors(diags):
        return EXIT_FINDINGS
    domain_id = _pick_domain(model, args.domain)
    out = Path(args.out)
    try:
        domain = compile_domain(model, domain_id)
        files = {out / "domain.pddl": print_domain(domain)}
        if instance is not None:
            files[out / "problem.pddl"] = print_problem(compile_problem(domain, instance))
    except DiagnosticError as exc:
        _report(args.instance or args.model, exc.diagnostics)
        return EXIT_FINDINGS
    write_atomically(files)
    return EXIT_OK


def _load_pair(domain_path: str, problem_path: str):
    try:
        domain = parse_domain(_read(domain_path))
    except DiagnosticError as exc:
        _report(domain_path, exc.diagnostics)
        raise _Exit(EXIT_INPUT) from None
    try:
        problem = parse_problem(_read(problem_path), domain)
    except DiagnosticError as exc:
        _report(problem_path, exc.diagnostics)
        raise _Exit(EXIT_INPUT) from None
    try:
        return domain, problem, ground(domain, problem)
    except GroundingError as exc:
        raise _Exit(EXIT_INPUT, f"{problem_path}: {exc}") from None


def _external_plan(template: str, domain_path: str, problem_path: str, task) -> Plan:
    with tempfile.TemporaryDirectory(prefix="modelplan-") as scratch:
        plan_path = Path(scratch) / "plan.txt"
        try:
            command = template.format(
                domain=shlex.quote(str(Path(domain_path).resolve())),
                problem=shlex.quote(str(Path(problem_path).resolve())),
                plan=shlex.quote(str(plan_path)),
            )
        except (KeyError, IndexError, ValueError) as exc:
            raise _Exit(EXIT_INPUT, f"bad --external-planner template: {exc}") from None
        try:
            result = subprocess.run(shlex.split(command), capture_output=True, text=True)
        except (OSError, ValueError) as exc:
            raise _Exit(EXIT_INPUT, f"cannot run external planner: {exc}") from None
        if result.returncode != 0 or not plan_path.exists():
            raise _Exit(EXIT_UNSOLVABLE, f"external planner returned no plan (exit status {result.returncode})")
        text = plan_path.read_text(encoding="utf-8")
    try:
        steps = resolve_plan(task, parse_plan(text))
    except PlanFormatError as exc:
        raise _Exit(EXIT_FINDINGS, f"external plan: {exc}") from None
    report = validate_plan(task, steps)
    if not report.accepted:
        raise _Exit(EXIT_FINDINGS, f"external plan: {report.render()}")
    return Plan(tuple(steps), report.total_cost)


def cmd_solve(args) -> int:
    if args.cap <= 0:
        raise _Exit(EXIT_INPUT, "--cap must be positive")
    _, _, task = _load_pair(args.domain, args.problem)
    out = Path(args.out)
    if args.external_planner:
        plan = _external_plan(args.external_planner, args.domain, args.problem, task)
    else:
        try:
            plan = solve(task, args.cap, args.heuristic)
        except SearchLimitExceeded as exc:
            raise _Exit(EXIT_LIMIT, str(exc)) from None
        if plan is None:
            raise _Exit(EXIT_UNSOLVABLE, "goal is unreachable; no plan exists")
    write_atomically({out: format_plan(plan)})
    print(format_cost(plan.total_cost))
    return EXIT_OK


def cmd_check(args) -> int:
    _, _, task = _load_pair(args.domain, args.problem)
    try:
        steps = resolve_plan(task, parse_plan(_read(args.plan)))
    except PlanFormatError as exc:
        raise _Exit(EXIT_INPUT, f"{args.plan}: {exc}") from None
    report = validate_plan(task, steps)
    print(report.render())
    return EXIT_OK if report.accepted else EXIT_FINDINGS


def cmd_fmt(args) -> int:
    try:
        tree = parse_any(_read(args.file))
    except DiagnosticError as exc:
        _report(args.file, exc.diagnostics)
        return EXIT_INPUT
    text = print_domain(tree) if isinstance(tree, PddlDomain) else print_problem(tree)
    if args.out:
        write_atomically({Path(args.out): text})
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_parse(args) -> int:
    status = EXIT_OK
    for path in args.files:
        try:
            parse_syntax(_read(path))
        except DiagnosticError as exc:
            _report(path, exc.diagnostics)
            status = EXIT_INPUT
        except _Exit as exc:
            print(exc.message, file=sys.stderr)
            status = EXIT_INPUT
    return status


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):  # usage errors are input errors, not findings
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="modelplan", description="Compile planning-annotated system models to PDDL and solve them.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def rules_flag(p):
        p.add_argument("--rules", help="rule toggles, e.g. 'all,-P09' or 'P01,P02' (default: all)")

    p = sub.add_parser("validate", help="check a model against the profile rules")
    p.add_argument("model")
    rules_flag(p)
    p.add_argument("--generation", action="store_true", help="also run rules that only matter for generation")
    p.add_argument("--json", action="store_true", help="emit diagnostics as JSON")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("generate", help="write domain.pddl (and problem.pddl) from a model")
    p.add_argument("model")
    p.add_argument("--instance", help="instance data (.pi1); adds problem.pddl")
    p.add_argument("--domain", help="Domain package id or name when the model has several")
    p.add_argument("--out", required=True, help="output directory")
    rules_flag(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="find a minimum-cost plan")
    p.add_argument("domain")
    p.add_argument("problem")
    p.add_argument("--out", required=True, help="plan file to write")
    p.add_argument("--cap", type=int, default=DEFAULT_MAX_EXPANSIONS, help="maximum number of state expansions")
    p.add_argument("--heuristic", choices=("blind", "hmax"), default="blind")
    p.add_argument(
        "--external-planner",
        metavar="TEMPLATE",
        help="command with {domain} {problem} {plan} placeholders; its plan is validated before use",
    )
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="validate a plan step by step")
    p.add_argument("domain")
    p.add_argument("problem")
    p.add_argument("plan")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("fmt", help="print a PDDL file in canonical layout")
    p.add_argument("file")
    p.add_argument("--out", help="write here instead of standard output")
    p.set_defaults(func=cmd_fmt)

    p = sub.add_parser("parse", help="syntax-check PDDL files")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_parse)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Exit as exc:
        if exc.message:
            print(f"modelplan {args.command}: {exc.message}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
