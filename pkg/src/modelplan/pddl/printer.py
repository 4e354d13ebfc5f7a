"""Canonical PDDL text for domain and problem ASTs.

Layout: four-space indentation per nesting level, lower-case keywords, one
declaration or literal per line, sections in the order requirements, types,
predicates, functions, actions. Empty domain sections are left out.
"""

from __future__ import annotations

from .ast import (
    OBJECT,
    ActionDef,
    And,
    Atom,
    FunctionAssign,
    FunctionTerm,
    Increase,
    Not,
    PddlDomain,
    PddlProblem,
)

INDENT = "    "
REQUIREMENT_ORDER = ("strips", "typing", "negative-preconditions", "action-costs")


def format_number(value) -> str:
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def typed_runs(entries, grouped: bool = True) -> list[str]:
    """Chunks like ``a b - t``; a trailing run of ``object`` stays bare.

    With ``grouped=False`` every typed entry carries its own type
    (``?a - t ?b - t``), which is how variable lists are written.
    """
    runs: list[tuple[str, list[str]]] = []
    for e in entries:
        if runs and runs[-1][0] == e.type and (grouped or e.type == OBJECT):
            runs[-1][1].append(e.name)
        else:
            runs.append((e.type, [e.name]))
    chunks = []
    for i, (type_, names) in enumerate(runs):
        chunk = " ".join(names)
        if type_ != OBJECT or i < len(runs) - 1:
            chunk += f" - {type_}"
        chunks.append(chunk)
    return chunks


def format_typed(entries, grouped: bool = True) -> str:
    return " ".join(typed_runs(entries, grouped))


def format_variables(entries) -> str:
    return format_typed(entries, grouped=False)


def _sexpr(head: str, terms) -> str:
    return "(" + " ".join([head, *terms]) + ")"


def format_fterm(term: FunctionTerm) -> str:
    return _sexpr(term.name, term.terms)


def format_literal(node) -> str:
    if isinstance(node, Atom):
        return _sexpr(node.predicate, node.terms)
    if isinstance(node, Not):
        return f"(not {format_literal(node.atom)})"
    if isinstance(node, Increase):
        value = format_fterm(node.value) if isinstance(node.value, FunctionTerm) else format_number(node.value)
        return f"(increase {format_fterm(node.target)} {value})"
    if isinstance(node, FunctionAssign):
        return f"(= {format_fterm(node.term)} {format_number(node.value)})"
    raise TypeError(f"cannot print {type(node).__name__}")


def format_formula(node, level: int) -> str:
    """A condition/effect whose first line is already positioned at ``level``."""
    if not isinstance(node, And):
        return format_literal(node)
    if not node.parts:
        return "(and)"
    inner = INDENT * (level + 1)
    lines = ["(and"]
    lines += [inner + format_formula(p, level + 1) for p in node.parts]
    lines.append(INDENT * level + ")")
    return "\n".join(lines)


def _action(a: ActionDef) -> list[str]:
    body = INDENT * 2
    lines = [f"{INDENT}(:action {a.name}", f"{body}:parameters ({format_variables(a.params)})"]
    if a.precondition is not None:
        lines.append(f"{body}:precondition {format_formula(a.precondition, 2)}")
    if a.effect is not None:
        lines.append(f"{body}:effect {format_formula(a.effect, 2)}")
    lines.append(f"{INDENT})")
    return lines


def _block(keyword: str, rows: list[str]) -> list[str]:
    return [f"{INDENT}({keyword}", *(INDENT * 2 + r for r in rows), f"{INDENT})"]


def print_domain(domain: PddlDomain) -> str:
    lines = [f"(define (domain {domain.name})"]
    if domain.requirements:
        ordered = [r for r in REQUIREMENT_ORDER if r in domain.requirements]
        ordered += sorted(set(domain.requirements) - set(REQUIREMENT_ORDER))
        lines.append(f"{INDENT}(:requirements {' '.join(':' + r for r in ordered)})")
    if domain.types:
        lines.append(f"{INDENT}(:types {format_typed(domain.types)})")
    if domain.predicates:
        lines += _block(":predicates", [_sexpr(p.name, [format_variables(p.params)] if p.params else []) for p in domain.predicates])
    if domain.functions:
        lines += _block(":functions", [_sexpr(f.name, [format_variables(f.params)] if f.params else []) for f in domain.functions])
    for a in domain.actions:
        lines += _action(a)
    if len(lines) == 1:
        return lines[0] + ")\n"
    lines.append(")")
    return "\n".join(lines) + "\n"


def print_problem(problem: PddlProblem) -> str:
    lines = [f"(define (problem {problem.name})", f"{INDENT}(:domain {problem.domain_name})"]
    lines += _objects(problem.objects)
    if problem.init:
        lines += _block(":init", [format_literal(f) for f in problem.init])
    else:
        lines.append(f"{INDENT}(:init)")
    lines.append(f"{INDENT}(:goal {format_formula(problem.goal, 1)})")
    if problem.metric is not None:
        lines.append(f"{INDENT}(:metric minimize {format_fterm(problem.metric)})")
    lines.append(")")
    return "\n".join(lines) + "\n"


def _objects(objects) -> list[str]:
    if not objects:
        return [f"{INDENT}(:objects)"]
    return _block(":objects", typed_runs(objects))
