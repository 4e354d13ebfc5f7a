"""Semantic checks over PDDL ASTs and requirement inference."""

from __future__ import annotations

import math
import re
from collections import Counter

from ..diagnostics import Diagnostic, error
from .ast import (
    OBJECT,
    TOTAL_COST,
    Atom,
    FunctionAssign,
    FunctionTerm,
    Increase,
    Not,
    PddlDomain,
    PddlProblem,
    key,
    literals,
)

SUPPORTED_REQUIREMENTS = frozenset({"strips", "typing", "negative-preconditions", "action-costs"})
NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_-]*")
VARIABLE_RE = re.compile(r"\?[A-Za-z][A-Za-z0-9_-]*")
RESERVED = frozenset({"and", "not", "or", "imply", "forall", "exists", "when", "increase", "decrease", "either"})


def infer_requirements(domain: PddlDomain) -> frozenset:
    """Smallest requirement set covering the features ``domain`` uses."""
    flags = set()
    typed = bool(domain.types) or any(
        e.type.lower() != OBJECT
        for group in (
            *(p.params for p in domain.predicates),
            *(f.params for f in domain.functions),
            *(a.params for a in domain.actions),
        )
        for e in group
    )
    if typed:
        flags.add("typing")
    for a in domain.actions:
        if any(isinstance(lit, Not) for lit in literals(a.precondition)):
            flags.add("negative-preconditions")
        if any(isinstance(lit, Increase) and key(lit.target.name) == TOTAL_COST for lit in literals(a.effect)):
            flags.add("action-costs")
    return frozenset(flags)


class _Collector:
    def __init__(self) -> None:
        self.diags: list[Diagnostic] = []

    def add(self, where: str, message: str) -> None:
        self.diags.append(error("pddl.semantic", message, path=where))


def _check_name(c: _Collector, where: str, name: str, what: str) -> None:
    if not isinstance(name, str) or not NAME_RE.fullmatch(name):
        c.add(where, f"{what} {name!r} is not a valid name")
    elif key(name) in RESERVED:
        c.add(where, f"{what} {name!r} is a reserved word")


def _duplicates(names) -> list[str]:
    counts = Counter(key(n) for n in names)
    return sorted(n for n, k in counts.items() if k > 1)


def _check_typed(c: _Collector, where: str, entries, types: set[str], variables: bool) -> None:
    for e in entries:
        if variables:
            if not isinstance(e.name, str) or not VARIABLE_RE.fullmatch(e.name):
                c.add(where, f"{e.name!r} is not a variable")
        else:
            _check_name(c, where, e.name, "name")
        if key(e.type) != OBJECT and key(e.type) not in types:
            c.add(where, f"unknown type {e.type!r}")
    for d in _duplicates(e.name for e in entries):
        c.add(where, f"{d!r} is declared more than once")


def _check_atom(c, where, atom: Atom, domain: PddlDomain, allowed: dict | None) -> None:
    decl = domain.predicate(atom.predicate)
    if decl is None:
        c.add(where, f"undeclared predicate {atom.predicate!r}")
    elif decl.arity != len(atom.terms):
        c.add(where, f"predicate {atom.predicate!r} takes {decl.arity} argument(s), got {len(atom.terms)}")
    _check_terms(c, where, atom.terms, allowed)


def _check_fterm(c, where, term: FunctionTerm, domain: PddlDomain, allowed: dict | None) -> None:
    decl = domain.function(term.name)
    if decl is None:
        c.add(where, f"undeclared function {term.name!r}")
    elif decl.arity != len(term.terms):
        c.add(where, f"function {term.name!r} takes {decl.arity} argument(s), got {len(term.terms)}")
    _check_terms(c, where, term.terms, allowed)


def _check_terms(c, where, terms, allowed: dict | None) -> None:
    """``allowed`` maps lower-cased bound names; ``None`` skips resolution."""
    if allowed is None:
        return
    for t in terms:
        if key(t) not in allowed:
            kind = "variable" if t.startswith("?") else "object"
            c.add(where, f"unbound {kind} {t!r}")


def check_domain(domain: PddlDomain) -> list[Diagnostic]:
    c = _Collector()
    _check_name(c, "domain", domain.name, "domain name")
    unsupported = set(domain.requirements) - SUPPORTED_REQUIREMENTS
    for r in sorted(unsupported):
        c.add("requirements", f"unsupported requirement :{r}")
    missing = infer_requirements(domain) - set(domain.requirements)
    for r in sorted(missing):
        c.add("requirements", f"domain uses :{r} without declaring it")

    types = {key(t.name) for t in domain.types}
    for t in domain.types:
        _check_name(c, "types", t.name, "type")
        if key(t.name) == OBJECT:
            c.add("types", "'object' is built in and cannot be redeclared")
        if key(t.type) != OBJECT and key(t.type) not in types:
            c.add("types", f"type {t.name!r} has unknown parent {t.type!r}")
    for d in _duplicates(t.name for t in domain.types):
        c.add("types", f"type {d!r} is declared more than once")
    parents = domain.type_parents()
    for t in sorted(types):
        seen = set()
        cur = t
        while cur in parents and cur != OBJECT:
            if cur in seen:
                c.add("types", f"type hierarchy through {t!r} is cyclic")
                break
            seen.add(cur)
            cur = parents[cur]

    for p in domain.predicates:
        where = f"predicate {p.name}"
        _check_name(c, where, p.name, "predicate")
        _check_typed(c, where, p.params, types, variables=True)
    for d in _duplicates(p.name for p in domain.predicates):
        c.add("predicates", f"predicate {d!r} is declared more than once")
    for f in domain.functions:
        where = f"function {f.name}"
        _check_name(c, where, f.name, "function")
        _check_typed(c, where, f.params, types, variables=True)
        if key(f.name) == TOTAL_COST and f.params:
            c.add(where, "total-cost takes no arguments")
    for d in _duplicates(f.name for f in domain.functions):
        c.add("functions", f"function {d!r} is declared more than once")
    for d in sorted({key(p.name) for p in domain.predicates} & {key(f.name) for f in domain.functions}):
        c.add("functions", f"{d!r} is both a predicate and a function")

    for a in domain.actions:
        where = f"action {a.name}"
        _check_name(c, where, a.name, "action")
        _check_typed(c, where, a.params, types, variables=True)
        bound = {key(p.name): p for p in a.params}
        for lit in literals(a.precondition):
            if isinstance(lit, Not):
                lit = lit.atom
            if not isinstance(lit, Atom):
                c.add(where, f"unsupported precondition element {type(lit).__name__}")
                continue
            _check_atom(c, where, lit, domain, bound)
        for lit in literals(a.effect):
            if isinstance(lit, Not):
                lit = lit.atom
            if isinstance(lit, Atom):
                _check_atom(c, where, lit, domain, bound)
            elif isinstance(lit, Increase):
                _check_fterm(c, where, lit.target, domain, bound)
                if isinstance(lit.value, FunctionTerm):
                    _check_fterm(c, where, lit.value, domain, bound)
                elif isinstance(lit.value, bool) or not isinstance(lit.value, (int, float)) or not math.isfinite(lit.value):
                    c.add(where, "increase value must be a finite number or function term")
            else:
                c.add(where, f"unsupported effect element {type(lit).__name__}")
    for d in _duplicates(a.name for a in domain.actions):
        c.add("actions", f"action {d!r} is declared more than once")
    return c.diags


def _ground_literals(cond, c: _Collector, where: str) -> list:
    out = []
    for lit in literals(cond):
        if isinstance(lit, (Atom, Not)):
            out.append(lit)
        else:
            c.add(where, f"unsupported goal element {type(lit).__name__}")
    return out


def check_problem(problem: PddlProblem, domain: PddlDomain | None = None) -> list[Diagnostic]:
    """Check a problem; cross-references are only resolved when ``domain`` is given."""
    c = _Collector()
    _check_name(c, "problem", problem.name, "problem name")
    _check_name(c, "problem", problem.domain_name, "domain name")
    objects = {key(o.name): o for o in problem.objects}
    for o in problem.objects:
        _check_name(c, "objects", o.name, "object")
    for d in _duplicates(o.name for o in problem.objects):
        c.add("objects", f"object {d!r} is declared more than once")

    for fact in problem.init:
        terms = fact.term.terms if isinstance(fact, FunctionAssign) else getattr(fact, "terms", ())
        for t in terms:
            if t.startswith("?"):
                c.add("init", f"initial fact uses variable {t!r}")
        if isinstance(fact, FunctionAssign):
            v = fact.value
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                c.add("init", f"value of {fact.term.name!r} must be a finite number")
        elif not isinstance(fact, Atom):
            c.add("init", f"unsupported initial fact {type(fact).__name__}")
    assigned = [
        (key(f.term.name), tuple(key(t) for t in f.term.terms)) for f in problem.init if isinstance(f, FunctionAssign)
    ]
    for term, n in Counter(assigned).items():
        if n > 1:
            c.add("init", f"function {term[0]!r} is assigned more than once for {term[1]}")
    goal_lits = _ground_literals(problem.goal, c, "goal")
    for lit in goal_lits:
        atom = lit.atom if isinstance(lit, Not) else lit
        for t in atom.terms:
            if t.startswith("?"):
                c.add("goal", f"goal uses variable {t!r}")

    if domain is not None:
        if key(problem.domain_name) != key(domain.name):
            c.add("problem", f"problem is for domain {problem.domain_name!r}, not {domain.name!r}")
        types = {key(t.name) for t in domain.types}
        for o in problem.objects:
            if key(o.type) != OBJECT and key(o.type) not in types:
                c.add("objects", f"object {o.name!r} has unknown type {o.type!r}")
        for fact in problem.init:
            if isinstance(fact, FunctionAssign):
                _check_fterm(c, "init", fact.term, domain, objects)
            elif isinstance(fact, Atom):
                _check_atom(c, "init", fact, domain, objects)
        for lit in goal_lits:
            if isinstance(lit, Not) and "negative-preconditions" not in domain.requirements:
                c.add("goal", "negative goals need :negative-preconditions")
            _check_atom(c, "goal", lit.atom if isinstance(lit, Not) else lit, domain, objects)
        if problem.metric is not None:
            _check_fterm(c, "metric", problem.metric, domain, objects)
    return c.diags

