"""Recursive-descent parser for the supported PDDL fragment.

Failures raise :class:`PddlParseError`; its diagnostics use three rule ids
that separate the failure classes: ``pddl.lex``, ``pddl.syntax`` and
``pddl.semantic``.
"""

from __future__ import annotations

from ..diagnostics import Diagnostic, DiagnosticError, error
from .ast import (
    OBJECT,
    ActionDef,
    And,
    Atom,
    FunctionAssign,
    FunctionDecl,
    FunctionTerm,
    Increase,
    Not,
    PddlDomain,
    PddlProblem,
    PredicateDecl,
    TypedEntry,
)
from .check import SUPPORTED_REQUIREMENTS, check_domain, check_problem
from .reader import ReadError, SExpr, Token, read


class PddlParseError(DiagnosticError):
    pass


class _Syntax(Exception):
    def __init__(self, message: str, at):
        self.message = message
        self.line = getattr(at, "line", None)
        self.column = getattr(at, "column", None)


def _kw(item) -> str | None:
    return item.text.lower() if isinstance(item, Token) else None


def _expect_list(item, what: str, parent) -> SExpr:
    if not isinstance(item, SExpr):
        raise _Syntax(f"expected {what}", item if item is not None else parent)
    return item


def _expect_token(item, kinds: tuple[str, ...], what: str, parent) -> Token:
    if not isinstance(item, Token) or item.kind not in kinds:
        raise _Syntax(f"expected {what}", item if item is not None else parent)
    return item


def _typed_list(items: list, element_kinds: tuple[str, ...], what: str, parent) -> tuple[TypedEntry, ...]:
    out: list[TypedEntry] = []
    pending: list[str] = []
    i = 0
    while i < len(items):
        item = items[i]
        if isinstance(item, Token) and item.kind == "dash":
            if not pending:
                raise _Syntax("'-' must follow at least one name", item)
            if i + 1 >= len(items):
                raise _Syntax("missing type after '-'", item)
            t = items[i + 1]
            if isinstance(t, SExpr):
                raise _Syntax("'either' types are not supported", t)
            t = _expect_token(t, ("name",), "a type name", item)
            out.extend(TypedEntry(n, t.text) for n in pending)
            pending = []
            i += 2
            continue
        tok = _expect_token(item, element_kinds, what, parent)
        pending.append(tok.text)
        i += 1
    out.extend(TypedEntry(n, OBJECT) for n in pending)
    return tuple(out)


def _terms(items: list, parent) -> tuple[str, ...]:
    return tuple(_expect_token(t, ("name", "variable"), "a variable or object name", parent).text for t in items)


def _atom(expr: SExpr) -> Atom:
    if not expr.items:
        raise _Syntax("empty atom", expr)
    head = _expect_token(expr.items[0], ("name",), "a predicate name", expr)
    if head.text.lower() in ("and", "not", "or", "increase", "forall", "exists", "when", "imply"):
        raise _Syntax(f"'{head.text}' is not allowed here", head)
    return Atom(head.text, _terms(expr.items[1:], expr))


def _fterm(item, parent) -> FunctionTerm:
    expr = _expect_list(item, "a function term", parent)
    if not expr.items:
        raise _Syntax("empty function term", expr)
    head = _expect_token(expr.items[0], ("name",), "a function name", expr)
    return FunctionTerm(head.text, _terms(expr.items[1:], expr))


def _number(tok: Token):
    text = tok.text
    if any(c in text for c in ".eE"):
        return float(text)
    return int(text)


def _condition(item, parent):
    expr = _expect_list(item, "a condition", parent)
    head = _kw(expr.items[0]) if expr.items else None
    if head == "and":
        return And(tuple(_condition(p, expr) for p in expr.items[1:]))
    if head == "not":
        if len(expr.items) != 2:
            raise _Syntax("'not' takes exactly one atom", expr)
        inner = _expect_list(expr.items[1], "an atom", expr)
        return Not(_atom(inner))
    if head in ("or", "imply", "forall", "exists", "when", "="):
        raise _Syntax(f"'{head}' conditions are not supported", expr)
    return _atom(expr)


def _effect(item, parent):
    expr = _expect_list(item, "an effect", parent)
    head = _kw(expr.items[0]) if expr.items else None
    if head == "and":
        return And(tuple(_effect(p, expr) for p in expr.items[1:]))
    if head == "not":
        if len(expr.items) != 2:
            raise _Syntax("'not' takes exactly one atom", expr)
        return Not(_atom(_expect_list(expr.items[1], "an atom", expr)))
    if head == "increase":
        if len(expr.items) != 3:
            raise _Syntax("'increase' takes a function term and a value", expr)
        target = _fterm(expr.items[1], expr)
        value = expr.items[2]
        if isinstance(value, Token):
            value = _number(_expect_token(value, ("number",), "a number or function term", expr))
        else:
            value = _fterm(value, expr)
        return Increase(target, value)
    if head in ("decrease", "assign", "scale-up", "scale-down", "forall", "when"):
        raise _Syntax(f"'{head}' effects are not supported", expr)
    return _atom(expr)


def _optional_body(item, parent, fn):
    """``()`` stands for an empty precondition/effect."""
    if isinstance(item, SExpr) and not item.items:
        return None
    return fn(item, parent)


def _action(expr: SExpr) -> ActionDef:
    items = expr.items
    name = _expect_token(items[1] if len(items) > 1 else None, ("name",), "an action name", expr)
    if len(items) < 4 or _kw(items[2]) != ":parameters":
        raise _Syntax("action requires ':parameters (...)'", items[2] if len(items) > 2 else expr)
    params = _typed_list(_expect_list(items[3], "a parameter list", expr).items, ("variable",), "a variable", items[3])
    precondition = effect = None
    seen = set()
    i = 4
    while i < len(items):
        kw = _kw(items[i])
        if kw not in (":precondition", ":effect"):
            raise _Syntax("expected ':precondition' or ':effect'", items[i])
        if kw in seen:
            raise _Syntax(f"duplicate {kw}", items[i])
        if kw == ":precondition" and ":effect" in seen:
            raise _Syntax("':precondition' must come before ':effect'", items[i])
        seen.add(kw)
        if i + 1 >= len(items):
            raise _Syntax(f"missing body after {kw}", items[i])
        if kw == ":precondition":
            precondition = _optional_body(items[i + 1], expr, _condition)
        else:
            effect = _optional_body(items[i + 1], expr, _effect)
        i += 2
    return ActionDef(name.text, params, precondition, effect)


def _header(expr: SExpr, kind: str) -> str:
    if not expr.items or _kw(expr.items[0]) != "define":
        raise _Syntax("expected '(define ...)'", expr)
    if len(expr.items) < 2:
        raise _Syntax(f"expected '({kind} <name>)'", expr)
    head = _expect_list(expr.items[1], f"'({kind} <name>)'", expr)
    if len(head.items) != 2 or _kw(head.items[0]) != kind:
        raise _Syntax(f"expected '({kind} <name>)'", head)
    return _expect_token(head.items[1], ("name",), f"a {kind} name", head).text


def _single(text: str) -> SExpr:
    exprs = read(text)
    if len(exprs) != 1:
        at = exprs[1] if len(exprs) > 1 else None
        raise _Syntax("expected exactly one '(define ...)' expression", at)
    return exprs[0]


_SECTION_ORDER = [":requirements", ":types", ":predicates", ":functions"]


def _domain(expr: SExpr) -> PddlDomain:
    name = _header(expr, "domain")
    requirements: set[str] = set()
    types = predicates = functions = ()
    actions = []
    seen = set()
    for item in expr.items[2:]:
        sec = _expect_list(item, "a domain section", expr)
        kw = _kw(sec.items[0]) if sec.items else None
        if kw == ":action":
            actions.append(_action(sec))
            continue
        if kw not in _SECTION_ORDER:
            raise _Syntax(f"unsupported domain section {kw or '()'}", sec)
        if kw in seen:
            raise _Syntax(f"duplicate section {kw}", sec)
        if actions:
            raise _Syntax(f"section {kw} must come before actions", sec)
        seen.add(kw)
        body = sec.items[1:]
        if kw == ":requirements":
            for flag in body:
                tok = _expect_token(flag, ("keyword",), "a requirement flag", sec)
                req = tok.text[1:].lower()
                if req not in SUPPORTED_REQUIREMENTS:
                    raise _Syntax(f"requirement {tok.text} is outside the supported fragment", tok)
                requirements.add(req)
        elif kw == ":types":
            types = _typed_list(body, ("name",), "a type name", sec)
        elif kw == ":predicates":
            decls = []
            for p in body:
                p = _expect_list(p, "a predicate declaration", sec)
                head = _expect_token(p.items[0] if p.items else None, ("name",), "a predicate name", p)
                decls.append(PredicateDecl(head.text, _typed_list(p.items[1:], ("variable",), "a variable", p)))
            predicates = tuple(decls)
        else:
            decls = []
            i = 0
            while i < len(body):
                f = body[i]
                if isinstance(f, Token) and f.kind == "dash":
                    t = body[i + 1] if i + 1 < len(body) else None
                    if not decls or _kw(t) != "number":
                        raise _Syntax("only '- number' may follow a function declaration", f)
                    i += 2
                    continue
                f = _expect_list(f, "a function declaration", sec)
                head = _expect_token(f.items[0] if f.items else None, ("name",), "a function name", f)
                decls.append(FunctionDecl(head.text, _typed_list(f.items[1:], ("variable",), "a variable", f)))
                i += 1
            functions = tuple(decls)
    return PddlDomain(name, frozenset(requirements), types, predicates, functions, tuple(actions))


def _problem(expr: SExpr) -> PddlProblem:
    name = _header(expr, "problem")
    domain_name = None
    objects = init = ()
    goal = metric = None
    seen = set()
    for item in expr.items[2:]:
        sec = _expect_list(item, "a problem section", expr)
        kw = _kw(sec.items[0]) if sec.items else None
        if kw not in (":domain", ":objects", ":init", ":goal", ":metric"):
            raise _Syntax(f"unsupported problem section {kw or '()'}", sec)
        if kw in seen:
            raise _Syntax(f"duplicate section {kw}", sec)
        seen.add(kw)
        body = sec.items[1:]
        if kw == ":domain":
            if len(body) != 1:
                raise _Syntax("':domain' takes one name", sec)
            domain_name = _expect_token(body[0], ("name",), "a domain name", sec).text
        elif kw == ":objects":
            objects = _typed_list(body, ("name",), "an object name", sec)
        elif kw == ":init":
            facts = []
            for f in body:
                f = _expect_list(f, "an initial fact", sec)
                if f.items and _kw(f.items[0]) == "=":
                    if len(f.items) != 3:
                        raise _Syntax("'=' takes a function term and a number", f)
                    term = _fterm(f.items[1], f)
                    value = _number(_expect_token(f.items[2], ("number",), "a number", f))
                    facts.append(FunctionAssign(term, value))
                else:
                    facts.append(_atom(f))
            init = tuple(facts)
        elif kw == ":goal":
            if len(body) != 1:
                raise _Syntax("':goal' takes exactly one condition", sec)
            goal = _condition(body[0], sec)
        else:
            if len(body) != 2 or _kw(body[0]) != "minimize":
                raise _Syntax("only '(:metric minimize (<function>))' is supported", sec)
            metric = _fterm(body[1], sec)
    if domain_name is None:
        raise _Syntax("problem requires a ':domain' section", expr)
    if goal is None:
        raise _Syntax("problem requires a ':goal' section", expr)
    return PddlProblem(name, domain_name, objects, init, goal, metric)


def _run(text: str, build):
    try:
        if not isinstance(text, str):
            raise TypeError("PDDL input must be text")
        return build(_single(text))
    except ReadError as exc:
        raise PddlParseError(exc.diagnostics) from None
    except _Syntax as exc:
        raise PddlParseError([error("pddl.syntax", exc.message, line=exc.line, column=exc.column)]) from None
    except RecursionError:
        raise PddlParseError([error("pddl.syntax", "expression nesting is too deep")]) from None


def _semantic(diags: list[Diagnostic]) -> None:
    if diags:
        raise PddlParseError(diags)


def parse_domain(text: str) -> PddlDomain:
    """Parse and check a domain; raises :class:`PddlParseError`."""
    domain = _run(text, _domain)
    _semantic(check_domain(domain))
    return domain


def parse_problem(text: str, domain: PddlDomain | None = None) -> PddlProblem:
    """Parse a problem; with ``domain`` given, references are resolved against it."""
    problem = _run(text, _problem)
    _semantic(check_problem(problem, domain))
    return problem


def _is_problem(text: str) -> bool:
    try:
        exprs = read(text)
    except ReadError as exc:
        raise PddlParseError(exc.diagnostics) from None
    if exprs and len(exprs[0].items) > 1 and isinstance(exprs[0].items[1], SExpr):
        head = exprs[0].items[1].items
        return bool(head) and _kw(head[0]) == "problem"
    return False


def parse_any(text: str) -> PddlDomain | PddlProblem:
    """Parse either a domain or a problem, whichever the header declares."""
    return parse_problem(text) if _is_problem(text) else parse_domain(text)


def parse_syntax(text: str) -> PddlDomain | PddlProblem:
    """Like :func:`parse_any` but without the semantic checks."""
    return _run(text, _problem if _is_problem(text) else _domain)
