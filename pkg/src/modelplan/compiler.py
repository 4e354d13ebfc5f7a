"""Generate PDDL domain and problem ASTs from an annotated model.

Preconditions come from Predicate flows entering an action, effects from
Predicate flows leaving it, and every Function flow entering an action with
role ``cost`` adds ``(increase (total-cost) (<function> <args>))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import profile
from .diagnostics import Diagnostic, DiagnosticError, error
from .ingest import check_keys, parse_json
from .model import (
    ElementKind,
    ModelGraph,
    Stereotype,
    UnknownElementError,
    incoming_annotated_flows,
    outgoing_annotated_flows,
    types_in_domain,
)
from .pddl.ast import (
    OBJECT,
    TOTAL_COST,
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
    conjunction,
    key,
)
from .pddl.check import check_domain, check_problem, infer_requirements

INSTANCE_FORMAT_VERSION = "1"


class CompileError(DiagnosticError):
    pass


@dataclass(frozen=True)
class InstanceData:
    objects: tuple[TypedEntry, ...] = ()
    init_predicates: tuple[Atom, ...] = ()
    init_function_values: tuple[FunctionAssign, ...] = ()
    goal: tuple = ()  # Atom | Not
    metric: FunctionTerm | None = None
    name: str | None = None


def _fail(rule: str, message: str, element: str = "") -> CompileError:
    return CompileError([error(rule, message, element=element, path=element)])


def _signature(model: ModelGraph, app) -> tuple[TypedEntry, ...]:
    params = profile.parameters(app)
    if params is None:
        raise _fail("compile.internal", "malformed 'parameters' tag", app.element)
    return tuple(TypedEntry(p.variable, model.element(p.type.id).name) for p in params)


def _literal(model: ModelGraph, flow, app, at_source: bool):
    args = profile.arguments(app, at_source)
    if args is None:
        raise _fail("compile.internal", "malformed 'arguments' tag", flow.id)
    atom = Atom(model.element(flow.id).name, args)
    return Not(atom) if profile.negated(app) else atom


def _unique(items: list) -> list:
    seen = set()
    out = []
    for item in items:
        if item not in seen:
            seen.add(item)
            out.append(item)
    return out


def _compile_action(model: ModelGraph, action) -> tuple[ActionDef, bool]:
    app = model.application(action.id)
    pre, eff, costs = [], [], []
    for flow, fapp in incoming_annotated_flows(model, action.id):
        if fapp.stereotype is Stereotype.PREDICATE:
            pre.append(_literal(model, flow, fapp, at_source=False))
        elif profile.role(fapp) == "cost":
            args = profile.arguments(fapp, at_source=False)
            if args is None:
                raise _fail("compile.internal", "malformed 'arguments' tag", flow.id)
            costs.append(Increase(FunctionTerm(TOTAL_COST), FunctionTerm(model.element(flow.id).name, args)))
        else:
            raise _fail("compile.internal", f"unsupported function role {profile.role(fapp)!r}", flow.id)
    for flow, fapp in outgoing_annotated_flows(model, action.id):
        if fapp.stereotype is not Stereotype.PREDICATE:
            raise _fail("compile.internal", "function flows cannot leave an action", flow.id)
        eff.append(_literal(model, flow, fapp, at_source=True))
    eff = _unique(eff) + _unique(costs)
    act = ActionDef(action.name, _signature(model, app), conjunction(_unique(pre)), conjunction(eff))
    return act, bool(costs)


def compile_domain(model: ModelGraph, domain: str) -> PddlDomain:
    """Derive the PDDL domain of the Domain package ``domain``.

    Expects a model that validates without errors; anything the derivation
    cannot express raises :class:`CompileError`.
    """
    try:
        pkg = model.element(domain)
    except UnknownElementError:
        raise _fail("compile.not-a-domain", f"unknown element {domain!r}", domain) from None
    if pkg.kind is not ElementKind.PACKAGE or not model.has_stereotype(domain, Stereotype.DOMAIN):
        raise _fail("compile.not-a-domain", f"{domain!r} is not a Domain package", domain)

    types = []
    for t in types_in_domain(model, domain):
        generals = [g for g in model.generals_of(t.id) if model.has_stereotype(g, Stereotype.TYPE)]
        if len(generals) > 1:
            raise _fail("compile.internal", "type has more than one supertype", t.id)
        parent = model.element(generals[0]).name if generals else OBJECT
        types.append(TypedEntry(t.name, parent))

    def declarations(stereotype, cls):
        out, seen = [], set()
        for e in model.in_domain(domain, stereotype):
            if key(e.name) in seen:
                continue
            seen.add(key(e.name))
            out.append(cls(e.name, _signature(model, model.application(e.id))))
        return out

    predicates = declarations(Stereotype.PREDICATE, PredicateDecl)
    functions = declarations(Stereotype.FUNCTION, FunctionDecl)

    actions, any_cost = [], False
    for a in model.in_domain(domain, Stereotype.ACTION):
        act, has_cost = _compile_action(model, a)
        actions.append(act)
        any_cost |= has_cost
    if any_cost:
        functions.insert(0, FunctionDecl(TOTAL_COST))

    result = PddlDomain(pkg.name, frozenset(), tuple(types), tuple(predicates), tuple(functions), tuple(actions))
    result = PddlDomain(
        result.name, infer_requirements(result), result.types, result.predicates, result.functions, result.actions
    )
    problems = check_domain(result)
    if problems:
        raise CompileError(
            [error("compile.internal", d.message, element=domain, path=f"{pkg.name}: {d.path}") for d in problems]
        )
    return result


def compile_problem(domain: PddlDomain, data: InstanceData, name: str | None = None) -> PddlProblem:
    """Build the problem for ``domain`` from instance data.

    ``(= (total-cost) 0)`` is added to the initial state whenever the metric
    minimizes total-cost.
    """
    name = name or data.name or f"{domain.name}-problem"
    if not data.goal:
        raise _fail("compile.empty-goal", "instance data has no goal")
    diags: list[Diagnostic] = []
    for fa in data.init_function_values:
        v = fa.value
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            diags.append(error("compile.bad-value", f"value of {fa.term.name!r} must be a finite number"))
    init: list = []
    if data.metric is not None and key(data.metric.name) == TOTAL_COST and not data.metric.terms:
        if not any(key(f.term.name) == TOTAL_COST for f in data.init_function_values):
            init.append(FunctionAssign(FunctionTerm(TOTAL_COST), 0))
    init += list(data.init_predicates) + list(data.init_function_values)
    problem = PddlProblem(name, domain.name, tuple(data.objects), tuple(init), And(tuple(data.goal)), data.metric)
    diags += [error("compile.reference", d.message, path=d.path) for d in check_problem(problem, domain)]
    if diags:
        raise CompileError(diags)
    return problem


# -- instance files (.pi1) -----------------------------------------------------

_INSTANCE_KEYS = {"format_version", "name", "objects", "init_predicates", "init_function_values", "goal", "metric"}


def _atom_entry(item, where: str, diags: list, allow_negated: bool):
    optional = {"args", "negated"} if allow_negated else {"args"}
    found = check_keys(item, {"predicate"}, optional, where, "instance")
    if found:
        diags.extend(found)
        return None
    pred, args = item["predicate"], item.get("args", [])
    if not isinstance(pred, str) or not isinstance(args, list) or not all(isinstance(a, str) for a in args):
        diags.append(error("instance.bad-value", "predicate and args must be strings", path=where))
        return None
    negated = item.get("negated", False)
    if not isinstance(negated, bool):
        diags.append(error("instance.bad-value", "'negated' must be a boolean", path=where))
        return None
    atom = Atom(pred, tuple(args))
    return Not(atom) if negated else atom


def load_instance(text: str) -> InstanceData:
    """Parse a ``.pi1`` instance file; raises :class:`CompileError` with ``instance.*`` diagnostics."""
    data, diags = parse_json(text, "instance")
    if diags:
        raise CompileError(diags)
    diags = check_keys(data, {"format_version", "objects", "goal"}, _INSTANCE_KEYS, "$", "instance")
    if diags:
        raise CompileError(diags)
    if data["format_version"] != INSTANCE_FORMAT_VERSION:
        raise _fail("instance.version", f"unsupported format_version {data['format_version']!r}")

    def section(name):
        value = data.get(name, [])
        if not isinstance(value, list):
            diags.append(error("instance.bad-value", "expected a list", path=f"$.{name}"))
            return []
        return value

    objects = []
    for i, item in enumerate(section("objects")):
        where = f"$.objects[{i}]"
        found = check_keys(item, {"name", "type"}, set(), where, "instance")
        if found:
            diags.extend(found)
        elif not isinstance(item["name"], str) or not isinstance(item["type"], str):
            diags.append(error("instance.bad-value", "name and type must be strings", path=where))
        else:
            objects.append(TypedEntry(item["name"], item["type"]))
    init = [_atom_entry(it, f"$.init_predicates[{i}]", diags, False) for i, it in enumerate(section("init_predicates"))]
    values = []
    for i, item in enumerate(section("init_function_values")):
        where = f"$.init_function_values[{i}]"
        found = check_keys(item, {"function", "value"}, {"args"}, where, "instance")
        if found:
            diags.extend(found)
            continue
        fn, args, value = item["function"], item.get("args", []), item["value"]
        if (
            not isinstance(fn, str)
            or not isinstance(args, list)
            or not all(isinstance(a, str) for a in args)
            or isinstance(value, bool)
            or not isinstance(value, (int, float))
        ):
            diags.append(error("instance.bad-value", "function values need a name, string args and a number", path=where))
            continue
        values.append(FunctionAssign(FunctionTerm(fn, tuple(args)), value))
    goal = [_atom_entry(it, f"$.goal[{i}]", diags, True) for i, it in enumerate(section("goal"))]
    metric = None
    if data.get("metric") is not None:
        m = data["metric"]
        found = check_keys(m, {"minimize"}, set(), "$.metric", "instance")
        if found:
            diags.extend(found)
        elif not isinstance(m["minimize"], str):
            diags.append(error("instance.bad-value", "'minimize' names a function", path="$.metric"))
        else:
            metric = FunctionTerm(m["minimize"])
    name = data.get("name")
    if name is not None and not isinstance(name, str):
        diags.append(error("instance.bad-value", "'name' must be a string", path="$.name"))
    if diags:
        raise CompileError(diags)
    return InstanceData(tuple(objects), tuple(init), tuple(values), tuple(goal), metric, name)
