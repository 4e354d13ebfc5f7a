"""Well-formedness rules for planning-annotated models.

Each rule is a function from a model to diagnostics and is registered under a
stable id (``P01`` .. ``P10``). :func:`validate` runs the enabled subset and
returns the findings sorted by (rule id, element name, element id).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from . import profile
from .diagnostics import Diagnostic, error
from .model import (
    ElementKind,
    ModelGraph,
    Stereotype,
    StereotypeApplication,
    _cyclic_nodes,
    incoming_annotated_flows,
    outgoing_annotated_flows,
    types_in_domain,
)

Rule = Callable[[ModelGraph], Iterable[Diagnostic]]


@dataclass(frozen=True)
class RuleInfo:
    id: str
    name: str
    check: Rule
    generation_only: bool = False


RULES: dict[str, RuleInfo] = {}


def rule(rule_id: str, name: str, generation_only: bool = False):
    def register(fn: Rule) -> Rule:
        RULES[rule_id] = RuleInfo(rule_id, name, fn, generation_only)
        return fn

    return register


class RuleSet(frozenset):
    """A set of enabled rule ids."""

    def __new__(cls, ids: Iterable[str] = ()):
        ids = frozenset(ids)
        unknown = ids - RULES.keys()
        if unknown:
            raise ValueError(f"unknown rule id(s): {', '.join(sorted(unknown))}")
        return super().__new__(cls, ids)

    @classmethod
    def all(cls) -> "RuleSet":
        return cls(RULES)

    @classmethod
    def parse(cls, spec: str) -> "RuleSet":
        """Parse toggles such as ``all,-P09`` or ``P01,P02``.

        A leading removal (``-P03``) starts from the full set.
        """
        tokens = [t.strip() for t in spec.split(",") if t.strip()]
        enabled: set[str] = set(RULES) if not tokens or tokens[0].startswith("-") else set()
        for tok in tokens:
            if tok.lower() == "all":
                enabled |= set(RULES)
            elif tok.startswith("-"):
                enabled.discard(tok[1:].upper())
                cls([tok[1:].upper()])
            else:
                enabled.add(tok.upper())
        return cls(enabled)


def _diag(model: ModelGraph, rule_id: str, eid: str, message: str) -> Diagnostic:
    path = model.qualified_name(eid) if eid in model else eid
    return error(rule_id, message, element=eid, path=path)


def _domain_names(model: ModelGraph, domain: str, stereotype: Stereotype) -> dict[str, list]:
    groups = defaultdict(list)
    for e in model.in_domain(domain, stereotype):
        if e.name:
            groups[e.name.casefold()].append(e)
    return groups


@rule("P01", "ValidateDomainName")
def domain_name(model: ModelGraph) -> Iterator[Diagnostic]:
    for d in model.domains():
        if not d.name:
            yield _diag(model, "P01", d.id, "domain name is undefined")
        elif not profile.DOMAIN_NAME_RE.fullmatch(d.name):
            yield _diag(
                model, "P01", d.id, f"domain name {d.name!r} must start with a letter and contain only letters, digits and '_'"
            )


@rule("P02", "UniqueTypeNames")
def unique_type_names(model: ModelGraph) -> Iterator[Diagnostic]:
    for d in model.domains():
        groups = defaultdict(list)
        for t in types_in_domain(model, d.id):
            groups[t.name.casefold()].append(t)
        for members in groups.values():
            if len(members) > 1:
                ids = ", ".join(m.id for m in members)
                yield _diag(model, "P02", d.id, f"type name {members[0].name!r} is declared {len(members)} times ({ids})")


def _signature_conflicts(model: ModelGraph, rule_id: str, stereotype: Stereotype, label: str) -> Iterator[Diagnostic]:
    for d in model.domains():
        for members in _domain_names(model, d.id, stereotype).values():
            sigs = set()
            for m in members:
                params = profile.parameters(model.application(m.id))
                if params is not None:
                    sigs.add(tuple(p.type.id for p in params))
            if len(sigs) > 1:
                ids = ", ".join(m.id for m in members)
                yield _diag(
                    model, rule_id, d.id, f"{label} {members[0].name!r} is declared with conflicting signatures ({ids})"
                )


@rule("P03", "UniquePredicateNames")
def unique_predicate_names(model: ModelGraph) -> Iterator[Diagnostic]:
    yield from _signature_conflicts(model, "P03", Stereotype.PREDICATE, "predicate")


@rule("P04", "UniqueFunctionNames")
def unique_function_names(model: ModelGraph) -> Iterator[Diagnostic]:
    yield from _signature_conflicts(model, "P04", Stereotype.FUNCTION, "function")
    for d in model.domains():
        predicates = _domain_names(model, d.id, Stereotype.PREDICATE)
        for key, members in sorted(_domain_names(model, d.id, Stereotype.FUNCTION).items()):
            if key == profile.TOTAL_COST:
                for m in members:
                    yield _diag(model, "P04", m.id, f"{profile.TOTAL_COST!r} is reserved for accumulated action cost")
            if key in predicates:
                yield _diag(model, "P04", d.id, f"{members[0].name!r} is both a predicate and a function")


@rule("P05", "UniqueActionNames")
def unique_action_names(model: ModelGraph) -> Iterator[Diagnostic]:
    for d in model.domains():
        for members in _domain_names(model, d.id, Stereotype.ACTION).values():
            if len(members) > 1:
                ids = ", ".join(m.id for m in members)
                yield _diag(model, "P05", d.id, f"action name {members[0].name!r} is declared {len(members)} times ({ids})")


def _domain_actions(model: ModelGraph):
    for d in model.domains():
        for a in model.in_domain(d.id, Stereotype.ACTION):
            yield d, a, model.application(a.id)


def _check_type(model: ModelGraph, domain: str, type_id: str) -> bool:
    return model.has_stereotype(type_id, Stereotype.TYPE) and model.domain_of(type_id) == domain


def _unknown_tags(app: StereotypeApplication) -> list[str]:
    return sorted(set(app.tags) - profile.ALLOWED_TAGS[app.stereotype])


@rule("P06", "ActionCompleteness")
def action_completeness(model: ModelGraph) -> Iterator[Diagnostic]:
    for d, a, app in _domain_actions(model):
        if not a.name:
            yield _diag(model, "P06", a.id, "action has no name")
        for tag in _unknown_tags(app):
            yield _diag(model, "P06", a.id, f"unknown tag {tag!r} on Action")
        if "parameters" not in app.tags:
            yield _diag(model, "P06", a.id, "action has no 'parameters' tag")
            continue
        params = profile.parameters(app)
        if params is None:
            yield _diag(model, "P06", a.id, "'parameters' must be a list of variable/type pairs")
            continue
        seen = set()
        for p in params:
            if not profile.VARIABLE_RE.fullmatch(p.variable):
                yield _diag(model, "P06", a.id, f"parameter {p.variable!r} is not a valid variable")
            if p.variable.casefold() in seen:
                yield _diag(model, "P06", a.id, f"parameter {p.variable!r} is declared twice")
            seen.add(p.variable.casefold())
            if not _check_type(model, d.id, p.type.id):
                yield _diag(model, "P06", a.id, f"parameter {p.variable!r} has unresolved type {p.type.id!r}")


def _flow_problems(model: ModelGraph, domain: str, action, action_params, flow, app, at_source: bool) -> Iterator[str]:
    name = model.element(flow.id).name or flow.id
    for tag in _unknown_tags(app):
        yield f"unknown tag {tag!r} on {app.stereotype.value} flow {name!r}"
    sig = profile.parameters(app)
    if sig is None:
        yield f"{name!r} has a malformed 'parameters' signature"
        return
    for p in sig:
        if not profile.VARIABLE_RE.fullmatch(p.variable):
            yield f"{name!r} declares invalid variable {p.variable!r}"
        if not _check_type(model, domain, p.type.id):
            yield f"{name!r} declares unresolved type {p.type.id!r}"
    if app.stereotype is Stereotype.FUNCTION:
        if at_source:
            yield f"function {name!r} flows out of the action; functions may only feed actions"
            return
        r = profile.role(app)
        if r == "condition":
            yield f"function {name!r} uses reserved role 'condition'"
        elif r not in profile.ROLES:
            yield f"function {name!r} has unknown role {app.tags.get('role')!r}"
    elif "negated" in app.tags and not isinstance(app.tags["negated"], bool):
        yield f"'negated' on {name!r} must be a boolean"
    args = profile.arguments(app, at_source)
    if args is None:
        yield f"arguments of {name!r} must be a list of variables"
        return
    if len(args) != len(sig):
        yield f"{name!r} takes {len(sig)} argument(s) but is given {len(args)}"
        return
    if action_params is None:
        return
    bound = {p.variable.casefold(): p for p in action_params}
    for arg, slot in zip(args, sig):
        param = bound.get(arg.casefold())
        if param is None:
            yield f"argument {arg!r} of {name!r} is not a parameter of the action"
        elif not profile.is_subtype(model, param.type.id, slot.type.id):
            yield f"argument {arg!r} of {name!r} has type {param.type.id!r}, expected {slot.type.id!r}"


@rule("P07", "PredicateUseConsistency")
def predicate_use(model: ModelGraph) -> Iterator[Diagnostic]:
    for d, a, app in _domain_actions(model):
        params = profile.parameters(app)
        if params is not None and not all(profile.VARIABLE_RE.fullmatch(p.variable) for p in params):
            params = None
        for at_source, flows in (
            (False, incoming_annotated_flows(model, a.id)),
            (True, outgoing_annotated_flows(model, a.id)),
        ):
            for flow, fapp in flows:
                for msg in _flow_problems(model, d.id, a, params, flow, fapp, at_source):
                    yield _diag(model, "P07", a.id, msg)


@rule("P08", "TypeHierarchyAcyclic")
def type_hierarchy(model: ModelGraph) -> Iterator[Diagnostic]:
    edges: dict[str, set[str]] = {}
    for d in model.domains():
        for t in types_in_domain(model, d.id):
            generals = model.generals_of(t.id)
            edges[t.id] = set(generals)
            if len(generals) > 1:
                yield _diag(model, "P08", t.id, f"type {t.name!r} has {len(generals)} supertypes; at most one is allowed")
            for g in generals:
                if not _check_type(model, model.domain_of(t.id), g):
                    yield _diag(model, "P08", t.id, f"supertype {g!r} of {t.name!r} is not a Type of the same domain")
    for node in sorted(_cyclic_nodes(edges)):
        if node in model:
            yield _diag(model, "P08", node, "type hierarchy contains a cycle")


@rule("P09", "NameSyntax")
def name_syntax(model: ModelGraph) -> Iterator[Diagnostic]:
    for d in model.domains():
        for stereotype in (Stereotype.TYPE, Stereotype.PREDICATE, Stereotype.FUNCTION, Stereotype.ACTION):
            for e in model.in_domain(d.id, stereotype):
                if not e.name:
                    yield _diag(model, "P09", e.id, f"{stereotype.value} has no name")
                elif not profile.NAME_RE.fullmatch(e.name):
                    yield _diag(model, "P09", e.id, f"{e.name!r} is not a valid PDDL name")
                elif e.name.lower() in profile.RESERVED:
                    yield _diag(model, "P09", e.id, f"{e.name!r} is a reserved PDDL word")


@rule("P10", "DomainPresent", generation_only=True)
def domain_present(model: ModelGraph) -> Iterator[Diagnostic]:
    if not model.domains():
        yield error("P10", "model has no Domain package to generate from", path="model")


def validate(model: ModelGraph, rules: Iterable[str] | None = None, *, generation: bool = False) -> list[Diagnostic]:
    """Run the enabled rules and return their findings in a stable order.

    ``generation`` enables rules that only matter when PDDL is about to be
    produced (currently P10).
    """
    enabled = RuleSet.all() if rules is None else RuleSet(rules)
    found: list[Diagnostic] = []
    for rid in sorted(enabled):
        info = RULES[rid]
        if info.generation_only and not generation:
            continue
        found.extend(info.check(model))

    def key(d: Diagnostic):
        name = model.element(d.element).name if d.element in model else ""
        return (d.rule, name, d.element, d.message)

    return sorted(found, key=key)
