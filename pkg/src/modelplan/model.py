"""In-memory system model annotated with planning stereotypes.

A :class:`ModelGraph` is validated once at construction and immutable
afterwards. Every query returns elements in a deterministic order so that
everything generated from a model is reproducible byte for byte.
"""

from __future__ import annotations

import enum
from dataclasses import InitVar, dataclass, field
from typing import Iterable, Mapping, Union


class ElementKind(str, enum.Enum):
    PACKAGE = "Package"
    CLASS = "Class"
    ACTIVITY = "Activity"
    ACTION_NODE = "ActionNode"
    FLOW_NODE = "FlowNode"


class FlowFlavor(str, enum.Enum):
    OBJECT = "ObjectFlow"
    CONTROL = "ControlFlow"


class Stereotype(str, enum.Enum):
    DOMAIN = "Domain"
    TYPE = "Type"
    PREDICATE = "Predicate"
    FUNCTION = "Function"
    ACTION = "Action"


# Which element kind each stereotype may be applied to.
STEREOTYPE_TARGET = {
    Stereotype.DOMAIN: ElementKind.PACKAGE,
    Stereotype.TYPE: ElementKind.CLASS,
    Stereotype.PREDICATE: ElementKind.FLOW_NODE,
    Stereotype.FUNCTION: ElementKind.FLOW_NODE,
    Stereotype.ACTION: ElementKind.ACTION_NODE,
}

# Which kinds an element of a given kind may own.
ALLOWED_CHILDREN = {
    ElementKind.PACKAGE: frozenset({ElementKind.PACKAGE, ElementKind.CLASS, ElementKind.ACTIVITY}),
    ElementKind.ACTIVITY: frozenset({ElementKind.ACTION_NODE, ElementKind.FLOW_NODE}),
    ElementKind.CLASS: frozenset(),
    ElementKind.ACTION_NODE: frozenset(),
    ElementKind.FLOW_NODE: frozenset(),
}


@dataclass(frozen=True, order=True)
class Element:
    id: str
    kind: ElementKind
    name: str = ""
    owner: str | None = None


@dataclass(frozen=True, order=True)
class Flow:
    id: str
    flavor: FlowFlavor
    source: str
    target: str


@dataclass(frozen=True, order=True)
class Generalization:
    specific: str
    general: str


@dataclass(frozen=True, order=True)
class TypeRef:
    """Tag value pointing at a Type-stereotyped class."""

    id: str


@dataclass(frozen=True, order=True)
class Param:
    variable: str
    type: TypeRef


TagValue = Union[str, int, float, bool, TypeRef, "tuple[Param, ...]", "tuple[str, ...]"]


@dataclass(frozen=True)
class StereotypeApplication:
    element: str
    stereotype: Stereotype
    tags: Mapping[str, TagValue] = field(default_factory=dict)

    def tag(self, key: str, default=None):
        return self.tags.get(key, default)


@dataclass(frozen=True)
class Issue:
    """A structural problem found while building a model."""

    code: str
    element: str
    message: str


class ModelError(ValueError):
    def __init__(self, issues: list[Issue]):
        self.issues = issues
        super().__init__("; ".join(f"{i.code} {i.element}: {i.message}" for i in issues))


class UnknownElementError(LookupError):
    pass


class NotAnActionError(ValueError):
    pass


class NotADomainError(ValueError):
    pass


def is_tag_value(value) -> bool:
    if isinstance(value, (str, int, float, bool, TypeRef)):
        return True
    if isinstance(value, tuple):
        return all(isinstance(v, Param) for v in value) or all(isinstance(v, str) for v in value)
    return False


def _type_refs(value) -> list[TypeRef]:
    if isinstance(value, TypeRef):
        return [value]
    if isinstance(value, tuple):
        return [p.type for p in value if isinstance(p, Param)]
    return []


def model_issues(
    elements: Iterable[Element],
    flows: Iterable[Flow],
    generalizations: Iterable[Generalization],
    applications: Iterable[StereotypeApplication],
) -> list[Issue]:
    """Check every structural invariant; an empty result means the parts form a valid graph."""
    elements, flows = list(elements), list(flows)
    generalizations, applications = list(generalizations), list(applications)
    issues: list[Issue] = []
    by_id: dict[str, Element] = {}
    for e in elements:
        if not e.id:
            issues.append(Issue("empty-id", "", "element id must be non-empty"))
        elif e.id in by_id:
            issues.append(Issue("duplicate-id", e.id, "element id used more than once"))
        else:
            by_id[e.id] = e

    for e in by_id.values():
        if e.owner is None:
            continue
        owner = by_id.get(e.owner)
        if owner is None:
            issues.append(Issue("dangling-ref", e.id, f"owner {e.owner!r} does not exist"))
        elif e.kind not in ALLOWED_CHILDREN[owner.kind]:
            issues.append(Issue("bad-owner", e.id, f"{owner.kind.value} cannot own {e.kind.value}"))

    # containment must be a forest
    for e in sorted(by_id.values()):
        seen = {e.id}
        cur = e.owner
        while cur is not None and cur in by_id:
            if cur in seen:
                issues.append(Issue("containment-cycle", e.id, "element is contained in itself"))
                break
            seen.add(cur)
            cur = by_id[cur].owner

    flow_ids = set()
    for f in flows:
        if f.id in flow_ids:
            issues.append(Issue("duplicate-id", f.id, "flow defined more than once"))
            continue
        flow_ids.add(f.id)
        node = by_id.get(f.id)
        if node is None or node.kind is not ElementKind.FLOW_NODE:
            issues.append(Issue("flow-element", f.id, "flow has no matching FlowNode element"))
        ends = []
        for role, ref in (("source", f.source), ("target", f.target)):
            end = by_id.get(ref)
            if end is None:
                issues.append(Issue("dangling-ref", f.id, f"{role} {ref!r} does not exist"))
            else:
                ends.append(end)
        if len(ends) < 2:
            continue
        if f.source == f.target:
            issues.append(Issue("flow-endpoints", f.id, "source and target are the same element"))
            continue
        activity = node.owner if node is not None else None
        for end in ends:
            if end.kind is ElementKind.ACTION_NODE and end.owner == activity:
                continue
            if end.kind is ElementKind.ACTIVITY and end.id == activity:
                continue
            issues.append(
                Issue("flow-endpoints", f.id, f"endpoint {end.id!r} is not a node or boundary of the flow's activity")
            )
    for e in by_id.values():
        if e.kind is ElementKind.FLOW_NODE and e.id not in flow_ids:
            issues.append(Issue("flow-element", e.id, "FlowNode element has no flow definition"))

    generals: dict[str, set[str]] = {}
    for g in generalizations:
        ok = True
        for ref in (g.specific, g.general):
            end = by_id.get(ref)
            if end is None:
                issues.append(Issue("dangling-ref", g.specific, f"generalization endpoint {ref!r} does not exist"))
                ok = False
            elif end.kind is not ElementKind.CLASS:
                issues.append(Issue("generalization-kind", ref, "generalization endpoints must be classes"))
                ok = False
        if ok:
            generals.setdefault(g.specific, set()).add(g.general)
    cyclic = _cyclic_nodes(generals)
    for node in sorted(cyclic):
        issues.append(Issue("generalization-cycle", node, "class is its own generalization"))

    applied: dict[str, StereotypeApplication] = {}
    for app in applications:
        target = by_id.get(app.element)
        if target is None:
            issues.append(Issue("dangling-ref", app.element, "stereotype applied to unknown element"))
            continue
        if app.element in applied:
            issues.append(Issue("duplicate-application", app.element, "element carries more than one stereotype"))
            continue
        applied[app.element] = app
        expected = STEREOTYPE_TARGET[app.stereotype]
        if target.kind is not expected:
            issues.append(
                Issue(
                    "incompatible-stereotype",
                    app.element,
                    f"{app.stereotype.value} applies to {expected.value}, not {target.kind.value}",
                )
            )
        for key, value in app.tags.items():
            if not isinstance(key, str) or not key or not is_tag_value(value):
                issues.append(Issue("bad-tag", app.element, f"tag {key!r} has an unsupported value"))

    def domain_of(eid: str) -> str | None:
        seen = set()
        cur: str | None = eid
        while cur is not None and cur in by_id and cur not in seen:
            seen.add(cur)
            a = applied.get(cur)
            if a is not None and a.stereotype is Stereotype.DOMAIN and by_id[cur].kind is ElementKind.PACKAGE:
                return cur
            cur = by_id[cur].owner
        return None

    for app in applied.values():
        for key, value in sorted(app.tags.items()):
            if not is_tag_value(value):
                continue
            for ref in _type_refs(value):
                cls = by_id.get(ref.id)
                if cls is None:
                    issues.append(Issue("dangling-ref", app.element, f"tag {key!r} references unknown type {ref.id!r}"))
                    continue
                target_app = applied.get(ref.id)
                if cls.kind is not ElementKind.CLASS or target_app is None or target_app.stereotype is not Stereotype.TYPE:
                    issues.append(Issue("type-ref", app.element, f"tag {key!r} references {ref.id!r}, not a Type class"))
                elif domain_of(ref.id) != domain_of(app.element):
                    issues.append(Issue("type-ref", app.element, f"type {ref.id!r} belongs to another domain"))
    return issues


def _cyclic_nodes(edges: Mapping[str, set[str]]) -> set[str]:
    """Nodes lying on a cycle of the directed graph ``edges``."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    stack: list[str] = []
    on_stack: set[str] = set()
    result: set[str] = set()
    counter = 0
    nodes = set(edges) | {t for ts in edges.values() for t in ts}
    for root in sorted(nodes):
        if root in index:
            continue
        # iterative Tarjan
        work = [(root, iter(sorted(edges.get(root, ()))))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(sorted(edges.get(nxt, ())))))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    top = stack.pop()
                    on_stack.discard(top)
                    comp.append(top)
                    if top == node:
                        break
                if len(comp) > 1 or node in edges.get(node, ()):
                    result.update(comp)
    return result


@dataclass(frozen=True)
class ModelGraph:
    elements: tuple[Element, ...] = ()
    flows: tuple[Flow, ...] = ()
    generalizations: tuple[Generalization, ...] = ()
    applications: tuple[StereotypeApplication, ...] = ()
    check: InitVar[bool] = True

    def __post_init__(self, check: bool) -> None:
        # Canonical ordering makes structural equality independent of input order.
        object.__setattr__(self, "elements", tuple(sorted(self.elements, key=lambda e: e.id)))
        object.__setattr__(self, "flows", tuple(sorted(self.flows, key=lambda f: f.id)))
        object.__setattr__(self, "generalizations", tuple(sorted(set(self.generalizations))))
        object.__setattr__(
            self,
            "applications",
            tuple(
                StereotypeApplication(a.element, a.stereotype, dict(sorted(a.tags.items())))
                for a in sorted(self.applications, key=lambda a: (a.element, a.stereotype.value))
            ),
        )
        if check:
            issues = model_issues(self.elements, self.flows, self.generalizations, self.applications)
            if issues:
                raise ModelError(issues)
        by_id = {e.id: e for e in self.elements}
        children: dict[str, list[str]] = {}
        for e in self.elements:
            if e.owner is not None:
                children.setdefault(e.owner, []).append(e.id)
        generals: dict[str, list[str]] = {}
        for g in self.generalizations:
            generals.setdefault(g.specific, []).append(g.general)
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_children", children)
        object.__setattr__(self, "_apps", {a.element: a for a in self.applications})
        object.__setattr__(self, "_flows", {f.id: f for f in self.flows})
        object.__setattr__(self, "_generals", generals)

    # -- lookups -----------------------------------------------------------

    def element(self, eid: str) -> Element:
        try:
            return self._by_id[eid]
        except KeyError:
            raise UnknownElementError(eid) from None

    def __contains__(self, eid: str) -> bool:
        return eid in self._by_id

    def flow(self, fid: str) -> Flow:
        try:
            return self._flows[fid]
        except KeyError:
            raise UnknownElementError(fid) from None

    def children(self, eid: str) -> list[Element]:
        return [self._by_id[c] for c in self._children.get(eid, ())]

    def descendants(self, eid: str) -> list[Element]:
        out: list[Element] = []
        pending = list(self._children.get(eid, ()))
        while pending:
            cid = pending.pop()
            out.append(self._by_id[cid])
            pending.extend(self._children.get(cid, ()))
        return sorted(out, key=lambda e: e.id)

    def generals_of(self, class_id: str) -> list[str]:
        return list(self._generals.get(class_id, ()))

    def application(self, eid: str) -> StereotypeApplication | None:
        return self._apps.get(eid)

    def has_stereotype(self, eid: str, stereotype: Stereotype) -> bool:
        app = self._apps.get(eid)
        return app is not None and app.stereotype is stereotype

    def applications_of(self, stereotype: Stereotype) -> list[StereotypeApplication]:
        return [a for a in self.applications if a.stereotype is stereotype]

    def domain_of(self, eid: str) -> str | None:
        """Nearest enclosing (or identical) Domain package."""
        cur: str | None = eid
        while cur is not None:
            if self.has_stereotype(cur, Stereotype.DOMAIN):
                return cur
            cur = self._by_id[cur].owner
        return None

    def domains(self) -> list[Element]:
        return sort_by_name([self._by_id[a.element] for a in self.applications_of(Stereotype.DOMAIN)])

    def in_domain(self, domain: str, stereotype: Stereotype) -> list[Element]:
        """Elements carrying ``stereotype`` whose nearest Domain is ``domain``."""
        return sort_by_name(
            e for e in self.descendants(domain) if self.has_stereotype(e.id, stereotype) and self.domain_of(e.id) == domain
        )

    def qualified_name(self, eid: str) -> str:
        parts = []
        cur: str | None = eid
        while cur is not None:
            e = self._by_id[cur]
            parts.append(e.name or e.id)
            cur = e.owner
        return "::".join(reversed(parts))


def sort_by_name(elements: Iterable[Element]) -> list[Element]:
    return sorted(elements, key=lambda e: (e.name, e.id))


# -- operations --------------------------------------------------------------


def stereotype_of(model: ModelGraph, eid: str) -> StereotypeApplication | None:
    model.element(eid)
    return model.application(eid)


def _require_action(model: ModelGraph, action: str) -> None:
    e = model.element(action)
    if e.kind is not ElementKind.ACTION_NODE or not model.has_stereotype(action, Stereotype.ACTION):
        raise NotAnActionError(action)


def _annotated(model: ModelGraph, flows: Iterable[Flow]) -> list[tuple[Flow, StereotypeApplication]]:
    out = []
    for f in sorted(flows, key=lambda f: f.id):
        app = model.application(f.id)
        if app is not None and app.stereotype in (Stereotype.PREDICATE, Stereotype.FUNCTION):
            out.append((f, app))
    return out


def incoming_annotated_flows(model: ModelGraph, action: str) -> list[tuple[Flow, StereotypeApplication]]:
    """Predicate/Function flows ending at ``action``, ordered by flow id."""
    _require_action(model, action)
    return _annotated(model, (f for f in model.flows if f.target == action))


def outgoing_annotated_flows(model: ModelGraph, action: str) -> list[tuple[Flow, StereotypeApplication]]:
    """Predicate/Function flows leaving ``action``, ordered by flow id."""
    _require_action(model, action)
    return _annotated(model, (f for f in model.flows if f.source == action))


def types_in_domain(model: ModelGraph, domain: str) -> list[Element]:
    """Type-stereotyped classes transitively owned by ``domain``, ordered by (name, id).

    Types inside a nested Domain package belong to that package instead.
    """
    e = model.element(domain)
    if e.kind is not ElementKind.PACKAGE or not model.has_stereotype(domain, Stereotype.DOMAIN):
        raise NotADomainError(domain)
    return [c for c in model.in_domain(domain, Stereotype.TYPE) if c.kind is ElementKind.CLASS]
