"""Expand a PDDL domain/problem pair into a :class:`GroundTask`."""

from __future__ import annotations

from ..pddl.ast import (
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
from .task import GroundAction, GroundTask, exact


class GroundingError(Exception):
    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(f"{code}: {message}")


def _ancestors(domain: PddlDomain) -> dict[str, set[str]]:
    parents = domain.type_parents()
    out = {}
    for t in list(parents) + [OBJECT]:
        chain, cur = {t, OBJECT}, t
        while cur in parents and parents[cur] not in chain:
            cur = parents[cur]
            chain.add(cur)
        out[t] = chain
    return out


def ground(domain: PddlDomain, problem: PddlProblem) -> GroundTask:
    """All type-consistent bindings of every action, with costs evaluated.

    Bindings that violate a static precondition (a predicate no action
    changes) are pruned early; such actions could never be applied.
    """
    ancestors = _ancestors(domain)
    objects: dict[str, str] = {}
    display: dict[str, str] = {}
    for o in problem.objects:
        t = key(o.type)
        if t not in ancestors:
            raise GroundingError("type-mismatch", f"object {o.name!r} has unknown type {o.type!r}")
        objects[key(o.name)] = t
        display[key(o.name)] = o.name

    def check_args(what: str, name: str, params, terms) -> None:
        for p, t in zip(params, terms):
            otype = objects.get(key(t))
            if otype is None:
                raise GroundingError("type-mismatch", f"{what} {name!r} uses unknown object {t!r}")
            if key(p.type) not in ancestors[otype]:
                raise GroundingError("type-mismatch", f"{what} {name!r}: {t!r} is not a {p.type}")

    def atom_key(pred: str, terms) -> tuple:
        return (key(pred), tuple(key(t) for t in terms))

    pred_names = {key(p.name): p.name for p in domain.predicates}
    init_atoms: set[tuple] = set()
    values: dict[tuple, object] = {}
    for fact in problem.init:
        if isinstance(fact, FunctionAssign):
            decl = domain.function(fact.term.name)
            if decl is not None:
                check_args("function", fact.term.name, decl.params, fact.term.terms)
            values[atom_key(fact.term.name, fact.term.terms)] = fact.value
        else:
            decl = domain.predicate(fact.predicate)
            if decl is not None:
                check_args("predicate", fact.predicate, decl.params, fact.terms)
            init_atoms.add(atom_key(fact.predicate, fact.terms))

    fluent = set()
    for a in domain.actions:
        for lit in literals(a.effect):
            if isinstance(lit, Not):
                lit = lit.atom
            if isinstance(lit, Atom):
                fluent.add(key(lit.predicate))
            elif isinstance(lit, Increase) and key(lit.target.name) != TOTAL_COST:
                raise GroundingError("unsupported", f"action {a.name!r} changes {lit.target.name!r}; only total-cost may change")

    by_type: dict[str, list[str]] = {}
    for name, t in sorted(objects.items()):
        for anc in ancestors[t]:
            by_type.setdefault(anc, []).append(name)

    ground_atoms: dict[tuple, None] = dict.fromkeys(sorted(init_atoms))
    raw_actions = []
    for a in domain.actions:
        variables = [key(p.name) for p in a.params]
        pre = literals(a.precondition)
        static_checks = []  # (position after which all terms are bound, positive?, pred, terms)
        for lit in pre:
            atom = lit.atom if isinstance(lit, Not) else lit
            if key(atom.predicate) in fluent:
                continue
            last = max((variables.index(key(t)) for t in atom.terms if key(t) in variables), default=-1)
            static_checks.append((last, not isinstance(lit, Not), atom))

        def bind(term: str, binding: list[str]) -> str:
            k = key(term)
            return binding[variables.index(k)] if k in variables else k

        def static_ok(depth: int, binding: list[str]) -> bool:
            for last, positive, atom in static_checks:
                if last == depth:
                    present = (key(atom.predicate), tuple(bind(t, binding) for t in atom.terms)) in init_atoms
                    if present != positive:
                        return False
            return True

        candidates = [by_type.get(key(p.type), []) for p in a.params]
        bindings: list[list[str]] = []
        if static_ok(-1, []):
            stack: list[list[str]] = [[]]
            while stack:
                partial = stack.pop()
                depth = len(partial)
                if depth == len(variables):
                    bindings.append(partial)
                    continue
                for obj in reversed(candidates[depth]):
                    nxt = partial + [obj]
                    if static_ok(depth, nxt):
                        stack.append(nxt)
        for binding in bindings:
            pos, neg, add, dele, cost = set(), set(), set(), set(), 0
            for lit in pre:
                atom = lit.atom if isinstance(lit, Not) else lit
                if key(atom.predicate) not in fluent:
                    continue
                g = (key(atom.predicate), tuple(bind(t, binding) for t in atom.terms))
                (neg if isinstance(lit, Not) else pos).add(g)
            if pos & neg:
                continue
            for lit in literals(a.effect):
                if isinstance(lit, Increase):
                    if isinstance(lit.value, FunctionTerm):
                        fk = (key(lit.value.name), tuple(bind(t, binding) for t in lit.value.terms))
                        if fk not in values:
                            shown = "(" + " ".join([lit.value.name, *(display[x] for x in fk[1])]) + ")"
                            raise GroundingError("missing-function-value", f"no initial value for {shown}")
                        amount = exact(values[fk])
                    else:
                        amount = exact(lit.value)
                    if amount < 0:
                        raise GroundingError("negative-cost", f"action {a.name!r} would have negative cost")
                    cost += amount
                else:
                    atom = lit.atom if isinstance(lit, Not) else lit
                    g = (key(atom.predicate), tuple(bind(t, binding) for t in atom.terms))
                    (dele if isinstance(lit, Not) else add).add(g)
            dele -= add
            for g in pos | neg | add | dele:
                ground_atoms.setdefault(g, None)
            raw_actions.append((a.name, tuple(display[b] for b in binding), pos, neg, add, dele, cost))

    goal_pos, goal_neg = set(), set()
    for lit in literals(problem.goal):
        atom = lit.atom if isinstance(lit, Not) else lit
        g = atom_key(atom.predicate, atom.terms)
        ground_atoms.setdefault(g, None)
        (goal_neg if isinstance(lit, Not) else goal_pos).add(g)

    order = sorted(ground_atoms)
    index = {g: i for i, g in enumerate(order)}

    def show(g) -> str:
        return "(" + " ".join([pred_names.get(g[0], g[0]), *(display.get(t, t) for t in g[1])]) + ")"

    def ids(group) -> frozenset[int]:
        return frozenset(index[g] for g in group)

    actions = [
        GroundAction(name, args, ids(pos), ids(neg), ids(add), ids(dele), cost)
        for name, args, pos, neg, add, dele, cost in raw_actions
    ]
    return GroundTask(
        tuple(show(g) for g in order), tuple(actions), ids(init_atoms), ids(goal_pos), ids(goal_neg)
    )
