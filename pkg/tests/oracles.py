"""Reference implementations used to check the real code.

They are deliberately naive: exhaustive enumeration and Bellman-Ford style
relaxation instead of priority queues, and direct interpretation of PDDL
instead of precompiled ground actions.
"""

from __future__ import annotations

import itertools
import json
from collections import defaultdict
from fractions import Fraction

from modelplan.pddl import And, Atom, FunctionAssign, FunctionTerm, Increase, Not
from modelplan.pddl.reader import tokenize

INF = float("inf")


def as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(repr(x)) if isinstance(x, float) else Fraction(x)


def _relax(start, edges_of):
    """Reachable states and exact optimal distances from ``start``."""
    order = [start]  # breadth-first discovery order, which speeds up convergence
    states = {start}
    edges = {}
    for s in order:
        edges[s] = list(edges_of(s))
        for nxt, _ in edges[s]:
            if nxt not in states:
                states.add(nxt)
                order.append(nxt)
    dist = {s: INF for s in order}
    dist[start] = Fraction(0)
    changed = True
    while changed:
        changed = False
        for s in order:
            if dist[s] == INF:
                continue
            for nxt, cost in edges[s]:
                if dist[s] + cost < dist[nxt]:
                    dist[nxt] = dist[s] + cost
                    changed = True
    return dist


def optimal_cost_task(task):
    """Cheapest goal cost of a :class:`GroundTask` by exhaustive search (``INF`` if none)."""

    def edges_of(state):
        for a in task.actions:
            if all(state >> i & 1 for i in a.pre_pos) and not any(state >> i & 1 for i in a.pre_neg):
                nxt = state
                for i in a.delete:
                    nxt &= ~(1 << i)
                for i in a.add:
                    nxt |= 1 << i
                yield nxt, as_fraction(a.cost)

    start = 0
    for i in task.init:
        start |= 1 << i
    dist = _relax(start, edges_of)

    def goal(s):
        return all(s >> i & 1 for i in task.goal_pos) and not any(s >> i & 1 for i in task.goal_neg)

    return min((d for s, d in dist.items() if goal(s)), default=INF), len(dist)


def _flatten(node):
    if node is None:
        return []
    if isinstance(node, And):
        return [x for p in node.parts for x in _flatten(p)]
    return [node]


def optimal_cost_pddl(domain, problem):
    """Cheapest plan cost by interpreting the PDDL directly over every binding."""
    low = str.lower
    objects = [(low(o.name), low(o.type)) for o in problem.objects]
    parents = {low(t.name): low(t.type) for t in domain.types}

    def is_a(t, wanted):
        while True:
            if t == wanted or wanted == "object":
                return True
            if t not in parents:
                return False
            t = parents[t]

    values = {}
    init = set()
    for f in problem.init:
        if isinstance(f, FunctionAssign):
            values[(low(f.term.name), tuple(map(low, f.term.terms)))] = as_fraction(f.value)
        else:
            init.add((low(f.predicate), tuple(map(low, f.terms))))

    ground = []
    for a in domain.actions:
        pools = [[o for o, t in objects if is_a(t, low(p.type))] for p in a.params]
        for combo in itertools.product(*pools):
            env = {low(p.name): o for p, o in zip(a.params, combo)}

            def inst(atom):
                return (low(atom.predicate), tuple(env.get(low(t), low(t)) for t in atom.terms))

            pos = {inst(x) for x in _flatten(a.precondition) if isinstance(x, Atom)}
            neg = {inst(x.atom) for x in _flatten(a.precondition) if isinstance(x, Not)}
            add, dele, cost = set(), set(), Fraction(0)
            for x in _flatten(a.effect):
                if isinstance(x, Atom):
                    add.add(inst(x))
                elif isinstance(x, Not):
                    dele.add(inst(x.atom))
                elif isinstance(x, Increase):
                    if isinstance(x.value, FunctionTerm):
                        # costs are looked up lazily: a binding that never applies needs no value
                        k = (low(x.value.name), tuple(env.get(low(t), low(t)) for t in x.value.terms))
                        cost = cost + values[k] if cost is not None and k in values else None
                    elif cost is not None:
                        cost += as_fraction(x.value)
            ground.append((pos, neg, add, dele, cost))

    goal = _flatten(problem.goal)
    gpos = {(low(x.predicate), tuple(map(low, x.terms))) for x in goal if isinstance(x, Atom)}
    gneg = {(low(x.atom.predicate), tuple(map(low, x.atom.terms))) for x in goal if isinstance(x, Not)}

    def edges_of(state):
        for pos, neg, add, dele, cost in ground:
            if pos <= state and not (neg & state):
                if cost is None:
                    raise KeyError("applicable action lacks a function value")
                yield frozenset((state - dele) | add), cost

    dist = _relax(frozenset(init), edges_of)
    return min((d for s, d in dist.items() if gpos <= s and not (gneg & s)), default=INF)


def p02_fires(document_text: str) -> bool:
    """Whether two Type classes owned (transitively) by one Domain share a name."""
    doc = json.loads(document_text)
    owner = {e["id"]: e.get("owner") for e in doc.get("elements", [])}
    name = {e["id"]: e.get("name", "") for e in doc.get("elements", [])}
    stereo = {a["element"]: a["stereotype"] for a in doc.get("applications", [])}

    def nearest_domain(eid):
        cur = owner.get(eid)
        while cur is not None:
            if stereo.get(cur) == "Domain":
                return cur
            cur = owner.get(cur)
        return None

    seen = defaultdict(list)
    for eid, st in stereo.items():
        if st == "Type":
            seen[(nearest_domain(eid), name[eid].casefold())].append(eid)
    return any(d is not None and len(v) > 1 for (d, _), v in seen.items())


def tokens(text: str) -> list[str]:
    return [t.text for t in tokenize(text)]


def action_tokens(domain_text: str, name: str) -> list[str]:
    """Tokens of the ``(:action name ...)`` block inside a domain text."""
    toks = tokens(domain_text)
    for i in range(len(toks) - 2):
        if toks[i] == "(" and toks[i + 1] == ":action" and toks[i + 2] == name:
            depth = 0
            for j in range(i, len(toks)):
                depth += {"(": 1, ")": -1}.get(toks[j], 0)
                if depth == 0:
                    return toks[i : j + 1]
    raise LookupError(name)
