"""Hypothesis strategies shared by the test modules."""

from __future__ import annotations

import functools
import json
import random
from fractions import Fraction

from hypothesis import strategies as st

from modelplan.pddl import (
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
    infer_requirements,
)
from modelplan.planner import GroundAction, GroundTask
from modelplan.profile import RESERVED

# identifiers -------------------------------------------------------------------

_first = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
_rest = _first + "0123456789_-"

raw_names = st.builds(
    lambda a, b: a + b,
    st.sampled_from(_first),
    st.text(alphabet=_rest, max_size=6),
).filter(lambda s: s.lower() not in RESERVED and s.lower() != TOTAL_COST)


@functools.lru_cache(maxsize=None)
def _name_lists(min_size, max_size):
    return st.lists(raw_names, min_size=min_size, max_size=max_size, unique_by=str.lower)


def unique_names(min_size=0, max_size=4, exclude=frozenset()):
    names = _name_lists(min_size, max_size)
    if not exclude:
        return names
    return names.map(lambda xs: [x for x in xs if x.lower() not in exclude])


@functools.lru_cache(maxsize=None)
def variables(n_max=3):
    return unique_names(0, n_max).map(lambda xs: ["?" + x for x in xs])


numbers = st.one_of(
    st.integers(min_value=-1000, max_value=1000),
    st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False),
)
non_negative = numbers.filter(lambda v: v >= 0)

# PDDL syntax trees ---------------------------------------------------------------


def _pick(draw, seq):
    return seq[draw(st.integers(0, len(seq) - 1))]


def _atom(draw, predicates, terms):
    p = _pick(draw, predicates)
    return Atom(p.name, tuple(_pick(draw, terms) for _ in p.params))


def _formula(draw, leaf):
    """None, a single leaf, or an ``and`` of leaves and small nested ``and`` groups."""
    shape = draw(st.integers(0, 2))
    if shape == 0:
        return None
    if shape == 1:
        return leaf()
    parts = []
    for _ in range(draw(st.integers(0, 4))):
        if draw(st.booleans()):
            parts.append(And(tuple(leaf() for _ in range(draw(st.integers(0, 2))))))
        else:
            parts.append(leaf())
    return And(tuple(parts))


@st.composite
def pddl_domains(draw):
    """Domains that satisfy the semantic checks (so they parse back)."""
    name = draw(raw_names)
    type_names = draw(unique_names(0, 4))
    types = []
    for i, t in enumerate(type_names):
        types.append(TypedEntry(t, _pick(draw, ["object", *type_names[:i]])))
    pool = ["object", *type_names]

    def typed_vars():
        return tuple(TypedEntry(v, _pick(draw, pool)) for v in draw(variables()))

    pred_names = draw(unique_names(0, 5))
    predicates = tuple(PredicateDecl(p, typed_vars()) for p in pred_names)
    taken = {p.lower() for p in pred_names}
    fun_names = [f for f in draw(unique_names(0, 3)) if f.lower() not in taken]
    functions = [FunctionDecl(f, typed_vars()) for f in fun_names]
    use_cost = draw(st.booleans())
    if use_cost:
        functions.insert(0, FunctionDecl(TOTAL_COST))

    actions = []
    for a in draw(unique_names(0, 4)):
        params = typed_vars()
        terms = [p.name for p in params]
        candidates = [p for p in predicates if not p.params or terms]

        def literal():
            atom = _atom(draw, candidates, terms)
            return Not(atom) if draw(st.booleans()) else atom

        fterms = [f for f in functions if f.name != TOTAL_COST and (not f.params or terms)]

        def increase():
            if fterms and draw(st.booleans()):
                f = _pick(draw, fterms)
                value = FunctionTerm(f.name, tuple(_pick(draw, terms) for _ in f.params))
            else:
                value = draw(non_negative)
            return Increase(FunctionTerm(TOTAL_COST), value)

        def effect_leaf():
            if not use_cost or (candidates and draw(st.booleans())):
                return literal()
            return increase()

        pre = _formula(draw, literal) if candidates else None
        eff = _formula(draw, effect_leaf) if candidates or use_cost else None
        actions.append(ActionDef(a, params, pre, eff))

    draft = PddlDomain(name, frozenset(), tuple(types), predicates, tuple(functions), tuple(actions))
    reqs = set(infer_requirements(draft))
    if draw(st.booleans()):
        reqs.add("strips")
    return PddlDomain(name, frozenset(reqs), draft.types, draft.predicates, draft.functions, draft.actions)


@st.composite
def pddl_problems(draw, domain: PddlDomain):
    """A problem whose references resolve against ``domain``."""
    pool = ["object", *(t.name for t in domain.types)]
    objects = tuple(TypedEntry(o, _pick(draw, pool)) for o in draw(unique_names(0, 5)))
    names = [o.name for o in objects]
    candidates = [p for p in domain.predicates if not p.params or names]

    init = [_atom(draw, candidates, names) for _ in range(draw(st.integers(0, 5)))] if candidates else []
    assigned = set()
    for f in domain.functions:
        if f.params and not names:
            continue
        for _ in range(draw(st.integers(0, 2))):
            terms = tuple(_pick(draw, names) for _ in f.params)
            key = (f.name.lower(), tuple(t.lower() for t in terms))
            if key not in assigned:
                assigned.add(key)
                init.append(FunctionAssign(FunctionTerm(f.name, terms), draw(numbers)))
    init = draw(st.permutations(init)) if init else []

    negatives = "negative-preconditions" in domain.requirements

    def leaf():
        atom = _atom(draw, candidates, names)
        return Not(atom) if negatives and draw(st.booleans()) else atom

    if not candidates:
        goal = And(())
    elif draw(st.booleans()):
        goal = leaf()
    else:
        goal = And(tuple(leaf() for _ in range(draw(st.integers(0, 4)))))
    metric = None
    if domain.function(TOTAL_COST) is not None and draw(st.booleans()):
        metric = FunctionTerm(TOTAL_COST)
    return PddlProblem(draw(raw_names), domain.name, objects, tuple(init), goal, metric)


domain_and_problem = pddl_domains().flatmap(lambda d: st.tuples(st.just(d), pddl_problems(d)))

# annotated models -------------------------------------------------------------------


def random_model_document(rng: random.Random) -> dict:
    """A ``.pm1`` document that passes every profile rule.

    The generator picks typed action parameters first and then wires
    predicate and cost flows whose arguments respect the type hierarchy.
    """
    letters = "abcdefghijklmnopqrstuvwxyz"

    def ident(prefix: str, i: int) -> str:
        return f"{prefix}{rng.choice(letters)}{i}"

    elements = [{"id": "pkg", "kind": "Package", "name": ident("D", 0).replace("-", "_")}]
    apps = [{"element": "pkg", "stereotype": "Domain"}]
    gens = []
    type_ids = []
    parent: dict[str, str | None] = {}
    for i in range(rng.randint(1, 4)):
        tid = f"t{i}"
        elements.append({"id": tid, "kind": "Class", "name": ident("T", i), "owner": "pkg"})
        apps.append({"element": tid, "stereotype": "Type"})
        parent[tid] = None
        if type_ids and rng.random() < 0.4:
            parent[tid] = rng.choice(type_ids)
            gens.append({"specific": tid, "general": parent[tid]})
        type_ids.append(tid)

    def supertypes(t):
        out = []
        while t is not None:
            out.append(t)
            t = parent[t]
        return out

    elements.append({"id": "act", "kind": "Activity", "name": "process", "owner": "pkg"})
    actions = {}
    for i in range(rng.randint(1, 4)):
        aid = f"a{i}"
        params = [{"variable": f"?v{j}", "type": rng.choice(type_ids)} for j in range(rng.randint(0, 3))]
        actions[aid] = params
        elements.append({"id": aid, "kind": "ActionNode", "name": ident("act-", i), "owner": "act"})
        apps.append({"element": aid, "stereotype": "Action", "tags": {"parameters": params}})

    signatures = {}  # predicate name -> list of type ids
    for i in range(rng.randint(1, 5)):
        signatures[ident("p", i)] = [rng.choice(type_ids) for _ in range(rng.randint(0, 2))]
    costs = {ident("f", i): [rng.choice(type_ids) for _ in range(rng.randint(0, 2))] for i in range(rng.randint(0, 2))}

    def bind(aid, sig):
        """Pick action variables for each slot, or None when some slot cannot be filled."""
        out = []
        for slot in sig:
            fits = [p["variable"] for p in actions[aid] if slot in supertypes(p["type"])]
            if not fits:
                return None
            out.append(rng.choice(fits))
        return out

    def sig_params(sig):
        return [{"variable": f"?x{k}", "type": t} for k, t in enumerate(sig)]

    flows = []
    n = 0
    for _ in range(rng.randint(0, 8)):
        name = rng.choice(sorted(signatures))
        sig = signatures[name]
        target = rng.choice([*actions, "act"])
        source = rng.choice([a for a in [*actions, "act"] if a != target])
        tags = {"parameters": sig_params(sig)}
        if target != "act":
            args = bind(target, sig)
            if args is None:
                continue
            tags["arguments"] = args
        if source != "act":
            args = bind(source, sig)
            if args is None:
                continue
            if target == "act":
                tags["arguments"] = args
            else:
                tags["source_arguments"] = args
        if rng.random() < 0.3:
            tags["negated"] = True
        fid = f"fl{n:02d}"
        n += 1
        elements.append({"id": fid, "kind": "FlowNode", "name": name, "owner": "act"})
        flows.append({"id": fid, "flavor": rng.choice(["ObjectFlow", "ControlFlow"]), "source": source, "target": target})
        apps.append({"element": fid, "stereotype": "Predicate", "tags": tags})
    for name, sig in sorted(costs.items()):
        target = rng.choice(sorted(actions))
        args = bind(target, sig)
        if args is None:
            continue
        fid = f"fl{n:02d}"
        n += 1
        elements.append({"id": fid, "kind": "FlowNode", "name": name, "owner": "act"})
        flows.append({"id": fid, "flavor": "ObjectFlow", "source": "act", "target": target})
        apps.append(
            {"element": fid, "stereotype": "Function", "tags": {"parameters": sig_params(sig), "arguments": args, "role": "cost"}}
        )
    return {"format_version": "1", "elements": elements, "flows": flows, "generalizations": gens, "applications": apps}


def random_model_text(rng: random.Random) -> str:
    return json.dumps(random_model_document(rng))


# ground tasks ------------------------------------------------------------------


def random_ground_task(
    rng: random.Random,
    max_atoms: int = 12,
    *,
    min_atoms: int = 1,
    max_actions: int = 14,
    p_pre: float = 0.25,
) -> GroundTask:
    """A propositional task with at most ``2 ** max_atoms`` states.

    Lower ``p_pre`` and higher ``max_actions`` give larger reachable spaces.
    """
    n = rng.randint(min_atoms, max_atoms)
    atoms = tuple(f"(q{i})" for i in range(n))

    def subset(p):
        return frozenset(i for i in range(n) if rng.random() < p)

    actions = []
    for k in range(rng.randint(1, max_actions)):
        pre_pos = subset(p_pre)
        pre_neg = subset(0.1 if p_pre >= 0.25 else 0.05) - pre_pos
        add = subset(0.3 if p_pre >= 0.25 else 0.25)
        delete = subset(0.2) - add
        cost = rng.choice([0, 1, 1, 2, 3, 5, Fraction(1, 2), 0.25])
        actions.append(GroundAction(f"op{k % 5}", (f"x{k}",), pre_pos, pre_neg, add, delete, cost))
    goal_pos = subset(0.3)
    goal_neg = subset(0.1 if p_pre >= 0.25 else 0.05) - goal_pos
    return GroundTask(atoms, tuple(actions), subset(0.3), goal_pos, goal_neg)
