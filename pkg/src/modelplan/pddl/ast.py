"""Abstract syntax for the supported PDDL fragment.

Names keep their original case; anything that resolves a reference
compares them case-insensitively via :func:`key`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

OBJECT = "object"
TOTAL_COST = "total-cost"

Number = Union[int, float]


def key(name: str) -> str:
    return name.lower()


@dataclass(frozen=True)
class TypedEntry:
    name: str
    type: str = OBJECT


TypedList = tuple  # tuple[TypedEntry, ...]


@dataclass(frozen=True)
class PredicateDecl:
    name: str
    params: TypedList = ()

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class FunctionDecl:
    name: str
    params: TypedList = ()

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class Atom:
    predicate: str
    terms: tuple[str, ...] = ()


@dataclass(frozen=True)
class Not:
    atom: Atom


@dataclass(frozen=True)
class And:
    parts: tuple = ()


@dataclass(frozen=True)
class FunctionTerm:
    name: str
    terms: tuple[str, ...] = ()


@dataclass(frozen=True)
class Increase:
    target: FunctionTerm
    value: FunctionTerm | Number


# Conditions are Atom | Not | And; effects are Atom (add) | Not (delete) | Increase | And.
Condition = Union[Atom, Not, And]
Effect = Union[Atom, Not, Increase, And]


@dataclass(frozen=True)
class ActionDef:
    name: str
    params: TypedList = ()
    precondition: Condition | None = None
    effect: Effect | None = None


@dataclass(frozen=True)
class PddlDomain:
    name: str
    requirements: frozenset = frozenset()
    types: TypedList = ()
    predicates: tuple[PredicateDecl, ...] = ()
    functions: tuple[FunctionDecl, ...] = ()
    actions: tuple[ActionDef, ...] = ()

    def predicate(self, name: str) -> PredicateDecl | None:
        return next((p for p in self.predicates if key(p.name) == key(name)), None)

    def function(self, name: str) -> FunctionDecl | None:
        return next((f for f in self.functions if key(f.name) == key(name)), None)

    def action(self, name: str) -> ActionDef | None:
        return next((a for a in self.actions if key(a.name) == key(name)), None)

    def type_parents(self) -> dict[str, str]:
        """Lower-cased type name to lower-cased parent type."""
        return {key(t.name): key(t.type) for t in self.types}


@dataclass(frozen=True)
class FunctionAssign:
    term: FunctionTerm
    value: Number


@dataclass(frozen=True)
class PddlProblem:
    name: str
    domain_name: str
    objects: TypedList = ()
    init: tuple = ()  # Atom | FunctionAssign
    goal: Condition = field(default_factory=And)
    metric: FunctionTerm | None = None


def literals(cond) -> list:
    """Flatten a condition or effect into its non-``And`` leaves."""
    if cond is None:
        return []
    if isinstance(cond, And):
        out = []
        for part in cond.parts:
            out.extend(literals(part))
        return out
    return [cond]


def conjunction(parts: list):
    """Canonical wrapper: nothing, the single part, or an ``And``."""
    if not parts:
        return None
    if len(parts) == 1:
        return parts[0]
    return And(tuple(parts))
