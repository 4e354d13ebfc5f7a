from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

Cost = Union[int, Fraction]


def exact(value) -> Cost:
    """Exact representation of a cost so that sums compare without rounding."""
    if isinstance(value, bool):
        raise TypeError("cost must be a number")
    if isinstance(value, (int, Fraction)):
        return value
    if not math.isfinite(value):
        raise ValueError("cost must be finite")
    if float(value).is_integer():
        return int(value)
    return Fraction(repr(float(value)))


def format_cost(value: Cost) -> str:
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return repr(float(value))
    return str(value)


@dataclass(frozen=True)
class GroundAction:
    name: str
    args: tuple[str, ...]
    pre_pos: frozenset[int] = frozenset()
    pre_neg: frozenset[int] = frozenset()
    add: frozenset[int] = frozenset()
    delete: frozenset[int] = frozenset()
    cost: Cost = 0

    @property
    def label(self) -> str:
        return "(" + " ".join((self.name, *self.args)) + ")"

    def sort_key(self) -> tuple:
        return (self.name.lower(), tuple(a.lower() for a in self.args))


@dataclass(frozen=True)
class GroundTask:
    """Propositional task over an indexed atom universe.

    ``atoms[i]`` is the printable form of atom ``i``. States are bit masks
    over these indices. Actions are kept sorted by (name, args), so their
    index order is also the lexicographic order used for tie-breaking.
    """

    atoms: tuple[str, ...]
    actions: tuple[GroundAction, ...]
    init: frozenset[int]
    goal_pos: frozenset[int] = frozenset()
    goal_neg: frozenset[int] = frozenset()
    _masks: tuple = field(init=False, repr=False, compare=False)
    _goal: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "actions", tuple(sorted(self.actions, key=GroundAction.sort_key)))
        n = len(self.atoms)
        for a in self.actions:
            for group in (a.pre_pos, a.pre_neg, a.add, a.delete):
                if any(not 0 <= i < n for i in group):
                    raise ValueError(f"{a.label} references an atom outside the universe")
            if a.add & a.delete:
                raise ValueError(f"{a.label} both adds and deletes an atom")
            c = exact(a.cost)
            if c < 0:
                raise ValueError(f"{a.label} has negative cost")
        for group in (self.init, self.goal_pos, self.goal_neg):
            if any(not 0 <= i < n for i in group):
                raise ValueError("state or goal references an atom outside the universe")
        masks = tuple(
            (to_mask(a.pre_pos), to_mask(a.pre_neg), to_mask(a.add), to_mask(a.delete), exact(a.cost))
            for a in self.actions
        )
        object.__setattr__(self, "_masks", masks)
        object.__setattr__(self, "_goal", (to_mask(self.goal_pos), to_mask(self.goal_neg)))

    @property
    def init_mask(self) -> int:
        return to_mask(self.init)

    def is_goal(self, state: int) -> bool:
        pos, neg = self._goal
        return state & pos == pos and not state & neg

    def successors(self, state: int):
        """Yield ``(action index, next state, cost)`` for every applicable action."""
        for i, (pos, neg, add, dele, cost) in enumerate(self._masks):
            if state & pos == pos and not state & neg:
                yield i, (state & ~dele) | add, cost

    def atoms_of(self, state: int) -> list[str]:
        return [self.atoms[i] for i in range(len(self.atoms)) if state >> i & 1]


def to_mask(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m
