"""Cost-optimal forward search.

Among plans of equal cost the search returns the one with fewest steps, and
among those the lexicographically smallest sequence of (name, args). The
ordering key ``(cost, length, action indices)`` only grows when a plan is
extended and is preserved under common extension, so Dijkstra's argument
carries over to it unchanged.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .task import Cost, GroundAction, GroundTask

DEFAULT_MAX_EXPANSIONS = 1_000_000


class SearchLimitExceeded(Exception):
    def __init__(self, expansions: int):
        self.expansions = expansions
        super().__init__(f"expansion limit reached after {expansions} expansions")


@dataclass(frozen=True)
class Plan:
    steps: tuple[GroundAction, ...]
    total_cost: Cost

    def __len__(self) -> int:
        return len(self.steps)


def h_max(task: GroundTask, state: int) -> float:
    """Admissible max-cost relaxation; ``inf`` when the goal is relaxed-unreachable."""
    cost = {i: 0 for i in range(len(task.atoms)) if state >> i & 1}
    changed = True
    while changed:
        changed = False
        for a in task.actions:
            if not all(p in cost for p in a.pre_pos):
                continue
            base = max((cost[p] for p in a.pre_pos), default=0) + a.cost
            for q in a.add:
                if q not in cost or base < cost[q]:
                    cost[q] = base
                    changed = True
    if not all(g in cost for g in task.goal_pos):
        return math.inf
    return max((cost[g] for g in task.goal_pos), default=0)


def solve(
    task: GroundTask,
    max_expansions: int = DEFAULT_MAX_EXPANSIONS,
    heuristic: str = "blind",
) -> Plan | None:
    """Return a minimum-cost plan, or ``None`` if the goal is unreachable.

    Raises :class:`SearchLimitExceeded` once ``max_expansions`` states have
    been expanded without reaching the goal. ``heuristic="hmax"`` switches to
    A* with :func:`h_max`; cost optimality is kept, the tie-breaking
    guarantee is only made for the blind search.
    """
    if max_expansions <= 0:
        raise ValueError("max_expansions must be positive")
    if heuristic not in ("blind", "hmax"):
        raise ValueError(f"unknown heuristic {heuristic!r}")
    h = (lambda s: h_max(task, s)) if heuristic == "hmax" else (lambda s: 0)

    start = task.init_mask
    best: dict[int, tuple] = {start: (0, 0, ())}
    h0 = h(start)
    if h0 == math.inf:
        return None
    heap = [(h0, 0, 0, (), start)]
    closed: set[int] = set()
    expansions = 0
    while heap:
        _, g, n, path, state = heapq.heappop(heap)
        if state in closed or best.get(state) != (g, n, path):
            continue
        if task.is_goal(state):
            return Plan(tuple(task.actions[i] for i in path), g)
        if expansions >= max_expansions:
            raise SearchLimitExceeded(expansions)
        expansions += 1
        closed.add(state)
        for i, nxt, cost in task.successors(state):
            if nxt in closed:
                continue
            cand = (g + cost, n + 1, path + (i,))
            old = best.get(nxt)
            if old is not None and old <= cand:
                continue
            hn = h(nxt)
            if hn == math.inf:
                continue
            best[nxt] = cand
            heapq.heappush(heap, (cand[0] + hn, *cand, nxt))
    return None
