"""Plan files and step-by-step plan validation.

A plan file holds one ``(action arg ...)`` per line and ends with a
``; cost = N`` comment. Lines starting with ``;`` are comments.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .search import Plan
from .task import Cost, GroundAction, GroundTask, exact, format_cost, to_mask


@dataclass(frozen=True)
class PlanReport:
    accepted: bool
    total_cost: Cost
    failed_step: int | None = None  # 1-based
    unmet: tuple[str, ...] = ()
    reason: str = ""

    def render(self) -> str:
        if self.accepted:
            return f"plan accepted, cost = {format_cost(self.total_cost)}"
        where = f"step {self.failed_step}" if self.failed_step is not None else "end of plan"
        detail = f": {' '.join(self.unmet)}" if self.unmet else ""
        return f"plan rejected at {where} ({self.reason}){detail}"


def validate_plan(task: GroundTask, plan: Plan | Sequence[GroundAction]) -> PlanReport:
    """Replay ``plan`` from the initial state, checking every step."""
    steps = plan.steps if isinstance(plan, Plan) else tuple(plan)
    known = set(task.actions)
    state = task.init_mask
    total: Cost = 0
    for n, a in enumerate(steps, start=1):
        if a not in known:
            return PlanReport(False, total, n, (a.label,), "unknown action")
        missing = [task.atoms[i] for i in sorted(a.pre_pos) if not state >> i & 1]
        forbidden = [f"(not {task.atoms[i]})" for i in sorted(a.pre_neg) if state >> i & 1]
        if missing or forbidden:
            return PlanReport(False, total, n, tuple(missing + forbidden), f"{a.label} is not applicable")
        state = (state & ~to_mask(a.delete)) | to_mask(a.add)
        total += exact(a.cost)
    if not task.is_goal(state):
        unmet = [task.atoms[i] for i in sorted(task.goal_pos) if not state >> i & 1]
        unmet += [f"(not {task.atoms[i]})" for i in sorted(task.goal_neg) if state >> i & 1]
        return PlanReport(False, total, None, tuple(unmet), "goal not reached")
    return PlanReport(True, total)


def format_plan(plan: Plan) -> str:
    lines = [a.label for a in plan.steps]
    lines.append(f"; cost = {format_cost(plan.total_cost)}")
    return "\n".join(lines) + "\n"


class PlanFormatError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


_STEP = re.compile(r"^\(\s*([^()\s]+)((?:\s+[^()\s]+)*)\s*\)$")
_NUMBERED = re.compile(r"^\d+(?:\.\d+)?\s*:\s*")


def parse_plan(text: str) -> list[tuple[str, tuple[str, ...]]]:
    """Read plan steps as (name, args); an optional ``0:`` step prefix is tolerated."""
    steps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(";", 1)[0].strip()
        if not line:
            continue
        line = _NUMBERED.sub("", line)
        line = re.sub(r"\s*\[[^\]]*\]$", "", line)
        m = _STEP.match(line)
        if m is None:
            raise PlanFormatError(lineno, f"expected '(action arg ...)', got {raw.strip()!r}")
        steps.append((m.group(1), tuple(m.group(2).split())))
    return steps


def resolve_plan(task: GroundTask, steps) -> list[GroundAction]:
    """Map parsed steps to the task's ground actions (case-insensitive).

    Unknown steps become placeholder actions that :func:`validate_plan`
    rejects as unknown.
    """
    index = {a.sort_key(): a for a in task.actions}
    out = []
    for name, args in steps:
        k = (name.lower(), tuple(x.lower() for x in args))
        out.append(index.get(k) or GroundAction(name, tuple(args), cost=0))
    return out
