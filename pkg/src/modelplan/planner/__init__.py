"""Grounding, optimal search and plan validation."""

from .grounding import GroundingError, ground
from .plans import PlanFormatError, PlanReport, format_plan, parse_plan, resolve_plan, validate_plan
from .search import DEFAULT_MAX_EXPANSIONS, Plan, SearchLimitExceeded, h_max, solve
from .task import GroundAction, GroundTask, format_cost

__all__ = [
    "GroundingError", "ground", "PlanFormatError", "PlanReport", "format_plan", "parse_plan",
    "resolve_plan", "validate_plan", "DEFAULT_MAX_EXPANSIONS", "Plan", "SearchLimitExceeded",
    "h_max", "solve", "GroundAction", "GroundTask", "format_cost",
]
