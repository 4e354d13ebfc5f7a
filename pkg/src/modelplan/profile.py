"""Tagged values understood on each stereotype, and helpers to read them.

Tags per stereotype:

- ``Action``: ``parameters`` (ordered variable/type pairs).
- ``Predicate``: ``parameters`` (declared signature), ``arguments``
  (action variables bound to the signature positionally, at the target
  action), ``source_arguments`` (binding at the source action when it
  differs), ``negated`` (bool; delete effect or negative precondition).
- ``Function``: ``parameters``, ``arguments``, ``source_arguments``,
  ``role`` (``cost`` by default; ``condition`` is reserved).
"""

from __future__ import annotations

import re

from .model import ModelGraph, Param, Stereotype, StereotypeApplication

NAME_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_-]*")
DOMAIN_NAME_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*")
VARIABLE_RE = re.compile(r"\?[a-zA-Z][a-zA-Z0-9_-]*")

RESERVED = frozenset(
    {"and", "not", "or", "imply", "forall", "exists", "when", "increase", "decrease",
     "assign", "define", "domain", "problem", "either", "object", "number"}
)
TOTAL_COST = "total-cost"

ALLOWED_TAGS = {
    Stereotype.DOMAIN: frozenset(),
    Stereotype.TYPE: frozenset(),
    Stereotype.ACTION: frozenset({"parameters"}),
    Stereotype.PREDICATE: frozenset({"parameters", "arguments", "source_arguments", "negated"}),
    Stereotype.FUNCTION: frozenset({"parameters", "arguments", "source_arguments", "role"}),
}
ROLES = frozenset({"cost", "condition"})


def is_name(text: str) -> bool:
    return bool(NAME_RE.fullmatch(text)) and text.lower() not in RESERVED


def is_param_list(value) -> bool:
    return isinstance(value, tuple) and all(isinstance(p, Param) for p in value)


def parameters(app: StereotypeApplication) -> tuple[Param, ...] | None:
    """Declared parameters; ``()`` when absent, ``None`` when malformed."""
    value = app.tags.get("parameters", ())
    return value if is_param_list(value) else None


def arguments(app: StereotypeApplication, at_source: bool) -> tuple[str, ...] | None:
    """Action variables bound to a flow's predicate/function at one end."""
    value = app.tags.get("arguments", ())
    if at_source and "source_arguments" in app.tags:
        value = app.tags["source_arguments"]
    if isinstance(value, tuple) and all(isinstance(v, str) for v in value):
        return value
    return None


def negated(app: StereotypeApplication) -> bool:
    return app.tags.get("negated", False) is True


def role(app: StereotypeApplication) -> str:
    value = app.tags.get("role", "cost")
    return value if isinstance(value, str) else ""


def is_subtype(model: ModelGraph, specific: str, general: str) -> bool:
    """Reflexive-transitive generalization check, safe on cyclic input."""
    seen = set()
    pending = [specific]
    while pending:
        cur = pending.pop()
        if cur == general:
            return True
        if cur in seen:
            continue
        seen.add(cur)
        pending.extend(model.generals_of(cur))
    return False
