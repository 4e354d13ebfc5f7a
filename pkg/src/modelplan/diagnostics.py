from __future__ import annotations

import enum
import json
from dataclasses import asdict, dataclass
from typing import Iterable


class Severity(str, enum.Enum):
    ERROR = "Error"
    WARNING = "Warning"


@dataclass(frozen=True)
class Diagnostic:
    """A single finding from ingestion, validation, parsing or compilation.

    ``element`` is the id of the offending model element (empty for text
    inputs); ``path`` is the human-readable location used when rendering.
    """

    rule: str
    severity: Severity
    element: str
    message: str
    path: str = ""
    line: int | None = None
    column: int | None = None

    def location(self) -> str:
        if self.path:
            return self.path
        if self.line is not None:
            return f"{self.line}:{self.column or 0}"
        return self.element or "-"

    def render(self) -> str:
        return f"{self.severity.value.lower()} {self.rule} {self.location()}: {self.message}"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["severity"] = self.severity.value
        return d


def error(rule: str, message: str, element: str = "", **kw) -> Diagnostic:
    return Diagnostic(rule, Severity.ERROR, element, message, **kw)


def has_errors(diagnostics: Iterable[Diagnostic]) -> bool:
    return any(d.severity is Severity.ERROR for d in diagnostics)


def render_all(diagnostics: Iterable[Diagnostic]) -> str:
    return "".join(d.render() + "\n" for d in diagnostics)


def dump_json(diagnostics: Iterable[Diagnostic]) -> str:
    """Machine-readable dump, one JSON array."""
    return json.dumps([d.to_dict() for d in diagnostics], indent=2, sort_keys=True)


class DiagnosticError(Exception):
    """Raised by operations whose failure is described by diagnostics."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__(render_all(self.diagnostics).rstrip() or "failed")
