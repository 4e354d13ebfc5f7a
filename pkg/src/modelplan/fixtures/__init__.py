"""Reference models shipped with the package.

Each fixture lives in its own directory holding ``model.pm1``, an optional
``instance.pi1``, the golden PDDL files under ``golden/`` and an
``expect.txt`` of ``key: value`` lines describing the expected outcome.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

ROOT = Path(__file__).resolve().parent


@dataclass(frozen=True)
class Fixture:
    name: str
    model: Path
    instance: Path | None = None
    golden_domain: Path | None = None
    golden_problem: Path | None = None
    expect: dict[str, str] = field(default_factory=dict)

    @property
    def positive(self) -> bool:
        return self.expect.get("kind") == "positive"

    def expected_list(self, key: str) -> list[str]:
        return [x.strip() for x in self.expect.get(key, "").split(",") if x.strip()]


def _expectations(path: Path) -> dict[str, str]:
    out = {}
    if path.exists():
        for line in path.read_text(encoding="utf-8").splitlines():
            if ":" in line and not line.lstrip().startswith("#"):
                k, v = line.split(":", 1)
                out[k.strip()] = v.strip()
    return out


def _optional(path: Path) -> Path | None:
    return path if path.exists() else None


def fixture_catalog() -> list[Fixture]:
    """All committed fixtures, sorted by name."""
    fixtures = []
    for d in sorted(p for p in ROOT.iterdir() if (p / "model.pm1").is_file()):
        fixtures.append(
            Fixture(
                name=d.name,
                model=d / "model.pm1",
                instance=_optional(d / "instance.pi1"),
                golden_domain=_optional(d / "golden" / "domain.pddl"),
                golden_problem=_optional(d / "golden" / "problem.pddl"),
                expect=_expectations(d / "expect.txt"),
            )
        )
    return fixtures


def get_fixture(name: str) -> Fixture:
    for f in fixture_catalog():
        if f.name == name:
            return f
    raise KeyError(name)
