"""Read and write models in the ``.pm1`` interchange format.

The format is UTF-8 JSON; the schema is committed at
``docs/interchange-schema.json``. Loading is strict: unknown keys, wrong
value shapes and dangling references are each reported as a diagnostic
instead of being ignored.
"""

from __future__ import annotations

import json
from typing import Any

from .diagnostics import Diagnostic, DiagnosticError, error
from .model import (
    Element,
    ElementKind,
    Flow,
    FlowFlavor,
    Generalization,
    ModelGraph,
    Param,
    Stereotype,
    StereotypeApplication,
    TypeRef,
    model_issues,
)

FORMAT_VERSION = "1"

_TOP_KEYS = {"format_version", "elements", "flows", "generalizations", "applications"}
_SECTIONS = {
    "elements": ({"id", "kind"}, {"name", "owner"}),
    "flows": ({"id", "flavor", "source", "target"}, set()),
    "generalizations": ({"specific", "general"}, set()),
    "applications": ({"element", "stereotype"}, {"tags"}),
}


class IngestError(DiagnosticError):
    pass


def parse_json(text: str, rule_prefix: str) -> tuple[Any, list[Diagnostic]]:
    """Decode JSON, turning decoder failures into a positioned diagnostic."""
    try:
        return json.loads(text), []
    except json.JSONDecodeError as exc:
        return None, [error(f"{rule_prefix}.syntax", exc.msg, line=exc.lineno, column=exc.colno)]
    except (TypeError, ValueError, RecursionError) as exc:
        return None, [error(f"{rule_prefix}.syntax", str(exc) or type(exc).__name__)]


def check_keys(obj: Any, required: set[str], optional: set[str], where: str, prefix: str) -> list[Diagnostic]:
    if not isinstance(obj, dict):
        return [error(f"{prefix}.bad-value", "expected an object", path=where)]
    out = []
    for key in sorted(required - obj.keys()):
        out.append(error(f"{prefix}.missing-key", f"missing key {key!r}", path=where))
    for key in sorted(obj.keys() - required - optional):
        out.append(error(f"{prefix}.unknown-key", f"unknown key {key!r}", path=where))
    return out


def _decode_tag(value: Any, where: str, diags: list[Diagnostic]):
    if isinstance(value, bool) or isinstance(value, str):
        return value
    if isinstance(value, (int, float)):
        if value != value or value in (float("inf"), float("-inf")):
            diags.append(error("ingest.bad-value", "tag numbers must be finite", path=where))
            return None
        return value
    if isinstance(value, dict):
        if set(value) != {"type"} or not isinstance(value["type"], str):
            diags.append(error("ingest.bad-value", "a type reference is {\"type\": <element id>}", path=where))
            return None
        return TypeRef(value["type"])
    if isinstance(value, list):
        if all(isinstance(v, str) for v in value):
            return tuple(value)
        params = []
        for i, item in enumerate(value):
            if not (
                isinstance(item, dict)
                and set(item) == {"variable", "type"}
                and isinstance(item["variable"], str)
                and isinstance(item["type"], str)
            ):
                diags.append(
                    error("ingest.bad-value", "parameter entries are {\"variable\", \"type\"}", path=f"{where}[{i}]")
                )
                return None
            params.append(Param(item["variable"], TypeRef(item["type"])))
        return tuple(params)
    diags.append(error("ingest.bad-value", "unsupported tag value", path=where))
    return None


def _enum(enum_cls, value: Any, where: str, diags: list[Diagnostic]):
    try:
        return enum_cls(value)
    except (ValueError, TypeError):
        allowed = ", ".join(m.value for m in enum_cls)
        diags.append(error("ingest.bad-value", f"{value!r} is not one of: {allowed}", path=where))
        return None


def _string(obj: dict, key: str, where: str, diags: list[Diagnostic], optional: bool = False):
    value = obj.get(key)
    if value is None and optional:
        return None
    if not isinstance(value, str):
        diags.append(error("ingest.bad-value", f"{key!r} must be a string", path=f"{where}.{key}"))
        return None
    return value


def load_model(text: str) -> ModelGraph:
    """Parse a ``.pm1`` document. Raises :class:`IngestError` with diagnostics on any problem."""
    data, diags = parse_json(text, "ingest")
    if diags:
        raise IngestError(diags)
    diags = check_keys(data, {"format_version"}, _TOP_KEYS - {"format_version"}, "$", "ingest")
    if diags:
        raise IngestError(diags)
    if data["format_version"] != FORMAT_VERSION:
        raise IngestError(
            [error("ingest.version", f"unsupported format_version {data['format_version']!r}", path="$.format_version")]
        )

    elements: list[Element] = []
    flows: list[Flow] = []
    gens: list[Generalization] = []
    apps: list[StereotypeApplication] = []
    for section, (required, optional) in _SECTIONS.items():
        items = data.get(section, [])
        if not isinstance(items, list):
            diags.append(error("ingest.bad-value", "expected a list", path=f"$.{section}"))
            continue
        for i, item in enumerate(items):
            where = f"$.{section}[{i}]"
            found = check_keys(item, required, optional, where, "ingest")
            if found:
                diags.extend(found)
                continue
            before = len(diags)
            if section == "elements":
                eid = _string(item, "id", where, diags)
                kind = _enum(ElementKind, item["kind"], f"{where}.kind", diags)
                name = _string(item, "name", where, diags, optional=True)
                owner = _string(item, "owner", where, diags, optional=True)
                if len(diags) == before:
                    elements.append(Element(eid, kind, name or "", owner))
            elif section == "flows":
                fid = _string(item, "id", where, diags)
                flavor = _enum(FlowFlavor, item["flavor"], f"{where}.flavor", diags)
                src = _string(item, "source", where, diags)
                tgt = _string(item, "target", where, diags)
                if len(diags) == before:
                    flows.append(Flow(fid, flavor, src, tgt))
            elif section == "generalizations":
                spec = _string(item, "specific", where, diags)
                gen = _string(item, "general", where, diags)
                if len(diags) == before:
                    gens.append(Generalization(spec, gen))
            else:
                eid = _string(item, "element", where, diags)
                st = _enum(Stereotype, item["stereotype"], f"{where}.stereotype", diags)
                raw_tags = item.get("tags", {})
                tags = {}
                if not isinstance(raw_tags, dict):
                    diags.append(error("ingest.bad-value", "tags must be an object", path=f"{where}.tags"))
                else:
                    for key in sorted(raw_tags):
                        value = _decode_tag(raw_tags[key], f"{where}.tags.{key}", diags)
                        tags[key] = value
                if len(diags) == before:
                    apps.append(StereotypeApplication(eid, st, tags))
    if diags:
        raise IngestError(diags)

    issues = model_issues(elements, flows, gens, apps)
    if issues:
        raise IngestError([error(f"ingest.{i.code}", i.message, element=i.element, path=i.element) for i in issues])
    return ModelGraph(tuple(elements), tuple(flows), tuple(gens), tuple(apps))


def _encode_tag(value):
    if isinstance(value, TypeRef):
        return {"type": value.id}
    if isinstance(value, tuple):
        return [{"variable": p.variable, "type": p.type.id} if isinstance(p, Param) else p for p in value]
    return value


def save_model(model: ModelGraph) -> str:
    """Canonical ``.pm1`` text. Sections that are empty are omitted."""
    doc: dict[str, Any] = {"format_version": FORMAT_VERSION}
    if model.elements:
        doc["elements"] = [
            {"id": e.id, "kind": e.kind.value, "name": e.name, **({"owner": e.owner} if e.owner is not None else {})}
            for e in model.elements
        ]
    if model.flows:
        doc["flows"] = [
            {"id": f.id, "flavor": f.flavor.value, "source": f.source, "target": f.target} for f in model.flows
        ]
    if model.generalizations:
        doc["generalizations"] = [{"specific": g.specific, "general": g.general} for g in model.generalizations]
    if model.applications:
        doc["applications"] = [
            {
                "element": a.element,
                "stereotype": a.stereotype.value,
                **({"tags": {k: _encode_tag(v) for k, v in sorted(a.tags.items())}} if a.tags else {}),
            }
            for a in model.applications
        ]
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
