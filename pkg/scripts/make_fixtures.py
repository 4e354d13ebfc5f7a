"""Regenerate the fixture sources and their golden PDDL files.

Goldens are written by ``modelplan generate`` so they always match what the
CLI emits. Run from the repository root: ``python scripts/make_fixtures.py``.
"""

import json
from pathlib import Path

from modelplan.cli import main as cli

ROOT = Path(__file__).resolve().parent.parent / "src" / "modelplan" / "fixtures"

CHANGE_COST = 3


def el(id_, kind, name, owner=None):
    d = {"id": id_, "kind": kind, "name": name}
    if owner:
        d["owner"] = owner
    return d


def params(*pairs):
    return [{"variable": v, "type": t} for v, t in pairs]


def write(path: Path, doc: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def assemble_part(domain_name="production", extra_type=False, dangling=False):
    elements = [
        el("pkg", "Package", domain_name),
        el("cls_part", "Class", "part", "pkg"),
        el("cls_tool", "Class", "tool", "pkg"),
        el("act", "Activity", "Assembly", "pkg"),
        el("n_assemble", "ActionNode", "assemble-part", "act"),
        el("f_assembled", "FlowNode", "assembled", "act"),
        el("f_available", "FlowNode", "available", "act"),
    ]
    apps = [
        {"element": "pkg", "stereotype": "Domain"},
        {"element": "cls_part", "stereotype": "Type"},
        {"element": "cls_tool", "stereotype": "Type"},
        {"element": "n_assemble", "stereotype": "Action",
         "tags": {"parameters": params(("?p", "cls_part"), ("?t", "cls_tool"))}},
        {"element": "f_available", "stereotype": "Predicate",
         "tags": {"parameters": params(("?t", "cls_tool")), "arguments": ["?t"]}},
        {"element": "f_assembled", "stereotype": "Predicate",
         "tags": {"parameters": params(("?p", "cls_part")), "arguments": ["?p"]}},
    ]
    if extra_type:
        elements.append(el("cls_tool_2", "Class", "tool", "pkg"))
        apps.append({"element": "cls_tool_2", "stereotype": "Type"})
    flows = [
        {"id": "f_available", "flavor": "ObjectFlow", "source": "act", "target": "n_assemble"},
        {"id": "f_assembled", "flavor": "ObjectFlow", "source": "n_assemble",
         "target": "n_missing" if dangling else "act"},
    ]
    return {"format_version": "1", "elements": elements, "flows": flows, "applications": apps}


def collar_model():
    R, E = "cls_rivet", "cls_end_effector"
    actions = {
        "n_change": ("ChangeEndEffector", params(("?Old", E), ("?New", E))),
        "n_move": ("MoveToNextRivet", params(("?From", R), ("?To", R))),
        "n_screw_a": ("ScrewCollarTypeA", params(("?r", R), ("?e", E))),
        "n_screw_b": ("ScrewCollarTypeB", params(("?r", R), ("?e", E))),
    }
    rivet1 = params(("?r", R))
    eff1 = params(("?e", E))
    # id: (name, stereotype, source, target, tags); flow ids fix precondition/effect order
    flows = {
        "fl01": ("CollarScrewed", "Predicate", "n_screw_a", "n_move",
                 {"parameters": rivet1, "arguments": ["?From"], "source_arguments": ["?r"]}),
        "fl02": ("CollarScrewed", "Predicate", "n_screw_b", "n_move",
                 {"parameters": rivet1, "arguments": ["?From"], "source_arguments": ["?r"]}),
        "fl03": ("EnergySupply", "Predicate", "act", "n_move", {"parameters": []}),
        "fl04": ("RivetDistanceInformation", "Function", "act", "n_move",
                 {"parameters": params(("?a", R), ("?b", R)), "arguments": ["?From", "?To"], "role": "cost"}),
        "fl05": ("MovedToNextRivet", "Predicate", "n_move", "n_screw_a",
                 {"parameters": rivet1, "arguments": ["?r"], "source_arguments": ["?To"]}),
        "fl06": ("MovedToNextRivet", "Predicate", "n_move", "n_screw_b",
                 {"parameters": rivet1, "arguments": ["?r"], "source_arguments": ["?To"]}),
        "fl07": ("EnergySupply", "Predicate", "act", "n_screw_a", {"parameters": []}),
        "fl08": ("EnergySupply", "Predicate", "act", "n_screw_b", {"parameters": []}),
        "fl09": ("CollarTypeA", "Predicate", "act", "n_screw_a", {"parameters": rivet1, "arguments": ["?r"]}),
        "fl10": ("CollarTypeB", "Predicate", "act", "n_screw_b", {"parameters": rivet1, "arguments": ["?r"]}),
        "fl11": ("Mounted", "Predicate", "act", "n_screw_a", {"parameters": eff1, "arguments": ["?e"]}),
        "fl12": ("Mounted", "Predicate", "act", "n_screw_b", {"parameters": eff1, "arguments": ["?e"]}),
        "fl13": ("HandlesTypeA", "Predicate", "act", "n_screw_a", {"parameters": eff1, "arguments": ["?e"]}),
        "fl14": ("HandlesTypeB", "Predicate", "act", "n_screw_b", {"parameters": eff1, "arguments": ["?e"]}),
        "fl15": ("Mounted", "Predicate", "act", "n_change", {"parameters": eff1, "arguments": ["?Old"]}),
        "fl16": ("Changeable", "Predicate", "act", "n_change",
                 {"parameters": params(("?from", E), ("?to", E)), "arguments": ["?Old", "?New"]}),
        "fl17": ("EnergySupply", "Predicate", "act", "n_change", {"parameters": []}),
        "fl18": ("ToolChangeCost", "Function", "act", "n_change",
                 {"parameters": params(("?from", E), ("?to", E)), "arguments": ["?Old", "?New"], "role": "cost"}),
        "fl19": ("Mounted", "Predicate", "n_change", "act", {"parameters": eff1, "arguments": ["?New"]}),
        "fl20": ("Mounted", "Predicate", "n_change", "act",
                 {"parameters": eff1, "arguments": ["?Old"], "negated": True}),
    }
    elements = [
        el("pkg", "Package", "collar_screwing"),
        el(R, "Class", "Rivet", "pkg"),
        el(E, "Class", "EndEffector", "pkg"),
        el("act", "Activity", "CollarScrewingProcess", "pkg"),
    ]
    elements += [el(i, "ActionNode", name, "act") for i, (name, _) in actions.items()]
    elements += [el(i, "FlowNode", f[0], "act") for i, f in flows.items()]
    apps = [
        {"element": "pkg", "stereotype": "Domain"},
        {"element": R, "stereotype": "Type"},
        {"element": E, "stereotype": "Type"},
    ]
    apps += [{"element": i, "stereotype": "Action", "tags": {"parameters": p}} for i, (_, p) in actions.items()]
    apps += [{"element": i, "stereotype": f[1], "tags": f[4]} for i, f in flows.items()]
    flow_defs = [
        {"id": i, "flavor": "ControlFlow" if f[0] == "EnergySupply" else "ObjectFlow", "source": f[2], "target": f[3]}
        for i, f in flows.items()
    ]
    return {"format_version": "1", "elements": elements, "flows": flow_defs, "applications": apps}


def collar_instance(name: str, types: str):
    """Rivets r1..rN on a line with unit spacing; ``types`` gives each rivet's collar type."""
    rivets = [f"r{i + 1}" for i in range(len(types))]
    init = [{"predicate": "EnergySupply"}, {"predicate": "MovedToNextRivet", "args": ["r1"]}]
    init += [{"predicate": f"CollarType{t}", "args": [r]} for r, t in zip(rivets, types)]
    init += [
        {"predicate": "Mounted", "args": ["effA"]},
        {"predicate": "HandlesTypeA", "args": ["effA"]},
        {"predicate": "HandlesTypeB", "args": ["effB"]},
        {"predicate": "Changeable", "args": ["effA", "effB"]},
        {"predicate": "Changeable", "args": ["effB", "effA"]},
    ]
    values = [
        {"function": "ToolChangeCost", "args": ["effA", "effB"], "value": CHANGE_COST},
        {"function": "ToolChangeCost", "args": ["effB", "effA"], "value": CHANGE_COST},
    ]
    values += [
        {"function": "RivetDistanceInformation", "args": [a, b], "value": abs(i - j)}
        for i, a in enumerate(rivets)
        for j, b in enumerate(rivets)
    ]
    return {
        "format_version": "1",
        "name": name,
        "objects": [{"name": r, "type": "Rivet"} for r in rivets]
        + [{"name": "effA", "type": "EndEffector"}, {"name": "effB", "type": "EndEffector"}],
        "init_predicates": init,
        "init_function_values": values,
        "goal": [{"predicate": "CollarScrewed", "args": [r]} for r in rivets],
        "metric": {"minimize": "total-cost"},
    }


def main() -> None:
    write(ROOT / "assemble-part" / "model.pm1", assemble_part())
    write(
        ROOT / "assemble-part" / "instance.pi1",
        {
            "format_version": "1",
            "name": "assemble-one-part",
            "objects": [{"name": "p1", "type": "part"}, {"name": "t1", "type": "tool"}],
            "init_predicates": [{"predicate": "available", "args": ["t1"]}],
            "goal": [{"predicate": "assembled", "args": ["p1"]}],
        },
    )
    write(ROOT / "duplicate-types" / "model.pm1", assemble_part(extra_type=True))
    write(ROOT / "bad-domain-name" / "model.pm1", assemble_part(domain_name="2fast"))
    write(ROOT / "dangling-flow" / "model.pm1", assemble_part(dangling=True))
    for name, types in (("collar-screwing-2rivets", "AB"), ("collar-screwing-6rivets", "ABABAB")):
        write(ROOT / name / "model.pm1", collar_model())
        write(ROOT / name / "instance.pi1", collar_instance(name, types))
    for d in sorted(p for p in ROOT.iterdir() if (p / "instance.pi1").exists()):
        status = cli(["generate", str(d / "model.pm1"), "--instance", str(d / "instance.pi1"), "--out", str(d / "golden")])
        if status != 0:
            raise SystemExit(f"{d.name}: generate exited with {status}")


if __name__ == "__main__":
    main()
