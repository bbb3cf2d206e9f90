"""JSON serialisation for models, instances, hardware graphs and embeddings.

Floats are written with Python's shortest round-trip representation, so
``load(dump(x))`` reproduces every coefficient exactly.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .encoding import EncodedProblem, VariableHandle
from .exceptions import DomainError
from .hardware import HardwareGraph
from .ising import IsingModel
from .problems import ColoringInstance, Event, Instance, SchedulingInstance, UnstructuredInstance

__all__ = [
    "model_to_json",
    "model_from_json",
    "problem_to_json",
    "problem_from_json",
    "instance_to_json",
    "instance_from_json",
    "graph_from_json",
    "load_source_graph",
    "read_json",
    "write_json",
]


def model_to_json(model: IsingModel, variables: list[VariableHandle] | None = None) -> dict:
    return {
        "n": model.n_qubits,
        "h": [[i, float(v)] for i, v in sorted(model.h.items())],
        "j": [[i, j, float(v)] for (i, j), v in sorted(model.J.items())],
        "offset": float(model.offset),
        "variables": [v.to_json() for v in variables or []],
    }


def model_from_json(d: dict) -> IsingModel:
    try:
        return IsingModel(
            int(d["n"]),
            {int(i): float(v) for i, v in d.get("h", [])},
            {(int(i), int(j)): float(v) for i, j, v in d.get("j", [])},
            float(d.get("offset", 0.0)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed model JSON: {exc}") from exc


def problem_to_json(p: EncodedProblem) -> dict:
    return model_to_json(p.model, p.variables)


def problem_from_json(d: dict) -> EncodedProblem:
    variables = [VariableHandle.from_json(v) for v in d.get("variables", [])]
    return EncodedProblem.from_parts(model_from_json(d), variables)


def instance_to_json(inst: Instance) -> dict:
    if isinstance(inst, ColoringInstance):
        return {"type": "coloring", "n": inst.n_vertices, "colors": inst.n_colors, "edges": [list(e) for e in inst.edges]}
    if isinstance(inst, SchedulingInstance):
        return {
            "type": "scheduling",
            "events": [{"tmin": e.t_min, "tmax": e.t_max, "dur": e.duration} for e in inst.events],
            "conflicts": [list(c) for c in inst.conflicts],
        }
    if isinstance(inst, UnstructuredInstance):
        return {
            "type": "unstructured",
            "sizes": list(inst.sizes),
            "matrices": [{"i": i, "j": j, "values": A.tolist()} for (i, j), A in inst.matrices.items()],
        }
    raise TypeError(f"unknown instance type {type(inst).__name__}")


def instance_from_json(d: dict) -> Instance:
    kind = d.get("type")
    try:
        if kind == "coloring":
            return ColoringInstance(int(d["n"]), tuple(tuple(e) for e in d["edges"]), int(d["colors"]))
        if kind == "scheduling":
            events = tuple(Event(int(e["tmin"]), int(e["tmax"]), int(e["dur"])) for e in d["events"])
            return SchedulingInstance(events, tuple(tuple(c) for c in d["conflicts"]))
        if kind == "unstructured":
            mats = {(int(m["i"]), int(m["j"])): np.array(m["values"], dtype=np.float64) for m in d["matrices"]}
            return UnstructuredInstance(tuple(d["sizes"]), mats)
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed {kind} instance JSON: {exc}") from exc
    raise DomainError(f"unknown instance type {kind!r}")


def graph_from_json(d: dict) -> HardwareGraph:
    try:
        return HardwareGraph.from_json(d)
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed graph JSON: {exc}") from exc


def load_source_graph(d: dict) -> HardwareGraph:
    """Interaction graph of a model JSON, or a graph JSON as is."""
    if "edges" in d:
        return graph_from_json(d)
    model = model_from_json(d)
    return HardwareGraph.from_edges(model.n_qubits, model.couplers)


def read_json(path: str | Path) -> Any:
    with open(path) as f:
        return json.load(f)


def write_json(obj: Any, path: str | Path | None) -> str:
    """Serialise ``obj``; also write it to ``path`` unless that is ``None`` or ``-``."""
    text = json.dumps(obj, indent=None, separators=(",", ":"), sort_keys=False) + "\n"
    if path not in (None, "-"):
        Path(path).write_text(text)
    return text
