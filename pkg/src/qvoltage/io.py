"""JSON encoding shared by every schema: complex numbers are ``[re, im]`` pairs."""

from __future__ import annotations

import json
from importlib import resources
from typing import Any

import numpy as np

from .errors import StructureError

_ROUND = 15


def _clean(x: float) -> float:
    x = float(np.round(float(x), _ROUND))
    return 0.0 if x == 0.0 else x  # drop negative zero so output is byte-stable


def encode_complex(arr) -> Any:
    a = np.asarray(arr, dtype=complex)
    if a.ndim == 0:
        z = complex(a)
        return [_clean(z.real), _clean(z.imag)]
    return [encode_complex(x) for x in a]


def decode_complex(data, field: str = "value") -> np.ndarray:
    try:
        a = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise StructureError(f"field '{field}': expected nested [re, im] pairs") from exc
    if a.ndim == 0 or a.shape[-1] != 2:
        raise StructureError(f"field '{field}': innermost entries must be [re, im] pairs, got shape {a.shape}")
    return a[..., 0] + 1j * a[..., 1]


def decode_matrix(data, field: str, shape=None) -> np.ndarray:
    """Accepts either nested ``[re, im]`` pairs or plain real numbers."""
    try:
        a = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise StructureError(f"field '{field}': not a numeric array") from exc
    if shape is not None and a.shape == tuple(shape):
        m = a.astype(complex)
    elif shape is not None and a.shape == tuple(shape) + (2,):
        m = a[..., 0] + 1j * a[..., 1]
    elif shape is None and a.ndim >= 1 and a.shape[-1] == 2 and a.ndim == 3:
        m = a[..., 0] + 1j * a[..., 1]
    elif shape is None:
        m = a.astype(complex)
    else:
        raise StructureError(f"field '{field}': expected shape {tuple(shape)}, got {a.shape}")
    return m


def require(data: dict, key: str, context: str):
    if not isinstance(data, dict):
        raise StructureError(f"{context}: expected an object, got {type(data).__name__}")
    if key not in data:
        raise StructureError(f"{context}: missing field '{key}'")
    return data[key]


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def load_json(path) -> Any:
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise StructureError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def fixture_path(name: str):
    return resources.files("qvoltage") / "fixtures" / name


def load_fixture(name: str) -> Any:
    return json.loads(fixture_path(name).read_text())


# -- schemas -----------------------------------------------------------------


def algebra_from_json(spec: dict):
    from .fdca import StarAlgebra, _matrix_block_algebra, classical_algebra

    kind = require(spec, "kind", "quantum set spec")
    if kind == "classical":
        size = int(require(spec, "size", "classical quantum set"))
        return classical_algebra(size, spec.get("labels"))
    if kind == "tracial_blocks":
        blocks = require(spec, "blocks", "tracial_blocks quantum set")
        # optional "weights" scale each block's trace; default n_i gives the quantum set functional
        return _matrix_block_algebra(blocks, spec.get("weights"))
    if kind == "structure_constants":
        d = int(require(spec, "dim", "structure_constants quantum set"))
        return StarAlgebra(
            decode_matrix(require(spec, "mult", "structure_constants"), "mult", (d, d, d)),
            decode_matrix(require(spec, "star", "structure_constants"), "star", (d, d)),
            decode_matrix(require(spec, "unit", "structure_constants"), "unit", (d,)),
            decode_matrix(require(spec, "psi", "structure_constants"), "psi", (d,)),
            spec.get("labels"),
        )
    raise StructureError(f"quantum set spec: unknown kind '{kind}'")


def qset_from_json(spec: dict, tol: float):
    from .fdca import QuantumSet

    return QuantumSet(algebra_from_json(spec), tol)


def algebra_to_json(alg) -> dict:
    return {
        "kind": "structure_constants",
        "dim": alg.dim,
        "labels": list(alg.labels),
        "mult": encode_complex(alg.mult),
        "star": encode_complex(alg.star),
        "unit": encode_complex(alg.unit),
        "psi": encode_complex(alg.psi),
    }


def group_from_json(spec):
    from .abelian import FiniteAbelianGroup

    return FiniteAbelianGroup.from_json(spec)


def action_from_json(spec: dict | None, base, group, tol: float):
    from .voltage import DualAction, dual_action_from_permutations

    if spec is None:
        return DualAction.trivial(base, group)
    kind = require(spec, "kind", "action spec")
    d = base.dim
    if kind == "trivial":
        return DualAction.trivial(base, group)
    if kind == "matrices":
        entries = require(spec, "entries", "matrices action")
        maps = {}
        for i, e in enumerate(entries):
            chi = group.reduce(require(e, "character", f"action entries[{i}]"))
            maps[chi] = decode_matrix(require(e, "matrix", f"action entries[{i}]"), f"entries[{i}].matrix", (d, d))
        if set(maps) == set(group.elements):
            return DualAction(base, group, maps)
        gens = group.generators()
        if set(maps) == set(gens):
            return DualAction.from_generators(base, group, [maps[g] for g in gens])
        raise StructureError("matrices action must list every character or exactly the generators")
    if kind == "permutations":
        if "generators" in spec:
            return dual_action_from_permutations(base, group, spec["generators"], per="generator")
        entries = require(spec, "entries", "permutations action")
        return dual_action_from_permutations(
            base, group, {tuple(require(e, "character", "entry")): require(e, "permutation", "entry") for e in entries}
        )
    raise StructureError(f"action spec: unknown kind '{kind}'")


def vqg_from_json(spec: dict, tol: float):
    from .voltage import VoltageQuantumGraph

    base = qset_from_json(require(spec, "base", "voltage quantum graph"), tol)
    group = group_from_json(require(spec, "group", "voltage quantum graph"))
    action = action_from_json(spec.get("action"), base, group, tol)
    comps = {}
    for i, c in enumerate(require(spec, "components", "voltage quantum graph")):
        label = group.reduce(require(c, "label", f"components[{i}]"))
        if label in comps:
            raise StructureError(f"components[{i}]: label {list(label)} repeated")
        comps[label] = decode_matrix(require(c, "matrix", f"components[{i}]"), f"components[{i}].matrix", (base.dim, base.dim))
    return VoltageQuantumGraph(base, group, action, comps)


def vqg_to_json(vqg) -> dict:
    return {
        "base": algebra_to_json(vqg.base.algebra),
        "group": vqg.group.to_json(),
        "action": vqg.action.to_json(),
        "components": [{"label": list(g), "matrix": encode_complex(vqg.components[g])} for g in vqg.group.elements],
    }


def graph_action_from_json(spec: dict, tol: float):
    from .reconstruct import GraphAction

    qs = qset_from_json(require(spec, "qset", "reconstruct instance"), tol)
    group = group_from_json(require(spec, "group", "reconstruct instance"))
    d = qs.dim
    A = decode_matrix(require(spec, "adjacency", "reconstruct instance"), "adjacency", (d, d))
    alpha_gens = [decode_matrix(M, f"alpha[{i}]", (d, d)) for i, M in enumerate(require(spec, "alpha", "reconstruct instance"))]
    if "unit_generators" in spec:
        unit_gens = [decode_matrix(u, f"unit_generators[{i}]", (d,)) for i, u in enumerate(spec["unit_generators"])]
        return GraphAction.from_generators(qs, group, alpha_gens, unit_gens, A)
    units = {}
    for i, e in enumerate(require(spec, "units", "reconstruct instance")):
        units[group.reduce(require(e, "character", f"units[{i}]"))] = decode_matrix(
            require(e, "vector", f"units[{i}]"), f"units[{i}].vector", (d,)
        )
    ga = GraphAction.from_generators(qs, group, alpha_gens, [units.get(g, qs.unit) for g in group.generators()], A)
    # explicit entries override the generated ones so inconsistencies surface in verification
    ga.units.update(units)
    return ga


def permutation_from_json(perm, vertices, field: str) -> list[int]:
    pos = {v: i for i, v in enumerate(vertices)}
    out = []
    for x in perm:
        if isinstance(x, str):
            if x not in pos:
                raise StructureError(f"{field}: unknown vertex '{x}'")
            out.append(pos[x])
        else:
            out.append(int(x))
    return out
