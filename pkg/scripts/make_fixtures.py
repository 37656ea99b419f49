"""Regenerate the JSON fixtures shipped in ``qvoltage/fixtures``.

Run from the repository root: ``python3 scripts/make_fixtures.py``.
"""

import json
from pathlib import Path

import numpy as np

from qvoltage.crossed import m2_identification
from qvoltage.fdca import make_tracial_matrix_set
from qvoltage.io import encode_complex

OUT = Path(__file__).resolve().parents[1] / "src" / "qvoltage" / "fixtures"

SWAP_BASE = {"kind": "classical", "size": 2, "labels": ["v0", "v1"]}
SWAP_ACTION = {"kind": "permutations", "generators": [[1, 0]]}
Z2 = {"cyclic_orders": [2]}
IDENT = m2_identification().real.astype(int).tolist()


def write(name, obj):
    (OUT / name).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def swap_graph(a0, a1, note):
    return {
        "description": note,
        "base": SWAP_BASE,
        "group": Z2,
        "action": SWAP_ACTION,
        "components": [{"label": [0], "matrix": a0}, {"label": [1], "matrix": a1}],
        # crossed basis (e1, e2, e1 u, e2 u) -> matrix units (E11, E12, E21, E22)
        "identification": IDENT,
    }


def main():
    OUT.mkdir(exist_ok=True)
    write("m2_swap_one_edge.json", swap_graph([[0, 0], [0, 0]], [[1, 0], [0, 1]], "one label-1 loop at each vertex"))
    write("m2_swap_two_edges.json", swap_graph([[0, 0], [0, 0]], [[1, 1], [1, 1]], "loops and crossing edges, all labelled 1"))
    write("m2_swap_three_edges.json", swap_graph([[0, 1], [1, 0]], [[1, 1], [1, 1]], "as two_edges plus label-0 crossings"))
    write("z2_swap_zero.json", swap_graph([[0, 0], [0, 0]], [[0, 0], [0, 0]], "no edges"))

    write(
        "z3_trivial_action.json",
        {
            "description": "classical base, trivial action: derived graph is classical",
            "base": {"kind": "classical", "size": 2, "labels": ["a", "b"]},
            "group": {"cyclic_orders": [3]},
            "action": {"kind": "trivial"},
            "components": [
                {"label": [0], "matrix": [[0, 1], [0, 0]]},
                {"label": [1], "matrix": [[1, 0], [1, 0]]},
                {"label": [2], "matrix": [[0, 0], [0, 1]]},
            ],
        },
    )

    write(
        "z3_loop.json",
        {"vertices": ["v"], "group": {"cyclic_orders": [3]}, "edges": [{"src": "v", "dst": "v", "label": [1]}]},
    )
    write("empty_voltage_graph.json", {"vertices": ["a", "b"], "group": {"cyclic_orders": [2]}, "edges": []})
    # loops 1 and 2 over Z5 plus a crossing edge labelled 0, with every edge doubled in reverse
    petersen = [("L", "L", 1), ("L", "L", 4), ("R", "R", 2), ("R", "R", 3), ("L", "R", 0), ("R", "L", 0)]
    write(
        "petersen_voltage_graph.json",
        {
            "vertices": ["L", "R"],
            "group": {"cyclic_orders": [5]},
            "edges": [{"src": s, "dst": t, "label": [g]} for s, t, g in petersen],
        },
    )

    write("m2_two_trace.json", {"kind": "tracial_blocks", "blocks": [2]})
    write("m2_trace.json", {"kind": "tracial_blocks", "blocks": [2], "weights": [1]})
    write("classical_three.json", {"kind": "classical", "size": 3})
    write(
        "c2_swap_crossed.json",
        {"base": SWAP_BASE, "group": Z2, "action": SWAP_ACTION},
    )

    # classical derived graph of the two-edge example, with the Z2 shift on the G coordinate
    verts = ["v0:0", "v0:1", "v1:0", "v1:1"]
    edges = [("v0:0", "v0:1"), ("v0:1", "v0:0"), ("v1:0", "v1:1"), ("v1:1", "v1:0"),
             ("v0:0", "v1:1"), ("v0:1", "v1:0"), ("v1:0", "v0:1"), ("v1:1", "v0:0")]
    write(
        "twin_two_edges.json",
        {
            "graph": {"vertices": verts, "edges": [list(e) for e in edges]},
            "group": Z2,
            "free_action": [["v0:1", "v0:0", "v1:1", "v1:0"]],
            "dual_action": [["v0:0", "v1:0"], ["v1:0", "v0:0"]],
            "identification": IDENT,
        },
    )

    qs = make_tracial_matrix_set(2)
    sigma1 = np.array([[0, 1], [1, 0]], dtype=complex)
    sigma3 = np.diag([1, -1]).astype(complex)
    P3 = np.diag([1, -1, -1, 1])
    write(
        "reconstruct_m2_one_edge.json",
        {
            "description": "(M2, 2Tr) with P3, Ad(sigma3) action and unitary sigma1",
            "qset": {"kind": "tracial_blocks", "blocks": [2]},
            "group": Z2,
            "adjacency": P3.tolist(),
            "alpha": [encode_complex(qs.ad(sigma3.reshape(-1)))],
            "unit_generators": [encode_complex(sigma1.reshape(-1))],
        },
    )


if __name__ == "__main__":
    main()
