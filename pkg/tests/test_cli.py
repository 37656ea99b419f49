import json
import subprocess
import sys

import numpy as np
import pytest

from qvoltage.cli import main
from qvoltage.crossed import derived_quantum_graph
from qvoltage.io import algebra_to_json, encode_complex, fixture_path
from qvoltage.random_instances import random_voltage_quantum_graph
from qvoltage.reconstruct import dual_action


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def fx(name):
    return fixture_path(name)


def test_derive_classical_z3_loop(capsys):
    code, rep = report(capsys, "derive-classical", fx("z3_loop.json"))
    assert code == 0 and rep["passed"]
    assert sorted(map(tuple, rep["result"]["derived"]["edges"])) == [("v:0", "v:1"), ("v:1", "v:2"), ("v:2", "v:0")]


def test_dot_output(capsys):
    code, out, _ = run(capsys, "derive-classical", fx("z3_loop.json"), "--format", "dot")
    assert code == 0 and out.startswith("digraph") and '"v:2" -> "v:0";' in out


def test_dot_refused_for_quantum_output(capsys):
    code, _, err = run(capsys, "derive-quantum", fx("m2_swap_one_edge.json"), "--format", "dot")
    assert code == 2 and "classical" in err


def test_derive_quantum_identified(capsys):
    code, rep = report(capsys, "derive-quantum", fx("m2_swap_three_edges.json"))
    assert code == 0
    A = np.array(rep["result"]["adjacency_identified"])[..., 0]
    assert np.array_equal(A, [[1, 0, 0, 2], [0, -1, 0, 0], [0, 0, -1, 0], [2, 0, 0, 1]])


def test_derive_quantum_zero_and_trivial(capsys):
    code, rep = report(capsys, "derive-quantum", fx("z2_swap_zero.json"))
    assert code == 0 and not np.any(np.array(rep["result"]["adjacency"]))
    code, rep = report(capsys, "derive-quantum", fx("z3_trivial_action.json"))
    assert code == 0 and len(rep["result"]["classical"]["edges"]) == 12


@pytest.mark.parametrize("name, code", [("m2_two_trace.json", 0), ("m2_trace.json", 1), ("classical_three.json", 0)])
def test_verify_quantum_sets(capsys, name, code):
    got, rep = report(capsys, "verify", fx(name))
    assert got == code and rep["passed"] == (code == 0)


def test_decompose(capsys):
    code, rep = report(capsys, "decompose", fx("c2_swap_crossed.json"))
    assert code == 0
    assert [b["size"] for b in rep["result"]["blocks"]] == [2]
    assert rep["result"]["trace_scales"] == [[2.0, 0.0]]


def test_twin(capsys):
    code, rep = report(capsys, "twin", fx("twin_two_edges.json"))
    assert code == 0
    A = np.array(rep["result"]["twin_adjacency_identified"])[..., 0]
    assert np.array_equal(A, [[1, 0, 0, 1], [0, -1, -1, 0], [0, -1, -1, 0], [1, 0, 0, 1]])
    assert rep["result"]["certificate"]["passed"]


def test_twin_with_trivial_dual_action(capsys, tmp_path):
    spec = json.loads(fx("twin_two_edges.json").read_text())
    del spec["dual_action"], spec["identification"]
    p = tmp_path / "t.json"
    p.write_text(json.dumps(spec))
    code, rep = report(capsys, "twin", p)
    assert code == 0 and rep["checks"]["residuals"]["twin.classical_identification"] < 1e-12


def test_reconstruct_fixture(capsys):
    code, rep = report(capsys, "reconstruct", fx("reconstruct_m2_one_edge.json"))
    assert code == 0 and rep["result"]["roundtrip"] is True
    comps = {tuple(c["label"]): np.array(c["matrix"])[..., 0] for c in rep["result"]["components"]}
    assert np.allclose(comps[(1,)], np.eye(2)) and np.allclose(comps[(0,)], 0)


def write_instance(path, qs, group, A, alpha, units):
    gens = group.generators()
    path.write_text(json.dumps({
        "qset": algebra_to_json(qs.algebra),
        "group": group.to_json(),
        "adjacency": encode_complex(A),
        "alpha": [encode_complex(alpha[g]) for g in gens],
        "unit_generators": [encode_complex(units[g]) for g in gens],
    }))


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_reconstruct_random_roundtrip(capsys, tmp_path, seed):
    vqg = random_voltage_quantum_graph(seed, max_base_dim=3)
    D = derived_quantum_graph(vqg)
    ga = dual_action(D.qset, D.matrix)
    p = tmp_path / "inst.json"
    write_instance(p, D.qset, ga.group, D.matrix, ga.alpha, ga.units)
    code, rep = report(capsys, "reconstruct", p)
    assert code == 0 and rep["result"]["roundtrip"]


def test_reconstruct_failure_exits_one(capsys, tmp_path):
    spec = json.loads(fx("reconstruct_m2_one_edge.json").read_text())
    spec["unit_generators"] = [[[1, 0], [0, 0], [0, 0], [-1, 0]]]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(spec))
    code, rep = report(capsys, "reconstruct", p)
    assert code == 1 and rep["result"]["roundtrip"] is False
    assert "landstad.covariance" in rep["checks"]["failures"]


def test_schema_errors_exit_two(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"vertices": ["a"], "group": {"cyclic_orders": [2]}, "edges": [{"src": "a"}]}')
    code, _, err = run(capsys, "derive-classical", p)
    assert code == 2 and "edges[0]" in err
    p.write_text("{ nope")
    code, _, err = run(capsys, "verify", p)
    assert code == 2 and "line 1" in err


def test_non_pre_simple_fails(capsys, tmp_path):
    p = tmp_path / "dup.json"
    edge = {"src": "a", "dst": "a", "label": [1]}
    p.write_text(json.dumps({"vertices": ["a"], "group": {"cyclic_orders": [2]}, "edges": [edge, edge]}))
    code, rep = report(capsys, "derive-classical", p)
    assert code == 1 and rep["result"]["multiplicities"] == [[0, 2], [2, 0]]


def test_byte_identical_reports(tmp_path):
    outs = []
    for k in range(2):
        o = tmp_path / f"o{k}.json"
        assert main(["decompose", str(fx("c2_swap_crossed.json")), "--seed", "7", "--output", str(o)]) == 0
        outs.append(o.read_bytes())
    assert outs[0] == outs[1]
    rep = json.loads(outs[0])
    assert rep["seed"] == 7 and len(rep["inputs_digest"]) == 64


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qvoltage.cli", "verify", str(fx("m2_two_trace.json"))], capture_output=True, text=True
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["passed"]
