"""Acceptance criteria, one pass/fail line each.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import json
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import ACCEPTANCE_LINES, oracle_derived_adjacency, petersen_adjacency  # noqa: E402
from qvoltage.abelian import FiniteAbelianGroup  # noqa: E402
from qvoltage.cli import main as cli_main  # noqa: E402
from qvoltage.crossed import (  # noqa: E402
    X_map,
    crossed_product,
    derived_quantum_graph,
    parametric_z2_derived,
    property_transfer_report,
    swap_action,
    to_m2_basis,
    trivial_identification,
    trivial_twin_components,
    x_map_identities,
)
from qvoltage.fdca import (  # noqa: E402
    group_algebra_set,
    make_classical_set,
    make_tracial_blocks,
    make_tracial_matrix_set,
    quantum_set_report,
    verify_qset_isomorphism,
)
from qvoltage.io import fixture_path, vqg_from_json  # noqa: E402
from qvoltage.qgraph import ClassicalDigraph, digraph_isomorphic  # noqa: E402
from qvoltage.qiso import canonical_rho, verify_graph_intertwining  # noqa: E402
from qvoltage.random_instances import random_voltage_quantum_graph  # noqa: E402
from qvoltage.reconstruct import compare_components, dual_action, reconstruct_voltage  # noqa: E402
from qvoltage.report import maxabs  # noqa: E402
from qvoltage.voltage import DualAction, VoltageQuantumGraph  # noqa: E402
from qvoltage.wedderburn import wedderburn_decompose  # noqa: E402

TOL = 1e-9
GROUPS_2_TO_4 = [(2,), (3,), (4,), (2, 2)]

# matrices in the standard basis E11, E12, E21, E22
GOLDEN = {
    "m2_swap_one_edge.json": np.diag([1, -1, -1, 1]),
    "m2_swap_two_edges.json": np.array([[1, 0, 0, 1], [0, -1, -1, 0], [0, -1, -1, 0], [1, 0, 0, 1]]),
    "m2_swap_three_edges.json": np.array([[1, 0, 0, 2], [0, -1, 0, 0], [0, 0, -1, 0], [2, 0, 0, 1]]),
}
X_GOLDEN = {
    (0,): np.array([[1, 0, 0, 1], [0, 1, 1, 0], [0, 1, 1, 0], [1, 0, 0, 1]]),
    (1,): np.array([[1, 0, 0, 1], [0, -1, -1, 0], [0, -1, -1, 0], [1, 0, 0, 1]]),
}


def claimed_closed_form(b0, a1, b1):
    """The closed form for the two-vertex swap family, entry for entry as claimed."""
    return np.array(
        [[a1, 0, 0, a1], [0, -a1, -a1, 0], [0, b0 - b1, b0 - b1, 0], [b0 + b1, 0, 0, b0 + b1]]
    )


CRITERIA: dict[int, tuple[str, object]] = {}


def criterion(num: int, title: str):
    def wrap(fn):
        CRITERIA[num] = (title, fn)
        return fn

    return wrap


def cli_json(*argv):
    import contextlib
    import io

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli_main([str(a) for a in argv])
    return code, json.loads(buf.getvalue())


# -- criteria ----------------------------------------------------------------


@criterion(1, "golden M2 matrices from derive-quantum")
def ac1():
    worst, ok = 0.0, True
    for name, want in GOLDEN.items():
        code, rep = cli_json("derive-quantum", fixture_path(name))
        got = np.array(rep["result"]["adjacency_identified"])
        got = got[..., 0] + 1j * got[..., 1]
        err = maxabs(got - want)
        worst = max(worst, err)
        ok &= code == 0 and rep["passed"] and err < TOL
    return ok, f"max entry error {worst:.1e} over {len(GOLDEN)} fixtures", 1.0


@criterion(2, "X_0 and X_1 after identification")
def ac2():
    cp = crossed_product(make_classical_set(2), swap_action(), TOL)
    errs = [maxabs(to_m2_basis(X_map(cp, g, TOL).matrix) - want) for g, want in X_GOLDEN.items()]
    return max(errs) < TOL, f"max entry error {max(errs):.1e}", None


@criterion(3, "swap crossed product decomposes as (M2, 2Tr)")
def ac3():
    code, rep = cli_json("decompose", fixture_path("c2_swap_crossed.json"))
    sizes = [b["size"] for b in rep["result"]["blocks"]]
    cp = crossed_product(make_classical_set(2), swap_action(), TOL)
    dec = wedderburn_decompose(cp.algebra, TOL, seed=0)
    iso = verify_qset_isomorphism(dec.iso, cp, make_tracial_matrix_set(2), TOL)
    worst = max(iso.residuals.values())
    ok = code == 0 and sizes == [2] and dec.sizes == [2] and iso.passed
    return ok, f"blocks {sizes}, isomorphism residual {worst:.1e}", 1.0


def _classical_limit_case(V, grp, edges, cache):
    key = (V, grp.cyclic_orders)
    if key not in cache:
        base = make_classical_set(V, labels=[f"v{i}" for i in range(V)], tol=TOL)
        act = DualAction.trivial(base, grp)
        cp = crossed_product(base, act, TOL)
        Phi = trivial_identification(cp)
        cache[key] = (base, act, cp, Phi, np.linalg.inv(Phi))
    base, act, cp, Phi, Phi_inv = cache[key]
    comps = {g: np.zeros((V, V), dtype=complex) for g in grp.elements}
    for u, v, g in edges:
        comps[g][v, u] = 1
    vqg = VoltageQuantumGraph(base, grp, act, comps)
    on_pairs = Phi @ derived_quantum_graph(vqg, TOL, cp=cp).matrix @ Phi_inv
    rounded = np.round(on_pairs.real).astype(int)
    want = oracle_derived_adjacency(V, grp.elements, grp.op, edges).T
    return maxabs(on_pairs - rounded) < TOL and np.array_equal(rounded, want)


@criterion(4, "classical limit equals Gross-Tucker lift")
def ac4():
    cache, count, bad = {}, 0, []
    for orders in GROUPS_2_TO_4:
        grp = FiniteAbelianGroup(orders)
        for V in (1, 2, 3):
            slots = [(u, v, g) for u in range(V) for v in range(V) for g in grp.elements]
            cases = [[]] + [[s] for s in slots]
            if V == 1 or (V == 2 and grp.order == 2):
                cases = [[s for s, keep in zip(slots, mask) if keep] for mask in itertools.product([0, 1], repeat=len(slots))]
            for edges in cases:
                count += 1
                if not _classical_limit_case(V, grp, edges, cache):
                    bad.append((V, orders, edges))
    rng = np.random.default_rng(2024)
    for _ in range(200):
        grp = FiniteAbelianGroup(GROUPS_2_TO_4[rng.integers(len(GROUPS_2_TO_4))])
        V = int(rng.integers(1, 6))
        density = rng.uniform(0.05, 0.5)
        edges = [(u, v, g) for u in range(V) for v in range(V) for g in grp.elements if rng.random() < density]
        count += 1
        if not _classical_limit_case(V, grp, edges, cache):
            bad.append((V, grp.cyclic_orders, edges))
    return not bad, f"{count} voltage graphs, {len(bad)} mismatches", 30.0


@criterion(5, "small classical examples: Z3 loop and Petersen")
def ac5():
    code1, rep1 = cli_json("derive-classical", fixture_path("z3_loop.json"))
    cycle = sorted(map(tuple, rep1["result"]["derived"]["edges"])) == [("v:0", "v:1"), ("v:1", "v:2"), ("v:2", "v:0")]
    code2, rep2 = cli_json("derive-classical", fixture_path("petersen_voltage_graph.json"))
    derived = ClassicalDigraph.from_json(rep2["result"]["derived"])
    pet = ClassicalDigraph([str(i) for i in range(10)], petersen_adjacency())
    iso = digraph_isomorphic(derived, pet) is not None
    ok = code1 == 0 and code2 == 0 and cycle and iso
    return ok, f"3-cycle {cycle}, Petersen isomorphic {iso}", 5.0


def _certificate_worst(vqg):
    cert = canonical_rho(vqg, TOL)
    A = derived_quantum_graph(vqg, TOL, cp=cert.target)
    B = derived_quantum_graph(trivial_twin_components(vqg), TOL, cp=cert.source)
    inter = verify_graph_intertwining(cert, A, B, TOL)
    worst = max(list(cert.report.residuals.values()) + list(inter.residuals.values()))
    return cert.passed and inter.passed, worst


@criterion(6, "quantum isomorphism certificates")
def ac6():
    cases = [vqg_from_json(json.loads(fixture_path(n).read_text()), TOL) for n in GOLDEN]
    grp = FiniteAbelianGroup([3])
    base = make_classical_set(3, tol=TOL)
    act = DualAction.from_generators(base, grp, [np.roll(np.eye(3), 1, axis=0)])
    S = act.matrix([1])
    cases.append(VoltageQuantumGraph(base, grp, act, {(0,): S, (1,): np.eye(3), (2,): S @ S}))
    rng = np.random.default_rng(606)
    cases += [random_voltage_quantum_graph(rng, max_base_dim=4, tol=TOL) for _ in range(50)]
    results = [_certificate_worst(v) for v in cases]
    ok = all(r[0] for r in results)
    return ok, f"{len(cases)} instances, worst residual {max(r[1] for r in results):.1e}", 60.0


@criterion(7, "Gross-Tucker round trip")
def ac7():
    rng = np.random.default_rng(707)
    worst_c = worst_a = 0.0
    for _ in range(100):
        vqg = random_voltage_quantum_graph(rng, max_base_dim=3, tol=TOL)
        A = derived_quantum_graph(vqg, TOL)
        rec = reconstruct_voltage(dual_action(A.qset, A.matrix), tol=TOL)
        worst_c = max(worst_c, compare_components(vqg, rec, A.qset))
        worst_a = max(worst_a, rec.report.residuals["rebuilt_graph"])
    ok = worst_c < TOL and worst_a < TOL
    return ok, f"100 instances, component error {worst_c:.1e}, rebuilt graph error {worst_a:.1e}", 60.0


@criterion(8, "structural invariants")
def ac8():
    qsets = [make_classical_set(k, tol=TOL) for k in range(1, 6)]
    qsets += [make_tracial_blocks(b, tol=TOL) for b in ([1], [2], [3], [1, 2], [2, 2])]
    qsets += [group_algebra_set(FiniteAbelianGroup(o), TOL) for o in GROUPS_2_TO_4]
    crossed = [crossed_product(make_classical_set(2), swap_action(), TOL)]
    rng = np.random.default_rng(808)
    for _ in range(30):
        vqg = random_voltage_quantum_graph(rng, max_base_dim=4, tol=TOL)
        crossed.append(crossed_product(vqg.base, vqg.action, TOL))
    worst = 0.0
    for qs in qsets + crossed:
        worst = max(worst, max(quantum_set_report(qs.algebra, TOL).residuals.values()))
    for cp in crossed:
        worst = max(worst, max(cp.formula_report(TOL).residuals.values()))
        worst = max(worst, max(x_map_identities(cp, TOL).residuals.values()))
    return worst < TOL, f"{len(qsets)} quantum sets, {len(crossed)} crossed products, worst {worst:.1e}", None


def _transfer_part():
    cases = [vqg_from_json(json.loads(fixture_path(n).read_text()), TOL) for n in GOLDEN]
    rng = np.random.default_rng(909)
    for k in range(50):
        cases.append(random_voltage_quantum_graph(
            rng, max_base_dim=4, undirected=k % 2 == 0, loopfree=k % 3 == 0, regular=k % 5 == 0, tol=TOL
        ))
    reps = [property_transfer_report(v, TOL) for v in cases]
    held = {p: sum(r.info[f"{p}.hypothesis"] for r in reps) for p in ("loopfree", "undirected", "regular")}
    return all(r.passed for r in reps), held, len(cases)


def _closed_form_part():
    claimed = corrected = 0
    for t in itertools.product([0, 1], repeat=3):
        A, rep = parametric_z2_derived(*t, tol=TOL)
        claimed += maxabs(A - claimed_closed_form(*t)) < TOL
        corrected += rep.residuals["corrected_form"] < TOL
    return claimed, corrected


@criterion(9, "property transfer and two-vertex closed form")
def ac9():
    transfer_ok, held, n = _transfer_part()
    claimed, corrected = _closed_form_part()
    ok = transfer_ok and claimed == 8
    detail = (
        f"transfer {'ok' if transfer_ok else 'FAILED'} on {n} instances (hypotheses held: {held}); "
        f"claimed closed form matches {claimed}/8 triples, re-derived form {corrected}/8"
    )
    return ok, detail, None


# -- drivers -----------------------------------------------------------------


def evaluate(num: int):
    title, fn = CRITERIA[num]
    t0 = time.perf_counter()
    ok, detail, limit = fn()
    elapsed = time.perf_counter() - t0
    if limit is not None and elapsed > limit:
        ok = False
        detail += f"; runtime {elapsed:.2f}s exceeds {limit:.0f}s"
    line = f"AC{num} {'PASS' if ok else 'FAIL'}  {title}: {detail} [{elapsed:.2f}s]"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok, line


@pytest.mark.parametrize("num", [1, 2, 3, 4, 5, 6, 7, 8])
def test_criterion(num):
    ok, line = evaluate(num)
    assert ok, line


@pytest.mark.xfail(
    strict=True,
    reason="the claimed closed form disagrees with the computed derived matrices on 6 of 8 triples "
    "(it is not even self-adjoint there); see the decisions ledger",
)
def test_criterion_9():
    ok, line = evaluate(9)
    assert ok, line


def test_criterion_9_property_transfer_part():
    ok, held, _ = _transfer_part()
    assert ok
    assert all(v > 0 for v in held.values())


def test_criterion_9_rederived_closed_form():
    claimed, corrected = _closed_form_part()
    assert corrected == 8
    assert claimed == 2


if __name__ == "__main__":
    results = [evaluate(k)[0] for k in sorted(CRITERIA)]
    sys.exit(0 if all(results) else 1)
