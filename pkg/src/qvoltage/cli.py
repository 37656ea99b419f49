"""Command-line entry point: ``qvoltage <subcommand> FILE``.

Every command writes one JSON run report (or DOT for classical digraphs)
and exits 0 when all checks pass, 1 when a residual fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

import numpy as np

from . import __version__
from .errors import QVoltageError, StructureError, VerificationError
from .io import dumps, encode_complex, load_json
from .report import Report

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class RunReport:
    def __init__(self, command: str, spec, tol: float, seed: int):
        self.command = command
        canon = json.dumps(spec, sort_keys=True, separators=(",", ":"))
        self.digest = hashlib.sha256(canon.encode()).hexdigest()
        self.tol = tol
        self.seed = seed
        self.checks = Report(command, tol)
        self.result: dict = {}

    @property
    def passed(self) -> bool:
        return self.checks.passed

    def to_json(self) -> dict:
        rep = self.checks.to_json()
        return {
            "command": self.command,
            "inputs_digest": self.digest,
            "tolerance": self.tol,
            "seed": self.seed,
            "passed": self.passed,
            "checks": {"residuals": rep["residuals"], "flags": rep["flags"], "failures": rep["failures"]},
            "result": self.result,
            "version": __version__,
        }


# -- commands ----------------------------------------------------------------


def cmd_derive_classical(spec, args, run: RunReport):
    from .voltage import ClassicalVoltageGraph, classical_derived_graph, is_pre_simple

    cvg = ClassicalVoltageGraph.from_json(spec)
    ok, dup = is_pre_simple(cvg)
    run.checks.flag("pre_simple", ok)
    if not ok:
        run.result["duplicate_edge"] = {"src": dup.src, "dst": dup.dst, "label": list(dup.label)}
        mult = classical_derived_graph(cvg, multigraph=True)
        run.result["multiplicities"] = mult.tolist()
        return None
    dg = classical_derived_graph(cvg)
    run.result["derived"] = dg.to_json()
    run.result["vertex_count"] = dg.size
    run.result["edge_count"] = dg.edge_count()
    return dg


def cmd_derive_quantum(spec, args, run: RunReport):
    from .crossed import derived_quantum_graph, property_transfer_report, trivial_identification
    from .fdca import is_classical_set
    from .io import decode_matrix, vqg_from_json
    from .voltage import verify_voltage_quantum_graph

    vqg = vqg_from_json(spec, args.tol)
    vrep = verify_voltage_quantum_graph(vqg, args.tol)
    run.checks.merge(vrep, "voltage")
    if not vrep.passed:
        return None
    derived = derived_quantum_graph(vqg, args.tol)
    run.checks.merge(derived.report, "derived")
    run.checks.merge(property_transfer_report(vqg, args.tol, derived), "transfer")
    run.result["dim"] = derived.dim
    run.result["basis"] = list(derived.qset.labels)
    run.result["adjacency"] = encode_complex(derived.matrix)
    if "identification" in spec:
        D = derived.dim
        phi = decode_matrix(spec["identification"], "identification", (D, D))
        run.result["adjacency_identified"] = encode_complex(phi @ derived.matrix @ np.linalg.inv(phi))
    if vqg.action.is_trivial(args.tol) and is_classical_set(vqg.base, args.tol):
        from .qgraph import quantum_to_classical
        from .crossed import classical_product_set

        Phi = trivial_identification(derived.qset)
        on_pairs = Phi @ derived.matrix @ np.linalg.inv(Phi)
        dg = quantum_to_classical(classical_product_set(derived.qset), on_pairs, args.tol)
        run.result["classical"] = dg.to_json()
    return None


def cmd_twin(spec, args, run: RunReport):
    from .io import group_from_json, permutation_from_json, require
    from .qgraph import ClassicalDigraph
    from .qiso import quantum_twin

    gamma = ClassicalDigraph.from_json(require(spec, "graph", "twin input"))
    group = group_from_json(require(spec, "group", "twin input"))
    free = [
        permutation_from_json(p, gamma.vertices, f"free_action[{i}]")
        for i, p in enumerate(require(spec, "free_action", "twin input"))
    ]
    dual = spec.get("dual_action")
    if dual is None:
        twin = quantum_twin(gamma, group, free, None, args.tol)
    else:
        from .qiso import quotient_voltage_graph

        quotient = quotient_voltage_graph(gamma, group, free)[0].vertices
        if isinstance(dual, dict):
            gens = require(dual, "generators", "dual_action")
            perms = [permutation_from_json(p, quotient, f"dual_action.generators[{i}]") for i, p in enumerate(gens)]
            twin = quantum_twin(gamma, group, free, perms, args.tol, dual_per="generator")
        else:
            perms = {}
            for i, entry in enumerate(dual):
                if isinstance(entry, dict):
                    chi = group.reduce(require(entry, "character", f"dual_action[{i}]"))
                    entry = require(entry, "permutation", f"dual_action[{i}]")
                elif i < group.order:
                    chi = group.elements[i]
                else:
                    raise StructureError("dual_action has more entries than the group has characters")
                perms[chi] = permutation_from_json(entry, quotient, f"dual_action[{i}]")
            twin = quantum_twin(gamma, group, free, perms, args.tol)
    run.checks.merge(twin.report, "twin")
    run.result["voltage_graph"] = twin.voltage_graph.to_json()
    run.result["identification"] = [gamma.vertices[i] for i in twin.identification]
    run.result["basis"] = list(twin.adjacency.qset.labels)
    run.result["twin_adjacency"] = encode_complex(twin.adjacency.matrix)
    run.result["certificate"] = twin.certificate.to_json()
    if "identification" in spec:
        from .io import decode_matrix

        D = twin.adjacency.dim
        phi = decode_matrix(spec["identification"], "identification", (D, D))
        run.result["twin_adjacency_identified"] = encode_complex(phi @ twin.adjacency.matrix @ np.linalg.inv(phi))
    return None


def cmd_reconstruct(spec, args, run: RunReport):
    from .io import graph_action_from_json
    from .reconstruct import reconstruct_voltage, verify_landstad

    ga = graph_action_from_json(spec, args.tol)
    lrep = verify_landstad(ga, args.tol)
    run.checks.merge(lrep, "landstad")
    if not lrep.passed:
        run.result["roundtrip"] = False
        return None
    rec = reconstruct_voltage(ga, tol=args.tol)
    run.checks.merge(rec.report, "reconstruction")
    vqg = rec.voltage_graph
    run.result["fixed_point_basis"] = encode_complex(rec.fixed_point.basis)
    run.result["components"] = [
        {"label": list(g), "matrix": encode_complex(vqg.components[g])} for g in vqg.group.elements
    ]
    run.result["dual_action"] = vqg.action.to_json()
    run.result["roundtrip"] = rec.report.passed
    return None


def _classify(spec) -> str:
    if not isinstance(spec, dict):
        raise StructureError("input must be a JSON object")
    if "kind" in spec:
        return "qset"
    if "components" in spec:
        return "vqg"
    if "alpha" in spec:
        return "graph_action"
    if "graph" in spec and "free_action" in spec:
        return "twin"
    if "vertices" in spec and "group" in spec:
        return "voltage_graph"
    if "vertices" in spec and "edges" in spec:
        return "digraph"
    raise StructureError("cannot tell what kind of object this file describes")


def cmd_verify(spec, args, run: RunReport):
    from .fdca import verify_quantum_set
    from .io import algebra_from_json

    kind = _classify(spec)
    run.result["object"] = kind
    if kind == "qset":
        alg = algebra_from_json(spec)
        rep = verify_quantum_set(alg, args.tol)
        run.checks.merge(rep, "quantum_set")
        run.result["gram_min_eigenvalue"] = rep.info.get("gram_min_eigenvalue")
        run.result["dim"] = alg.dim
    elif kind == "vqg":
        from .io import vqg_from_json
        from .voltage import verify_voltage_quantum_graph

        run.checks.merge(verify_voltage_quantum_graph(vqg_from_json(spec, args.tol), args.tol), "voltage")
    elif kind == "graph_action":
        from .io import graph_action_from_json
        from .reconstruct import verify_landstad

        run.checks.merge(verify_landstad(graph_action_from_json(spec, args.tol), args.tol), "landstad")
    elif kind == "voltage_graph":
        from .voltage import ClassicalVoltageGraph, is_pre_simple

        ok, _ = is_pre_simple(ClassicalVoltageGraph.from_json(spec))
        run.checks.flag("pre_simple", ok)
    elif kind == "digraph":
        from .qgraph import ClassicalDigraph, classical_to_quantum

        run.checks.merge(classical_to_quantum(ClassicalDigraph.from_json(spec), args.tol).report, "adjacency")
    else:
        return cmd_twin(spec, args, run)
    return None


def cmd_decompose(spec, args, run: RunReport):
    from .io import algebra_from_json, action_from_json, group_from_json, qset_from_json, require
    from .wedderburn import wedderburn_decompose

    if "kind" in spec:
        alg = algebra_from_json(spec)
    else:
        from .crossed import crossed_product

        base = qset_from_json(require(spec, "base", "decompose input"), args.tol)
        group = group_from_json(require(spec, "group", "decompose input"))
        alg = crossed_product(base, action_from_json(spec.get("action"), base, group, args.tol), args.tol).algebra
    dec = wedderburn_decompose(alg, args.tol, seed=args.seed)
    run.checks.merge(dec.report, "wedderburn")
    run.result.update(dec.to_json())
    run.result.pop("report", None)
    # a block carries a multiple of its trace when its weight matrix is scalar
    scales = []
    for Q in dec.weights:
        c = np.trace(Q) / Q.shape[0]
        scales.append(encode_complex(c) if np.max(np.abs(Q - c * np.eye(Q.shape[0]))) < args.tol else None)
    run.result["trace_scales"] = scales
    return None


COMMANDS = {
    "derive-classical": cmd_derive_classical,
    "derive-quantum": cmd_derive_quantum,
    "twin": cmd_twin,
    "reconstruct": cmd_reconstruct,
    "verify": cmd_verify,
    "decompose": cmd_decompose,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qvoltage", description="Voltage quantum graphs and their derived graphs.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("input", help="JSON input file")
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=["json", "dot"], default="json")
        p.add_argument("--output", "-o", default=None)
    return parser


def _emit(text: str, path) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = load_json(args.input)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except StructureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "dot" and args.command != "derive-classical":
        print("error: DOT output is only available for classical digraphs (derive-classical)", file=sys.stderr)
        return EXIT_INPUT
    run = RunReport(args.command, spec, args.tol, args.seed)
    try:
        out = COMMANDS[args.command](spec, args, run)
    except VerificationError as exc:
        if exc.report is not None:
            run.checks.merge(exc.report)
        run.checks.flag("verification", False)
        run.result["error"] = str(exc)
        out = None
    except (StructureError, QVoltageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "dot":
        if out is None:
            print("error: no derived digraph to export", file=sys.stderr)
            return EXIT_FAIL if not run.passed else EXIT_INPUT
        _emit(out.to_dot(), args.output)
    else:
        _emit(dumps(run.to_json()), args.output)
    return EXIT_OK if run.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
