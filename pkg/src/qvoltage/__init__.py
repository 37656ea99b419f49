"""Voltage quantum graphs over finite abelian groups and their derived quantum graphs."""

__version__ = "0.1.0"

from .abelian import FiniteAbelianGroup
from .crossed import CrossedProductQuantumSet, X_map, crossed_product, derived_quantum_graph, property_transfer_report
from .errors import (
    NotClassicalError,
    QVoltageError,
    SizeLimitError,
    StructureError,
    ToleranceError,
    VerificationError,
)
from .fdca import (
    QuantumSet,
    StarAlgebra,
    group_algebra_set,
    make_classical_set,
    make_tracial_blocks,
    make_tracial_matrix_set,
    quantum_set_report,
    verify_qset_isomorphism,
    verify_quantum_set,
)
from .qgraph import (
    ClassicalDigraph,
    QuantumAdjacency,
    classical_to_quantum,
    digraph_isomorphic,
    quantum_to_classical,
    verify_quantum_adjacency,
)
from .qiso import QuantumIsomorphismCertificate, canonical_rho, quantum_twin, verify_graph_intertwining
from .reconstruct import GraphAction, dual_action, fixed_point_data, fourier_components, reconstruct_voltage
from .report import Report
from .voltage import (
    ClassicalVoltageGraph,
    DualAction,
    VoltageQuantumGraph,
    classical_derived_graph,
    is_pre_simple,
    verify_voltage_quantum_graph,
)
from .wedderburn import BlockDecomposition, wedderburn_decompose

__all__ = [
    "BlockDecomposition",
    "ClassicalDigraph",
    "ClassicalVoltageGraph",
    "CrossedProductQuantumSet",
    "DualAction",
    "FiniteAbelianGroup",
    "GraphAction",
    "NotClassicalError",
    "QVoltageError",
    "QuantumAdjacency",
    "QuantumIsomorphismCertificate",
    "QuantumSet",
    "Report",
    "SizeLimitError",
    "StarAlgebra",
    "StructureError",
    "ToleranceError",
    "VerificationError",
    "VoltageQuantumGraph",
    "X_map",
    "canonical_rho",
    "classical_derived_graph",
    "classical_to_quantum",
    "crossed_product",
    "derived_quantum_graph",
    "digraph_isomorphic",
    "dual_action",
    "fixed_point_data",
    "fourier_components",
    "group_algebra_set",
    "is_pre_simple",
    "make_classical_set",
    "make_tracial_blocks",
    "make_tracial_matrix_set",
    "property_transfer_report",
    "quantum_set_report",
    "quantum_to_classical",
    "quantum_twin",
    "reconstruct_voltage",
    "verify_graph_intertwining",
    "verify_qset_isomorphism",
    "verify_quantum_adjacency",
    "verify_quantum_set",
    "verify_voltage_quantum_graph",
    "wedderburn_decompose",
]
