"""Lightcone simulation and teleportation compression for shallow quantum circuits."""
from __future__ import annotations

__version__ = "0.1.0"

from .circuit import Circuit, CircuitError, Gate, GateKind, depth, gate, layerize, size, validate
from .circuit_io import ParseError, emit_circuit, gen_random, parse_circuit
from .decider import Decision, Threshold, decide, decide_direct
from .gates import apply_gate, apply_gate_density, gate_matrix
from .lightcone import backward_cone, dependency_graph, greedy_coloring
from .ring import Cyclotomic
from .simulator import (
    acceptance_probability,
    marginal_probability,
    reduced_density_marginal,
    run_statevector,
)
from .teleport import CompressionResult, compress_to_depth3, verify_compression

__all__ = [
    "Circuit",
    "CircuitError",
    "CompressionResult",
    "Cyclotomic",
    "Decision",
    "Gate",
    "GateKind",
    "ParseError",
    "Threshold",
    "acceptance_probability",
    "apply_gate",
    "apply_gate_density",
    "backward_cone",
    "compress_to_depth3",
    "decide",
    "decide_direct",
    "dependency_graph",
    "depth",
    "emit_circuit",
    "gate",
    "gate_matrix",
    "gen_random",
    "greedy_coloring",
    "layerize",
    "marginal_probability",
    "parse_circuit",
    "reduced_density_marginal",
    "run_statevector",
    "size",
    "validate",
    "verify_compression",
]
