"""Reversible arithmetic circuits and exact period-finding simulation."""
from .circuit import Circuit, CircuitBuilder, CircuitError, Gate, Register, compose, invert, new_circuit, resources
from .netlist import emit_netlist, parse_netlist
from .shor import ShorParams, build_inverse_qft, build_modexp_const, qubit_count_classical
from .simulate import BasisState, apply_classical, run_block, sample_period

__all__ = [
    "BasisState",
    "Circuit",
    "CircuitBuilder",
    "CircuitError",
    "Gate",
    "Register",
    "ShorParams",
    "apply_classical",
    "build_inverse_qft",
    "build_modexp_const",
    "compose",
    "emit_netlist",
    "invert",
    "new_circuit",
    "parse_netlist",
    "qubit_count_classical",
    "resources",
    "run_block",
    "sample_period",
]
