"""The three-module period-finding circuit: Hadamard layer, modular
exponentiation for a classically known base, inverse QFT.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

from .circuit import Circuit, CircuitBuilder, CircuitError, Register, invert
from .modular import emit_ctrl_mul_mod_const


@dataclass(frozen=True)
class ShorParams:
    N: int
    A: int

    def __post_init__(self):
        if self.N < 3 or self.N % 2 == 0:
            raise CircuitError(f"N must be odd and >= 3, got {self.N}")
        if not 1 < self.A < self.N:
            raise CircuitError(f"A must satisfy 1 < A < N, got A={self.A}")
        if gcd(self.A, self.N) != 1:
            raise CircuitError(f"A={self.A} is not coprime to N={self.N}")

    @property
    def n(self) -> int:
        return self.N.bit_length()

    @property
    def w(self) -> int:
        return self.n + 1


@dataclass(frozen=True)
class ModexpLayout:
    registers: dict[str, tuple[int, ...]]
    anc: int
    stage_constants: tuple[int, ...]
    final_constant: int
    exp_bits: int
    width: int = field(default=0)


def qubit_count_classical(n: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    return 5 * n + 6


def build_hadamard_layer(w: int) -> Circuit:
    bld = CircuitBuilder()
    y = bld.add_register("Y", w)
    for q in y:
        bld.h(q)
    return bld.build()


def build_qft(w: int) -> Circuit:
    """QFT |y> -> 2**(-w/2) sum_k exp(2 pi i y k / 2**w) |k>, wire 0 = LSB."""
    bld = CircuitBuilder()
    q = bld.add_register("Y", w)
    for j in reversed(range(w)):
        bld.h(q[j])
        for l in reversed(range(j)):
            bld.cp(j - l + 1, q[l], q[j])
    for i in range(w // 2):
        bld.swap(q[i], q[w - 1 - i])
    return bld.build()


def build_inverse_qft(w: int) -> Circuit:
    return invert(build_qft(w))


@lru_cache(maxsize=64)
def _modexp(N: int, A: int, exp_bits: int | None) -> tuple[Circuit, ModexpLayout]:
    params = ShorParams(N, A)
    w = params.w
    m = exp_bits or w
    bld = CircuitBuilder()
    acc = bld.add_register("acc", w)
    p = bld.add_register("P", w)
    n = bld.add_register("N", w)
    const = bld.add_register("A", w)
    y = bld.add_register("Y", m)
    anc = bld.add_register("anc", 1)

    stages = tuple(pow(A, 1 << k, N) for k in range(m))
    bld.xor_const(n, N)
    bld.xor_const(const, stages[0])
    bld.x(p[0])
    cur = stages[0]
    for k in range(m):
        cur = emit_ctrl_mul_mod_const(bld, acc, const, p, n, y[k], anc[0], stages[k], N, cur)
    bld.xor_const(const, cur ^ stages[-1])

    circuit = bld.build()
    layout = ModexpLayout(
        registers=circuit.register_map,
        anc=anc[0],
        stage_constants=stages,
        final_constant=stages[-1],
        exp_bits=m,
        width=circuit.width,
    )
    return circuit, layout


def build_modexp_const(params: ShorParams, exp_bits: int | None = None) -> tuple[Circuit, ModexpLayout]:
    """P <- A**Y mod N for every basis value of the exponent register Y.

    All other inputs start at zero: the circuit loads N, the stage constant
    and P = 1 with NOT gates. On exit ``acc`` and ``anc`` are zero, N is
    intact and the constant register holds A**(2**(m-1)) mod N.
    """
    if exp_bits is not None and exp_bits < 1:
        raise CircuitError("exp_bits must be >= 1")
    return _modexp(params.N, params.A, exp_bits)


def build_pipeline(params: ShorParams, exp_bits: int | None = None) -> tuple[Circuit, list[tuple[int, str]]]:
    """Hadamard -> modexp -> inverse QFT on one wire set.

    Returns the circuit and ``(gate_index, label)`` markers at module
    boundaries, used for netlist comments.
    """
    modexp, layout = build_modexp_const(params, exp_bits)
    ywires = layout.registers["Y"]
    m = len(ywires)
    regs = tuple(Register(k, v) for k, v in layout.registers.items())
    had = build_hadamard_layer(m).embed(modexp.width, ywires)
    iqft = build_inverse_qft(m).embed(modexp.width, ywires)
    gates = had.gates + modexp.gates + iqft.gates
    markers = [
        (0, "module 1: hadamard layer on Y"),
        (len(had.gates), "module 2: modular exponentiation A^Y mod N"),
        (len(had.gates) + len(modexp.gates), "measure P; module 3: inverse QFT on Y"),
        (len(gates), "measure Y"),
    ]
    return Circuit(modexp.width, gates, regs), markers


def pipeline_netlist(params: ShorParams, exp_bits: int | None = None) -> str:
    from .netlist import _gate_line

    circuit, markers = build_pipeline(params, exp_bits)
    at = {}
    for idx, label in markers:
        at.setdefault(idx, []).append(label)
    lines = [f"qnet 1 {circuit.width}", f"# pipeline N={params.N} A={params.A}"]
    lines += [" ".join(["reg", r.name, *map(str, r.wires)]) for r in circuit.registers]
    for i, g in enumerate(circuit.gates):
        lines += [f"# {label}" for label in at.get(i, ())]
        lines.append(_gate_line(g))
    lines += [f"# {label}" for label in at.get(len(circuit.gates), ())]
    return "\n".join(lines) + "\n"
