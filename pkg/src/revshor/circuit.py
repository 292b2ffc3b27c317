"""Gate-level circuit representation.

A :class:`Circuit` is an immutable, ordered list of :class:`Gate` objects over a
fixed number of wires, together with named registers that map symbolic
operands (``A``, ``B``, ``N`` ...) onto wires. Register bit 0 is always the
least significant bit.

Circuits are usually assembled with a :class:`CircuitBuilder` and frozen with
:meth:`CircuitBuilder.build`.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

CLASSICAL_KINDS = frozenset({"x", "cx", "ccx", "swap", "cswap"})
GATE_ARITY = {"x": 1, "cx": 2, "ccx": 3, "swap": 2, "cswap": 3, "h": 1, "cp": 2}


class CircuitError(ValueError):
    """Raised for malformed gates, registers or circuit combinations."""


@dataclass(frozen=True)
class Gate:
    """One elementary gate.

    ``wires`` lists operands in netlist order: controls first, target(s) last.
    ``k`` is only meaningful for ``cp`` (phase angle 2*pi/2**k) and
    ``inverted`` negates that angle.
    """

    kind: str
    wires: tuple[int, ...]
    k: int = 0
    inverted: bool = False

    def __post_init__(self):
        if self.kind not in GATE_ARITY:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        if len(self.wires) != GATE_ARITY[self.kind]:
            raise CircuitError(f"{self.kind} takes {GATE_ARITY[self.kind]} wires, got {len(self.wires)}")
        if any(w < 0 for w in self.wires):
            raise CircuitError(f"negative wire in {self.kind} {self.wires}")
        if len(set(self.wires)) != len(self.wires):
            raise CircuitError(f"duplicate operand in {self.kind} {self.wires}")
        if self.kind == "cp":
            if self.k < 1:
                raise CircuitError("cp requires k >= 1")
        elif self.k or self.inverted:
            raise CircuitError(f"{self.kind} takes no phase parameters")

    @property
    def classical(self) -> bool:
        return self.kind in CLASSICAL_KINDS

    def inverse(self) -> Gate:
        if self.kind == "cp":
            return Gate("cp", self.wires, self.k, not self.inverted)
        return self

    def remap(self, mapping: Sequence[int]) -> Gate:
        return Gate(self.kind, tuple(mapping[w] for w in self.wires), self.k, self.inverted)


# Convenience constructors used throughout the block builders.
def NOT(t: int) -> Gate:
    return Gate("x", (t,))


def CNOT(c: int, t: int) -> Gate:
    return Gate("cx", (c, t))


def TOFFOLI(c1: int, c2: int, t: int) -> Gate:
    return Gate("ccx", (c1, c2, t))


def SWAP(a: int, b: int) -> Gate:
    return Gate("swap", (a, b))


def FREDKIN(c: int, a: int, b: int) -> Gate:
    return Gate("cswap", (c, a, b))


def H(t: int) -> Gate:
    return Gate("h", (t,))


def CPHASE(k: int, c: int, t: int, inverted: bool = False) -> Gate:
    return Gate("cp", (c, t), k, inverted)


@dataclass(frozen=True)
class Register:
    name: str
    wires: tuple[int, ...]

    def __post_init__(self):
        if not self.name or any(ch.isspace() for ch in self.name):
            raise CircuitError(f"invalid register name {self.name!r}")
        if len(set(self.wires)) != len(self.wires):
            raise CircuitError(f"register {self.name} repeats a wire")

    @property
    def width(self) -> int:
        return len(self.wires)

    def __getitem__(self, i):
        return self.wires[i]

    def __len__(self):
        return len(self.wires)

    def __iter__(self):
        return iter(self.wires)


def _check_registers(width: int, registers: Iterable[Register]) -> tuple[Register, ...]:
    registers = tuple(registers)
    seen: dict[int, str] = {}
    names = set()
    for reg in registers:
        if reg.name in names:
            raise CircuitError(f"duplicate register name {reg.name}")
        names.add(reg.name)
        for w in reg.wires:
            if not 0 <= w < width:
                raise CircuitError(f"register {reg.name} wire {w} outside width {width}")
            if w in seen:
                raise CircuitError(f"registers {seen[w]} and {reg.name} overlap on wire {w}")
            seen[w] = reg.name
    return registers


def _check_gate(width: int, gate: Gate) -> None:
    for w in gate.wires:
        if w >= width:
            raise CircuitError(f"{gate.kind} operand {w} out of range for width {width}")


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple[Gate, ...] = ()
    registers: tuple[Register, ...] = ()

    def __post_init__(self):
        if self.width < 0:
            raise CircuitError("negative width")
        object.__setattr__(self, "registers", _check_registers(self.width, self.registers))
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            _check_gate(self.width, g)

    def __len__(self):
        return len(self.gates)

    def register(self, name: str) -> Register:
        for reg in self.registers:
            if reg.name == name:
                return reg
        raise KeyError(name)

    @property
    def register_map(self) -> dict[str, tuple[int, ...]]:
        return {r.name: r.wires for r in self.registers}

    @property
    def classical(self) -> bool:
        return all(g.classical for g in self.gates)

    def append(self, gate: Gate) -> Circuit:
        _check_gate(self.width, gate)
        return Circuit(self.width, self.gates + (gate,), self.registers)

    def embed(self, width: int, wires: Sequence[int], registers: Iterable[Register] = ()) -> Circuit:
        """Relabel wire ``i`` as ``wires[i]`` inside a wider circuit."""
        if len(wires) != self.width:
            raise CircuitError("wire map length must equal circuit width")
        return Circuit(width, tuple(g.remap(wires) for g in self.gates), tuple(registers))


def new_circuit(width: int, registers: Iterable[Register] | Mapping[str, Sequence[int]] = ()) -> Circuit:
    if isinstance(registers, Mapping):
        registers = [Register(k, tuple(v)) for k, v in registers.items()]
    return Circuit(width, (), tuple(registers))


def append(circuit: Circuit, gate: Gate) -> Circuit:
    return circuit.append(gate)


def compose(first: Circuit, second: Circuit) -> Circuit:
    """Run ``first`` then ``second``; register maps are merged.

    Registers with the same name must agree on their wires.
    """
    if first.width != second.width:
        raise CircuitError(f"width mismatch: {first.width} vs {second.width}")
    regs = {r.name: r for r in first.registers}
    for r in second.registers:
        if r.name in regs and regs[r.name].wires != r.wires:
            raise CircuitError(f"register {r.name} maps to different wires")
        regs.setdefault(r.name, r)
    return Circuit(first.width, first.gates + second.gates, tuple(regs.values()))


def invert(circuit: Circuit) -> Circuit:
    return Circuit(circuit.width, tuple(g.inverse() for g in reversed(circuit.gates)), circuit.registers)


class CircuitBuilder:
    """Mutable gate accumulator; call :meth:`build` to freeze."""

    def __init__(self, width: int = 0, registers: Iterable[Register] = ()):
        self.width = width
        self.registers: list[Register] = list(registers)
        self.gates: list[Gate] = []

    def add_register(self, name: str, size: int) -> Register:
        """Allocate ``size`` fresh wires at the top of the circuit."""
        reg = Register(name, tuple(range(self.width, self.width + size)))
        self.width += size
        self.registers.append(reg)
        return reg

    def append(self, gate: Gate) -> CircuitBuilder:
        _check_gate(self.width, gate)
        self.gates.append(gate)
        return self

    def extend(self, gates: Iterable[Gate]) -> CircuitBuilder:
        for g in gates:
            self.append(g)
        return self

    def x(self, t):
        return self.append(NOT(t))

    def cx(self, c, t):
        return self.append(CNOT(c, t))

    def ccx(self, c1, c2, t):
        return self.append(TOFFOLI(c1, c2, t))

    def swap(self, a, b):
        return self.append(SWAP(a, b))

    def cswap(self, c, a, b):
        return self.append(FREDKIN(c, a, b))

    def h(self, t):
        return self.append(H(t))

    def cp(self, k, c, t, inverted=False):
        return self.append(CPHASE(k, c, t, inverted))

    def xor_const(self, wires: Sequence[int], mask: int) -> CircuitBuilder:
        """NOT every wire whose bit is set in ``mask`` (classical constant load)."""
        for i, w in enumerate(wires):
            if mask >> i & 1:
                self.x(w)
        return self

    def mark(self) -> int:
        return len(self.gates)

    def invert_since(self, mark: int) -> CircuitBuilder:
        """Append the inverse of every gate emitted after ``mark``."""
        self.gates.extend(g.inverse() for g in reversed(self.gates[mark:]))
        return self

    def build(self) -> Circuit:
        return Circuit(self.width, tuple(self.gates), tuple(self.registers))


@dataclass
class ResourceReport:
    block: str
    n: int | None
    width: int
    counts: dict[str, int] = field(default_factory=dict)
    total: int = 0
    depth: int = 0

    def as_dict(self) -> dict:
        return {
            "block": self.block,
            "n": self.n,
            "width": self.width,
            "counts": dict(self.counts),
            "total": self.total,
            "depth": self.depth,
        }


def depth(circuit: Circuit) -> int:
    # greedy earliest-layer scheduling: gates on disjoint wires share a layer
    level = [0] * circuit.width
    best = 0
    for g in circuit.gates:
        layer = 1 + max(level[w] for w in g.wires)
        for w in g.wires:
            level[w] = layer
        best = max(best, layer)
    return best


def resources(circuit: Circuit, block: str = "", n: int | None = None) -> ResourceReport:
    counts = Counter(g.kind for g in circuit.gates)
    return ResourceReport(
        block=block,
        n=n,
        width=circuit.width,
        counts={k: counts[k] for k in GATE_ARITY if counts[k]},
        total=len(circuit.gates),
        depth=depth(circuit),
    )
