"""QNET v1 netlist reader and writer.

Format (ASCII, one statement per line)::

    qnet 1 <width>
    reg <NAME> <wire> ...        # LSB first
    x t | cx c t | ccx c1 c2 t | swap a b | cswap c a b | h t | cp k c t | icp k c t

``#`` starts a comment; blank lines are ignored.
"""
from __future__ import annotations

from typing import Iterable

from .circuit import Circuit, CircuitError, Gate, Register

_MNEMONIC = {"x": 1, "cx": 2, "ccx": 3, "swap": 2, "cswap": 3, "h": 1}


class NetlistError(ValueError):
    def __init__(self, lineno: int, token: str, message: str):
        super().__init__(f"line {lineno}: {message} (at {token!r})")
        self.lineno = lineno
        self.token = token


def _gate_line(g: Gate) -> str:
    if g.kind == "cp":
        op = "icp" if g.inverted else "cp"
        return f"{op} {g.k} {g.wires[0]} {g.wires[1]}"
    return " ".join([g.kind, *map(str, g.wires)])


def emit_lines(circuit: Circuit, comments: Iterable[str] = ()) -> list[str]:
    lines = [f"qnet 1 {circuit.width}"]
    lines += [f"# {c}" for c in comments]
    for reg in circuit.registers:
        lines.append(" ".join(["reg", reg.name, *map(str, reg.wires)]))
    lines += [_gate_line(g) for g in circuit.gates]
    return lines


def emit_netlist(circuit: Circuit, comments: Iterable[str] = ()) -> str:
    return "\n".join(emit_lines(circuit, comments)) + "\n"


def _int(tok: str, lineno: int) -> int:
    if not tok.isdigit():
        raise NetlistError(lineno, tok, "expected a decimal non-negative integer")
    return int(tok)


def parse_netlist(text: str) -> Circuit:
    width = None
    registers: list[Register] = []
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        head = tokens[0]
        if width is None:
            if head != "qnet":
                raise NetlistError(lineno, head, "expected 'qnet' header")
            if len(tokens) != 3 or tokens[1] != "1":
                raise NetlistError(lineno, " ".join(tokens[1:]), "header must be 'qnet 1 <width>'")
            width = _int(tokens[2], lineno)
            continue
        try:
            if head == "reg":
                if len(tokens) < 2:
                    raise NetlistError(lineno, head, "register needs a name")
                wires = tuple(_int(t, lineno) for t in tokens[2:])
                registers.append(Register(tokens[1], wires))
            elif head in _MNEMONIC:
                args = tokens[1:]
                if len(args) != _MNEMONIC[head]:
                    raise NetlistError(lineno, head, f"{head} takes {_MNEMONIC[head]} wires")
                gates.append(Gate(head, tuple(_int(t, lineno) for t in args)))
            elif head in ("cp", "icp"):
                if len(tokens) != 4:
                    raise NetlistError(lineno, head, f"{head} takes k and two wires")
                k, c, t = (_int(tok, lineno) for tok in tokens[1:])
                gates.append(Gate("cp", (c, t), k, head == "icp"))
            else:
                raise NetlistError(lineno, head, "unknown statement")
            for w in (registers[-1].wires if head == "reg" else gates[-1].wires):
                if w >= width:
                    raise NetlistError(lineno, str(w), f"wire out of range for width {width}")
        except CircuitError as exc:
            raise NetlistError(lineno, head, str(exc)) from None
    if width is None:
        raise NetlistError(0, "", "missing 'qnet' header")
    try:
        return Circuit(width, tuple(gates), tuple(registers))
    except CircuitError as exc:
        raise NetlistError(0, "", str(exc)) from None
