"""Non-modular reversible arithmetic built from the CDKM ripple-carry adder.

Two layers live here:

* ``emit_*`` functions append gates for one block onto a
  :class:`~revshor.circuit.CircuitBuilder`, acting on caller-supplied wires.
  Any extra wire the block needs is taken from ``scratch``, which must hold
  zeros on entry and is returned to zero.
* ``build_*`` functions allocate a standalone circuit with named registers and
  return a :class:`BlockHandle`.

Register convention: ``reg[0]`` is the least significant bit.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .circuit import CNOT, TOFFOLI, Circuit, CircuitBuilder, CircuitError, Gate

# Registers that only carry internal zero-in/zero-out wires.
SCRATCH_NAMES = frozenset({"ANC", "cin"})


@dataclass(frozen=True)
class BlockHandle:
    name: str
    circuit: Circuit
    params: dict = field(default_factory=dict)

    @property
    def roles(self) -> dict[str, tuple[int, ...]]:
        return self.circuit.register_map

    def __getitem__(self, role: str) -> tuple[int, ...]:
        return self.circuit.register(role).wires


def _distinct(*wires):
    if len(set(wires)) != len(wires):
        raise CircuitError(f"gadget wires must be distinct, got {wires}")


def _need(scratch: Sequence[int], count: int, block: str) -> Sequence[int]:
    if len(scratch) < count:
        raise CircuitError(f"{block} needs {count} scratch wires, got {len(scratch)}")
    return scratch[:count]


def _check_width(w: int, minimum: int = 1) -> None:
    if w < minimum:
        raise CircuitError(f"register width must be >= {minimum}, got {w}")


# --- three-wire gadgets -------------------------------------------------------

def maj_gadget(c: int, b: int, a: int) -> list[Gate]:
    """(c, b, a) -> (c^a, a^b, majority(a, b, c))."""
    _distinct(c, b, a)
    return [CNOT(a, b), CNOT(a, c), TOFFOLI(c, b, a)]


def ums_gadget(c: int, b: int, a: int) -> list[Gate]:
    """Undo :func:`maj_gadget` on c and a, leaving the sum bit on b."""
    _distinct(c, b, a)
    return [TOFFOLI(c, b, a), CNOT(a, c), CNOT(c, b)]


def umj_gadget(c: int, b: int, a: int) -> list[Gate]:
    """Exact inverse of :func:`maj_gadget`."""
    _distinct(c, b, a)
    return [TOFFOLI(c, b, a), CNOT(a, c), CNOT(a, b)]


def cmj_gadget(c: int, b: int, a: int, x: int) -> list[Gate]:
    _distinct(c, b, a, x)
    return [TOFFOLI(a, x, b), CNOT(a, c), TOFFOLI(c, b, a)]


def cus_gadget(c: int, b: int, a: int, x: int) -> list[Gate]:
    _distinct(c, b, a, x)
    return [TOFFOLI(c, b, a), CNOT(a, c), TOFFOLI(c, x, b)]


def _carry_chain(addend: Sequence[int], cin: int) -> list[int]:
    # carry into position i lives on cin for i == 0, else on addend[i-1]
    return [cin, *addend[:-1]]


# --- emitters -----------------------------------------------------------------

def emit_adder(bld: CircuitBuilder, target, addend, cin: int, carry: int | None = None) -> None:
    """target <- target + addend (mod 2**w); addend preserved; ``carry`` ^= overflow."""
    if len(target) != len(addend):
        raise CircuitError("adder registers must have equal width")
    chain = _carry_chain(addend, cin)
    for i in range(len(target)):
        bld.extend(maj_gadget(chain[i], target[i], addend[i]))
    if carry is not None:
        bld.cx(addend[-1], carry)
    for i in reversed(range(len(target))):
        bld.extend(ums_gadget(chain[i], target[i], addend[i]))


def emit_ctrl_adder(bld: CircuitBuilder, target, addend, ctrl: int, cin: int) -> None:
    """target <- target + addend * ctrl (mod 2**w)."""
    if len(target) != len(addend):
        raise CircuitError("adder registers must have equal width")
    chain = _carry_chain(addend, cin)
    for i in range(len(target)):
        bld.extend(cmj_gadget(chain[i], target[i], addend[i], ctrl))
    for i in reversed(range(len(target))):
        bld.extend(cus_gadget(chain[i], target[i], addend[i], ctrl))


def emit_cmb(bld: CircuitBuilder, first, second, flag: int, cin: int, ctrl: int | None = None) -> None:
    """flag ^= carry(first + second); both operands restored.

    With ``ctrl`` the flag flip itself is conditioned on that wire.
    """
    if len(first) != len(second):
        raise CircuitError("comparator registers must have equal width")
    chain = _carry_chain(first, cin)
    for i in range(len(first)):
        bld.extend(maj_gadget(chain[i], second[i], first[i]))
    if ctrl is None:
        bld.cx(first[-1], flag)
    else:
        bld.ccx(ctrl, first[-1], flag)
    for i in reversed(range(len(first))):
        bld.extend(umj_gadget(chain[i], second[i], first[i]))


def inc_scratch(w: int) -> int:
    return max(w - 1, 0)


def emit_increment(bld: CircuitBuilder, reg, scratch: Sequence[int]) -> None:
    """reg <- reg + 1 (mod 2**w).

    This is the CDKM adder with the addend fixed to 1 and carry-in 0, every
    gate whose operands are constants folded away. ``scratch[i]`` carries
    c_{i+1}; the top carry is never materialised.
    """
    w = len(reg)
    if w == 1:
        bld.x(reg[0])
        return
    z = _need(scratch, w - 1, "increment")
    # lowest stage: c1 = b0, s0 = not b0
    bld.cx(reg[0], z[0])
    bld.x(reg[0])
    for i in range(1, w - 1):
        bld.ccx(z[i - 1], reg[i], z[i])
    bld.cx(z[w - 2], reg[w - 1])
    for i in range(w - 2, 0, -1):
        bld.ccx(z[i - 1], reg[i], z[i])
        bld.cx(z[i - 1], reg[i])
    # z0 holds b0 and reg0 holds not b0
    bld.cx(reg[0], z[0])
    bld.x(z[0])


def dec_scratch(w: int) -> int:
    return w + 1


def emit_decrement(bld: CircuitBuilder, reg, scratch: Sequence[int]) -> None:
    """reg <- reg - 1 (mod 2**w): a CDKM adder whose addend is all ones.

    The addend register is loaded from zero scratch; with every a_i == 1 the
    MAJ block's CNOTs from a_i become plain NOTs.
    """
    w = len(reg)
    z = _need(scratch, w + 1, "decrement")
    cin, ones = z[0], z[1:]
    chain = [cin, *ones[:-1]]
    for q in ones:
        bld.x(q)
    for i in range(w):
        bld.x(reg[i])
        bld.x(chain[i])
        bld.ccx(chain[i], reg[i], ones[i])
    for i in reversed(range(w)):
        bld.extend(ums_gadget(chain[i], reg[i], ones[i]))
    for q in ones:
        bld.x(q)


def sub_scratch(w: int) -> int:
    return w + 1


def emit_subtractor(bld: CircuitBuilder, a, b, scratch: Sequence[int]) -> None:
    """a <- a - b (mod 2**w) via two's complement of b; b restored."""
    w = len(a)
    z = _need(scratch, sub_scratch(w), "subtractor")
    for q in b:
        bld.x(q)
    emit_increment(bld, b, z)
    emit_adder(bld, a, b, z[0])
    emit_decrement(bld, b, z)
    for q in b:
        bld.x(q)


def ctrl_sub_scratch(w: int) -> int:
    return w


def emit_ctrl_subtractor(bld: CircuitBuilder, a, b, ctrl: int, scratch: Sequence[int]) -> None:
    """a <- a - b*ctrl (mod 2**w); b and ctrl restored.

    The conditional +1 is an ordinary adder whose addend is the control wire
    padded with zeros; its mirror image undoes it after the controlled add.
    """
    w = len(a)
    z = _need(scratch, ctrl_sub_scratch(w), "controlled subtractor")
    cin, pad = z[0], list(z[1:w])
    one = [ctrl, *pad]
    for q in b:
        bld.cx(ctrl, q)
    mark = bld.mark()
    emit_adder(bld, b, one, cin)
    plus_one = bld.gates[mark:]
    emit_ctrl_adder(bld, a, b, ctrl, cin)
    bld.extend(g.inverse() for g in reversed(plus_one))
    for q in b:
        bld.cx(ctrl, q)


def geq_scratch(w: int) -> int:
    return w + 1


def emit_geq(bld: CircuitBuilder, a, b, flag: int, scratch: Sequence[int]) -> None:
    """flag ^= (a >= b); requires a <= 2**w - 2 so a + 1 cannot wrap.

    carry((a + 1) + not(b)) is set exactly when a >= b.
    """
    w = len(a)
    z = _need(scratch, geq_scratch(w), "comparator")
    emit_increment(bld, a, z)
    for q in b:
        bld.x(q)
    emit_cmb(bld, a, b, flag, z[0])
    for q in b:
        bld.x(q)
    emit_decrement(bld, a, z)


def emit_double(bld: CircuitBuilder, reg, ctrl: int | None = None) -> None:
    """reg <- 2*reg, assuming the top wire holds 0 (swap cascade)."""
    top = reg[-1]
    for q in reg[:-1]:
        if ctrl is None:
            bld.swap(q, top)
        else:
            bld.cswap(ctrl, q, top)


# --- standalone builders ------------------------------------------------------

def build_adder(w: int, with_carry: bool = True) -> BlockHandle:
    _check_width(w)
    bld = CircuitBuilder()
    a = bld.add_register("A", w)
    b = bld.add_register("B", w)
    cin = bld.add_register("cin", 1)
    carry = bld.add_register("carry", 1) if with_carry else None
    emit_adder(bld, b, a, cin[0], carry[0] if carry else None)
    return BlockHandle("adder", bld.build(), {"w": w, "with_carry": with_carry})


def build_ctrl_adder(w: int) -> BlockHandle:
    _check_width(w)
    bld = CircuitBuilder()
    a = bld.add_register("A", w)
    b = bld.add_register("B", w)
    x = bld.add_register("x", 1)
    cin = bld.add_register("cin", 1)
    emit_ctrl_adder(bld, b, a, x[0], cin[0])
    return BlockHandle("ctrl_adder", bld.build(), {"w": w})


def build_increment(w: int) -> BlockHandle:
    _check_width(w)
    bld = CircuitBuilder()
    b = bld.add_register("B", w)
    anc = bld.add_register("ANC", inc_scratch(w)) if w > 1 else ()
    emit_increment(bld, b, tuple(anc))
    return BlockHandle("inc", bld.build(), {"w": w})


def build_decrement(w: int) -> BlockHandle:
    _check_width(w)
    bld = CircuitBuilder()
    b = bld.add_register("B", w)
    anc = bld.add_register("ANC", dec_scratch(w))
    emit_decrement(bld, b, anc.wires)
    return BlockHandle("dec", bld.build(), {"w": w})


def build_subtractor(w: int) -> BlockHandle:
    _check_width(w)
    bld = CircuitBuilder()
    a = bld.add_register("A", w)
    b = bld.add_register("B", w)
    anc = bld.add_register("ANC", sub_scratch(w))
    emit_subtractor(bld, a, b, anc.wires)
    return BlockHandle("sub", bld.build(), {"w": w})


def build_ctrl_subtractor(w: int) -> BlockHandle:
    _check_width(w)
    bld = CircuitBuilder()
    a = bld.add_register("A", w)
    b = bld.add_register("B", w)
    x = bld.add_register("x", 1)
    anc = bld.add_register("ANC", ctrl_sub_scratch(w))
    emit_ctrl_subtractor(bld, a, b, x[0], anc.wires)
    return BlockHandle("ctrl_sub", bld.build(), {"w": w})


def build_cmb(w: int) -> BlockHandle:
    _check_width(w)
    bld = CircuitBuilder()
    a = bld.add_register("A", w)
    b = bld.add_register("B", w)
    flag = bld.add_register("flag", 1)
    cin = bld.add_register("cin", 1)
    emit_cmb(bld, a, b, flag[0], cin[0])
    return BlockHandle("cmb", bld.build(), {"w": w})


def build_geq(w: int) -> BlockHandle:
    _check_width(w)
    bld = CircuitBuilder()
    a = bld.add_register("A", w)
    b = bld.add_register("B", w)
    flag = bld.add_register("flag", 1)
    anc = bld.add_register("ANC", geq_scratch(w))
    emit_geq(bld, a, b, flag[0], anc.wires)
    return BlockHandle("geq", bld.build(), {"w": w})


def build_double(w: int) -> BlockHandle:
    _check_width(w, 2)
    bld = CircuitBuilder()
    a = bld.add_register("A", w)
    emit_double(bld, a)
    return BlockHandle("double", bld.build(), {"w": w})


def build_ctrl_double(w: int) -> BlockHandle:
    _check_width(w, 2)
    bld = CircuitBuilder()
    a = bld.add_register("A", w)
    x = bld.add_register("x", 1)
    emit_double(bld, a, ctrl=x[0])
    return BlockHandle("ctrl_double", bld.build(), {"w": w})
