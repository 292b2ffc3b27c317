"""Modular arithmetic blocks: restricted modulo, modular add/double/multiply.

Every block assumes the register convention that values below the modulus fit
in ``w - 1`` bits, so the top wire of each register is free headroom for sums
below ``2N`` and for doubling.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .arith import (
    BlockHandle,
    _check_width,
    _need,
    ctrl_sub_scratch,
    emit_adder,
    emit_cmb,
    emit_ctrl_adder,
    emit_ctrl_subtractor,
    emit_double,
    emit_geq,
    geq_scratch,
)
from .circuit import CircuitBuilder, CircuitError


@dataclass(frozen=True)
class ModBlockParams:
    w: int
    classical_N: int | None = None
    classical_A: int | None = None

    def __post_init__(self):
        limit = 1 << (self.w - 1)
        for label, v in (("N", self.classical_N), ("A", self.classical_A)):
            if v is not None and not 0 <= v < limit:
                raise CircuitError(f"classical {label}={v} must fit in {self.w - 1} bits")

    @property
    def classical(self) -> bool:
        return self.classical_N is not None and self.classical_A is not None


@dataclass(frozen=True)
class StageConstant:
    k: int
    value: int
    doubling_flag: int


def stage_constants(a: int, N: int, count: int) -> list[StageConstant]:
    """2**k * a mod N for k < count, with the classically known doubling bit."""
    out = []
    v = a % N
    for k in range(count):
        out.append(StageConstant(k, v, int(2 * v >= N)))
        v = 2 * v % N
    return out


def reduce_scratch(w: int) -> int:
    return max(geq_scratch(w), ctrl_sub_scratch(w))


def emit_mod_reduce(bld: CircuitBuilder, a, n, flag: int, scratch: Sequence[int]) -> None:
    """a <- a mod n for 0 <= a < 2n; flag ^= (a >= n)."""
    z = _need(scratch, reduce_scratch(len(a)), "restricted modulo")
    emit_geq(bld, a, n, flag, z)
    emit_ctrl_subtractor(bld, a, n, flag, z)


def emit_mod_clear(bld: CircuitBuilder, s, b, flag: int, cin: int, ctrl: int | None = None) -> None:
    """flag ^= (b > s), computed as carry(not(s) + b)."""
    for q in s:
        bld.x(q)
    emit_cmb(bld, s, b, flag, cin, ctrl)
    for q in s:
        bld.x(q)


def emit_mod_add(bld: CircuitBuilder, a, b, n, anc: int, scratch: Sequence[int], ctrl: int | None = None) -> None:
    """a <- (a + b*ctrl) mod n with a, b < n; anc returns to 0."""
    z = _need(scratch, reduce_scratch(len(a)), "modular adder")
    if ctrl is None:
        emit_adder(bld, a, b, z[0])
    else:
        emit_ctrl_adder(bld, a, b, ctrl, z[0])
    emit_mod_reduce(bld, a, n, anc, z)
    # (a+b) mod n < b exactly when the reduction fired
    emit_mod_clear(bld, a, b, anc, z[0], ctrl)


def emit_mod_double(
    bld: CircuitBuilder,
    a,
    n,
    anc: int,
    scratch: Sequence[int],
    ctrl: int | None = None,
    clear_bit: int | None = None,
) -> None:
    """a <- 2a mod n (a < n); anc ^= (2a >= n) unless ``clear_bit`` is supplied.

    ``clear_bit`` is the classically known value of 2a >= n; passing it emits
    the NOT (or CNOT from ``ctrl``) that returns anc to zero.
    """
    emit_double(bld, a, ctrl)
    emit_mod_reduce(bld, a, n, anc, scratch)
    if clear_bit:
        if ctrl is None:
            bld.x(anc)
        else:
            bld.cx(ctrl, anc)


def _mul_pass(bld: CircuitBuilder, acc, const, x, n, y: int, anc: int, a: int, N: int, cur: int, stages: int) -> int:
    """acc += a*x mod N over the low ``stages`` bits of x, controlled by y.

    ``const`` holds classical values throughout; the value it is left with
    (2**stages * a mod N) is returned.

    Wire budget: besides the five registers only ``anc`` is spare. The top
    wires of ``n`` and ``x`` are known zero (N, x < 2**(w-1)), and ``const``
    is zeroed by a NOT mask whenever the reduction needs scratch.
    """
    n_top, x_top = n[-1], x[-1]
    bld.xor_const(const, cur ^ a)
    cur = a
    for j in range(stages):
        bld.ccx(y, x[j], n_top)
        emit_ctrl_adder(bld, acc, const, n_top, anc)
        bld.ccx(y, x[j], n_top)
        bld.xor_const(const, cur)
        emit_mod_reduce(bld, acc, n, anc, [*const, x_top])
        bld.xor_const(const, cur)
        bld.ccx(y, x[j], n_top)
        emit_mod_clear(bld, acc, const, anc, x_top, n_top)
        bld.ccx(y, x[j], n_top)
        nxt = 2 * cur % N
        bld.xor_const(const, cur ^ nxt)
        cur = nxt
    return cur


def emit_ctrl_mul_mod_const(
    bld: CircuitBuilder, acc, const, x, n, y: int, anc: int, a: int, N: int, const_value: int
) -> int:
    """x <- a*x mod N when y is set; acc and anc zero in and out.

    ``const`` must hold ``const_value`` on entry; the value it holds on exit is
    returned (a**-1 mod N). ``n`` must hold N.

    x < N < 2**(w-1) means the top bit of x is always clear, so each
    accumulation chain has w - 1 stages, one per bit of an n-bit number.
    """
    if N % 2 == 0 or N < 3:
        raise CircuitError(f"modulus must be odd and >= 3, got {N}")
    if gcd(a, N) != 1:
        raise CircuitError(f"gcd({a}, {N}) != 1")
    if N >> (len(x) - 1):
        raise CircuitError(f"N={N} does not fit in {len(x) - 1} bits")
    a %= N
    a_inv = pow(a, -1, N)
    stages = len(x) - 1
    cur = _mul_pass(bld, acc, const, x, n, y, anc, a, N, const_value, stages)
    for p, q in zip(acc, x):
        bld.cswap(y, p, q)
    # uncompute acc (now holding the old x) by running the a**-1 pass backwards
    mark = bld.mark()
    end = _mul_pass(bld, acc, const, x, n, y, anc, a_inv, N, a_inv, stages)
    undo = bld.gates[mark:]
    del bld.gates[mark:]
    bld.xor_const(const, cur ^ end)
    bld.extend(g.inverse() for g in reversed(undo))
    return a_inv


# --- standalone builders ------------------------------------------------------

def _check_mod_width(w: int) -> None:
    _check_width(w, 2)


def build_mod_reduce(w: int) -> BlockHandle:
    _check_mod_width(w)
    bld = CircuitBuilder()
    a = bld.add_register("A", w)
    n = bld.add_register("N", w)
    flag = bld.add_register("flag", 1)
    z = bld.add_register("ANC", reduce_scratch(w))
    emit_mod_reduce(bld, a, n, flag[0], z.wires)
    return BlockHandle("mod_reduce", bld.build(), {"w": w})


def _build_mod_add(w: int, controlled: bool) -> BlockHandle:
    _check_mod_width(w)
    bld = CircuitBuilder()
    a = bld.add_register("A", w)
    b = bld.add_register("B", w)
    n = bld.add_register("N", w)
    x = bld.add_register("x", 1) if controlled else None
    anc = bld.add_register("anc", 1)
    z = bld.add_register("ANC", reduce_scratch(w))
    emit_mod_add(bld, a, b, n, anc[0], z.wires, x[0] if x else None)
    return BlockHandle("ctrl_mod_add" if controlled else "mod_add", bld.build(), {"w": w})


def build_mod_add(w: int) -> BlockHandle:
    return _build_mod_add(w, False)


def build_ctrl_mod_add(w: int) -> BlockHandle:
    return _build_mod_add(w, True)


def _build_mod_double(w: int, controlled: bool, known_value: int | None, known_N: int | None) -> BlockHandle:
    _check_mod_width(w)
    clear_bit = None
    if known_value is not None:
        if known_N is None:
            raise CircuitError("clearing the doubling ancilla needs the classical modulus too")
        clear_bit = int(2 * known_value >= known_N)
    bld = CircuitBuilder()
    a = bld.add_register("A", w)
    n = bld.add_register("N", w)
    x = bld.add_register("x", 1) if controlled else None
    anc = bld.add_register("anc", 1)
    z = bld.add_register("ANC", reduce_scratch(w))
    emit_mod_double(bld, a, n, anc[0], z.wires, x[0] if x else None, clear_bit)
    name = "ctrl_mod_double" if controlled else "mod_double"
    return BlockHandle(name, bld.build(), {"w": w, "known_value": known_value, "known_N": known_N})


def build_mod_double(w: int, known_value: int | None = None, known_N: int | None = None) -> BlockHandle:
    return _build_mod_double(w, False, known_value, known_N)


def build_ctrl_mod_double(w: int, known_value: int | None = None, known_N: int | None = None) -> BlockHandle:
    return _build_mod_double(w, True, known_value, known_N)


def build_mul_mod_basic(w: int, params: ModBlockParams | None = None) -> BlockHandle:
    """acc <- A*X mod N, A <- 2**w A mod N, over ``w`` add/double stages.

    With classical A and N every doubling bit is known at build time, so all
    doublers share one ancilla that is cleared by a NOT after each stage;
    otherwise the register ``dbl`` keeps one uncleared bit per stage.
    """
    _check_mod_width(w)
    params = params or ModBlockParams(w)
    if params.w != w:
        raise CircuitError("params width does not match w")
    consts = stage_constants(params.classical_A, params.classical_N, w) if params.classical else None
    bld = CircuitBuilder()
    acc = bld.add_register("acc", w)
    a = bld.add_register("A", w)
    x = bld.add_register("X", w)
    n = bld.add_register("N", w)
    anc = bld.add_register("anc", 1)
    dbl = bld.add_register("dbl", 1 if consts else w)
    z = bld.add_register("ANC", reduce_scratch(w))
    for j in range(w):
        emit_mod_add(bld, acc, a, n, anc[0], z.wires, ctrl=x[j])
        if consts:
            emit_mod_double(bld, a, n, dbl[0], z.wires, clear_bit=consts[j].doubling_flag)
        else:
            emit_mod_double(bld, a, n, dbl[j], z.wires)
    info = {"w": w, "classical_N": params.classical_N, "classical_A": params.classical_A}
    return BlockHandle("mul_mod_basic", bld.build(), info)


def build_ctrl_mul_mod_const(w: int, a: int, N: int) -> BlockHandle:
    """Clean controlled multiply by a classical constant: X <- a*X mod N if y.

    Registers ``A`` and ``N`` must hold ``a`` and ``N`` on entry and are
    returned unchanged; ``acc`` and ``anc`` are zero in and out. The block
    uses exactly 4w + 2 wires.
    """
    _check_mod_width(w)
    bld = CircuitBuilder()
    acc = bld.add_register("acc", w)
    const = bld.add_register("A", w)
    x = bld.add_register("X", w)
    n = bld.add_register("N", w)
    y = bld.add_register("y", 1)
    anc = bld.add_register("anc", 1)
    left = emit_ctrl_mul_mod_const(bld, acc, const, x, n, y[0], anc[0], a, N, a % N)
    bld.xor_const(const, left ^ (a % N))
    return BlockHandle("ctrl_mul_mod_const", bld.build(), {"w": w, "a": a, "N": N})


def unknown_A_qubit_formula(n: int) -> int:
    """Qubits for modular exponentiation when A is not classically known."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return 3 * n * n + 6 * n + 6
