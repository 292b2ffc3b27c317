"""Named block registry: builders, preconditions, integer oracles and the
exhaustive input sets used by ``run`` and ``verify``.

Blocks that can take classically known data (``mod_double``,
``ctrl_mod_double``, ``mul_mod_basic``, ``ctrl_mul_mod_const``, ``modexp``)
read it from the ``params`` mapping under the keys ``A`` and ``N``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Callable, Iterator

from . import arith, modular
from .arith import SCRATCH_NAMES, BlockHandle
from .circuit import CircuitError
from .shor import ShorParams, build_modexp_const

# registers that must be 0 on entry; the circuits cannot check this themselves
ZERO_IN = frozenset({"ANC", "cin", "anc", "acc", "dbl"})

Case = tuple[dict, dict]


class PreconditionError(ValueError):
    """Inputs violate a block's documented precondition."""


def _require(ok: bool, message: str) -> None:
    if not ok:
        raise PreconditionError(message)


@dataclass(frozen=True)
class BlockSpec:
    name: str
    inputs: tuple[str, ...]
    build: Callable[[int, dict], BlockHandle]
    oracle: Callable[[int, dict, dict], dict]
    check: Callable[[int, dict, dict], None]
    cases: Callable[[int, dict], Iterator[Case]]
    min_w: int = 1
    params: tuple[str, ...] = ()


def _classical(p: dict) -> bool:
    return "A" in p and "N" in p


def _grid(**ranges) -> Iterator[dict]:
    keys = list(ranges)
    for combo in itertools.product(*(ranges[k] for k in keys)):
        yield dict(zip(keys, combo))


def _plain(cases) -> Iterator[Case]:
    for c in cases:
        yield {}, c


def _moduli(w):
    return range(2, 1 << (w - 1))


def _check_modulus(w, N, block):
    _require(N >= 2, f"degenerate modulus N={N} for {block}; need N >= 2")
    _require(N < 1 << (w - 1), f"N must satisfy N < 2^{w - 1} for {block}")


def _nothing(w, i, p):
    return None


def _full(*names, ctrl=False, extra=None):
    def cases(w, p):
        ranges = {k: range(1 << w) for k in names}
        if ctrl:
            ranges["x"] = (0, 1)
        if extra:
            ranges.update(extra)
        return _plain(_grid(**ranges))
    return cases


# --- arithmetic oracles --------------------------------------------------------

def _adder_oracle(w, i, p):
    s = i["A"] + i["B"]
    out = {"B": s % (1 << w)}
    if p.get("with_carry", True):
        out["carry"] = i.get("carry", 0) ^ (s >> w)
    return out


def _geq_check(w, i, p):
    _require(i["A"] <= (1 << w) - 2, f"A > 2^{w}-2 for geq (A + 1 would wrap)")


def _double_check(w, i, p):
    _require(i["A"] < 1 << (w - 1), f"A >= 2^{w - 1} for double (top wire must be 0)")


def _double_cases(ctrl):
    def cases(w, p):
        ranges = {"A": range(1 << (w - 1))}
        if ctrl:
            ranges["x"] = (0, 1)
        return _plain(_grid(**ranges))
    return cases


# --- modular oracles ------------------------------------------------------------

def _reduce_check(w, i, p):
    _check_modulus(w, i["N"], "mod_reduce")
    _require(i["A"] < 2 * i["N"], "A >= 2N for mod_reduce")


def _reduce_cases(w, p):
    for N in _moduli(w):
        for A in range(2 * N):
            yield {}, {"A": A, "N": N}


def _mod_add_check(w, i, p):
    _check_modulus(w, i["N"], "mod_add")
    _require(i["A"] < i["N"] and i["B"] < i["N"], "A >= N or B >= N for mod_add")


def _with_x(d, x):
    if x is not None:
        d["x"] = x
    return d


def _mod_add_cases(ctrl):
    def cases(w, p):
        for N in _moduli(w):
            for A, B in itertools.product(range(N), repeat=2):
                for x in ((0, 1) if ctrl else (None,)):
                    yield {}, _with_x({"A": A, "B": B, "N": N}, x)
    return cases


def _known_match(i, p, block):
    if _classical(p):
        _require(i["A"] == p["A"] and i["N"] == p["N"],
                 f"A/N inputs differ from the classically known values for {block}")


def _mod_double_check(w, i, p):
    _check_modulus(w, i["N"], "mod_double")
    _require(i["A"] < i["N"], "A >= N for mod_double")
    _known_match(i, p, "mod_double")


def _mod_double_oracle(w, i, p):
    x = i.get("x", 1)
    A, N = i["A"], i["N"]
    out = {"A": 2 * A % N if x else A}
    if not _classical(p):
        out["anc"] = int(bool(x) and 2 * A >= N)
    return out


def _mod_double_cases(ctrl):
    def cases(w, p):
        for known in (False, True):
            for N in _moduli(w):
                for A in range(N):
                    for x in ((0, 1) if ctrl else (None,)):
                        yield ({"A": A, "N": N} if known else {}), _with_x({"A": A, "N": N}, x)
    return cases


def _mod_double_build(ctrl):
    build = modular.build_ctrl_mod_double if ctrl else modular.build_mod_double
    return lambda w, p: build(w, p.get("A"), p.get("N"))


def _mul_basic_check(w, i, p):
    _check_modulus(w, i["N"], "mul_mod_basic")
    _require(i["A"] < i["N"], "A >= N for mul_mod_basic")
    _known_match(i, p, "mul_mod_basic")


def _mul_basic_oracle(w, i, p):
    A, X, N = i["A"], i["X"], i["N"]
    out = {"acc": A * X % N, "A": (A << w) % N}
    if not _classical(p):
        bits, v = 0, A
        for k in range(w):
            bits |= int(2 * v >= N) << k
            v = 2 * v % N
        out["dbl"] = bits
    return out


def _mul_basic_cases(w, p):
    for known in (False, True):
        for N in _moduli(w):
            for A in range(N):
                for X in range(1 << w):
                    yield ({"A": A, "N": N} if known else {}), {"A": A, "X": X, "N": N}


def _mul_basic_build(w, p):
    mp = modular.ModBlockParams(w, p["N"], p["A"]) if _classical(p) else None
    return modular.build_mul_mod_basic(w, mp)


def _cmm_check(w, i, p):
    _require(_classical(p), "ctrl_mul_mod_const needs classical A and N")
    a, N = p["A"], p["N"]
    _require(N % 2 == 1 and 3 <= N < 1 << (w - 1),
             f"N must be odd with 3 <= N < 2^{w - 1} for ctrl_mul_mod_const")
    _require(gcd(a, N) == 1, "gcd(A, N) != 1 for ctrl_mul_mod_const")
    _require(i["X"] < N, "X >= N for ctrl_mul_mod_const")
    _require(i["A"] == a % N and i["N"] == N, "A/N registers must hold the classical A and N")


def _cmm_cases(w, p):
    for N in range(3, 1 << (w - 1), 2):
        for a in range(1, N):
            if gcd(a, N) != 1:
                continue
            for X in range(N):
                for y in (0, 1):
                    yield {"A": a, "N": N}, {"A": a, "X": X, "N": N, "y": y}


def _modexp_check(w, i, p):
    _require(_classical(p), "modexp needs N and A")
    try:
        ShorParams(p["N"], p["A"])
    except CircuitError as exc:
        raise PreconditionError(str(exc)) from None
    extra = sorted(k for k, v in i.items() if k != "Y" and v)
    _require(not extra, "modexp loads N, A and P itself; only Y may be set")


def _modexp_build(w, p):
    circuit, _ = build_modexp_const(ShorParams(p["N"], p["A"]), p.get("exp_bits"))
    return BlockHandle("modexp", circuit, dict(p))


def _modexp_oracle(w, i, p):
    N, A = p["N"], p["A"]
    _, layout = build_modexp_const(ShorParams(N, A), p.get("exp_bits"))
    return {"P": pow(A, i["Y"], N), "N": N, "A": layout.final_constant}


def _modexp_cases(w, p):
    _, layout = build_modexp_const(ShorParams(p["N"], p["A"]), p.get("exp_bits"))
    for y in range(1 << layout.exp_bits):
        yield dict(p), {"Y": y}


BLOCKS: dict[str, BlockSpec] = {}


def _add(spec: BlockSpec) -> None:
    BLOCKS[spec.name] = spec


_add(BlockSpec("adder", ("A", "B"), lambda w, p: arith.build_adder(w, p.get("with_carry", True)),
               _adder_oracle, _nothing, _full("A", "B")))
_add(BlockSpec("ctrl_adder", ("A", "B", "x"), lambda w, p: arith.build_ctrl_adder(w),
               lambda w, i, p: {"B": (i["B"] + i["A"] * i["x"]) % (1 << w)},
               _nothing, _full("A", "B", ctrl=True)))
_add(BlockSpec("inc", ("B",), lambda w, p: arith.build_increment(w),
               lambda w, i, p: {"B": (i["B"] + 1) % (1 << w)}, _nothing, _full("B")))
_add(BlockSpec("dec", ("B",), lambda w, p: arith.build_decrement(w),
               lambda w, i, p: {"B": (i["B"] - 1) % (1 << w)}, _nothing, _full("B")))
_add(BlockSpec("sub", ("A", "B"), lambda w, p: arith.build_subtractor(w),
               lambda w, i, p: {"A": (i["A"] - i["B"]) % (1 << w)}, _nothing, _full("A", "B")))
_add(BlockSpec("ctrl_sub", ("A", "B", "x"), lambda w, p: arith.build_ctrl_subtractor(w),
               lambda w, i, p: {"A": (i["A"] - i["B"] * i["x"]) % (1 << w)},
               _nothing, _full("A", "B", ctrl=True)))
_add(BlockSpec("cmb", ("A", "B", "flag"), lambda w, p: arith.build_cmb(w),
               lambda w, i, p: {"flag": i["flag"] ^ ((i["A"] + i["B"]) >> w)},
               _nothing, _full("A", "B", extra={"flag": (0, 1)})))
_add(BlockSpec("geq", ("A", "B", "flag"), lambda w, p: arith.build_geq(w),
               lambda w, i, p: {"flag": i["flag"] ^ int(i["A"] >= i["B"])},
               _geq_check,
               lambda w, p: _plain(_grid(A=range((1 << w) - 1), B=range(1 << w), flag=(0, 1)))))
_add(BlockSpec("double", ("A",), lambda w, p: arith.build_double(w),
               lambda w, i, p: {"A": 2 * i["A"]}, _double_check, _double_cases(False), min_w=2))
_add(BlockSpec("ctrl_double", ("A", "x"), lambda w, p: arith.build_ctrl_double(w),
               lambda w, i, p: {"A": i["A"] << i["x"]}, _double_check, _double_cases(True), min_w=2))
_add(BlockSpec("mod_reduce", ("A", "N"), lambda w, p: modular.build_mod_reduce(w),
               lambda w, i, p: {"A": i["A"] % i["N"], "flag": int(i["A"] >= i["N"])},
               _reduce_check, _reduce_cases, min_w=2))
_add(BlockSpec("mod_add", ("A", "B", "N"), lambda w, p: modular.build_mod_add(w),
               lambda w, i, p: {"A": (i["A"] + i["B"]) % i["N"]},
               _mod_add_check, _mod_add_cases(False), min_w=2))
_add(BlockSpec("ctrl_mod_add", ("A", "B", "N", "x"), lambda w, p: modular.build_ctrl_mod_add(w),
               lambda w, i, p: {"A": (i["A"] + i["B"] * i["x"]) % i["N"]},
               _mod_add_check, _mod_add_cases(True), min_w=2))
_add(BlockSpec("mod_double", ("A", "N"), _mod_double_build(False), _mod_double_oracle,
               _mod_double_check, _mod_double_cases(False), min_w=2, params=("A", "N")))
_add(BlockSpec("ctrl_mod_double", ("A", "N", "x"), _mod_double_build(True), _mod_double_oracle,
               _mod_double_check, _mod_double_cases(True), min_w=2, params=("A", "N")))
_add(BlockSpec("mul_mod_basic", ("A", "X", "N"), _mul_basic_build, _mul_basic_oracle,
               _mul_basic_check, _mul_basic_cases, min_w=2, params=("A", "N")))
_add(BlockSpec("ctrl_mul_mod_const", ("A", "X", "N", "y"),
               lambda w, p: modular.build_ctrl_mul_mod_const(w, p["A"], p["N"]),
               lambda w, i, p: {"X": p["A"] * i["X"] % p["N"] if i["y"] else i["X"]},
               _cmm_check, _cmm_cases, min_w=3, params=("A", "N")))
_add(BlockSpec("modexp", ("Y",), _modexp_build, _modexp_oracle, _modexp_check, _modexp_cases,
               params=("A", "N", "exp_bits")))

ARITH_BLOCKS = ("adder", "ctrl_adder", "inc", "dec", "sub", "ctrl_sub", "geq", "cmb", "double", "ctrl_double")
MOD_BLOCKS = ("mod_reduce", "mod_add", "ctrl_mod_add", "mod_double", "ctrl_mod_double",
              "mul_mod_basic", "ctrl_mul_mod_const")
QUANTUM_BLOCKS = ("hadamard", "iqft", "pipeline")


def get_block(name: str) -> BlockSpec:
    try:
        return BLOCKS[name]
    except KeyError:
        known = ", ".join([*BLOCKS, *QUANTUM_BLOCKS])
        raise KeyError(f"unknown block {name!r}; known: {known}") from None


def build_block(name: str, w: int, params: dict | None = None) -> BlockHandle:
    spec = get_block(name)
    params = params or {}
    if name != "modexp" and w < spec.min_w:
        raise CircuitError(f"{name} needs w >= {spec.min_w}")
    if name == "ctrl_mul_mod_const" and not _classical(params):
        raise PreconditionError("ctrl_mul_mod_const needs classical A and N")
    if name == "modexp":
        _modexp_check(w, {}, params)
    return spec.build(w, params)


def complete_inputs(spec: BlockSpec, w: int, handle: BlockHandle, inputs: dict, params: dict) -> dict:
    """Fill unspecified registers (classical A/N from params, others 0), run
    the block's precondition, then check every value fits its register and
    zero-required registers are 0."""
    roles = handle.roles
    unknown = set(inputs) - set(roles)
    if unknown:
        raise ValueError(f"{handle.name} has no register(s) {', '.join(sorted(unknown))}; "
                         f"registers: {', '.join(roles)}")
    full = {}
    for name in roles:
        default = params.get(name, 0) if handle.name != "modexp" else 0
        full[name] = int(inputs.get(name, default))
    spec.check(w, full, params)
    for name, wires in roles.items():
        v = full[name]
        _require(0 <= v < 1 << len(wires), f"{name}={v} does not fit in {len(wires)} bits")
        if name in ZERO_IN:
            _require(v == 0, f"{name} must be 0 on entry for {handle.name}")
    return full


def expected_outputs(spec: BlockSpec, w: int, inputs: dict, params: dict) -> dict:
    """Full register map after the block: unchanged registers plus oracle updates."""
    out = dict(inputs)
    out.update(spec.oracle(w, inputs, params))
    return out


def visible(values: dict) -> dict:
    return {k: v for k, v in values.items() if k not in SCRATCH_NAMES}
