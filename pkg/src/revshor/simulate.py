"""Exact simulation engines.

``apply_classical`` evaluates a reversible (classical-gate) circuit on one basis
state; ``apply_classical_batch`` does the same for many states at once using one
boolean numpy row per wire. ``apply_amplitudes`` is a small dense state-vector
engine for the Fourier stage.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .circuit import Circuit, Register


class NonClassicalGateError(ValueError):
    pass


@dataclass(frozen=True)
class BasisState:
    """A width-``width`` bit assignment; bit ``i`` of ``bits`` is wire ``i``."""

    width: int
    bits: int = 0

    @classmethod
    def from_values(cls, circuit: Circuit, values: Mapping[str, int]) -> BasisState:
        return cls(circuit.width, pack(circuit, values))

    def bit(self, wire: int) -> int:
        return self.bits >> wire & 1

    def value(self, reg: Register | tuple[int, ...]) -> int:
        return sum(self.bit(w) << i for i, w in enumerate(reg))

    def values(self, circuit: Circuit) -> dict[str, int]:
        return {r.name: self.value(r.wires) for r in circuit.registers}


def pack(circuit: Circuit, values: Mapping[str, int]) -> int:
    bits = 0
    for name, v in values.items():
        reg = circuit.register(name)
        if v < 0 or v >> len(reg):
            raise ValueError(f"value {v} does not fit register {name} of width {len(reg)}")
        for i, w in enumerate(reg.wires):
            bits |= (v >> i & 1) << w
    return bits


def _require_classical(circuit: Circuit) -> None:
    for g in circuit.gates:
        if not g.classical:
            raise NonClassicalGateError(f"non-classical gate {g.kind} in bit-level simulation")


def apply_classical(circuit: Circuit, state: BasisState | int) -> BasisState:
    _require_classical(circuit)
    bits = state.bits if isinstance(state, BasisState) else int(state)
    for g in circuit.gates:
        w = g.wires
        kind = g.kind
        if kind == "x":
            bits ^= 1 << w[0]
        elif kind == "cx":
            if bits >> w[0] & 1:
                bits ^= 1 << w[1]
        elif kind == "ccx":
            if bits >> w[0] & bits >> w[1] & 1:
                bits ^= 1 << w[2]
        else:
            if kind == "cswap":
                if not bits >> w[0] & 1:
                    continue
                a, b = w[1], w[2]
            else:
                a, b = w
            if (bits >> a ^ bits >> b) & 1:
                bits ^= (1 << a) | (1 << b)
    return BasisState(circuit.width, bits)


def apply_classical_batch(circuit: Circuit, states: np.ndarray) -> np.ndarray:
    """Simulate every column of a ``(width, batch)`` boolean array."""
    _require_classical(circuit)
    s = np.array(states, dtype=bool, copy=True)
    if s.shape[0] != circuit.width:
        raise ValueError(f"state rows {s.shape[0]} != circuit width {circuit.width}")
    for g in circuit.gates:
        w = g.wires
        kind = g.kind
        if kind == "x":
            np.logical_not(s[w[0]], out=s[w[0]])
        elif kind == "cx":
            s[w[1]] ^= s[w[0]]
        elif kind == "ccx":
            s[w[2]] ^= s[w[0]] & s[w[1]]
        elif kind == "swap":
            s[[w[0], w[1]]] = s[[w[1], w[0]]]
        else:
            d = (s[w[1]] ^ s[w[2]]) & s[w[0]]
            s[w[1]] ^= d
            s[w[2]] ^= d
    return s


def ints_to_bits(values, width: int) -> np.ndarray:
    """Column-per-state boolean array from integer states."""
    if width <= 62:
        v = np.asarray(values, dtype=np.int64)
        return ((v[None, :] >> np.arange(width, dtype=np.int64)[:, None]) & 1).astype(bool)
    vals = [int(x) for x in values]
    out = np.zeros((width, len(vals)), dtype=bool)
    for j, x in enumerate(vals):
        for i in range(width):
            out[i, j] = x >> i & 1
    return out


def register_values(bits: np.ndarray, wires) -> np.ndarray:
    out = np.zeros(bits.shape[1], dtype=np.int64)
    for i, w in enumerate(wires):
        out |= bits[w].astype(np.int64) << i
    return out


def set_register(bits: np.ndarray, wires, values) -> None:
    values = np.asarray(values, dtype=np.int64)
    for i, w in enumerate(wires):
        bits[w] = (values >> i) & 1


def apply_amplitudes(circuit: Circuit, vector) -> np.ndarray:
    """Dense state-vector evaluation; index bit ``i`` corresponds to wire ``i``."""
    v = np.array(vector, dtype=complex, copy=True)
    if v.shape != (1 << circuit.width,):
        raise ValueError(f"vector length must be 2**{circuit.width}")
    idx = np.arange(v.size)
    for g in circuit.gates:
        w = g.wires
        if g.kind == "h":
            lo = idx[(idx >> w[0] & 1) == 0]
            hi = lo | (1 << w[0])
            a0, a1 = v[lo], v[hi]
            v[lo] = (a0 + a1) / np.sqrt(2)
            v[hi] = (a0 - a1) / np.sqrt(2)
        elif g.kind == "cp":
            sel = (idx >> w[0] & 1) & (idx >> w[1] & 1) == 1
            angle = 2 * np.pi / (1 << g.k)
            v[sel] *= np.exp(-1j * angle if g.inverted else 1j * angle)
        else:
            one = Circuit(circuit.width, (g,))
            dest = register_values(apply_classical_batch(one, ints_to_bits(idx, circuit.width)), range(circuit.width))
            out = np.empty_like(v)
            out[dest] = v
            v = out
    return v


# --- block execution -------------------------------------------------------------

def _pack_batch(circuit: Circuit, rows: list[dict]) -> np.ndarray:
    bits = np.zeros((circuit.width, len(rows)), dtype=bool)
    for reg in circuit.registers:
        set_register(bits, reg.wires, [r.get(reg.name, 0) for r in rows])
    return bits


def _unpack_batch(circuit: Circuit, bits: np.ndarray) -> dict[str, np.ndarray]:
    return {reg.name: register_values(bits, reg.wires) for reg in circuit.registers}


def run_block(name: str, w: int, inputs: Mapping[str, int], **params) -> dict[str, int]:
    """Simulate one named block on one input assignment.

    Raises ``PreconditionError`` naming the violated constraint when the
    inputs fall outside the block's contract.
    """
    from .blocks import build_block, complete_inputs, get_block

    spec = get_block(name)
    handle = build_block(name, w, params)
    full = complete_inputs(spec, w, handle, dict(inputs), params)
    out = apply_classical(handle.circuit, BasisState.from_values(handle.circuit, full))
    return out.values(handle.circuit)


@dataclass
class VerifyReport:
    block: str
    w: int
    cases: int
    mismatches: int
    counterexample: dict | None = None

    @property
    def passed(self) -> bool:
        return self.mismatches == 0 and self.cases > 0


def _check_group(spec, w, params, rows, report: VerifyReport) -> None:
    from .blocks import build_block, complete_inputs, expected_outputs

    handle = build_block(spec.name, w, params)
    circuit = handle.circuit
    full = [complete_inputs(spec, w, handle, r, params) for r in rows]
    got = _unpack_batch(circuit, apply_classical_batch(circuit, _pack_batch(circuit, full)))
    for j, r in enumerate(full):
        want = expected_outputs(spec, w, r, params)
        report.cases += 1
        have = {k: int(v[j]) for k, v in got.items()}
        if have != want:
            report.mismatches += 1
            if report.counterexample is None:
                report.counterexample = {"params": dict(params), "inputs": r, "expected": want, "got": have}


def verify_block(
    name: str,
    w: int,
    samples: int | None = None,
    seed: int = 0,
    params: Mapping[str, int] | None = None,
) -> VerifyReport:
    """Compare simulation against the integer oracle.

    With ``samples=None`` every valid input is checked; otherwise ``samples``
    random valid inputs are drawn with a seeded generator.
    """
    from .blocks import PreconditionError, build_block, complete_inputs, get_block

    spec = get_block(name)
    user = {k: v for k, v in (params or {}).items() if k in spec.params}
    report = VerifyReport(name, w, 0, 0)
    groups: dict[tuple, list[dict]] = {}
    if samples is None:
        for p, inputs in spec.cases(w, user):
            if any(p.get(k) != v for k, v in user.items() if k != "exp_bits"):
                continue
            p = {**p, **user}
            groups.setdefault(tuple(sorted(p.items())), []).append(inputs)
    else:
        rng = np.random.default_rng(seed)
        handle = build_block(name, w, user)
        roles = handle.roles
        rows, tries = [], 0
        while len(rows) < samples:
            tries += 1
            if tries > 1000 * max(samples, 1):
                raise PreconditionError(f"could not draw valid inputs for {name} at w={w}")
            r = {k: int(rng.integers(0, 1 << len(roles[k]))) for k in spec.inputs if k not in user}
            try:
                complete_inputs(spec, w, handle, r, user)
            except PreconditionError:
                continue
            rows.append(r)
        groups[tuple(sorted(user.items()))] = rows
    for key, rows in groups.items():
        _check_group(spec, w, dict(key), rows, report)
    return report


# --- modular exponentiation and period finding -------------------------------------

def _modexp_table(N: int, A: int, exp_bits: int | None) -> np.ndarray:
    from .shor import ShorParams, build_modexp_const

    circuit, layout = build_modexp_const(ShorParams(N, A), exp_bits)
    ys = np.arange(1 << layout.exp_bits, dtype=np.int64)
    bits = np.zeros((circuit.width, ys.size), dtype=bool)
    set_register(bits, layout.registers["Y"], ys)
    out = _unpack_batch(circuit, apply_classical_batch(circuit, bits))
    clean = (
        not out["acc"].any()
        and not out["anc"].any()
        and (out["N"] == N).all()
        and (out["A"] == layout.final_constant).all()
        and (out["Y"] == ys).all()
    )
    if not clean:
        raise RuntimeError(f"modexp circuit for N={N}, A={A} left scratch registers dirty")
    return out["P"]


_TABLES: dict[tuple, np.ndarray] = {}


def evaluate_modexp_table(params, exp_bits: int | None = None) -> np.ndarray:
    """f(y) = A**y mod N for every exponent value, read off the simulated circuit."""
    key = (params.N, params.A, exp_bits)
    if key not in _TABLES:
        _TABLES[key] = _modexp_table(*key)
    return _TABLES[key].copy()


def inverse_qft_dense(vector) -> np.ndarray:
    """Dense action of the inverse QFT: sum_y exp(-2 pi i y k / M) a_y / sqrt(M)."""
    v = np.asarray(vector, dtype=complex)
    return np.fft.fft(v) / np.sqrt(v.size)


def inverse_qft_gates(vector) -> np.ndarray:
    from .shor import build_inverse_qft

    v = np.asarray(vector, dtype=complex)
    m = v.size.bit_length() - 1
    return apply_amplitudes(build_inverse_qft(m), v)


def outcome_distribution(params, exp_bits: int | None = None) -> np.ndarray:
    """Exact probability of each measured exponent-register value."""
    table = evaluate_modexp_table(params, exp_bits)
    M = table.size
    probs = np.zeros(M)
    for v in np.unique(table):
        comb = (table == v).astype(complex)
        count = comb.sum().real
        probs += (count / M) * np.abs(inverse_qft_dense(comb / np.sqrt(count))) ** 2
    return probs


def convergents(m: int, M: int) -> list[tuple[int, int]]:
    """Convergents p/q of m/M in order."""
    out = []
    h0, h1, k0, k1 = 0, 1, 1, 0
    a, b = m, M
    while b:
        t = a // b
        a, b = b, a - t * b
        h0, h1 = h1, t * h1 + h0
        k0, k1 = k1, t * k1 + k0
        out.append((h1, k1))
    return out


def continued_fraction(m: int, M: int, N: int, A: int, max_multiplier: int | None = None) -> int | None:
    """Candidate period r < N with A**r = 1 (mod N) recovered from m/M.

    Convergent denominators below N are tried in order; if none verifies,
    multiples k*q < N (k <= ``max_multiplier``, default unbounded below N)
    of the last such denominator q are tried, covering outcomes where m/M
    reduced to a fraction whose denominator is a proper divisor of r.
    """
    if not 0 <= m < M:
        raise ValueError(f"need 0 <= m < M, got m={m}, M={M}")
    if m == 0:
        return None
    qs = [q for _, q in convergents(m, M) if 1 <= q < N]
    for q in qs:
        if pow(A, q, N) == 1:
            return q
    if not qs:
        return None
    q = qs[-1]
    k = 2
    while k * q < N and (max_multiplier is None or k <= max_multiplier):
        if pow(A, k * q, N) == 1:
            return k * q
        k += 1
    return None


@dataclass(frozen=True)
class PeriodRunRecord:
    N: int
    A: int
    seed: int
    exp_bits: int
    v: int
    preimages: int
    m: int
    convergents: tuple[tuple[int, int], ...]
    r: int | None
    verdict: str

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["convergents"] = [list(c) for c in self.convergents]
        return d


def sample_period(params, seed: int, exp_bits: int | None = None, cross_check: bool = False) -> PeriodRunRecord:
    """One seeded run of period finding.

    The modexp circuit is a basis permutation, so measuring the function
    register first leaves a uniform comb on the exponent register; only that
    2**m-entry vector is simulated through the inverse QFT.
    """
    rng = np.random.default_rng(seed)
    table = evaluate_modexp_table(params, exp_bits)
    M = table.size
    v = int(table[rng.integers(M)])
    comb = (table == v).astype(complex)
    count = int(comb.real.sum())
    comb /= np.sqrt(count)
    amps = inverse_qft_dense(comb)
    if cross_check:
        gate_level = inverse_qft_gates(comb)
        if not np.allclose(gate_level, amps, atol=1e-9, rtol=0):
            raise RuntimeError("gate-level inverse QFT disagrees with the dense transform")
    probs = np.abs(amps) ** 2
    m = int(rng.choice(M, p=probs / probs.sum()))
    conv = tuple(convergents(m, M)) if m else ()
    r = continued_fraction(m, M, params.N, params.A)
    if m == 0:
        verdict = "uninformative"
    elif r is None:
        verdict = "no period"
    else:
        verdict = "period"
    return PeriodRunRecord(params.N, params.A, seed, M.bit_length() - 1, v, count, m, conv, r, verdict)
