import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from revshor.circuit import CircuitError, compose, depth, resources
from revshor.shor import (
    ShorParams, build_hadamard_layer, build_inverse_qft, build_modexp_const, build_pipeline, build_qft,
    qubit_count_classical,
)
from revshor.simulate import apply_amplitudes, evaluate_modexp_table, run_block


def dft_matrix(M, sign):
    j = np.arange(M)
    return np.exp(sign * 2j * np.pi * np.outer(j, j) / M) / np.sqrt(M)


def unit_vector(rng, M):
    v = rng.normal(size=M) + 1j * rng.normal(size=M)
    return v / np.linalg.norm(v)


def test_hadamard_layer():
    assert [g.kind for g in build_hadamard_layer(1).gates] == ["h"]
    c = build_hadamard_layer(5)
    assert len(c.gates) == 5 and depth(c) == 1
    zero = np.zeros(32, complex)
    zero[0] = 1
    twice = apply_amplitudes(compose(c, c), zero)
    assert np.allclose(twice, zero, atol=1e-12)


@pytest.mark.parametrize("w", range(1, 9))
def test_inverse_qft_gate_count(w):
    assert len(build_inverse_qft(w).gates) == w * (w + 1) // 2 + w // 2


def test_inverse_qft_single_wire():
    assert [g.kind for g in build_inverse_qft(1).gates] == ["h"]


@pytest.mark.parametrize("w", range(1, 7))
def test_inverse_qft_on_uniform(w):
    M = 1 << w
    out = apply_amplitudes(build_inverse_qft(w), np.full(M, 1 / np.sqrt(M)))
    assert abs(out[0] - 1) < 1e-12
    assert np.abs(out[1:]).max() < 1e-12


@pytest.mark.parametrize("w", range(1, 7))
def test_qft_matches_matrix(w):
    rng = np.random.default_rng(w)
    M = 1 << w
    for _ in range(5):
        v = unit_vector(rng, M)
        assert np.allclose(apply_amplitudes(build_qft(w), v), dft_matrix(M, +1) @ v, atol=1e-9)
        assert np.allclose(apply_amplitudes(build_inverse_qft(w), v), dft_matrix(M, -1) @ v, atol=1e-9)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_qft_round_trip_and_norm(w, seed):
    v = unit_vector(np.random.default_rng(seed), 1 << w)
    out = apply_amplitudes(compose(build_qft(w), build_inverse_qft(w)), v)
    assert np.allclose(out, v, atol=1e-9)
    assert abs(np.linalg.norm(apply_amplitudes(build_inverse_qft(w), v)) - 1) < 1e-12


@pytest.mark.parametrize(
    "N, A, Y, P",
    [(15, 7, 0, 1), (21, 2, 0, 1), (15, 7, 3, 13), (21, 2, 5, 11)],
)
def test_modexp_examples(N, A, Y, P):
    out = run_block("modexp", 0, {"Y": Y}, N=N, A=A)
    assert out["P"] == P and out["acc"] == 0 and out["anc"] == 0


@pytest.mark.parametrize("N, A", [(15, 7), (15, 2), (21, 2), (33, 5)])
def test_modexp_full_table(N, A):
    params = ShorParams(N, A)
    table = evaluate_modexp_table(params)
    assert table.tolist() == [pow(A, y, N) for y in range(1 << params.w)]


def test_modexp_layout():
    circuit, layout = build_modexp_const(ShorParams(15, 7))
    assert layout.stage_constants == tuple(pow(7, 1 << k, 15) for k in range(5))
    assert layout.final_constant == pow(7, 16, 15)
    assert circuit.width == 26 and circuit.classical
    assert sum(len(w) for w in layout.registers.values()) == 26


@pytest.mark.parametrize("n", range(2, 11))
def test_width_is_5n_plus_6(n):
    circuit, _ = build_modexp_const(ShorParams((1 << n) - 1, 2))
    assert circuit.width == qubit_count_classical(n) == 5 * n + 6


@pytest.mark.parametrize("n, q", [(4, 26), (2, 16), (10, 56)])
def test_qubit_count(n, q):
    assert qubit_count_classical(n) == q


def test_exp_bits_override():
    circuit, layout = build_modexp_const(ShorParams(15, 7), exp_bits=8)
    assert len(layout.registers["Y"]) == 8
    assert evaluate_modexp_table(ShorParams(15, 7), 8).tolist() == [pow(7, y, 15) for y in range(256)]


def test_cubic_growth():
    ns = np.arange(3, 10)
    totals = [resources(build_modexp_const(ShorParams((1 << n) - 1, 2))[0]).total for n in ns]
    slope = np.polyfit(np.log(ns), np.log(totals), 1)[0]
    assert 2.6 <= slope <= 3.4


@pytest.mark.parametrize("N, A", [(16, 3), (15, 5), (15, 1), (15, 15), (1, 1)])
def test_invalid_params(N, A):
    with pytest.raises(CircuitError):
        ShorParams(N, A)


def test_pipeline_layout():
    circuit, markers = build_pipeline(ShorParams(15, 7))
    assert circuit.width == 26
    kinds = [g.kind for g in circuit.gates]
    assert kinds[:5] == ["h"] * 5
    assert [label.split(";")[0] for _, label in markers][-1] == "measure Y"
