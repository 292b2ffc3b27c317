import pytest
from hypothesis import given, strategies as st

from revshor.arith import build_adder, build_increment
from revshor.circuit import (
    CNOT, CPHASE, FREDKIN, H, NOT, SWAP, TOFFOLI, Circuit, CircuitError, Gate, Register,
    append, compose, depth, invert, new_circuit, resources,
)
from revshor.shor import ShorParams, build_modexp_const, qubit_count_classical
from revshor.simulate import BasisState, apply_classical

from conftest import all_basis_states
from revshor.simulate import apply_classical_batch

WIDTH = 5


@st.composite
def gates(draw, width=WIDTH):
    kind = draw(st.sampled_from(["x", "cx", "ccx", "swap", "cswap", "h", "cp"]))
    arity = {"x": 1, "cx": 2, "ccx": 3, "swap": 2, "cswap": 3, "h": 1, "cp": 2}[kind]
    wires = tuple(draw(st.permutations(range(width)))[:arity])
    if kind == "cp":
        return Gate("cp", wires, draw(st.integers(1, 9)), draw(st.booleans()))
    return Gate(kind, wires)


@st.composite
def circuits(draw, classical=False):
    gs = draw(st.lists(gates(), max_size=25))
    if classical:
        gs = [g for g in gs if g.classical]
    return Circuit(WIDTH, tuple(gs))


def test_new_circuit_examples():
    c = new_circuit(3, {"A": [0, 1], "ANC": [2]})
    assert c.width == 3 and c.gates == ()
    with pytest.raises(CircuitError, match="overlap"):
        new_circuit(2, {"A": [0, 1], "B": [1]})
    with pytest.raises(CircuitError):
        new_circuit(2, {"A": [0, 2]})


def test_shor_layout_width():
    n = 4
    circuit, layout = build_modexp_const(ShorParams(15, 7))
    regs = {r.name: r for r in circuit.registers}
    shape = new_circuit(circuit.width, [Register(k, v.wires) for k, v in regs.items()])
    assert shape.width == 5 * n + 6 == qubit_count_classical(n)


def test_append_examples():
    c = new_circuit(3)
    with pytest.raises(CircuitError, match="duplicate"):
        append(c, Gate("cx", (0, 0)))
    with pytest.raises(CircuitError, match="range"):
        append(c, NOT(5))
    assert append(c, TOFFOLI(0, 1, 2)).gates == (TOFFOLI(0, 1, 2),)


def test_gate_validation():
    with pytest.raises(CircuitError):
        Gate("cp", (0, 1), 0)
    with pytest.raises(CircuitError):
        Gate("cx", (0,))
    with pytest.raises(CircuitError):
        Gate("foo", (0,))
    assert CPHASE(3, 0, 1).inverse() == CPHASE(3, 0, 1, inverted=True)
    assert SWAP(0, 1).inverse() == SWAP(0, 1)


def test_compose_identity_and_mismatch():
    c = build_adder(3).circuit
    empty = Circuit(c.width, (), c.registers)
    assert compose(c, empty).gates == c.gates
    assert compose(empty, c).gates == c.gates
    with pytest.raises(CircuitError, match="width"):
        compose(c, new_circuit(c.width + 1))


@pytest.mark.parametrize("w", [1, 2, 3, 4])
def test_adder_then_inverse_is_identity(w):
    c = build_adder(w).circuit
    states = all_basis_states(c.width)
    assert (apply_classical_batch(compose(c, invert(c)), states) == states).all()


def test_invert_examples():
    assert invert(new_circuit(2)).gates == ()
    inc = build_increment(4).circuit
    dec = invert(inc)
    for v in range(16):
        out = apply_classical(dec, BasisState.from_values(dec, {"B": v}))
        assert out.values(dec)["B"] == (v - 1) % 16
        assert out.values(dec)["ANC"] == 0
    assert apply_classical(dec, BasisState.from_values(dec, {"B": 7})).values(dec)["B"] == 6


@given(circuits())
def test_invert_is_involution(c):
    assert invert(invert(c)) == c


@given(circuits(classical=True), st.integers(0, (1 << WIDTH) - 1))
def test_invert_undoes_classical(c, bits):
    assert apply_classical(compose(c, invert(c)), bits).bits == bits


@given(circuits(), circuits())
def test_resources_additive(a, b):
    assert resources(compose(a, b)).total == resources(a).total + resources(b).total


def test_resources_examples():
    r = resources(new_circuit(4))
    assert (r.total, r.depth) == (0, 0)
    assert resources(build_adder(4).circuit).total == 25


@given(st.integers(1, 30))
def test_depth_laws(k):
    same = Circuit(3, tuple(NOT(0) if i % 2 else CNOT(1, 0) for i in range(k)))
    assert depth(same) == k
    disjoint = Circuit(2 * k, tuple(CNOT(2 * i, 2 * i + 1) for i in range(k)))
    assert depth(disjoint) == 1


def test_builder_constructors_cover_every_kind():
    c = Circuit(3, (NOT(0), CNOT(0, 1), TOFFOLI(0, 1, 2), SWAP(0, 1), FREDKIN(0, 1, 2), H(0), CPHASE(2, 0, 1)))
    assert [g.kind for g in c.gates] == ["x", "cx", "ccx", "swap", "cswap", "h", "cp"]
    assert not c.classical
