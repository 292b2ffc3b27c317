import itertools

import pytest
from hypothesis import given, strategies as st

from revshor import arith
from revshor.blocks import ARITH_BLOCKS, BLOCKS, PreconditionError
from revshor.circuit import Circuit, CircuitError
from revshor.simulate import apply_classical, run_block, verify_block


def _gadget(gates, c, b, a):
    circuit = Circuit(3, tuple(gates))
    bits = apply_classical(circuit, c | b << 1 | a << 2).bits
    return bits & 1, bits >> 1 & 1, bits >> 2 & 1


def _maj3(c, b, a):
    return int(a + b + c >= 2)


@pytest.mark.parametrize("c,b,a", list(itertools.product((0, 1), repeat=3)))
def test_maj_truth_table(c, b, a):
    assert _gadget(arith.maj_gadget(0, 1, 2), c, b, a) == (c ^ a, a ^ b, _maj3(c, b, a))


@pytest.mark.parametrize("c,b,a", list(itertools.product((0, 1), repeat=3)))
def test_maj_then_ums_sums(c, b, a):
    gates = arith.maj_gadget(0, 1, 2) + arith.ums_gadget(0, 1, 2)
    assert _gadget(gates, c, b, a) == (c, a ^ b ^ c, a)


@pytest.mark.parametrize("c,b,a", list(itertools.product((0, 1), repeat=3)))
def test_maj_then_umj_is_identity(c, b, a):
    assert _gadget(arith.maj_gadget(0, 1, 2) + arith.umj_gadget(0, 1, 2), c, b, a) == (c, b, a)


def test_gadget_examples():
    maj = arith.maj_gadget(0, 1, 2)
    assert _gadget(maj, 0, 0, 0) == (0, 0, 0)
    assert _gadget(maj, 0, 1, 1) == (1, 0, 1)
    assert _gadget(maj, 1, 1, 1) == (0, 0, 1)
    both = maj + arith.ums_gadget(0, 1, 2)
    assert _gadget(both, 0, 1, 1) == (0, 0, 1)
    assert _gadget(both, 1, 0, 1) == (1, 0, 1)
    assert _gadget(arith.umj_gadget(0, 1, 2), 0, 0, 0) == (0, 0, 0)
    with pytest.raises(CircuitError):
        arith.maj_gadget(0, 0, 1)


@pytest.mark.parametrize("w", range(1, 9))
def test_adder_gate_law(w):
    assert len(arith.build_adder(w, with_carry=False).circuit.gates) == 6 * w
    assert len(arith.build_adder(w).circuit.gates) == 6 * w + 1
    assert len(arith.build_ctrl_adder(w).circuit.gates) == 6 * w


@pytest.mark.parametrize(
    "block, w, inputs, expected",
    [
        ("adder", 4, {"A": 0, "B": 0}, {"B": 0, "carry": 0}),
        ("adder", 3, {"A": 7, "B": 7}, {"B": 6, "carry": 1}),
        ("adder", 4, {"A": 5, "B": 6}, {"B": 11, "carry": 0}),
        ("ctrl_adder", 4, {"A": 5, "B": 6, "x": 1}, {"B": 11}),
        ("ctrl_adder", 4, {"A": 0, "B": 9, "x": 1}, {"B": 9}),
        ("inc", 4, {"B": 0}, {"B": 1}),
        ("inc", 4, {"B": 15}, {"B": 0}),
        ("inc", 4, {"B": 6}, {"B": 7}),
        ("dec", 4, {"B": 1}, {"B": 0}),
        ("dec", 4, {"B": 0}, {"B": 15}),
        ("sub", 4, {"A": 6, "B": 6}, {"A": 0, "B": 6}),
        ("sub", 4, {"A": 3, "B": 5}, {"A": 14, "B": 5}),
        ("sub", 4, {"A": 9, "B": 2}, {"A": 7}),
        ("ctrl_sub", 4, {"A": 9, "B": 2, "x": 1}, {"A": 7, "B": 2}),
        ("ctrl_sub", 4, {"A": 5, "B": 5, "x": 1}, {"A": 0}),
        ("cmb", 4, {"A": 0, "B": 0}, {"flag": 0}),
        ("cmb", 3, {"A": 7, "B": 7}, {"flag": 1}),
        ("cmb", 4, {"A": 5, "B": 6}, {"flag": 0}),
        ("geq", 4, {"A": 0, "B": 0}, {"flag": 1}),
        ("geq", 4, {"A": 2, "B": 5}, {"flag": 0}),
        ("geq", 4, {"A": 5, "B": 5}, {"flag": 1}),
        ("geq", 4, {"A": 6, "B": 5}, {"flag": 1}),
        ("double", 6, {"A": 0}, {"A": 0}),
        ("double", 6, {"A": 13}, {"A": 26}),
        ("double", 6, {"A": 31}, {"A": 62}),
        ("ctrl_double", 6, {"A": 13, "x": 0}, {"A": 13}),
        ("ctrl_double", 6, {"A": 13, "x": 1}, {"A": 26}),
        ("ctrl_double", 6, {"A": 0, "x": 1}, {"A": 0}),
    ],
)
def test_block_examples(block, w, inputs, expected):
    out = run_block(block, w, inputs)
    for k, v in expected.items():
        assert out[k] == v
    for scratch in ("ANC", "cin"):
        assert out.get(scratch, 0) == 0


@given(st.integers(0, 15))
def test_dec_undoes_inc(b):
    assert run_block("dec", 4, {"B": run_block("inc", 4, {"B": b})["B"]})["B"] == b


@pytest.mark.parametrize(
    "block, w", [(b, w) for b in ARITH_BLOCKS for w in range(BLOCKS[b].min_w, 5)]
)
def test_exhaustive_against_oracle(block, w):
    report = verify_block(block, w)
    assert report.passed, report.counterexample


@pytest.mark.parametrize("block", ["ctrl_adder", "ctrl_sub", "ctrl_double"])
@pytest.mark.parametrize("w", [2, 3])
def test_control_zero_is_identity(block, w):
    limit = 1 << (w - 1) if block == "ctrl_double" else 1 << w
    for a in range(limit):
        for b in range(1 << w):
            inputs = {"A": a, "x": 0} if block == "ctrl_double" else {"A": a, "B": b, "x": 0}
            out = run_block(block, w, inputs)
            assert {k: out[k] for k in inputs} == inputs


@pytest.mark.parametrize("block", ARITH_BLOCKS)
def test_classical_gates_only(block):
    w = max(4, BLOCKS[block].min_w)
    assert arith_circuit(block, w).classical


def arith_circuit(block, w):
    from revshor.blocks import build_block
    return build_block(block, w).circuit


@given(st.integers(4, 12), st.data())
def test_adder_sampled_wide(w, data):
    a = data.draw(st.integers(0, (1 << w) - 1))
    b = data.draw(st.integers(0, (1 << w) - 1))
    out = run_block("adder", w, {"A": a, "B": b})
    assert out["B"] + (out["carry"] << w) == a + b
    assert out["A"] == a


def test_width_and_precondition_errors():
    with pytest.raises(CircuitError):
        arith.build_adder(0)
    with pytest.raises(CircuitError):
        arith.build_double(1)
    with pytest.raises(PreconditionError, match="geq"):
        run_block("geq", 3, {"A": 7, "B": 1})
    with pytest.raises(PreconditionError, match="double"):
        run_block("double", 4, {"A": 8})
    with pytest.raises(PreconditionError, match="cin"):
        run_block("adder", 4, {"A": 1, "cin": 1})
