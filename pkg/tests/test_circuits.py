import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from models.bits import Bits
from models.circuit import BooleanCircuit, Gate
from models.errors import BudgetExceeded, InvariantViolation, UsageError
from models.settings import settings as lab_settings
from models.ske import SkeKey
from services.circuits import (
    CircuitBuilder,
    _estimated_gates,
    FLayout,
    build_f_circuit,
    evaluate_circuit,
    evaluate_f,
    f_desc_bits,
    f_inputs,
    random_circuit,
)
from services.fakekey_ske import ske_encrypt
from services.prf import HashPrf, TablePrf

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_gates_evaluate():
    cb = CircuitBuilder(1, 1)
    d, x = cb.desc(0), cb.data(0)
    circuit = cb.build([cb.and_(d, x), cb.xor(d, x), cb.not_(d), cb.zero(), cb.one()])
    table = {(a, b): evaluate_circuit(circuit, Bits(a, 1), Bits(b, 1)) for a in (0, 1) for b in (0, 1)}
    assert table[0, 0] == Bits.from_str("00101")
    assert table[1, 0] == Bits.from_str("01001")
    assert table[1, 1] == Bits.from_str("10001")


def test_mux_and_equals_const():
    cb = CircuitBuilder(0, 3)
    s, a, b = cb.data(0), cb.data(1), cb.data(2)
    circuit = cb.build([cb.mux(s, a, b), cb.equals_const([a, b], 0b10)])
    assert evaluate_circuit(circuit, Bits.zeros(0), Bits.from_str("010")) == Bits.from_str("11")
    assert evaluate_circuit(circuit, Bits.zeros(0), Bits.from_str("101")) == Bits.from_str("10")


def test_wires_must_be_driven_in_order():
    with pytest.raises(InvariantViolation):
        BooleanCircuit(1, 1, (Gate("AND", 0, 3), Gate("NOT", 0)), (2,))
    with pytest.raises(InvariantViolation):
        BooleanCircuit(1, 1, (Gate("NOT", 0, 1),), (2,))
    with pytest.raises(InvariantViolation):
        BooleanCircuit(1, 1, (Gate("XOR", 0, 1),), (5,))


def test_builder_needs_inputs():
    with pytest.raises(UsageError):
        CircuitBuilder(0, 0)


def test_random_circuit_is_well_formed():
    circuit = random_circuit(2, 3, 30, 4, np.random.default_rng(0))
    assert circuit.wire_count == 35
    assert len(evaluate_circuit(circuit, Bits.zeros(2), Bits.zeros(3))) == 4


def test_f_layout():
    prf = TablePrf.random(2, 1, 3, np.random.default_rng(0))
    assert f_desc_bits(prf) == 4
    x = f_inputs(prf, 0, key=SkeKey(Bits.from_str("10"), Bits.from_str("011")))
    assert len(x) == FLayout(2, 3).data_bits == 3 + 2 + 2 * 3
    b, k_valid, k, otp, m_valid, m = FLayout(2, 3).split(x)
    assert (b.value, k_valid.value, k, otp, m_valid.value, m.value) == (0, 1, Bits.from_str("10"), Bits.from_str("011"), 0, 0)


def test_plain_f_selects_branch():
    prf = TablePrf.random(1, 1, 2, np.random.default_rng(4))
    key = SkeKey(Bits.from_str("1"), Bits.from_str("10"))
    v = Bits.from_str("01")
    ct = ske_encrypt(prf, key, v, r=Bits.from_str("1")).to_bits()
    assert evaluate_f(prf, ct, f_inputs(prf, 1, m=Bits.from_str("11"))) == Bits.from_str("11")
    assert evaluate_f(prf, ct, f_inputs(prf, 0, key=key)) == v


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(min_value=0, max_value=2), st.integers(min_value=0, max_value=2), st.integers(1, 3))
def test_f_circuit_matches_plain_evaluation(seed, lam, ell, width):
    rng = np.random.default_rng(seed)
    prf = TablePrf.random(lam, ell, width, rng)
    circuit = build_f_circuit(prf)
    layout = FLayout(lam, width)
    for _ in range(8):
        ct = Bits.random(f_desc_bits(prf), rng)
        x = Bits.random(layout.data_bits, rng)
        assert evaluate_circuit(circuit, ct, x) == evaluate_f(prf, ct, x)


def test_f_circuit_needs_table_prf():
    with pytest.raises(UsageError):
        build_f_circuit(HashPrf(1, 1, 2))


def test_f_circuit_gate_budget(monkeypatch):
    monkeypatch.setattr(lab_settings, "CIRCUIT_GATE_BUDGET", 10)
    with pytest.raises(BudgetExceeded):
        build_f_circuit(TablePrf.random(2, 2, 3, np.random.default_rng(0)))


def test_gate_estimate_covers_the_circuit():
    prf = TablePrf.random(3, 3, 5, np.random.default_rng(1))
    assert len(build_f_circuit(prf).gates) <= _estimated_gates(prf)
