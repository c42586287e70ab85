import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from models.bits import Bits
from models.circuit import GarbledCircuit
from models.errors import GarbledEvaluationError
from services.circuits import evaluate_circuit, random_circuit
from services.garbling import _open, _seal, eval_garbled, garble, select_labels

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_garbled_evaluation_matches_plain(seed):
    rng = np.random.default_rng(seed)
    circuit = random_circuit(3, 3, 25, 4, rng)
    gc, labels = garble(circuit, rng)
    d, x = Bits.random(3, rng), Bits.random(3, rng)
    assert eval_garbled(gc, select_labels(labels, d, x)) == evaluate_circuit(circuit, d, x)


def test_table_sizes():
    circuit = random_circuit(2, 2, 40, 1, np.random.default_rng(5))
    gc, labels = garble(circuit, np.random.default_rng(6))
    assert len(labels) == 4
    for gate, rows in zip(circuit.gates, gc.tables):
        assert len(rows) == (2 if gate.op == "NOT" else 4)


def _garbled(seed=0):
    rng = np.random.default_rng(seed)
    circuit = random_circuit(2, 2, 10, 2, rng)
    gc, labels = garble(circuit, rng)
    return gc, select_labels(labels, Bits.from_str("01"), Bits.from_str("10"))


def test_tampered_table_is_detected():
    gc, inputs = _garbled()
    first = tuple(row[:-1] + bytes([row[-1] ^ 1]) for row in gc.tables[0])
    tampered = GarbledCircuit(gc.circuit, (first,) + gc.tables[1:], gc.output_labels)
    with pytest.raises(GarbledEvaluationError):
        eval_garbled(tampered, inputs)


def test_foreign_label_is_detected():
    gc, inputs = _garbled()
    gate = gc.circuit.gates[0]
    inputs[gate.a] = bytes(len(inputs[gate.a]))
    with pytest.raises(GarbledEvaluationError):
        eval_garbled(gc, inputs)


def test_label_count_is_checked():
    gc, inputs = _garbled()
    with pytest.raises(GarbledEvaluationError):
        eval_garbled(gc, inputs[:-1])


def test_fifty_gate_circuit_over_many_assignments():
    rng = np.random.default_rng(50)
    circuit = random_circuit(4, 4, 50, 4, rng)
    gc, labels = garble(circuit, rng)
    for _ in range(100):
        d, x = Bits.random(4, rng), Bits.random(4, rng)
        assert eval_garbled(gc, select_labels(labels, d, x)) == evaluate_circuit(circuit, d, x)


def test_row_opens_only_under_its_own_labels():
    ka, kb, label = bytes(range(16)), bytes(range(16, 32)), bytes([7] * 16)
    row = _seal((ka, kb), 3, label)
    assert len(row) == 32
    assert row[16:] != bytes(16)
    assert _open((ka, kb), 3, row) == label
    assert _open((kb, ka), 3, row) is None
    assert _open((ka, kb), 4, row) is None
