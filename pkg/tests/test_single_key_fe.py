import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from models.bits import Bits
from models.errors import BitLengthError, InvariantViolation, SingleKeyViolation
from models.fe import GarbledFeCiphertext, ReferenceFeCiphertext
from services.circuits import build_f_circuit, evaluate_circuit, random_circuit
from services.prf import TablePrf
from services.single_key_fe import (
    ciphertext_from_bytes,
    ciphertext_to_bytes,
    fe_decrypt,
    fe_encrypt,
    fe_keygen,
    fe_pipeline_failures,
    fe_setup,
    function_key_from_record,
    function_key_to_record,
    mpk_from_record,
    mpk_to_record,
    msk_from_record,
    msk_to_record,
)


def _circuit(seed=0):
    return random_circuit(3, 4, 20, 3, np.random.default_rng(seed))


@settings(max_examples=10, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.sampled_from(["garbled", "reference"]))
def test_decrypts_to_circuit_output(seed, backend):
    rng = np.random.default_rng(seed)
    circuit = _circuit(seed % 7)
    mpk, msk = fe_setup(3, rng)
    d, x = Bits.random(3, rng), Bits.random(4, rng)
    ct = fe_encrypt(mpk, x, circuit, rng, backend)
    assert fe_decrypt(fe_keygen(msk, d), ct) == evaluate_circuit(circuit, d, x)


def test_backend_selects_ciphertext_kind():
    rng = np.random.default_rng(0)
    mpk, _ = fe_setup(3, rng)
    x = Bits.zeros(4)
    assert isinstance(fe_encrypt(mpk, x, _circuit(), rng, "garbled"), GarbledFeCiphertext)
    assert isinstance(fe_encrypt(mpk, x, _circuit(), rng, "reference"), ReferenceFeCiphertext)


def test_single_key_per_master_key():
    _, msk = fe_setup(2, np.random.default_rng(1))
    first = fe_keygen(msk, Bits.from_str("10"))
    again = fe_keygen(msk, Bits.from_str("10"))
    assert first.description == again.description
    with pytest.raises(SingleKeyViolation):
        fe_keygen(msk, Bits.from_str("01"))


def test_widths_are_checked():
    rng = np.random.default_rng(2)
    mpk, msk = fe_setup(2, rng)
    with pytest.raises(BitLengthError):
        fe_keygen(msk, Bits.from_str("1"))
    with pytest.raises(BitLengthError):
        fe_encrypt(mpk, Bits.zeros(4), _circuit(), rng)
    with pytest.raises(BitLengthError):
        fe_setup(0, rng)


def test_pipeline_has_no_failures():
    assert fe_pipeline_failures(_circuit(3), 15, seed=4) == 0
    assert fe_pipeline_failures(_circuit(3), 15, seed=4, backend="reference") == 0


def test_keys_reload_from_records():
    rng = np.random.default_rng(5)
    circuit = _circuit()
    mpk, msk = fe_setup(3, rng)
    mpk = mpk_from_record(mpk_to_record(mpk))
    msk = msk_from_record(msk_to_record(msk))
    d, x = Bits.from_str("011"), Bits.from_str("1001")
    sk = function_key_from_record(function_key_to_record(fe_keygen(msk, d)))
    assert sk.description == d
    assert fe_decrypt(sk, fe_encrypt(mpk, x, circuit, rng, "garbled")) == evaluate_circuit(circuit, d, x)


@pytest.mark.parametrize("backend", ["garbled", "reference"])
def test_container_reloads(backend):
    rng = np.random.default_rng(6)
    circuit = _circuit()
    mpk, msk = fe_setup(3, rng)
    d, x = Bits.from_str("110"), Bits.from_str("0111")
    data = ciphertext_to_bytes(fe_encrypt(mpk, x, circuit, rng, backend))
    assert data[:4] == b"UFEC"
    assert fe_decrypt(fe_keygen(msk, d), ciphertext_from_bytes(data)) == evaluate_circuit(circuit, d, x)


def test_malformed_container_is_rejected():
    rng = np.random.default_rng(7)
    mpk, _ = fe_setup(3, rng)
    data = ciphertext_to_bytes(fe_encrypt(mpk, Bits.zeros(4), _circuit(), rng, "garbled"))
    with pytest.raises(InvariantViolation):
        ciphertext_from_bytes(data[:-1])
    with pytest.raises(InvariantViolation):
        ciphertext_from_bytes(data + b"\x00")
    with pytest.raises(InvariantViolation):
        ciphertext_from_bytes(b"XFEC" + data[4:])


def test_f_circuit_pipeline_at_desk_parameters():
    prf = TablePrf.random(1, 1, 2, np.random.default_rng(8))
    assert fe_pipeline_failures(build_f_circuit(prf), 1000, seed=9, backend="garbled") == 0
