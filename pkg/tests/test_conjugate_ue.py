import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from models.bits import Bits
from models.errors import BitLengthError, DimensionMismatch
from models.quantum import DensityMatrix
from services.conjugate_ue import (
    all_keys,
    average_ciphertext,
    ciphertext_from_dump,
    ciphertext_to_dump,
    key_from_record,
    key_to_record,
    otue_decrypt_distribution,
    otue_decrypt_sample,
    otue_encrypt,
    otue_setup,
)
from services.quantum_core import random_orthogonal_family, wiesner_family


@pytest.mark.parametrize("n", [1, 2])
def test_decryption_is_perfectly_correct(n):
    family = wiesner_family(n)
    for key in all_keys(family):
        for m in Bits.enumerate(n):
            probs = otue_decrypt_distribution(key, otue_encrypt(key, m))
            assert probs[m.value] == pytest.approx(1.0, abs=1e-12)


def test_correct_for_random_orthogonal_family():
    family = random_orthogonal_family(2, 3, 7)
    for key in all_keys(family):
        for m in Bits.enumerate(2):
            assert otue_decrypt_distribution(key, otue_encrypt(key, m))[m.value] == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_average_ciphertext_hides_the_message(n):
    family = wiesner_family(n)
    mixed = DensityMatrix.maximally_mixed(1 << n).entries
    for m in Bits.enumerate(n):
        assert np.allclose(average_ciphertext(n, family, m).entries, mixed, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=1, max_value=3))
def test_sampled_decryption_returns_message(seed, n):
    rng = np.random.default_rng(seed)
    key = otue_setup(n, wiesner_family(n), rng)
    m = Bits.random(n, rng)
    assert otue_decrypt_sample(key, otue_encrypt(key, m), rng) == m


def test_message_length_is_checked():
    key = otue_setup(2, wiesner_family(2), np.random.default_rng(0))
    with pytest.raises(BitLengthError):
        otue_encrypt(key, Bits.from_str("1"))


def test_setup_rejects_family_of_other_size():
    with pytest.raises(DimensionMismatch):
        otue_setup(2, wiesner_family(1), np.random.default_rng(0))


def test_key_record_reloads_haar_family():
    key = otue_setup(1, random_orthogonal_family(1, 5, 42), np.random.default_rng(9))
    again = key_from_record(key_to_record(key))
    assert again == key
    assert np.array_equal(again.family.matrices, key.family.matrices)


def test_ciphertext_dump_reloads():
    key = otue_setup(2, wiesner_family(2), np.random.default_rng(4))
    ct = otue_encrypt(key, Bits.from_str("10"))
    again = ciphertext_from_dump(ciphertext_to_dump(ct))
    assert again.n == 2
    assert np.allclose(again.state.entries, ct.state.entries)


@pytest.mark.parametrize("seed", range(20))
def test_random_families_average_to_mixed_state(seed):
    n = 1 + seed % 3
    family = random_orthogonal_family(n, 2 + seed % 4, seed)
    m = Bits.random(n, np.random.default_rng(seed))
    avg = average_ciphertext(n, family, m).entries
    assert np.max(np.abs(avg - np.eye(1 << n) / (1 << n))) <= 1e-12
