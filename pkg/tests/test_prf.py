import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from models.bits import Bits
from models.errors import BitLengthError
from services.prf import HashPrf, TablePrf, prf_from_description


def test_table_shape_is_checked():
    with pytest.raises(BitLengthError):
        TablePrf(1, 1, 2, [[0, 1]])
    with pytest.raises(BitLengthError):
        TablePrf(1, 1, 2, [[0, 4], [1, 2]])


def test_key_xor_input_table():
    prf = TablePrf.key_xor_input(2, 2, 2)
    assert prf.evaluate(Bits.from_str("10"), Bits.from_str("11")) == Bits.from_str("01")


def test_constant_table():
    prf = TablePrf.constant(1, 2, 3, value=5)
    assert {prf.evaluate(k, x) for k in Bits.enumerate(1) for x in Bits.enumerate(2)} == {Bits(5, 3)}


def test_input_widths_are_checked():
    prf = HashPrf(2, 2, 4)
    with pytest.raises(BitLengthError):
        prf.evaluate(Bits.from_str("1"), Bits.from_str("00"))
    with pytest.raises(BitLengthError):
        prf.evaluate(Bits.from_str("10"), Bits.from_str("0"))


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=255), st.integers(min_value=0, max_value=255), st.integers(1, 300))
def test_keyed_hash_is_deterministic(k, x, width):
    prf = HashPrf(8, 8, width)
    out = prf.evaluate(Bits(k, 8), Bits(x, 8))
    assert len(out) == width
    assert out == prf.evaluate(Bits(k, 8), Bits(x, 8))


def test_keyed_hash_depends_on_key():
    prf = HashPrf(8, 8, 64)
    x = Bits(3, 8)
    assert prf.evaluate(Bits(1, 8), x) != prf.evaluate(Bits(2, 8), x)


def test_descriptions_reload():
    table = TablePrf.random(2, 1, 5, np.random.default_rng(0))
    again = prf_from_description(table.describe())
    assert again.table == table.table
    hashed = prf_from_description(HashPrf(3, 2, 7).describe())
    assert (hashed.kind, hashed.key_bits, hashed.input_bits, hashed.output_bits) == ("keyed-hash", 3, 2, 7)
    with pytest.raises(ValueError):
        prf_from_description({"kind": "aes"})
