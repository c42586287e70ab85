import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from models.errors import DimensionMismatch, InvariantViolation
from models.quantum import DensityMatrix, KrausChannel, Povm, PureState
from services.quantum_core import (
    apply_channel,
    dump_matrix,
    epr_invariance_defect,
    family_from_id,
    fidelity_to_pure,
    load_matrix,
    partial_trace,
    permute_subsystems,
    povm_probabilities,
    random_density_matrix,
    random_orthogonal,
    random_orthogonal_family,
    random_povm,
    tensor,
    wiesner_family,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_partial_trace_of_product_returns_factors():
    rng = np.random.default_rng(3)
    a = random_density_matrix(2, rng)
    b = random_density_matrix(3, rng)
    ab = tensor(a, b)

    assert np.allclose(partial_trace(ab, [2, 3], [0]).entries, a.entries, atol=1e-12)
    assert np.allclose(partial_trace(ab, [2, 3], [1]).entries, b.entries, atol=1e-12)


def test_partial_trace_rejects_wrong_dims():
    with pytest.raises(DimensionMismatch):
        partial_trace(DensityMatrix.maximally_mixed(4), [2, 3], [0])


def test_permute_subsystems_swaps_factors():
    rng = np.random.default_rng(5)
    a = random_density_matrix(2, rng)
    b = random_density_matrix(3, rng)
    swapped = permute_subsystems(tensor(a, b), [2, 3], [1, 0])
    assert np.allclose(swapped.entries, tensor(b, a).entries, atol=1e-12)


def test_identity_channel_leaves_state_alone():
    rho = random_density_matrix(4, np.random.default_rng(1))
    out = apply_channel(KrausChannel.identity(4), rho)
    assert np.allclose(out.entries, rho.entries, atol=1e-12)


def test_channel_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        apply_channel(KrausChannel.identity(2), DensityMatrix.maximally_mixed(4))


def test_incomplete_channel_is_rejected():
    with pytest.raises(InvariantViolation):
        KrausChannel(2, 2, (np.eye(2) * 0.5,))


def test_density_matrix_invariants():
    with pytest.raises(InvariantViolation):
        DensityMatrix(np.eye(2))
    with pytest.raises(InvariantViolation):
        DensityMatrix(np.array([[0.5, 1.0], [0.0, 0.5]]))
    with pytest.raises(InvariantViolation):
        DensityMatrix(np.diag([1.5, -0.5]))


def test_povm_must_sum_to_identity():
    with pytest.raises(InvariantViolation):
        Povm((np.diag([1.0, 0.0]), np.diag([1.0, 0.0])))


def test_projective_povm_probabilities():
    plus = PureState(np.array([1.0, 1.0]) / math.sqrt(2))
    probs = povm_probabilities(Povm.projective(np.eye(2)), plus.density())
    assert probs == pytest.approx([0.5, 0.5], abs=1e-12)


def test_fidelity_to_pure():
    zero = PureState(np.array([1.0, 0.0]))
    assert fidelity_to_pure(zero, zero.density()) == pytest.approx(1.0, abs=1e-12)
    assert fidelity_to_pure(zero, DensityMatrix.maximally_mixed(2)) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_wiesner_family_is_real_orthogonal(n):
    family = wiesner_family(n)
    assert family.size == 1 << n
    for theta in family.thetas:
        assert epr_invariance_defect(family.matrix(theta)) < 1e-12


def test_complex_basis_breaks_epr_invariance():
    assert epr_invariance_defect(np.diag([1.0, 1j])) == pytest.approx(2.0, abs=1e-12)
    assert epr_invariance_defect(np.diag([1.0, np.exp(0.3j)])) > 0.1


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(min_value=1, max_value=16))
def test_random_orthogonal_preserves_epr(seed, dim):
    o = random_orthogonal(dim, np.random.default_rng(seed))
    assert np.allclose(o.T @ o, np.eye(dim), atol=1e-12)
    assert epr_invariance_defect(o) <= 1e-12


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(min_value=1, max_value=4), st.integers(min_value=1, max_value=4))
def test_random_povm_is_valid(seed, dim, outcomes):
    rng = np.random.default_rng(seed)
    povm = random_povm(dim, outcomes, rng)
    probs = povm_probabilities(povm, random_density_matrix(dim, rng))
    assert len(probs) == outcomes
    assert probs.sum() == pytest.approx(1.0, abs=1e-10)


def test_family_ids_reload():
    assert family_from_id("wiesner", 2).family_id == "wiesner"
    haar = random_orthogonal_family(1, 3, 11)
    again = family_from_id(haar.family_id, 1)
    assert np.array_equal(haar.matrices, again.matrices)
    with pytest.raises(ValueError):
        family_from_id("bogus", 1)


def test_matrix_dump_reloads():
    m = np.array([[1 + 2j, 0.5], [-1j, 3.0]])
    assert np.array_equal(load_matrix(dump_matrix(m)), m)
