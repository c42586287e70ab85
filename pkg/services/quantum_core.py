import math
from typing import Sequence

import numpy as np

from models.errors import DimensionMismatch, InvariantViolation
from models.quantum import (
    COMPLETENESS_TOL,
    EXACT_TOL,
    BasisFamily,
    DensityMatrix,
    KrausChannel,
    Povm,
    PureState,
)

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2)


def tensor(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(np.kron(a.entries, b.entries))


def partial_trace(
    rho: DensityMatrix, dims: Sequence[int], keep: Sequence[int]
) -> DensityMatrix:
    """Reduced state on the subsystems in `keep` (returned in ascending order)."""
    dims = list(dims)
    if math.prod(dims) != rho.dim:
        raise DimensionMismatch(f"subsystem dims {dims} do not multiply to {rho.dim}")
    keep = sorted(set(keep))
    if any(i < 0 or i >= len(dims) for i in keep):
        raise DimensionMismatch(f"keep indices {keep} out of range for {len(dims)} subsystems")

    t = rho.entries.reshape(dims + dims)
    current = len(dims)
    for i in reversed(range(len(dims))):
        if i in keep:
            continue
        t = np.trace(t, axis1=i, axis2=i + current)
        current -= 1

    d = math.prod(dims[i] for i in keep)
    out = t.reshape(d, d)
    return DensityMatrix((out + out.conj().T) / 2)


def permutation_matrix(dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """
    Unitary reordering tensor factors: output factor j is input factor perm[j].
    """
    dims = list(dims)
    total = math.prod(dims)
    k = len(dims)
    return (
        np.eye(total)
        .reshape(dims + [total])
        .transpose(list(perm) + [k])
        .reshape(total, total)
    )


def permute_subsystems(
    rho: DensityMatrix, dims: Sequence[int], perm: Sequence[int]
) -> DensityMatrix:
    p = permutation_matrix(dims, perm)
    return DensityMatrix(p @ rho.entries @ p.T)


def apply_channel(ch: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    if ch.in_dim != rho.dim:
        raise DimensionMismatch(f"channel expects dim {ch.in_dim}, state has {rho.dim}")
    out = sum(k @ rho.entries @ k.conj().T for k in ch.kraus_ops)
    return DensityMatrix((out + out.conj().T) / 2)


def povm_probabilities(p: Povm, rho: DensityMatrix) -> np.ndarray:
    if p.dim != rho.dim:
        raise DimensionMismatch(f"POVM dim {p.dim} vs state dim {rho.dim}")
    probs = np.array([np.real(np.trace(e @ rho.entries)) for e in p.elements])
    probs = np.clip(probs, 0.0, 1.0)
    total = probs.sum()
    if abs(total - 1.0) > COMPLETENESS_TOL:
        raise InvariantViolation(f"outcome probabilities sum to {total!r}")
    return probs


def sample_povm(p: Povm, rho: DensityMatrix, rng: np.random.Generator) -> int:
    probs = povm_probabilities(p, rho)
    return int(rng.choice(len(probs), p=probs / probs.sum()))


def fidelity_to_pure(target: PureState, rho: DensityMatrix) -> float:
    """F(psi, rho) = <psi|rho|psi>."""
    if target.dim != rho.dim:
        raise DimensionMismatch(f"state dim {target.dim} vs density dim {rho.dim}")
    psi = target.amplitudes
    value = np.vdot(psi, rho.entries @ psi)
    if abs(value.imag) > EXACT_TOL:
        raise InvariantViolation(f"fidelity has imaginary part {value.imag!r}")
    return float(min(max(value.real, 0.0), 1.0))


def epr_invariance_defect(basis_matrix: np.ndarray) -> float:
    """
    ||sum_x |xx> - sum_x |psi_x psi_x>||_2 for the columns psi_x of the basis.
    sum_x |psi_x>|psi_x> is vec(O O^T), so the defect is ||I - O O^T||_F.
    """
    o = np.asarray(basis_matrix, dtype=complex)
    if o.ndim != 2 or o.shape[0] != o.shape[1]:
        raise DimensionMismatch(f"basis matrix must be square, got {o.shape}")
    if np.max(np.abs(o.conj().T @ o - np.eye(o.shape[0]))) > COMPLETENESS_TOL:
        raise InvariantViolation("basis matrix is not orthogonal")
    return float(np.linalg.norm(np.eye(o.shape[0]) - o @ o.T))


def wiesner_family(n: int) -> BasisFamily:
    if n < 1:
        raise InvariantViolation("Wiesner family needs n >= 1")
    mats = []
    for theta in range(1 << n):
        m = np.eye(1)
        for i in range(n):
            hadamard = (theta >> (n - 1 - i)) & 1
            m = np.kron(m, HADAMARD if hadamard else np.eye(2))
        mats.append(m)
    return BasisFamily(n, np.array(mats), family_id="wiesner")


def random_orthogonal(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random orthogonal matrix (QR of a Gaussian, R diagonal made positive)."""
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def random_orthogonal_family(n: int, size: int, seed: int) -> BasisFamily:
    rng = np.random.default_rng(seed)
    mats = np.array([random_orthogonal(1 << n, rng) for _ in range(size)])
    return BasisFamily(n, mats, family_id=f"haar-{size}-{seed}")


def family_from_id(family_id: str, n: int) -> BasisFamily:
    if family_id == "wiesner":
        return wiesner_family(n)
    if family_id.startswith("haar-"):
        _, size, seed = family_id.split("-")
        return random_orthogonal_family(n, int(size), int(seed))
    raise ValueError(f"unknown basis family id {family_id!r}")


def random_density_matrix(dim: int, rng: np.random.Generator) -> DensityMatrix:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return DensityMatrix((rho + rho.conj().T) / 2)


def random_povm(dim: int, outcomes: int, rng: np.random.Generator) -> Povm:
    """Random full-rank POVM: A_x = G G^dag normalised by S^{-1/2} A_x S^{-1/2}."""
    parts = []
    for _ in range(outcomes):
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        parts.append(g @ g.conj().T)
    vals, vecs = np.linalg.eigh(sum(parts))
    inv_sqrt = vecs @ np.diag(vals ** -0.5) @ vecs.conj().T
    elements = []
    for a in parts:
        e = inv_sqrt @ a @ inv_sqrt
        elements.append((e + e.conj().T) / 2)
    return Povm(tuple(elements))


def dump_matrix(matrix: np.ndarray) -> list[list[list[float]]]:
    """Row-major debug dump, each entry as [real, imag]."""
    m = np.asarray(matrix, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def load_matrix(rows: list[list[list[float]]]) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)
