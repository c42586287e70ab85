from dataclasses import dataclass, field

import numpy as np

from models.errors import DimensionMismatch, InvariantViolation

EXACT_TOL = 1e-12
# channel/POVM completeness and traces after channels accumulate roundoff
COMPLETENESS_TOL = 1e-10
PSD_TOL = 1e-10


def _frozen(matrix, dtype=complex) -> np.ndarray:
    arr = np.array(matrix, dtype=dtype)
    arr.setflags(write=False)
    return arr


def _check_psd(matrix: np.ndarray, what: str) -> None:
    min_eig = float(np.linalg.eigvalsh(matrix).min()) if matrix.size else 0.0
    if min_eig < -PSD_TOL:
        raise InvariantViolation(f"{what} is not PSD (min eigenvalue {min_eig:.3e})")


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = _frozen(self.entries)
        object.__setattr__(self, "entries", entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise InvariantViolation(f"density matrix must be square, got {entries.shape}")
        if __debug__:
            if np.max(np.abs(entries - entries.conj().T), initial=0.0) > EXACT_TOL:
                raise InvariantViolation("density matrix is not Hermitian")
            trace = np.trace(entries).real
            if abs(trace - 1.0) > COMPLETENESS_TOL:
                raise InvariantViolation(f"density matrix trace is {trace!r}, expected 1")
            _check_psd(entries, "density matrix")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_pure(cls, amplitudes) -> "DensityMatrix":
        vec = np.asarray(amplitudes, dtype=complex)
        return cls(np.outer(vec, vec.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim) / dim)

    def purity(self) -> float:
        return float(np.real(np.trace(self.entries @ self.entries)))


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = _frozen(self.amplitudes).reshape(-1)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > EXACT_TOL:
            raise InvariantViolation(f"pure state has norm {norm!r}")

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def density(self) -> DensityMatrix:
        return DensityMatrix.from_pure(self.amplitudes)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    in_dim: int
    out_dim: int
    kraus_ops: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        ops = tuple(_frozen(k) for k in self.kraus_ops)
        object.__setattr__(self, "kraus_ops", ops)
        if not ops:
            raise InvariantViolation("channel needs at least one Kraus operator")
        for k in ops:
            if k.shape != (self.out_dim, self.in_dim):
                raise DimensionMismatch(
                    f"Kraus operator shape {k.shape}, expected {(self.out_dim, self.in_dim)}"
                )
        total = sum(k.conj().T @ k for k in ops)
        if np.max(np.abs(total - np.eye(self.in_dim))) > COMPLETENESS_TOL:
            raise InvariantViolation("Kraus operators are not complete (sum K^dag K != I)")

    @classmethod
    def unitary(cls, u) -> "KrausChannel":
        u = np.asarray(u, dtype=complex)
        return cls(u.shape[1], u.shape[0], (u,))

    @classmethod
    def identity(cls, dim: int) -> "KrausChannel":
        return cls.unitary(np.eye(dim))


@dataclass(frozen=True, eq=False)
class Povm:
    """Measurement with outcome labels 0..len(elements)-1."""

    elements: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        elements = tuple(_frozen(e) for e in self.elements)
        object.__setattr__(self, "elements", elements)
        if not elements:
            raise InvariantViolation("POVM needs at least one element")
        dim = elements[0].shape[0]
        for e in elements:
            if e.shape != (dim, dim):
                raise DimensionMismatch(f"POVM element shape {e.shape}, expected {(dim, dim)}")
        if __debug__:
            for e in elements:
                _check_psd((e + e.conj().T) / 2, "POVM element")
        total = sum(elements)
        if np.max(np.abs(total - np.eye(dim))) > COMPLETENESS_TOL:
            raise InvariantViolation("POVM elements do not sum to identity")

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    def __len__(self) -> int:
        return len(self.elements)

    @classmethod
    def projective(cls, basis: np.ndarray) -> "Povm":
        """One rank-one projector per column of `basis`."""
        basis = np.asarray(basis, dtype=complex)
        return cls(tuple(np.outer(basis[:, j], basis[:, j].conj()) for j in range(basis.shape[1])))

    @classmethod
    def deterministic(cls, outcomes: int, outcome: int, dim: int = 1) -> "Povm":
        elements = [np.zeros((dim, dim)) for _ in range(outcomes)]
        elements[outcome] = np.eye(dim)
        return cls(tuple(elements))


@dataclass(frozen=True, eq=False)
class BasisFamily:
    """
    Indexed real-orthogonal bases on n qubits. `matrices[theta]` has the basis
    vectors |psi_x^theta> as columns; thetas are 0..len(matrices)-1.
    """

    n: int
    matrices: np.ndarray
    family_id: str = field(default="custom")

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvariantViolation("a basis family needs at least one qubit")
        mats = np.array(self.matrices)
        dim = 1 << self.n
        if mats.ndim != 3 or mats.shape[1:] != (dim, dim) or mats.shape[0] < 1:
            raise DimensionMismatch(f"family matrices shape {mats.shape} for n={self.n}")
        if np.iscomplexobj(mats):
            if np.max(np.abs(mats.imag)) > EXACT_TOL:
                raise InvariantViolation("basis family matrices must be real")
            mats = mats.real
        mats = mats.astype(float)
        for o in mats:
            if np.max(np.abs(o.T @ o - np.eye(dim))) > EXACT_TOL:
                raise InvariantViolation("basis family matrix is not orthogonal")
        mats.setflags(write=False)
        object.__setattr__(self, "matrices", mats)

    @property
    def thetas(self) -> range:
        return range(self.matrices.shape[0])

    @property
    def size(self) -> int:
        return self.matrices.shape[0]

    @property
    def dim(self) -> int:
        return 1 << self.n

    def matrix(self, theta: int) -> np.ndarray:
        return self.matrices[theta]
