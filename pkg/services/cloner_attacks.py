import json
import math
from functools import lru_cache
from pathlib import Path

import numpy as np

from models.adversary import ClonerSpec, CloningAdversary, MoeStrategy
from models.errors import DimensionMismatch, UsageError
from models.quantum import DensityMatrix, KrausChannel, Povm, PureState
from services.conjugate_ue import otue_decryption_povm
from services.quantum_core import (
    apply_channel,
    fidelity_to_pure,
    load_matrix,
    partial_trace,
    permutation_matrix,
)

EQUATORIAL_FIDELITY = 0.5 + 1 / (2 * math.sqrt(2))

# Bloch rotation by -pi/2 about x: carries the xz great circle onto the equator
PLANE_ROTATION = (np.eye(2) + 1j * np.array([[0, 1], [1, 0]])) / math.sqrt(2)


def equatorial_cloner() -> ClonerSpec:
    v = np.zeros((4, 2), dtype=complex)
    v[0, 0] = 1.0
    v[1, 1] = v[2, 1] = 1 / math.sqrt(2)
    t_dag = PLANE_ROTATION.conj().T
    rotated = np.kron(t_dag, t_dag) @ v @ PLANE_ROTATION
    return ClonerSpec(KrausChannel(2, 4, (rotated,)), EQUATORIAL_FIDELITY)


def xz_plane_state(gamma: float) -> PureState:
    return PureState(np.array([math.cos(gamma), math.sin(gamma)]))


def marginal_fidelities(cl: ClonerSpec | KrausChannel, psi: PureState) -> tuple[float, float]:
    channel = cl.kraus if isinstance(cl, ClonerSpec) else cl
    if psi.dim != 2:
        raise DimensionMismatch(f"cloner input must be a qubit, got dim {psi.dim}")
    out = apply_channel(channel, psi.density())
    first = partial_trace(out, [2, 2], [0])
    second = partial_trace(out, [2, 2], [1])
    return fidelity_to_pure(psi, first), fidelity_to_pure(psi, second)


def xz_sweep(cl: ClonerSpec | KrausChannel, points: int = 360) -> float:
    """Smallest marginal fidelity over `points` states cos g|0> + sin g|1>."""
    worst = 1.0
    for i in range(points):
        worst = min(worst, *marginal_fidelities(cl, xz_plane_state(2 * math.pi * i / points)))
    return worst


def _honest_povm():
    # keyed on the family object too: OtueKey equality ignores the family
    @lru_cache(maxsize=None)
    def povm(key, family) -> Povm:
        return otue_decryption_povm(key)

    return lambda view: povm(view.key, view.key.family)


def build_cloner_adversary(n: int) -> CloningAdversary:
    """
    Clone every ciphertext qubit with the equatorial cloner; B keeps all first
    clones, C all second clones, and both decrypt honestly with the revealed key.
    """
    if n < 1:
        raise DimensionMismatch("n must be >= 1")
    single = equatorial_cloner().kraus.kraus_ops[0]
    op = np.eye(1)
    for _ in range(n):
        op = np.kron(op, single)
    # factors come out as B1 C1 B2 C2 ...; regroup as B1..Bn C1..Cn
    perm = [2 * i for i in range(n)] + [2 * i + 1 for i in range(n)]
    op = permutation_matrix([2] * (2 * n), perm) @ op

    decrypt = _honest_povm()
    return CloningAdversary(
        KrausChannel(1 << n, 1 << (2 * n), (op,)),
        1 << n,
        1 << n,
        decrypt,
        decrypt,
        name="cloner",
    )


def trivial_adversary(n: int, guess: int = 0) -> CloningAdversary:
    """B takes the whole ciphertext and decrypts; C outputs a fixed guess."""
    fixed = Povm.deterministic(1 << n, guess)
    return CloningAdversary(
        KrausChannel.identity(1 << n),
        1 << n,
        1,
        _honest_povm(),
        lambda view: fixed,
        name="trivial",
    )


def fixed_guess_adversary(n: int, guess: int = 0) -> CloningAdversary:
    """Discard the ciphertext; both parties output `guess`."""
    dim = 1 << n
    discard = KrausChannel(dim, 1, tuple(np.eye(dim)[[i]] for i in range(dim)))
    fixed = Povm.deterministic(dim, guess)
    return CloningAdversary(discard, 1, 1, lambda view: fixed, lambda view: fixed, name="fixed-guess")


def load_custom_adversary(path: str | Path, n: int) -> CloningAdversary:
    """
    JSON file: {"name", "dim_b", "dim_c", "kraus": [matrix dumps],
    "bob": "decrypt" | guess, "charlie": "decrypt" | guess}.
    """
    with open(path, "r", encoding="utf-8") as f:
        doc = json.load(f)

    dim_b, dim_c = int(doc["dim_b"]), int(doc["dim_c"])
    ops = tuple(load_matrix(k) for k in doc["kraus"])
    split = KrausChannel(1 << n, dim_b * dim_c, ops)

    def party(kind, dim):
        if kind == "decrypt":
            if dim != 1 << n:
                raise UsageError(f"a decrypting party needs a {1 << n}-dim register, got {dim}")
            return _honest_povm()
        fixed = Povm.deterministic(1 << n, int(kind), dim)
        return lambda view: fixed

    return CloningAdversary(
        split,
        dim_b,
        dim_c,
        party(doc.get("bob", "decrypt"), dim_b),
        party(doc.get("charlie", "decrypt"), dim_c),
        name=doc.get("name", "custom"),
    )


def midway_moe_strategy(n: int = 1) -> MoeStrategy:
    """
    A holds the +1 eigenvector of (X+Z)/sqrt(2), halfway between |0> and |+>;
    B and C are trivial and always answer 0.
    """
    if n != 1:
        raise DimensionMismatch("the midway strategy is defined for n = 1; tensor it for larger n")
    midway = np.array([math.cos(math.pi / 8), math.sin(math.pi / 8)])
    answer = Povm.deterministic(2, 0)
    return MoeStrategy(DensityMatrix.from_pure(midway), 1, 1, (answer, answer), (answer, answer))
