import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Any, Iterator, Literal, Protocol

import numpy as np
from tqdm import tqdm

from models.adversary import AdversaryView, CloningAdversary, MoeGame, MoeStrategy
from models.bits import Bits
from models.errors import BudgetExceeded, DimensionMismatch, UsageError
from models.quantum import BasisFamily, DensityMatrix, Povm
from models.report import ExperimentReport
from models.settings import settings
from services.conjugate_ue import all_keys, ciphertext_vector, otue_setup
from services.quantum_core import (
    partial_trace,
    permute_subsystems,
    random_density_matrix,
    random_povm,
    sample_povm,
)

WILSON_Z = 1.959963984540054
"""Two-sided 95% normal quantile used for Wilson half-widths."""


@dataclass(frozen=True, eq=False)
class Cell:
    """One (key, message, randomness) point of a cloning experiment."""

    view_key: Any
    classical: Any
    state: np.ndarray
    message: int


class CloningScheme(Protocol):
    n: int
    name: str

    def cell_count(self) -> int | None: ...

    def cells(self) -> Iterator[Cell]: ...

    def sample_cell(self, rng: np.random.Generator) -> Cell: ...


class ConjugateScheme:
    """Bare conjugate one-time UE: uniform key (theta, r), uniform message."""

    name = "otue"

    def __init__(self, n: int, family: BasisFamily) -> None:
        if family.n != n:
            raise DimensionMismatch(f"family on {family.n} qubits for n={n}")
        self.n = n
        self.family = family

    def cell_count(self) -> int:
        return self.family.size << (2 * self.n)

    def cells(self) -> Iterator[Cell]:
        for key in all_keys(self.family):
            for m in Bits.enumerate(self.n):
                yield Cell(key, None, ciphertext_vector(key, m), m.value)

    def sample_cell(self, rng: np.random.Generator) -> Cell:
        key = otue_setup(self.n, self.family, rng)
        m = Bits.random(self.n, rng)
        return Cell(key, None, ciphertext_vector(key, m), m.value)


def split_outputs(adv: CloningAdversary, state: np.ndarray) -> list[np.ndarray]:
    """K|psi> for every Kraus operator, reshaped to (dim_b, dim_c)."""
    return [(k @ state).reshape(adv.dim_b, adv.dim_c) for k in adv.split.kraus_ops]


def joint_success(outputs: list[np.ndarray], bob: np.ndarray, charlie: np.ndarray) -> float:
    """Tr((B (x) C) sigma) with (B (x) C)|v> computed as B V C^T."""
    total = 0.0
    for v in outputs:
        total += float(np.real(np.vdot(v, bob @ v @ charlie.T)))
    return min(max(total, 0.0), 1.0)


def _check_budget(cells: int | None, coins: int | None) -> int:
    budget = 1 << settings.EXACT_BUDGET_LOG2
    if cells is None or coins is None or cells * coins > budget:
        raise BudgetExceeded(
            f"exact enumeration needs {cells} x {coins} cells, budget is 2^{settings.EXACT_BUDGET_LOG2}; use Monte Carlo mode"
        )
    return cells * coins


def cloning_success_exact(scheme: CloningScheme, adv: CloningAdversary) -> ExperimentReport:
    total = _check_budget(scheme.cell_count(), adv.coins.size)
    coins = list(adv.coins.items())

    terms = []
    for cell in tqdm(scheme.cells(), total=scheme.cell_count(), desc="Enumerating", leave=False):
        outputs = split_outputs(adv, cell.state)
        for coin in coins:
            view = AdversaryView(cell.view_key, cell.classical, coin)
            bob = adv.bob_povm(view).elements[cell.message]
            charlie = adv.charlie_povm(view).elements[cell.message]
            terms.append(joint_success(outputs, bob, charlie))

    # fsum is exactly rounded, so the result does not depend on enumeration order
    success = math.fsum(terms) / total
    return ExperimentReport(
        success_probability=min(max(success, 0.0), 1.0),
        n=scheme.n,
        mode="exact",
        scheme=scheme.name,
        adversary=adv.name,
    )


def _run_trial(scheme: CloningScheme, adv: CloningAdversary, seed: int, trial: int) -> bool:
    rng = np.random.default_rng([seed, trial])
    cell = scheme.sample_cell(rng)
    view = AdversaryView(cell.view_key, cell.classical, adv.coins.sample(rng))

    sigma = sum(np.outer(v.reshape(-1), v.reshape(-1).conj()) for v in split_outputs(adv, cell.state))
    sigma = DensityMatrix((sigma + sigma.conj().T) / 2)
    dims = [adv.dim_b, adv.dim_c]

    bob_povm = adv.bob_povm(view)
    b = sample_povm(bob_povm, partial_trace(sigma, dims, [0]), rng)

    # Charlie's register conditioned on Bob's outcome: Tr_B[(B_b (x) I) sigma] / p(b)
    s = sigma.entries.reshape(adv.dim_b, adv.dim_c, adv.dim_b, adv.dim_c)
    cond = np.einsum("ji,icjd->cd", bob_povm.elements[b], s)
    p_b = np.trace(cond).real
    if p_b <= 0:
        return False
    cond = cond / p_b
    c = sample_povm(adv.charlie_povm(view), DensityMatrix((cond + cond.conj().T) / 2), rng)
    return b == cell.message and c == cell.message


def _run_chunk(scheme, adv, seed: int, start: int, stop: int) -> int:
    return sum(_run_trial(scheme, adv, seed, t) for t in range(start, stop))


def wilson_half_width(successes: int, trials: int, z: float = WILSON_Z) -> float:
    p = successes / trials
    denom = 1 + z * z / trials
    return z / denom * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))


def cloning_success_mc(
    scheme: CloningScheme, adv: CloningAdversary, trials: int, seed: int
) -> ExperimentReport:
    if trials < 1:
        raise ValueError("trials must be >= 1")

    chunk = settings.MC_CHUNK_SIZE
    bounds = [(i, min(i + chunk, trials)) for i in range(0, trials, chunk)]
    wins = 0
    with ThreadPoolExecutor(max_workers=settings.MAX_WORKERS) as executor:
        futures = [executor.submit(_run_chunk, scheme, adv, seed, a, b) for a, b in bounds]
        for f in tqdm(as_completed(futures), total=len(futures), desc="Monte Carlo", leave=False):
            wins += f.result()

    return ExperimentReport(
        success_probability=wins / trials,
        n=scheme.n,
        mode="monte_carlo",
        trials=trials,
        seed=seed,
        half_width=wilson_half_width(wins, trials),
        scheme=scheme.name,
        adversary=adv.name,
    )


def run_experiment(
    scheme: CloningScheme,
    adv: CloningAdversary,
    mode: Literal["exact", "monte_carlo"] = "exact",
    trials: int | None = None,
    seed: int | None = None,
) -> ExperimentReport:
    if mode == "exact":
        return cloning_success_exact(scheme, adv)
    if trials is None or seed is None:
        raise UsageError("Monte Carlo mode needs trials and a seed")
    return cloning_success_mc(scheme, adv, trials, seed)


def implied_t(p: float, n: int) -> float:
    """The t with p = 2^(-n+t)."""
    if p <= 0:
        raise ValueError(f"success probability must be positive, got {p}")
    return n + math.log2(p)


# --- monogamy-of-entanglement games -------------------------------------------


def _projectors(family: BasisFamily, theta: int) -> list[np.ndarray]:
    o = family.matrix(theta)
    return [np.outer(o[:, x], o[:, x]) for x in range(family.dim)]


def _check_strategy(game: MoeGame, strat: MoeStrategy) -> None:
    if strat.dim_a != game.family.dim or len(strat.bob_povms) != game.family.size:
        raise DimensionMismatch("strategy does not fit the game (A dimension or basis count)")


def theta_operator(game: MoeGame, strat: MoeStrategy, theta: int) -> np.ndarray:
    """Pi^theta = sum_x |psi_x><psi_x| (x) B_x (x) C_x."""
    bob = strat.bob_povms[theta].elements
    charlie = strat.charlie_povms[theta].elements
    return sum(
        np.kron(np.kron(p, bob[x]), charlie[x])
        for x, p in enumerate(_projectors(game.family, theta))
    )


def moe_value(game: MoeGame, strat: MoeStrategy) -> float:
    _check_strategy(game, strat)
    values = [
        np.real(np.trace(theta_operator(game, strat, theta) @ strat.rho_abc.entries))
        for theta in game.family.thetas
    ]
    return float(min(max(math.fsum(values) / game.family.size, 0.0), 1.0))


def random_moe_strategy(
    game: MoeGame, dim_b: int, dim_c: int, rng: np.random.Generator
) -> MoeStrategy:
    dim_a = game.family.dim
    return MoeStrategy(
        random_density_matrix(dim_a * dim_b * dim_c, rng),
        dim_b,
        dim_c,
        tuple(random_povm(dim_b, dim_a, rng) for _ in game.family.thetas),
        tuple(random_povm(dim_c, dim_a, rng) for _ in game.family.thetas),
    )


def tensor_strategies(first: MoeStrategy, second: MoeStrategy) -> MoeStrategy:
    """
    Play two games side by side: A1A2 B1B2 C1C2, theta = theta1*|Theta2| + theta2,
    outcome x = x1*dim_a2 + x2.
    """
    dims = [first.dim_a, first.dim_b, first.dim_c, second.dim_a, second.dim_b, second.dim_c]
    rho = permute_subsystems(
        DensityMatrix(np.kron(first.rho_abc.entries, second.rho_abc.entries)),
        dims,
        [0, 3, 1, 4, 2, 5],
    )

    def combine(povms1, povms2):
        out = []
        for p1 in povms1:
            for p2 in povms2:
                out.append(Povm(tuple(np.kron(e1, e2) for e1 in p1.elements for e2 in p2.elements)))
        return tuple(out)

    return MoeStrategy(
        rho,
        first.dim_b * second.dim_b,
        first.dim_c * second.dim_c,
        combine(first.bob_povms, second.bob_povms),
        combine(first.charlie_povms, second.charlie_povms),
    )


def _scores(game: MoeGame, rho: np.ndarray, dims, theta: int, other: Povm, party: str):
    """
    Score operators on the updated party's register: Tr_{A,other}[(P_x (x) ...) rho]
    for every outcome x.
    """
    dim_a, dim_b, dim_c = dims
    r = rho.reshape(dim_a, dim_b, dim_c, dim_a, dim_b, dim_c)
    scores = []
    for x, p in enumerate(_projectors(game.family, theta)):
        if party == "bob":
            scores.append(np.einsum("xy,zw,ybwxdz->bd", p, other.elements[x], r))
        else:
            scores.append(np.einsum("xy,uv,yvcxud->cd", p, other.elements[x], r))
    return scores


def _pick_the_winner(scores: list[np.ndarray], current: Povm) -> Povm:
    """
    For each candidate eigenbasis, give every eigenvector to the outcome whose
    score operator rates it highest. Keep the current POVM unless a candidate
    strictly improves on it, so the objective never decreases.
    """
    current_score = sum(np.real(np.trace(e @ s)) for e, s in zip(current.elements, scores))
    candidates = [np.linalg.eigh((s + s.conj().T) / 2)[1] for s in scores]
    candidates += [np.linalg.eigh((e + e.conj().T) / 2)[1] for e in current.elements]

    best_score, best_basis, best_assign = -np.inf, None, None
    for basis in candidates:
        rated = np.array([np.real(np.diag(basis.conj().T @ s @ basis)) for s in scores])
        assign = rated.argmax(axis=0)
        score = rated.max(axis=0).sum()
        if score > best_score:
            best_score, best_basis, best_assign = score, basis, assign

    if best_score <= current_score:
        return current
    dim = best_basis.shape[0]
    elements = [np.zeros((dim, dim), dtype=complex) for _ in scores]
    for j, x in enumerate(best_assign):
        v = best_basis[:, j]
        elements[x] += np.outer(v, v.conj())
    return Povm(tuple(elements))


def moe_seesaw(
    game: MoeGame,
    dim_b: int,
    dim_c: int,
    iterations: int,
    seed: int,
    history: list[float] | None = None,
) -> tuple[MoeStrategy, float]:
    """
    Block-coordinate ascent over (state, Bob's POVMs, Charlie's POVMs). Values
    after each iteration are appended to `history` when given.
    """
    if dim_b < 1 or dim_c < 1:
        raise DimensionMismatch("B and C dimensions must be >= 1")
    rng = np.random.default_rng(seed)
    strat = random_moe_strategy(game, dim_b, dim_c, rng)
    dims = (game.family.dim, dim_b, dim_c)
    value = moe_value(game, strat)

    for _ in range(iterations):
        pi_bar = sum(theta_operator(game, strat, t) for t in game.family.thetas) / game.family.size
        vals, vecs = np.linalg.eigh((pi_bar + pi_bar.conj().T) / 2)
        top = vecs[:, int(np.argmax(vals))]
        rho = np.outer(top, top.conj())

        bob = tuple(
            _pick_the_winner(_scores(game, rho, dims, t, strat.charlie_povms[t], "bob"), strat.bob_povms[t])
            for t in game.family.thetas
        )
        charlie = tuple(
            _pick_the_winner(_scores(game, rho, dims, t, bob[t], "charlie"), strat.charlie_povms[t])
            for t in game.family.thetas
        )
        candidate = MoeStrategy(DensityMatrix(rho), dim_b, dim_c, bob, charlie)
        candidate_value = moe_value(game, candidate)
        if candidate_value >= value:
            strat, value = candidate, candidate_value
        if history is not None:
            history.append(value)

    return strat, moe_value(game, strat)
