import numpy as np
from tqdm import tqdm

from models.adversary import MoeGame
from models.run_config import RunConfig
from services.cloner_attacks import EQUATORIAL_FIDELITY, midway_moe_strategy
from services.cloning_harness import moe_seesaw, moe_value, random_moe_strategy, tensor_strategies
from services.experiment_setup import family_for


def _midway(n: int):
    strat = midway_moe_strategy(1)
    for _ in range(n - 1):
        strat = tensor_strategies(strat, midway_moe_strategy(1))
    return strat


def run_value(config: RunConfig, strategy: str, dim_b: int = 2, dim_c: int = 2):
    print("--- Monogamy Game Value ---")
    game = MoeGame(config.n, family_for(config))
    if strategy == "midway":
        strat = _midway(config.n)
    else:
        rng = np.random.default_rng(config.seed or 0)
        strat = random_moe_strategy(game, dim_b, dim_c, rng)

    value = moe_value(game, strat)
    bound = EQUATORIAL_FIDELITY**config.n
    print(f"➤ strategy={strategy} n={config.n} value={value:.9f} bound={bound:.9f}")
    return value


def run_optimize(config: RunConfig, dim_b: int, dim_c: int, iterations: int, restarts: int):
    print("--- Monogamy Game Seesaw ---")
    game = MoeGame(config.n, family_for(config))
    seed = config.seed or 0

    best = 0.0
    for i in tqdm(range(restarts), desc="Restarts", leave=False):
        _, value = moe_seesaw(game, dim_b, dim_c, iterations, seed + i)
        print(f"- seed={seed + i} value={value:.9f}")
        best = max(best, value)

    print(f"➤ best={best:.9f} bound={EQUATORIAL_FIDELITY**config.n:.9f}")
    return best
