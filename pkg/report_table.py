from tqdm import tqdm

from models.run_config import RunConfig
from services.cloner_attacks import build_cloner_adversary, trivial_adversary
from services.cloning_harness import ConjugateScheme, run_experiment
from services.experiment_setup import print_report, write_reports
from services.quantum_core import family_from_id


def run(config: RunConfig, n_max: int):
    """Cloner and trivial adversaries against conjugate encryption for n = 1..n_max."""
    print("--- Success Probability Table ---")
    reports = []
    for n in tqdm(range(1, n_max + 1), desc="n", leave=False):
        family = family_from_id(config.family, n)
        for adv in (trivial_adversary(n), build_cloner_adversary(n)):
            report = run_experiment(
                ConjugateScheme(n, family), adv, config.harness_mode, config.trials, config.seed
            )
            print_report(report)
            reports.append(report)

    write_reports(config, reports)
    return reports
