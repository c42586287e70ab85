from models.run_config import RunConfig
from services.cloning_harness import ConjugateScheme, run_experiment
from services.experiment_setup import adversary_for, family_for, print_report, write_reports


def run(config: RunConfig):
    print("--- Cloning Attack on Conjugate Encryption ---")
    family = family_for(config)
    adv = adversary_for(config)
    print(f"- family={family.family_id} |Theta|={family.size} adversary={adv.name} mode={config.mode}")

    report = run_experiment(
        ConjugateScheme(config.n, family), adv, config.harness_mode, config.trials, config.seed
    )
    print_report(report)
    write_reports(config, [report])
    return [report]
