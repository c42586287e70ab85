from models.errors import InvariantViolation
from models.report import ExperimentReport
from models.run_config import RunConfig
from services.cloning_harness import ConjugateScheme, run_experiment
from services.experiment_setup import (
    adversary_for,
    print_report,
    private_params,
    public_params,
    write_reports,
)
from services.private_ue import lift_private_adversary, pue_hybrid_experiment, pue_reduction_to_otue
from services.public_ue import lift_public_adversary, pub_hybrid_experiment, pub_reduction_to_otue


def _named(report: ExperimentReport, adversary: str) -> ExperimentReport:
    return report.model_copy(update={"adversary": adversary})


def _check_equal(first: ExperimentReport, second: ExperimentReport, what: str):
    if first.mode != "exact":
        return
    if first.success_probability != second.success_probability:
        print(f"✗ {what}: {first.success_probability!r} != {second.success_probability!r}")
        raise InvariantViolation(f"{what} do not match under exact enumeration")
    print(f"✓ {what} match exactly")


def run_private(config: RunConfig) -> list[ExperimentReport]:
    params = private_params(config)
    base = adversary_for(config)
    lifted = lift_private_adversary(base, params)
    mode = config.harness_mode

    h1 = pue_hybrid_experiment(1, lifted, params, mode, config.trials, config.seed)
    h2 = pue_hybrid_experiment(2, lifted, params, mode, config.trials, config.seed)
    reduced = run_experiment(
        ConjugateScheme(config.n, params.family),
        pue_reduction_to_otue(lifted, params),
        mode,
        config.trials,
        config.seed,
    )
    reports = [_named(h1, base.name), _named(h2, base.name), reduced]
    for r in reports:
        print_report(r)
    _check_equal(h1, h2, "Hybrid 1 and Hybrid 2")
    _check_equal(h2, reduced, "Hybrid 2 and the reduction")
    return reports


def run_public(config: RunConfig) -> list[ExperimentReport]:
    params = public_params(config)
    base = adversary_for(config)
    lifted = lift_public_adversary(base, params)
    mode = config.harness_mode

    hybrids = [
        pub_hybrid_experiment(v, lifted, params, mode, config.trials, config.seed) for v in (1, 2, 3)
    ]
    reduced = run_experiment(
        ConjugateScheme(config.n, params.family),
        pub_reduction_to_otue(lifted, params),
        mode,
        config.trials,
        config.seed,
    )
    reports = [_named(h, base.name) for h in hybrids] + [reduced]
    for r in reports:
        print_report(r)
    _check_equal(hybrids[2], reduced, "Hybrid 3 and the reduction")
    return reports


def run(target: str, config: RunConfig):
    print(f"--- Reduction Check: {target} scheme ---")
    reports = run_private(config) if target == "private" else run_public(config)
    write_reports(config, reports)
    return reports
