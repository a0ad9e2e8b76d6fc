"""Error rates of the conservative search as the sample grows.

Runs a reduced version of the default experiment twice: once with the test
level shrinking as 1/sqrt(n) and once at a fixed level, and prints the
per-sample-size summary of each.
"""
from trifaith import ExperimentConfig, run_experiment

COLUMNS = ("n", "alpha", "kind_I_rate", "kind_II_rate", "kind_III_rate", "any_error_rate",
           "mean_distance", "exceed_rate", "unknown_rate", "v5_confirm_rate")


def show(title: str, config: ExperimentConfig) -> None:
    report = run_experiment(config)
    print(f"{title} (acceptance rate of the model generator {report.acceptance_rate:.2f})")
    print("  " + "  ".join(f"{c:>14}" for c in COLUMNS))
    for s in report.summaries:
        print("  " + "  ".join(f"{s[c]:>14}" if isinstance(s[c], int) else f"{s[c]:>14.4g}" for c in COLUMNS))


def main() -> None:
    base = dict(replications=100, workers=2)
    show("alpha shrinking with n", ExperimentConfig(**base))
    show("fixed alpha", ExperimentConfig(**base, alpha_schedule="fixed"))


if __name__ == "__main__":
    main()
