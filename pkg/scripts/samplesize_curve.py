"""Full power-simulation sweep: achieved metric uncertainty vs sample size.

Runs the simulated curve over a logarithmic grid and prints it next to the
closed-form worst case 2/sqrt(N), which it should stay below.
"""

import argparse
import math

from cmbayes import SampleSizePlan, TargetUnreachableError, power_simulation
from cmbayes.samplesize import default_candidate_ns


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--target-mu", type=float, default=0.005)
    parser.add_argument("--power", type=float, default=0.95)
    parser.add_argument("--omega", type=float, default=0.8)
    parser.add_argument("--concentration", type=float, default=10.0)
    parser.add_argument("--per-decade", type=int, default=4)
    parser.add_argument("--sims", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    plan = SampleSizePlan(
        target_mu=args.target_mu,
        power=args.power,
        generating_mode=args.omega,
        concentration=args.concentration,
    )
    grid = default_candidate_ns(per_decade=args.per_decade)
    try:
        plan = power_simulation(
            plan, candidate_ns=grid, sims_per_n=args.sims, seed=args.seed,
            full_curve=True,
        )
        print(f"smallest sufficient n for MU <= {args.target_mu:g}: {plan.result_n}")
    except TargetUnreachableError as exc:
        plan = exc.plan
        print(exc)

    print(f"{'n':>9} {'achieved MU':>12} {'2/sqrt(n)':>10}")
    for n, mu in plan.curve:
        print(f"{n:>9} {mu:>12.4f} {2 / math.sqrt(n):>10.4f}")


if __name__ == "__main__":
    main()
