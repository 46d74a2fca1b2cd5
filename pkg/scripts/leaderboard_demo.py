"""Probabilistic leaderboard demo on the shipped example submissions.

Shows how close point-estimate rankings dissolve into position probabilities
once test-set size is taken into account, and how prize money would spread.
"""

import argparse
from pathlib import Path

from cmbayes import allocate_prizes, prob_best, rank_distribution, read_submissions_csv

DEFAULT_CSV = Path(__file__).resolve().parent.parent / "data" / "leaderboard_example.csv"


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--csv", default=str(DEFAULT_CSV))
    parser.add_argument("--draws", type=int, default=100_000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--prizes", default="10000,2000,1000")
    args = parser.parse_args()

    subs = read_submissions_csv(args.csv)
    matrix = rank_distribution(subs, draws=args.draws, seed=args.seed)
    prizes = [float(p) for p in args.prizes.split(",")]
    allocation = allocate_prizes(matrix, prizes)

    k = min(5, len(subs))
    print(f"{'name':<18}{'accuracy':>9}" + "".join(f"P(#{p + 1})".rjust(9) for p in range(k))
          + f"{'E[prize]':>10}")
    for i, sub in enumerate(subs):
        row = f"{sub.name:<18}{sub.acc_point:>9.5f}"
        row += "".join(f"{matrix.entries[i, p]:>9.3f}" for p in range(k))
        row += f"{allocation.expected_prize(sub.name):>10.2f}"
        print(row)
    print(f"\nP(current leader is truly best) = {prob_best(subs, matrix=matrix):.3f}")
    print(f"total expected payout = {allocation.total:.2f}")


if __name__ == "__main__":
    main()
