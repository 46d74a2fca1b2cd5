"""How metric uncertainty shrinks as the same classifier is tested on more data.

Scales a base confusion matrix by k and reports the 95% HPD length of
prevalence, TPR, and TNR at each size, plus the deceptiveness probability.
"""

import argparse

from cmbayes import MetricId, bm_assessment, build_posterior, metric_posterior, parse_cm, sample_cpm


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cm", default="26,0,2,6", help="base matrix tp,fn,fp,tn or a file")
    parser.add_argument("--scales", default="1,2,4,8,16,32")
    parser.add_argument("--samples", type=int, default=20_000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    base = parse_cm(args.cm)
    scales = [int(k) for k in args.scales.split(",")]
    print(f"base matrix tp={base.tp} fn={base.fn} fp={base.fp} tn={base.tn} (n={base.n})")
    print(f"{'n':>7} {'MU(prev)':>9} {'MU(tpr)':>9} {'MU(tnr)':>9} {'P(deceptive)':>13}")
    for k in scales:
        cm = type(base)(base.tp * k, base.fn * k, base.fp * k, base.tn * k)
        cpm = sample_cpm(build_posterior(cm), args.samples, seed=args.seed + k)
        mus = [
            metric_posterior(cpm, metric).mu
            for metric in (MetricId.PREV, MetricId.TPR, MetricId.TNR)
        ]
        r_dec = bm_assessment(cpm).r_dec
        print(f"{cm.n:>7} {mus[0]:>9.4f} {mus[1]:>9.4f} {mus[2]:>9.4f} {r_dec:>13.5f}")


if __name__ == "__main__":
    main()
