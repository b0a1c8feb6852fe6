"""Verification campaigns for the loop, circle and sphere settings.

Writes one CSV row per (setting, alpha, N) to results/campaigns.csv.

    python scripts/theorem_campaigns.py --trials 200 --seed 0
"""

import argparse
import csv
import time
from pathlib import Path

from pointopt.configurations import Setting
from pointopt.optimizer import resolve_workers, verify_theorem

CASES = [
    (Setting.LOOP, [-0.5, -2.0, -10.0], range(2, 9)),
    (Setting.CIRCLE2, [-1.0, 0.0, 2.0], range(2, 7)),
    (Setting.CIRCLE3, [-1.0], range(2, 7)),
    (Setting.SPHERE, [-1.0], (2, 3, 4, 6, 12)),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results/campaigns.csv")
    args = ap.parse_args()
    workers = resolve_workers()
    rows = []
    for setting, alphas, ns in CASES:
        for alpha in alphas:
            for n in ns:
                t = time.perf_counter()
                rep = verify_theorem(setting, alpha, n, args.trials, args.seed, workers=workers)
                rows.append([setting.value, alpha, n, rep.trials, rep.violations, rep.sign_violations,
                             rep.min_gap, rep.log_min_gap, round(time.perf_counter() - t, 3)])
                print(*rows[-1], sep="\t")
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["setting", "alpha", "N", "trials", "violations", "sign_violations",
                    "min_gap", "log_min_gap", "seconds"])
        w.writerows(rows)


if __name__ == "__main__":
    main()
