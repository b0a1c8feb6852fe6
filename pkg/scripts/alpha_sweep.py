"""Exploratory sweep: does the lambda1-maximising sphere configuration change with alpha?

For N outside the sharp sizes no claim is attached; the script records the
best configuration's distinct inner products at each alpha.

    python scripts/alpha_sweep.py --n 5 --alpha-min -2 --alpha-max -0.2 --steps 4
"""

import argparse
import json

import numpy as np

from pointopt.configurations import Setting, inner_product_set
from pointopt.optimizer import maximize_lambda1, resolve_workers


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--alpha-min", type=float, default=-2.0)
    ap.add_argument("--alpha-max", type=float, default=-0.2)
    ap.add_argument("--steps", type=int, default=4)
    ap.add_argument("--starts", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    out = []
    for alpha in np.linspace(args.alpha_min, args.alpha_max, args.steps):
        rep = maximize_lambda1(Setting.SPHERE, float(alpha), args.n, args.starts, args.seed,
                               workers=resolve_workers())
        row = {"alpha": float(alpha), "lambda1": rep.best_value,
               "inner_products": inner_product_set(rep.best_config, decimals=5),
               "matched_canonical": rep.matched_canonical}
        out.append(row)
        print(json.dumps(row))


if __name__ == "__main__":
    main()
