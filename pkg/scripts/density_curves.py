"""Signed densities v^gamma(x, t) for several orders, written as one CSV.

Orders above 2 show negative lobes; orders up to 2 are stable laws.
"""

import argparse
import csv
from dataclasses import dataclass

import numpy as np

from fracpseudo import invert


@dataclass
class CurveConfig:
    gammas: tuple[float, ...] = (1.5, 2.0, 3.0, 4.0, 6.0)
    t: float = 1.0
    x_max: float = 10.0
    n: int = 401
    out: str = "density_curves.csv"


def main(cfg: CurveConfig):
    xs = np.linspace(-cfg.x_max, cfg.x_max, cfg.n)
    with open(cfg.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["gamma", "x", "t", "value"])
        for g in cfg.gammas:
            vals = invert.density_cosine(g, xs, cfg.t)
            writer.writerows((g, f"{x:.17g}", cfg.t, f"{v:.17g}") for x, v in zip(xs, vals))
            print(f"gamma={g}: min {vals.min():+.4e} at x={xs[vals.argmin()]:+.2f}, v(0)={vals[cfg.n // 2]:.6f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--t", type=float, default=CurveConfig.t)
    p.add_argument("--out", default=CurveConfig.out)
    args = p.parse_args()
    main(CurveConfig(t=args.t, out=args.out))
