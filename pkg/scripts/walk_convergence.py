"""Sup-norm CF error of the four pseudo random walks along a decreasing scale sequence."""

import argparse
from dataclasses import dataclass

import numpy as np

from fracpseudo import walks
from fracpseudo.symbols import ModelParams


@dataclass
class ConvergenceConfig:
    beta: float = 0.5
    k: int = 1
    p: float = 0.7
    theta: float = 0.25
    gammas: tuple[float, ...] = (0.5, 0.1, 0.02, 0.004, 0.0008)
    xi_max: float = 5.0
    n_xi: int = 41


def main(cfg: ConvergenceConfig):
    xi = np.linspace(-cfg.xi_max, cfg.xi_max, cfg.n_xi)
    cases = [
        ("even", "even", ModelParams(cfg.beta, cfg.k, "even")),
        ("odd_pq", "odd_pq", ModelParams(cfg.beta, cfg.k, "odd", p=cfg.p)),
        ("feller odd", "feller", ModelParams(cfg.beta, cfg.k, "odd", theta=cfg.theta)),
        ("feller even", "feller", ModelParams(cfg.beta, cfg.k, "even", theta=cfg.theta)),
    ]
    print("family       " + "  ".join(f"{g:>9.4g}" for g in cfg.gammas) + "   slope")
    for name, family, m in cases:
        rep = walks.convergence_report(m, family, xi, cfg.gammas)
        slope = np.polyfit(np.log(cfg.gammas[-3:]), np.log(rep.sup_errors[-3:]), 1)[0]
        print(f"{name:<12} " + "  ".join(f"{e:9.2e}" for e in rep.sup_errors) + f"   {slope:5.2f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--beta", type=float, default=ConvergenceConfig.beta)
    p.add_argument("--k", type=int, default=ConvergenceConfig.k)
    args = p.parse_args()
    main(ConvergenceConfig(beta=args.beta, k=args.k))
