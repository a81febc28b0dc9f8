"""Grunwald-Letnikov vs spectral Weyl derivatives of exp(-x^2).

Prints the max error for a sequence of steps and the fitted error constant
``err / h``, for the nearest-integer shift used by the library and for the
ceiling shift.  The constant scales with ``|gamma/2 - shift|``.
"""

import argparse
import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from fracpseudo import fracops
from fracpseudo.invert import GridSpec


@dataclass
class GLConfig:
    gammas: tuple[float, ...] = (0.8, 1.5, 2.6, 3.4)
    steps: tuple[float, ...] = (4e-3, 2e-3, 1e-3, 5e-4)
    half_width: float = 8.0


def gl_with_shift(g, f, s):
    w = fracops.gl_weights(g, f.grid.n + s)
    return fftconvolve(f.values, w)[s : s + f.grid.n] * f.grid.step ** (-g)


def main(cfg: GLConfig):
    for g in cfg.gammas:
        for label, s in (("nearest", fracops.gl_shift(g)), ("ceil", math.ceil(g / 2))):
            errs = []
            for h in cfg.steps:
                grid = GridSpec(-cfg.half_width, cfg.half_width, int(round(2 * cfg.half_width / h)) + 1)
                f = fracops.SampledFunction.from_callable(grid, lambda x: np.exp(-(x**2)))
                ref = fracops.weyl_spectral(g, "plus", f).values
                band = slice(grid.n // 8, -grid.n // 8)
                errs.append(float(np.max(np.abs(gl_with_shift(g, f, s) - ref)[band])))
            consts = [e / h for e, h in zip(errs, cfg.steps)]
            print(
                f"gamma={g:<4} shift={s} ({label:7s}) |g/2-s|={abs(g / 2 - s):.2f}  "
                + "  ".join(f"{e:.2e}" for e in errs)
                + f"   err/h ~ {consts[-2]:.2f}"
            )


if __name__ == "__main__":
    argparse.ArgumentParser(description=__doc__).parse_args()
    main(GLConfig())
