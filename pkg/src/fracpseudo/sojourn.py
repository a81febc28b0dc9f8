"""Sojourn-time laws of subordinated pseudoprocesses.

Given the subordinator value ``s``, the time spent on the positive half-line
has the arcsine density ``1 / (pi sqrt(x (s - x)))`` (even order) or the
Lamperti-type density
``sin(pi/n)/pi x^{-1/n} (s - x)^{-(n-1)/n}``, ``n = 2k + 1`` (odd order).
Mixing over ``s ~ h_beta(., t)`` gives the densities below.  The
substitution ``s = x + u^n`` removes the ``(s - x)`` singularity and the
remaining integral over ``u in (0, inf)`` is done in ``log u``.

Subordinator convention: ``E exp(-lam H(t)) = exp(-t lam^beta)``.  The classic
one-half kernel ``t exp(-t^2/(2s)) / sqrt(2 pi s^3)`` is ``h_{1/2}(s, t sqrt 2)``
in this convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._quad import log_trapezoid
from .errors import DomainError
from .specfun import MLParams, SubordinatorParams, mittag_leffler, subordinator_density

LOG_U_RANGE = (-40.0, 60.0)


@dataclass(frozen=True)
class SojournParams:
    beta: float
    k: int = 1
    parity: str = "even"
    t: float = 1.0

    def __post_init__(self):
        if not 0 < self.beta < 1:
            raise DomainError(f"need 0 < beta < 1, got beta={self.beta}")
        if int(self.k) != self.k or self.k < 1:
            raise DomainError(f"k must be a positive integer, got {self.k}")
        if self.parity not in ("even", "odd"):
            raise DomainError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if not self.t > 0:
            raise DomainError("time must be positive")


def _mix(kernel, x: float, power: int, step: float) -> float:
    """``int_0^inf kernel(x + u^power) du``."""
    return log_trapezoid(lambda u: kernel(x + u**power), *LOG_U_RANGE, step=step)


def _elementwise(fn, x):
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr <= 0):
        raise DomainError("sojourn densities are defined for x > 0")
    if x_arr.ndim == 0:
        return fn(float(x_arr))
    return np.array([fn(float(v)) for v in x_arr.ravel()]).reshape(x_arr.shape)


def arcsine_mixture(kernel, x, step: float = 0.02):
    """``(1/pi) int_x^inf kernel(s) / sqrt(x (s - x)) ds`` for any mixing density."""
    return _elementwise(lambda v: 2.0 / (math.pi * math.sqrt(v)) * _mix(kernel, v, 2, step), x)


def sojourn_even_density(s: SojournParams, x, step: float = 0.02):
    if s.parity != "even":
        raise DomainError("even sojourn law needs parity 'even'")
    sub = SubordinatorParams(s.beta)
    return arcsine_mixture(lambda v: subordinator_density(sub, v, s.t), x, step)


def sojourn_odd_density(s: SojournParams, x, step: float = 0.02):
    if s.parity != "odd":
        raise DomainError("odd sojourn law needs parity 'odd'")
    n = 2 * s.k + 1
    sub = SubordinatorParams(s.beta)
    const = math.sin(math.pi / n) / math.pi * n

    def one(v):
        return const * v ** (-1.0 / n) * _mix(lambda w: subordinator_density(sub, w, s.t), v, n, step)

    return _elementwise(one, x)


_ML_1_32 = MLParams(1.0, 1.5)


def sojourn_half_closed(t: float, x):
    """``t / (pi sqrt(2 x^3)) E_{1,3/2}(-t^2 / (2x))``: the arcsine mixture of the classic one-half kernel."""
    if not t > 0:
        raise DomainError("time must be positive")

    def one(v):
        return t / (math.pi * math.sqrt(2.0 * v**3)) * mittag_leffler(_ML_1_32, -(t * t) / (2.0 * v))

    return _elementwise(one, x)


def half_kernel(s, t: float):
    """Classic one-half stable kernel ``t exp(-t^2/(2s)) / sqrt(2 pi s^3)``."""
    s = np.asarray(s, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = np.where(s > 0, t * np.exp(-(t * t) / (2.0 * s)) / np.sqrt(2.0 * math.pi * s**3), 0.0)
    return out


def total_mass(density, lo: float = -40.0, hi: float = 120.0, step: float = 0.05) -> float:
    """``int_0^inf density`` in ``log x``; ``density`` takes scalar or array input."""
    return log_trapezoid(lambda x: np.asarray(density(x), dtype=float), lo, hi, step)
