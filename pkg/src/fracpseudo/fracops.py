"""Physical-space fractional operators and PDE residual checks.

Weyl derivatives are approximated by shifted Grunwald-Letnikov sums,
``D_plus f(x_i) ~ h^{-g} sum_j w_j f(x_{i - j + s})`` with
``w_j = (-1)^j binom(g, j)``; the minus side is the mirror image.  The
discrete symbol is ``h^{-g} (1 - e^{i xi h})^g e^{-i xi s h}``, which is
first-order accurate with error constant proportional to ``|g/2 - s|``.  The
shift ``s`` is the integer nearest to ``g/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from . import invert
from .errors import DomainError
from .invert import GridSpec
from .symbols import (
    ModelParams,
    feller_weyl_coefficients,
    is_odd_integer,
    rfrak_weyl_coefficients,
    weyl_symbol,
)

EDGE_TOL = 1e-3


@dataclass(frozen=True)
class SampledFunction:
    grid: GridSpec
    values: np.ndarray
    interior: np.ndarray | None = None
    """Boolean mask of points unaffected by the grid edges; ``None`` means all."""

    def __post_init__(self):
        if self.grid.spacing != "uniform":
            raise DomainError("sampled functions need a uniform grid")
        vals = np.asarray(self.values)
        if vals.shape != (self.grid.n,):
            raise DomainError(f"expected {self.grid.n} values, got shape {vals.shape}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_callable(cls, grid: GridSpec, f):
        return cls(grid, np.asarray(f(grid.points())))

    @property
    def x(self) -> np.ndarray:
        return self.grid.points()

    @property
    def mask(self) -> np.ndarray:
        return np.ones(self.grid.n, bool) if self.interior is None else self.interior


def gl_weights(gamma_ord: float, n: int) -> np.ndarray:
    """``w_0 .. w_{n-1}`` from ``w_{j+1} = w_j (j - g) / (j + 1)``."""
    w = np.empty(n)
    w[0] = 1.0
    j = np.arange(n - 1, dtype=float)
    w[1:] = np.cumprod((j - gamma_ord) / (j + 1.0))
    return w


def gl_shift(gamma_ord: float) -> int:
    return int(math.floor(gamma_ord / 2.0 + 0.5))


def edge_band(gamma_ord: float, n: int, tol: float = EDGE_TOL) -> int:
    """Cells near the open edge whose omitted stencil mass exceeds ``tol``.

    The weights sum to zero, so the tail mass beyond ``J`` is ``|sum_{j<=J} w_j|``.
    """
    tail = np.abs(np.cumsum(gl_weights(gamma_ord, n)))
    big = np.nonzero(tail > tol)[0]
    return int(big[-1]) + 1 if big.size else 0


def _combine_masks(*masks):
    out = masks[0].copy()
    for m in masks[1:]:
        out &= m
    return out


def weyl_gl(gamma_ord: float, side: str, f: SampledFunction) -> SampledFunction:
    """Shifted Grunwald-Letnikov approximation of a Weyl derivative."""
    if not gamma_ord > 0:
        raise DomainError("Weyl order must be positive")
    if side not in ("plus", "minus"):
        raise DomainError(f"side must be 'plus' or 'minus', got {side!r}")
    n, h = f.grid.n, f.grid.step
    s = gl_shift(gamma_ord)
    vals = f.values if side == "plus" else f.values[::-1]
    w = gl_weights(gamma_ord, n + s)
    conv = fftconvolve(vals, w)[s : s + n] * h ** (-gamma_ord)
    band = min(edge_band(gamma_ord, n), n // 4)
    mask = np.ones(n, bool)
    mask[:band] = False
    if s:
        mask[-s:] = False
    if side == "minus":
        conv, mask = conv[::-1], mask[::-1]
    return SampledFunction(f.grid, conv, _combine_masks(mask, f.mask))


def weyl_spectral(
    gamma_ord: float, side: str, f: SampledFunction, pad: int = 32, noise_floor: float = 1e-14
) -> SampledFunction:
    """Weyl derivative through the Fourier multiplier, on a zero-padded FFT grid.

    Generous padding keeps the algebraic tails of fractional derivatives from
    wrapping around.  Modes below ``noise_floor`` times the spectral peak are
    dropped: they carry only roundoff, which the multiplier would amplify.
    """
    n, h = f.grid.n, f.grid.step
    m = pad * n
    omega = 2.0 * math.pi * np.fft.fftfreq(m, d=h)
    # numpy's forward transform uses exp(-i omega x); ours uses exp(+i xi x), so xi = -omega
    symbol = weyl_symbol(gamma_ord, side, -omega)
    spec = np.fft.fft(f.values, m)
    spec[np.abs(spec) < noise_floor * np.abs(spec).max()] = 0.0
    out = np.fft.ifft(symbol * spec)[:n]
    if np.isrealobj(f.values):
        out = out.real
    return SampledFunction(f.grid, out, f.interior)


def _linear(f: SampledFunction, gamma_ord: float, a, b) -> SampledFunction:
    dp = weyl_gl(gamma_ord, "plus", f)
    dm = weyl_gl(gamma_ord, "minus", f)
    return SampledFunction(f.grid, -(a * dp.values + b * dm.values), _combine_masks(dp.mask, dm.mask))


def riesz_apply(gamma_ord: float, f: SampledFunction) -> SampledFunction:
    """``-(D_plus + D_minus) / (2 cos(pi g / 2))``; undefined at odd integer order."""
    if is_odd_integer(gamma_ord):
        raise DomainError(f"Riesz assembly is 0/0 at odd integer order {gamma_ord}")
    c = 1.0 / (2.0 * math.cos(math.pi * gamma_ord / 2.0))
    return _linear(f, gamma_ord, c, c)


def feller_apply(gamma_ord: float, theta: float, f: SampledFunction) -> SampledFunction:
    a, b = feller_weyl_coefficients(gamma_ord, theta)
    return _linear(f, gamma_ord, a, b)


def rfrak_apply(m: ModelParams, f: SampledFunction, form: str = "real") -> SampledFunction:
    """The weighted odd-order operator acting on samples.

    ``form="real"`` uses the real Weyl coefficients that carry the closed-form
    multiplier (the operator whose semigroup is the odd asymmetric limit law).
    ``form="complex"`` is the literal combination
    ``-(p e^{i pi beta k} D_plus + q e^{-i pi beta k} D_minus) / cos(beta pi / 2)``,
    whose multiplier agrees with the closed form for ``xi >= 0`` only.
    """
    if form == "real":
        a, b = rfrak_weyl_coefficients(m)
    elif form == "complex":
        c = math.cos(m.beta * math.pi / 2.0)
        phase = np.exp(1j * math.pi * m.beta * m.k)
        a, b = m.p * phase / c, m.q * np.conj(phase) / c
    else:
        raise DomainError(f"form must be 'real' or 'complex', got {form!r}")
    return _linear(f, m.alpha, a, b)


# ---------------------------------------------------------------- PDE residuals


@dataclass(frozen=True)
class ResidualReport:
    skipped: bool
    max_norm: float = math.nan
    l2_norm: float = math.nan
    n_points: int = 0
    reason: str = ""


def _operator(m: ModelParams, family: str):
    if family == "even":
        return lambda f: riesz_apply(m.alpha, f)
    if family == "odd_pq":
        return lambda f: rfrak_apply(m, f)
    if family == "feller":
        if m.parity == "odd":
            return lambda f: feller_apply(m.alpha, m.theta, f)
        scale = math.cos(math.pi * m.theta / 2.0) / math.cos(math.pi * m.beta / 2.0)

        def scaled(f):
            r = riesz_apply(m.alpha, f)
            return SampledFunction(f.grid, scale * r.values, r.mask)

        return scaled
    raise DomainError(f"unknown family {family!r}")


def pde_residual(
    m: ModelParams,
    family: str,
    t: float,
    dt: float,
    grid: GridSpec,
    report_window: float | None = None,
) -> ResidualReport:
    """Residual of ``d v / d t = L v`` with ``v`` from the inversion routes.

    The time derivative is a centred difference; ``L`` is the Grunwald-Letnikov
    operator of the family.  Norms are taken over interior points, optionally
    restricted to ``|x| <= report_window``.
    """
    if not 0 < dt < t:
        raise DomainError(f"need 0 < dt < t, got dt={dt}, t={t}")
    if is_odd_integer(m.alpha) and family != "odd_pq":
        return ResidualReport(True, reason=f"odd integer order {m.alpha}: Riesz assembly singular")
    op = _operator(m, family)
    xs = grid.points()
    v_minus = invert.density_grid(m, family, xs, t - dt)
    v_mid = invert.density_grid(m, family, xs, t)
    v_plus = invert.density_grid(m, family, xs, t + dt)
    dvdt = (v_plus - v_minus) / (2.0 * dt)
    lv = op(SampledFunction(grid, v_mid))
    mask = lv.mask.copy()
    if report_window is not None:
        mask &= np.abs(xs) <= report_window
    res = (dvdt - np.real(lv.values))[mask]
    return ResidualReport(
        False,
        float(np.max(np.abs(res))),
        float(math.sqrt(np.sum(res**2) * grid.step)),
        int(mask.sum()),
    )
