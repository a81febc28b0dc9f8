"""Signed densities of the limiting pseudoprocesses.

Four independent routes for the symmetric density
``v(x, t) = (1/pi) int_0^inf cos(xi x) exp(-t xi^gamma) dxi``:

* :func:`density_cosine` -- the cosine integral, split at the zeros of
  ``cos(xi x)``;
* :func:`density_series` -- the power series in ``x^2``;
* :func:`density_ml_integral` -- a Beta-weighted integral of a
  Mittag-Leffler function;
* :func:`density_probabilistic` -- ``(1/(pi x)) E sin(x G)`` with ``G`` a
  gamma-type variable.

:func:`density_asymmetric` inverts the skewed characteristic functions.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from . import specfun
from ._quad import composite_nodes, graded_edges
from .errors import ComputationError, DomainError
from .symbols import ModelParams, limit_cf

# exp(-ENVELOPE_LOG) is where characteristic-function tails are cut
ENVELOPE_LOG = 42.0
DENSITY_ATOL = 1e-9


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    n: int
    spacing: str = "uniform"

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise DomainError(f"grid needs x_min < x_max, got {self.x_min}, {self.x_max}")
        if self.n < 2:
            raise DomainError(f"grid needs n >= 2, got {self.n}")
        if self.spacing not in ("uniform", "log"):
            raise DomainError(f"spacing must be 'uniform' or 'log', got {self.spacing!r}")
        if self.spacing == "log" and self.x_min <= 0:
            raise DomainError("log-spaced grid needs x_min > 0")

    def points(self) -> np.ndarray:
        if self.spacing == "uniform":
            return np.linspace(self.x_min, self.x_max, self.n)
        return np.geomspace(self.x_min, self.x_max, self.n)

    @property
    def step(self) -> float:
        if self.spacing != "uniform":
            raise DomainError("step is defined for uniform grids only")
        return (self.x_max - self.x_min) / (self.n - 1)


@dataclass(frozen=True)
class SignedDensitySample:
    x: float
    t: float
    value: float


def _check_time(t):
    if not t > 0:
        raise DomainError(f"time must be positive, got {t}")


def _elementwise(fn, x):
    x_arr = np.asarray(x, dtype=float)
    if x_arr.ndim == 0:
        return fn(float(x_arr))
    return np.array([fn(float(v)) for v in x_arr.reshape(-1)]).reshape(x_arr.shape)


# ---------------------------------------------------------------- panel quadrature


def _panel_integrals(f, edges, n=24, n_check=16):
    nodes, w = composite_nodes(edges, n)
    hi = (f(nodes) * w).sum(axis=1)
    nodes2, w2 = composite_nodes(edges, n_check)
    lo = (f(nodes2) * w2).sum(axis=1)
    return hi, np.abs(hi - lo)


def _zero_split_integral(f, first_zero, spacing, xi_max):
    """``int_0^xi_max f`` on panels that end at ``first_zero + j * spacing``.

    Past ``xi_max`` the envelope is below ``exp(-ENVELOPE_LOG)``, so the plain
    panel sum is already converged; no series acceleration is applied.
    """
    zeros = np.arange(first_zero, xi_max + spacing, spacing)
    edges = np.concatenate((graded_edges(zeros[0]), zeros[1:]))
    vals, errs = _panel_integrals(f, edges)
    return float(vals.sum()), float(errs.sum())


def _smooth_integral(f, xi_max, width):
    n_panels = max(4, int(math.ceil(xi_max / width)))
    h0 = xi_max / n_panels
    edges = np.concatenate((graded_edges(h0), h0 + h0 * np.arange(1, n_panels)))
    vals, errs = _panel_integrals(f, edges)
    return float(vals.sum()), float(errs.sum())


def _finish(value, err, what, atol=DENSITY_ATOL):
    if not np.isfinite(value) or err > 100 * atol:
        raise ComputationError(f"{what}: quadrature did not reach tolerance", value=value, error_estimate=err)
    return value


# ---------------------------------------------------------------- cosine route


def _cutoff(t, gamma_ord, rate=1.0):
    return (ENVELOPE_LOG / (t * rate)) ** (1.0 / gamma_ord)


def density_cosine(gamma_ord: float, x, t: float, return_error: bool = False):
    """``(1/pi) int_0^inf cos(xi x) exp(-t xi^gamma) dxi``.

    Works for any ``gamma > 0``; for ``gamma <= 2`` it is the symmetric stable
    density.  Scalar or array ``x``.
    """
    if not gamma_ord > 0:
        raise DomainError("order must be positive")
    _check_time(t)
    xi_max = _cutoff(t, gamma_ord)
    xi_scale = t ** (-1.0 / gamma_ord)

    def one(xv):
        ax = abs(xv)

        def f(xi):
            return np.cos(xi * ax) * np.exp(-t * xi**gamma_ord)

        if ax * xi_scale < 4.0:
            val, err = _smooth_integral(f, xi_max, xi_scale / 4.0)
        else:
            val, err = _zero_split_integral(f, math.pi / (2.0 * ax), math.pi / ax, xi_max)
        val, err = val / math.pi, err / math.pi
        _finish(val, err, "density_cosine")
        return (val, err) if return_error else val

    return _elementwise(one, x) if not return_error else one(float(x))


def density_at_zero(gamma_ord: float, t: float) -> float:
    """``v(0, t) = t^{-1/gamma} Gamma(1 + 1/gamma) / pi``."""
    return t ** (-1.0 / gamma_ord) * math.gamma(1.0 + 1.0 / gamma_ord) / math.pi


def small_x_constant(gamma_ord: float) -> float:
    """Curvature constant of ``v(x,t) ~ v(0,t) (1 - x^2 C / (2 t^{2/gamma}))``.

    Written with the Gamma triplication formula; equals ``Gamma(3/g) / Gamma(1/g)``.
    """
    g = 1.0 / gamma_ord
    return math.gamma(g + 1.0 / 3.0) * math.gamma(g + 2.0 / 3.0) * 3.0 ** (3.0 * g - 0.5) / (2.0 * math.pi)


# ---------------------------------------------------------------- series route


class SeriesCancellationError(ComputationError):
    pass


def density_series(gamma_ord: float, x, t: float, cap: int = 2000, tol: float = DENSITY_ATOL):
    """Power series ``(1/(pi g)) sum_k (-1)^k x^{2k} Gamma((2k+1)/g) / ((2k)! t^{(2k+1)/g})``.

    The alternating sum is accepted only while its largest term stays below
    ``1e12 * tol`` (in units of the prefactor); otherwise
    :class:`SeriesCancellationError` reports the term size.
    """
    if not gamma_ord > 1:
        raise DomainError(f"the power series needs gamma > 1, got {gamma_ord}")
    _check_time(t)
    scale = t ** (-1.0 / gamma_ord)
    pref = scale / (math.pi * gamma_ord)

    def one(xv):
        y = abs(xv) * scale
        if y == 0.0:
            return pref * math.gamma(1.0 / gamma_ord)
        k = np.arange(cap, dtype=float)
        log_mag = 2 * k * math.log(y) + gammaln((2 * k + 1) / gamma_ord) - gammaln(2 * k + 1)
        peak = float(log_mag.max())
        keep = np.nonzero(log_mag >= min(peak, 0.0) - 45.0)[0]
        last = int(keep[-1])
        if last >= cap - 1:
            raise ComputationError("density series did not converge within the term cap", terms=cap, y=y)
        if peak > math.log(1e12 * tol):
            raise SeriesCancellationError(
                "density series cancellation exceeds recoverable precision",
                largest_term=math.exp(peak), x=xv, t=t, gamma=gamma_ord,
            )
        terms = np.exp(log_mag[: last + 1]) * np.where(k[: last + 1] % 2 == 1, -1.0, 1.0)
        return pref * math.fsum(terms)

    return _elementwise(one, x)


def density_series_or_cosine(gamma_ord: float, x, t: float):
    """Series where it is numerically safe, cosine integral elsewhere."""

    def one(xv):
        try:
            return density_series(gamma_ord, xv, t)
        except SeriesCancellationError:
            return density_cosine(gamma_ord, xv, t)

    return _elementwise(one, x)


# ---------------------------------------------------------------- Mittag-Leffler route


def density_ml_integral(gamma_ord: float, x, t: float):
    """Mittag-Leffler integral form of the symmetric density.

    ``v = t^{-1/g}/(pi g) int_0^1 E_{2(1-1/g), 1-1/g}(-x^2 t^{-2/g} y^{2/g} (1-y)^{2-2/g})
    y^{1/g-1} (1-y)^{-1/g} dy``; the half-line variable ``w = y/(1-y)`` gives the
    equivalent form over ``(0, inf)``.  The endpoint weights are integrated
    exactly by an algebraic-weight rule.
    """
    if not gamma_ord > 1:
        raise DomainError(f"the Mittag-Leffler form needs gamma > 1, got {gamma_ord}")
    _check_time(t)
    g = 1.0 / gamma_ord
    ml = specfun.MLParams(2.0 * (1.0 - g), 1.0 - g)
    scale = t ** (-g)

    def one(xv):
        c = (xv * scale) ** 2

        def integrand(y):
            return specfun.mittag_leffler(ml, -c * y ** (2 * g) * (1.0 - y) ** (2.0 - 2 * g))

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(
                integrand, 0.0, 1.0, weight="alg", wvar=(g - 1.0, -g), epsabs=1e-13, epsrel=1e-12, limit=200
            )
        val, err = scale * g / math.pi * val, scale * g / math.pi * err
        return _finish(val, err, "density_ml_integral")

    return _elementwise(one, x)


# ---------------------------------------------------------------- probabilistic route


def density_probabilistic(m: ModelParams, x, t: float):
    """``(1/(pi x)) E sin(x G)`` with ``G`` of density ``g^{2k beta}(., 1/t)``.

    Undefined at ``x = 0`` (removable singularity); use :func:`density_at_zero`.
    """
    if m.parity != "even":
        raise DomainError("probabilistic representation is for the even family")
    _check_time(t)
    order = m.alpha
    y_max = _cutoff(t, order)

    def one(xv):
        if xv == 0.0:
            raise DomainError("probabilistic representation has a 1/x factor; x = 0 is excluded")
        ax = abs(xv)

        def f(y):
            return np.sin(ax * y) * specfun.gamma_type_density(order, np.maximum(y, 1e-300), 1.0 / t)

        y_scale = t ** (-1.0 / order)
        if ax * y_scale < 4.0:
            val, err = _smooth_integral(f, y_max, y_scale / 4.0)
        else:
            val, err = _zero_split_integral(f, math.pi / ax, math.pi / ax, y_max)
        val, err = val / (math.pi * ax), err / (math.pi * ax)
        return _finish(val, err, "density_probabilistic")

    return _elementwise(one, x)


# ---------------------------------------------------------------- asymmetric families


def _envelope_and_skew(m: ModelParams, family: str):
    """``psi(xi) = -|xi|^alpha (a - i b sign(xi))``; returns ``(a, b)``."""
    if family == "odd_pq":
        return 1.0, (m.p - m.q) * math.tan(m.beta * math.pi / 2.0)
    if family == "feller":
        if m.parity == "odd":
            return math.cos(math.pi * m.theta / 2.0), -math.sin(math.pi * m.theta / 2.0)
        return math.cos(math.pi * m.theta / 2.0) / math.cos(math.pi * m.beta / 2.0), 0.0
    if family == "even":
        return 1.0, 0.0
    raise DomainError(f"unknown family {family!r}")


def density_asymmetric(m: ModelParams, family: str, x, t: float):
    """``(1/pi) int_0^inf Re[exp(-i xi x) cf(xi, t)] dxi`` for the skewed families."""
    _check_time(t)
    a, b = _envelope_and_skew(m, family)
    alpha = m.alpha
    limit_cf(m, family, 0.0, t)  # validates family/parity
    xi_max = _cutoff(t, alpha, a)
    xi_scale = (t * a) ** (-1.0 / alpha)

    def one(xv):
        def f(xi):
            return np.real(np.exp(-1j * xi * xv) * limit_cf(m, family, xi, t))

        # panel width from the local phase rate |x| + t |b| alpha xi^(alpha - 1)
        h0 = xi_scale / 4.0
        edges = list(graded_edges(min(h0, math.pi / (2.0 * abs(xv) + 1e-300))))
        while edges[-1] < xi_max:
            s = edges[-1]
            rate = abs(xv) + t * abs(b) * alpha * max(s, 1e-300) ** (alpha - 1.0)
            edges.append(s + min(h0, math.pi / (2.0 * rate + 1e-300)))
        vals, errs = _panel_integrals(f, np.asarray(edges))
        val, err = float(vals.sum()) / math.pi, float(errs.sum()) / math.pi
        return _finish(val, err, "density_asymmetric")

    return _elementwise(one, x)


# ---------------------------------------------------------------- grids and mass


def density_on_grid(route, grid: GridSpec, t: float, **kwargs) -> list[SignedDensitySample]:
    xs = grid.points()
    vals = route(x=xs, t=t, **kwargs)
    return [SignedDensitySample(float(x), float(t), float(v)) for x, v in zip(xs, vals)]


@dataclass(frozen=True)
class MassReport:
    mass: float
    truncation: float
    tail_estimate: float


def total_mass(density, x_start: float = 8.0, tail_tol: float = 1e-6, max_doublings: int = 14) -> MassReport:
    """Integral of a signed density over the real line.

    Integrates over ``[-X, X]``, doubling ``X`` until the power-law tail
    fitted at ``X`` and ``2X`` on each side carries less than ``tail_tol``;
    the fitted tail is added to the result.
    """
    def quad_piece(a, b):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            return integrate.quad(lambda v: float(density(v)), a, b, epsabs=1e-11, epsrel=1e-10, limit=400)[0]

    X = x_start
    mass = quad_piece(-X, 0.0) + quad_piece(0.0, X)
    tail = math.inf
    for _ in range(max_doublings):
        tail = 0.0
        for sgn in (1.0, -1.0):
            f1, f2 = float(density(sgn * X)), float(density(sgn * 2 * X))
            if f1 != 0 and f2 != 0 and np.sign(f1) == np.sign(f2) and abs(f2) < abs(f1):
                slope = math.log2(abs(f1) / abs(f2))  # f ~ C x^{-slope}
                if slope > 1.0:
                    tail += f1 * X / (slope - 1.0)
                    continue
            tail += math.inf if abs(f1) > 1e-14 else 0.0
        if abs(tail) < tail_tol:
            break
        mass += quad_piece(-2 * X, -X) + quad_piece(X, 2 * X)
        X *= 2
    if not abs(tail) < tail_tol:
        raise ComputationError("total mass: tail did not fall below tolerance", mass=mass, truncation=X, tail=tail)
    return MassReport(mass + tail, X, tail)


def density_grid(m: ModelParams, family: str, xs, t: float, n_nodes: int = 24) -> np.ndarray:
    """Inversion of ``limit_cf`` on a whole grid with one shared frequency mesh.

    Faster than pointwise routes for dense grids; the panel width is set by the
    largest ``|x|`` so every point is resolved.
    """
    _check_time(t)
    xs = np.asarray(xs, dtype=float)
    a, b = _envelope_and_skew(m, family)
    alpha = m.alpha
    xi_max = _cutoff(t, alpha, a)
    h0 = (t * a) ** (-1.0 / alpha) / 4.0
    x_big = float(np.max(np.abs(xs))) if xs.size else 0.0
    edges = list(graded_edges(min(h0, math.pi / (2.0 * x_big + 1e-300))))
    while edges[-1] < xi_max:
        s = edges[-1]
        rate = x_big + t * abs(b) * alpha * max(s, 1e-300) ** (alpha - 1.0)
        edges.append(s + min(h0, math.pi / (2.0 * rate + 1e-300)))
    nodes, w = composite_nodes(np.asarray(edges), n_nodes)
    nodes, w = nodes.ravel(), w.ravel()
    cf = limit_cf(m, family, nodes, t) * w
    out = np.empty(xs.shape)
    flat = xs.ravel()
    for lo in range(0, flat.size, 256):
        chunk = flat[lo : lo + 256]
        out.ravel()[lo : lo + 256] = np.real(np.exp(-1j * np.outer(chunk, nodes)) @ cf) / math.pi
    return out
