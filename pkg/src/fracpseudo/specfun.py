"""Special functions: Mittag-Leffler, Airy, stable subordinator and gamma-type densities.

Convention used throughout the package: the stable subordinator of index
``beta`` satisfies ``E exp(-lam * H(t)) = exp(-t * lam**beta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from scipy.special import gammaln, rgamma

from .errors import ComputationError, DomainError

ML_TERM_CAP = 20000
# Series terms up to this size are summed in double precision (fsum);
# larger ones switch to mpmath at a precision covering the cancellation.
_ML_DOUBLE_MAX_TERM = 1e3


@dataclass(frozen=True)
class MLParams:
    """Indices of the two-parameter Mittag-Leffler function E_{nu,mu}."""

    nu: float
    mu: float

    def __post_init__(self):
        if not (self.nu > 0 and self.mu > 0):
            raise DomainError(f"Mittag-Leffler indices must be positive, got nu={self.nu}, mu={self.mu}")


@dataclass(frozen=True)
class SubordinatorParams:
    beta: float

    def __post_init__(self):
        if not 0 < self.beta < 1:
            raise DomainError(f"subordinator index must satisfy 0 < beta < 1, got {self.beta}")


# ---------------------------------------------------------------- Mittag-Leffler


def ml_asymptotic_radius(nu: float) -> float:
    """Smallest ``|z|`` (z < 0) from which the algebraic expansion is used.

    For ``1 <= nu < 2`` the neglected exponential contributions are of size
    ``exp(|z|**(1/nu) * cos(pi/nu))``; for ``nu < 1`` the optimally truncated
    expansion has error ``~exp(-|z|**(1/nu))``.  The radius pushes both below
    double precision.  Returns ``inf`` when the expansion is never used.
    """
    if nu >= 2:
        return math.inf
    decay = 1.0 if nu < 1 else abs(math.cos(math.pi / nu))
    if decay < 1e-3:
        return math.inf
    radius = (45.0 / decay) ** nu
    return radius if radius < 1e5 else math.inf


def _ml_log_terms(nu, mu, z, start, stop):
    j = np.arange(start, stop, dtype=float)
    return j * math.log(abs(z)) - gammaln(j * nu + mu)


def _ml_series(nu: float, mu: float, z: float) -> float:
    if z == 0.0:
        return float(rgamma(mu))
    # locate the peak term and the tail cut-off in log space
    logs = []
    n = 0
    peak = -np.inf
    while True:
        block = _ml_log_terms(nu, mu, z, n, n + 256)
        logs.append(block)
        n += 256
        peak = max(peak, block.max())
        if block[-1] < min(peak, 0.0) - 50.0 and block[-1] < block[-2]:
            break
        if n >= ML_TERM_CAP:
            raise ComputationError(
                "Mittag-Leffler series did not converge within the term cap",
                terms=n, log_peak_term=float(peak), log_last_term=float(block[-1]), nu=nu, mu=mu, z=z,
            )
    log_terms = np.concatenate(logs)
    n_terms = int(np.nonzero(log_terms >= min(peak, 0.0) - 50.0)[0][-1]) + 1
    if peak <= math.log(_ML_DOUBLE_MAX_TERM):
        j = np.arange(n_terms)
        terms = np.exp(log_terms[:n_terms]) * np.where((z < 0) & (j % 2 == 1), -1.0, 1.0)
        return math.fsum(terms)
    dps = 25 + int(peak / math.log(10))
    with mpmath.workdps(dps):
        zz = mpmath.mpf(z)
        nu_m, mu_m = mpmath.mpf(nu), mpmath.mpf(mu)
        power = mpmath.mpf(1)
        total = mpmath.mpf(0)
        for j in range(n_terms):
            total += power * mpmath.rgamma(j * nu_m + mu_m)
            power *= zz
        return float(total)


def _ml_asymptotic(nu: float, mu: float, z: float, max_terms: int = 400) -> float:
    """Algebraic expansion ``-sum_j z**(-j) / Gamma(mu - nu*j)`` for large negative z."""
    # 1/Gamma(mu - nu j) = Gamma(1 - mu + nu j) sin(pi (mu - nu j)) / pi; the sine can
    # nearly vanish, so truncation is decided on the smooth envelope instead.
    total = 0.0
    log_z = math.log(-z)
    prev_env = math.inf
    for j in range(1, max_terms):
        arg = 1.0 - mu + nu * j
        log_env = (gammaln(arg) if arg > 0 else 0.0) - j * log_z
        if log_env > prev_env and arg > 1.0:
            break
        prev_env = log_env
        total -= z ** (-j) * float(rgamma(mu - nu * j))
        if log_env < math.log(1e-18 * abs(total) + 1e-300):
            break
    return total


def mittag_leffler(ml: MLParams, z: float) -> float:
    """Two-parameter Mittag-Leffler function ``sum_j z**j / Gamma(j*nu + mu)`` at real z."""
    z = float(z)
    if not math.isfinite(z):
        raise DomainError(f"Mittag-Leffler argument must be finite, got {z}")
    if z < 0 and -z > ml_asymptotic_radius(ml.nu):
        return _ml_asymptotic(ml.nu, ml.mu, z)
    return _ml_series(ml.nu, ml.mu, z)


def mittag_leffler_array(ml: MLParams, z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    flat = out.reshape(-1)
    for i, v in enumerate(z.reshape(-1)):
        flat[i] = mittag_leffler(ml, v)
    return out


# ---------------------------------------------------------------- Airy

# Ai(0) and -Ai'(0) to 45 digits; double-precision constants would not survive the cancellation
with mpmath.workdps(45):
    _AI_C1 = 1 / (mpmath.cbrt(9) * mpmath.gamma(mpmath.mpf(2) / 3))
    _AI_C2 = 1 / (mpmath.cbrt(3) * mpmath.gamma(mpmath.mpf(1) / 3))
_AIRY_SERIES_LIMIT = 8.0


def _airy_maclaurin(x: float) -> float:
    # Ai(0)f(x) + Ai'(0)g(x); the two parts cancel for x > 0, hence the extra digits
    with mpmath.workdps(45):
        xx = mpmath.mpf(x)
        x3 = xx**3
        f_term, g_term = mpmath.mpf(1), xx
        f_sum, g_sum = f_term, g_term
        k = 0
        while True:
            f_term *= x3 / ((3 * k + 2) * (3 * k + 3))
            g_term *= x3 / ((3 * k + 3) * (3 * k + 4))
            f_sum += f_term
            g_sum += g_term
            k += 1
            if abs(f_term) + abs(g_term) < mpmath.mpf(10) ** -40 and k > 3:
                break
        return float(_AI_C1 * f_sum - _AI_C2 * g_sum)


@lru_cache(maxsize=None)
def _airy_u(n: int) -> tuple[float, ...]:
    u = [1.0]
    for k in range(1, n):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k))
    return tuple(u)


def _airy_asymptotic(x: float) -> float:
    u = _airy_u(60)
    if x > 0:
        zeta = 2.0 / 3.0 * x**1.5
        total, prev = 0.0, math.inf
        for k, uk in enumerate(u):
            term = (-1) ** k * uk / zeta**k
            if abs(term) > prev:
                break
            total += term
            prev = abs(term)
        return math.exp(-zeta) / (2.0 * math.sqrt(math.pi) * x**0.25) * total
    ax = -x
    zeta = 2.0 / 3.0 * ax**1.5
    p = q = 0.0
    prev = math.inf
    for k in range(len(u) // 2):
        a = (-1) ** k * u[2 * k] / zeta ** (2 * k)
        b = (-1) ** k * u[2 * k + 1] / zeta ** (2 * k + 1)
        if abs(a) > prev:
            break
        p += a
        q += b
        prev = abs(b)
    phase = zeta + math.pi / 4.0
    return (math.sin(phase) * p - math.cos(phase) * q) / (math.sqrt(math.pi) * ax**0.25)


def airy_ai(x: float) -> float:
    """Airy function Ai(x): Maclaurin series for ``|x| <= 8``, asymptotic expansions beyond."""
    x = float(x)
    if abs(x) <= _AIRY_SERIES_LIMIT:
        return _airy_maclaurin(x)
    if x > 105.0:
        return 0.0
    return _airy_asymptotic(x)


# ---------------------------------------------------------------- subordinator

_KANTER_NODES = 512
_SERIES_SWITCH = 1.0


def _kanter_density(x1: np.ndarray, beta: float) -> np.ndarray:
    # Kanter/Zolotarev form: h(x) = beta/(1-beta) x^{-1/(1-beta)} (1/pi) int_0^pi A e^{-A x^{-beta/(1-beta)}} dphi.
    # The integrand is nonnegative and has no saddle, so the midpoint rule converges fast.
    phi = (np.arange(_KANTER_NODES) + 0.5) * (math.pi / _KANTER_NODES)
    log_a = (
        (np.log(np.sin(beta * phi)) - np.log(np.sin(phi))) / (1.0 - beta)
        + np.log(np.sin((1.0 - beta) * phi))
        - np.log(np.sin(beta * phi))
    )
    expo = -beta / (1.0 - beta) * np.log(x1)
    # log of A * exp(-A * x^{-beta/(1-beta)})
    log_scale = log_a[None, :] + expo[:, None]
    vals = np.exp(log_a[None, :] - np.exp(log_scale))
    mean = vals.mean(axis=1)
    return beta / (1.0 - beta) * x1 ** (-1.0 / (1.0 - beta)) * mean


def _series_density(x1: np.ndarray, beta: float) -> np.ndarray:
    # (1/pi) sum_k (-1)^{k+1} Gamma(beta k + 1)/k! sin(pi beta k) x^{-beta k - 1}
    logx = np.log(x1)
    k_max = 8
    while True:
        k = np.arange(1, k_max + 1, dtype=float)
        log_mag = gammaln(beta * k + 1) - gammaln(k + 1) - beta * k * logx.min()
        if log_mag[-1] < log_mag[0] - 40.0 and log_mag[-1] < log_mag[-2]:
            break
        k_max *= 2
        if k_max > 4096:
            raise ComputationError("subordinator series did not converge", beta=beta, x_min=float(x1.min()))
    coef = (-1.0) ** (k + 1) * np.sin(math.pi * beta * k) * np.exp(gammaln(beta * k + 1) - gammaln(k + 1))
    powers = np.exp(-(beta * k[None, :] + 1.0) * logx[:, None])
    return (powers * coef[None, :]).sum(axis=1) / math.pi


def subordinator_density(s: SubordinatorParams, x, t: float):
    """Density ``h_beta(x, t)`` of the stable subordinator at time ``t``.

    Large arguments use the convergent power series in ``x**(-beta k - 1)``;
    small arguments use Kanter's nonnegative integral representation.
    Accepts scalar or array ``x``.
    """
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr <= 0) or not t > 0:
        raise DomainError("subordinator density needs x > 0 and t > 0")
    beta = s.beta
    scale = t ** (-1.0 / beta)
    x1 = np.atleast_1d(x_arr * scale)
    out = np.empty_like(x1)
    big = x1 >= _SERIES_SWITCH
    if big.any():
        out[big] = _series_density(x1[big], beta)
    if (~big).any():
        out[~big] = _kanter_density(x1[~big], beta)
    out = np.maximum(out, 0.0) * scale
    return float(out[0]) if x_arr.ndim == 0 else out.reshape(x_arr.shape)


def levy_half_density(x, t: float):
    """Closed form of ``h_{1/2}(x, t)`` under the ``exp(-t sqrt(lam))`` convention."""
    x = np.asarray(x, dtype=float)
    return t / (2.0 * math.sqrt(math.pi)) * x**-1.5 * np.exp(-(t**2) / (4.0 * x))


def airy_third_density(x: float, t: float) -> float:
    """Airy form ``t / (x (3x)^{1/3}) Ai(t / (3x)^{1/3})`` of the index-1/3 stable law."""
    c = (3.0 * x) ** (1.0 / 3.0)
    return t / (x * c) * airy_ai(t / c)


def gamma_type_density(gamma_ord: float, x, tscale: float):
    """``g(x, t) = gamma x**(gamma-1) exp(-x**gamma / t) / t``; law of ``G^gamma(t)``."""
    x = np.asarray(x, dtype=float)
    if not (gamma_ord > 0 and tscale > 0) or np.any(x <= 0):
        raise DomainError("gamma-type density needs positive order, scale and argument")
    val = gamma_ord * x ** (gamma_ord - 1.0) * np.exp(-(x**gamma_ord) / tscale) / tscale
    return float(val) if val.ndim == 0 else val
