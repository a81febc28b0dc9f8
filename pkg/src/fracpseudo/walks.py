"""Pseudo random walks and their characteristic functions.

A walk at scale ``gamma`` is a compound-Poisson sum of ``N(t gamma^{-alpha})``
jumps ``eps_j Q_j U_j``: ``N`` has rate ``lambda = 1/Gamma(1 - beta)``, ``Q``
is Pareto with survival ``(gamma/w)^alpha`` on ``w >= gamma``, ``eps = +-1``
with probabilities ``p, q``, and ``U_j`` is a pseudo random variable whose
conditional characteristic function is ``exp(-|xi|^{2k})`` (even order) or
``exp(i xi^{2k+1})`` (odd order).

Every pre-limit CF has the form ``exp(-(lambda t / gamma^alpha) B(xi))`` with
``B = 1 - E[conditional CF of one jump]``, computed here in closed form.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc, roots_genlaguerre

from .errors import DomainError
from .symbols import FAMILIES, ModelParams, limit_cf

MC_CHUNK = 1 << 14


@dataclass(frozen=True)
class WalkParams:
    scale_gamma: float
    model: ModelParams
    lam: float | None = None

    def __post_init__(self):
        if not self.scale_gamma > 0:
            raise DomainError(f"scale gamma must be positive, got {self.scale_gamma}")
        rate = 1.0 / math.gamma(1.0 - self.model.beta)
        if self.lam is None:
            object.__setattr__(self, "lam", rate)
        elif abs(self.lam - rate) > 1e-12 * rate:
            raise DomainError(f"Poisson rate must equal 1/Gamma(1 - beta) = {rate}, got {self.lam}")

    @property
    def alpha(self) -> float:
        return self.model.alpha

    @property
    def intensity(self) -> float:
        """``lambda / gamma^alpha``: expected jumps per unit time."""
        return self.lam * self.scale_gamma ** (-self.alpha)


@dataclass(frozen=True)
class CFEstimate:
    value: complex
    std_error: float
    n_samples: int
    seed: int


def q_survival(scale_gamma: float, alpha: float, w):
    """``P(Q > w)``: 1 below ``gamma``, ``(gamma / w)^alpha`` above."""
    w = np.asarray(w, dtype=float)
    out = np.where(w < scale_gamma, 1.0, (scale_gamma / np.maximum(w, scale_gamma)) ** alpha)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------- one-jump transforms


def _even_jump(beta: float, c: float, u0: float) -> float:
    """``gamma^{-alpha} (1 - E exp(-c Q^{2k}))`` with ``u0 = gamma^{2k}``, ``gamma^alpha = u0^beta``.

    Integration by parts against the Pareto law gives
    ``(1 - e^{-c u0}) / u0^beta + c^beta Gamma(1 - beta, c u0)``.
    """
    if c == 0.0:
        return 0.0
    upper = gammaincc(1.0 - beta, c * u0) * math.gamma(1.0 - beta)
    return -math.expm1(-c * u0) / u0**beta + c**beta * upper


_LAGUERRE = roots_genlaguerre(80, 0.0)


def _odd_jump(beta: float, s: float, u0: float) -> complex:
    """``gamma^{-alpha} (1 - E exp(i s Q^{2k+1}))`` with ``u0 = gamma^{2k+1}``.

    ``= (1 - e^{i s u0}) / u0^beta - i s int_{u0}^inf e^{i s u} u^{-beta} du``.  For
    ``|s| u0 > 2`` the integral is taken on the contour ``u = u0 + i v / s``
    (Gauss-Laguerre); otherwise the full integral ``(-i s)^{beta-1} Gamma(1-beta)``
    minus a Kummer series over ``(0, u0)``.
    """
    if s == 0.0:
        return 0j
    a = s * u0
    if abs(a) > 2.0:
        v, w = _LAGUERRE
        rot = np.sum(w * (1.0 + 1j * v / a) ** (-beta))
        return complex((1.0 - np.exp(1j * a) + np.exp(1j * a) * rot) / u0**beta)
    # int_0^{u0} e^{isu} u^{-beta} du = u0^{1-beta} sum_n (i a)^n / (n! (n + 1 - beta))
    n = np.arange(60)
    terms = np.cumprod(np.concatenate(([1.0 + 0j], np.full(59, 1j * a) / n[1:]))) / (n + 1.0 - beta)
    head = u0 ** (1.0 - beta) * np.sum(terms)
    full = complex(np.exp((beta - 1.0) * (math.log(abs(s)) - 1j * math.copysign(math.pi / 2, s)))) * math.gamma(1.0 - beta)
    return complex(-np.expm1(1j * a) / u0**beta - 1j * s * (full - head))


def _check_xi_t(t):
    if not t > 0:
        raise DomainError("time must be positive")


def _vectorize(fn, xi):
    xi_arr = np.asarray(xi, dtype=float)
    if xi_arr.ndim == 0:
        return complex(fn(float(xi_arr)))
    return np.array([fn(float(v)) for v in xi_arr.ravel()], dtype=complex).reshape(xi_arr.shape)


# ---------------------------------------------------------------- closed-form pre-limit CFs


def prelimit_cf_even(w: WalkParams, xi, t: float):
    """CF of the even-order walk at time ``t``."""
    m = w.model
    if m.parity != "even":
        raise DomainError("even walk needs an even-parity model")
    _check_xi_t(t)
    u0 = w.scale_gamma ** (2 * m.k)

    def one(x):
        return math.exp(-w.lam * t * _even_jump(m.beta, abs(x) ** (2 * m.k), u0))

    return _vectorize(one, xi)


def _odd_mix(m: ModelParams, s: float, u0: float) -> complex:
    return m.p * _odd_jump(m.beta, s, u0) + m.q * _odd_jump(m.beta, -s, u0)


def prelimit_cf_odd(w: WalkParams, xi, t: float):
    """CF of the odd-order walk with signs ``+1`` (prob. ``p``) and ``-1`` (prob. ``q``)."""
    m = w.model
    if m.parity != "odd":
        raise DomainError("odd walk needs an odd-parity model")
    _check_xi_t(t)
    u0 = w.scale_gamma ** (2 * m.k + 1)

    def one(x):
        return np.exp(-w.lam * t * _odd_mix(m, x ** (2 * m.k + 1), u0))

    return _vectorize(one, xi)


def feller_scales(m: ModelParams) -> tuple[float, float]:
    """Jump scales ``(a_minus, a_plus)``, ``a_-+^alpha = sin(pi (beta -+ theta) / 2) / sin(pi beta)``."""
    sb = math.sin(math.pi * m.beta)
    return tuple(
        (math.sin(math.pi * (m.beta + sgn * m.theta) / 2.0) / sb) ** (1.0 / m.alpha) for sgn in (-1.0, 1.0)
    )


def prelimit_cf_feller(w: WalkParams, xi, t: float):
    """CF of the sum of two independent walks with jump scales ``a_-`` and ``a_+``.

    Odd parity: the ``a_-`` walk has positive signs and the ``a_+`` walk negative
    signs.  Even parity: both are symmetric even walks.
    """
    m = w.model
    _check_xi_t(t)
    a_m, a_p = feller_scales(m)
    if m.parity == "odd":
        u0 = w.scale_gamma ** (2 * m.k + 1)
        e = 2 * m.k + 1

        def one(x):
            b = _odd_jump(m.beta, (x * a_m) ** e, u0) + _odd_jump(m.beta, -((x * a_p) ** e), u0)
            return np.exp(-w.lam * t * b)

    else:
        u0 = w.scale_gamma ** (2 * m.k)

        def one(x):
            b = _even_jump(m.beta, abs(x * a_m) ** (2 * m.k), u0) + _even_jump(m.beta, abs(x * a_p) ** (2 * m.k), u0)
            return math.exp(-w.lam * t * b)

    return _vectorize(one, xi)


def prelimit_cf(w: WalkParams, family: str, xi, t: float):
    if family == "even":
        return prelimit_cf_even(w, xi, t)
    if family == "odd_pq":
        return prelimit_cf_odd(w, xi, t)
    if family == "feller":
        return prelimit_cf_feller(w, xi, t)
    raise DomainError(f"family must be one of {FAMILIES}, got {family!r}")


def walk_limit_cf(m: ModelParams, family: str, xi, t: float):
    """``gamma -> 0`` limit of :func:`prelimit_cf`.

    Equal to :func:`~fracpseudo.symbols.limit_cf` except for the odd ``p, q``
    walk, whose limit is ``exp(-t |xi|^alpha (cos(beta pi/2) - i sign(xi) (p - q) sin(beta pi/2)))``,
    i.e. the operator law at time ``t cos(beta pi / 2)``.
    """
    if family == "odd_pq":
        return limit_cf(m, family, xi, t * math.cos(math.pi * m.beta / 2.0))
    return limit_cf(m, family, xi, t)


# ---------------------------------------------------------------- Monte Carlo


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("FRACPSEUDO_THREADS", "1")))
    except ValueError:
        return 1


def _components(w: WalkParams, family: str):
    """List of ``(scale, sign_prob)`` independent walk components."""
    m = w.model
    if family == "even":
        return [(1.0, 0.5)]
    if family == "odd_pq":
        return [(1.0, m.p)]
    if family == "feller":
        a_m, a_p = feller_scales(m)
        if m.parity == "odd":
            return [(a_m, 1.0), (a_p, 0.0)]
        return [(a_m, 0.5), (a_p, 0.5)]
    raise DomainError(f"family must be one of {FAMILIES}, got {family!r}")


def _chunk_sums(w: WalkParams, family: str, xi: float, t: float, size: int, seed: int, index: int):
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))
    m = w.model
    even = m.parity == "even"
    power = m.base_order
    log_mod = np.zeros(size)
    phase = np.zeros(size)
    for scale, p_plus in _components(w, family):
        counts = rng.poisson(t * w.intensity, size)
        total = int(counts.sum())
        q = w.scale_gamma * (1.0 - rng.random(total)) ** (-1.0 / w.alpha)
        owner = np.repeat(np.arange(size), counts)
        z = xi * scale * q
        if even:
            log_mod -= np.bincount(owner, weights=np.abs(z) ** power, minlength=size)
        else:
            sign = np.where(rng.random(total) < p_plus, 1.0, -1.0)
            ang = np.mod((sign * z) ** power, 2.0 * math.pi)
            phase += np.bincount(owner, weights=ang, minlength=size)
    vals = np.exp(log_mod + 1j * phase)
    return vals.sum(), np.sum(vals.real**2 + vals.imag**2)


def mc_walk_cf(w: WalkParams, family: str, xi: float, t: float, n: int, seed: int) -> CFEstimate:
    """Average of the exact conditional pseudo-CF over sampled ``N``, ``eps``, ``Q``.

    Samples are processed in fixed chunks, each seeded by its index, so the
    estimate does not depend on ``FRACPSEUDO_THREADS``.
    """
    if n < 1:
        raise DomainError("need n >= 1 samples")
    _check_xi_t(t)
    sizes = [min(MC_CHUNK, n - lo) for lo in range(0, n, MC_CHUNK)]
    jobs = [(w, family, float(xi), t, sz, seed, i) for i, sz in enumerate(sizes)]
    workers = min(_threads(), len(jobs))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda a: _chunk_sums(*a), jobs))
    else:
        parts = [_chunk_sums(*a) for a in jobs]
    total = sum(p[0] for p in parts)
    sq = sum(p[1] for p in parts)
    mean = total / n
    var = max(sq / n - abs(mean) ** 2, 0.0) * n / max(n - 1, 1)
    return CFEstimate(complex(mean), math.sqrt(var / n), n, seed)


# ---------------------------------------------------------------- convergence


@dataclass(frozen=True)
class ConvergenceReport:
    gammas: tuple[float, ...]
    sup_errors: tuple[float, ...]
    threshold: float = 1e-2

    @property
    def decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.sup_errors, self.sup_errors[1:]))

    @property
    def passed(self) -> bool:
        return self.decreasing and self.sup_errors[-1] < self.threshold


def convergence_report(
    model: ModelParams,
    family: str,
    xi_grid,
    gamma_seq,
    t: float = 1.0,
    threshold: float = 1e-2,
) -> ConvergenceReport:
    """Sup over ``xi_grid`` of ``|prelimit - walk limit|`` for each scale."""
    gammas = tuple(float(g) for g in gamma_seq)
    if any(b >= a for a, b in zip(gammas, gammas[1:])) or gammas[-1] <= 0:
        raise DomainError("gamma sequence must be strictly decreasing and positive")
    xi_grid = np.asarray(xi_grid, dtype=float)
    target = walk_limit_cf(model, family, xi_grid, t)
    errs = []
    for g in gammas:
        pre = prelimit_cf(WalkParams(g, model), family, xi_grid, t)
        errs.append(float(np.max(np.abs(pre - target))))
    return ConvergenceReport(gammas, tuple(errs), threshold)
