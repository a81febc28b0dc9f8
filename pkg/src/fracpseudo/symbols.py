"""Fourier multipliers of the fractional operators and the limit characteristic functions.

Fourier convention: ``u_hat(xi) = int exp(i xi x) u(x) dx``.  With it the right
(plus) Weyl derivative has symbol ``(-i xi)**gamma`` and the left (minus) one
``(i xi)**gamma``; both are taken on the principal branch,
``|xi|**gamma * exp(-+ i pi gamma / 2 * sign(xi))``.  ``sign(0) = 0`` so every
symbol vanishes at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

FAMILIES = ("even", "odd_pq", "feller")


@dataclass(frozen=True)
class ModelParams:
    """Order parameters of a pseudoprocess family.

    ``parity="even"`` gives base order ``2k`` and effective order
    ``alpha = 2 k beta``; ``parity="odd"`` gives ``2k + 1`` and
    ``alpha = (2k + 1) beta``.  ``q`` defaults to ``1 - p``.
    """

    beta: float
    k: int = 1
    parity: str = "even"
    p: float = 0.5
    q: float | None = None
    theta: float = 0.0

    def __post_init__(self):
        if self.q is None:
            object.__setattr__(self, "q", 1.0 - self.p)
        if not 0 < self.beta < 1:
            raise DomainError(f"need 0 < beta < 1, got beta={self.beta}")
        if int(self.k) != self.k or self.k < 1:
            raise DomainError(f"k must be a positive integer, got {self.k}")
        if self.parity not in ("even", "odd"):
            raise DomainError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if not (0 <= self.p <= 1 and 0 <= self.q <= 1) or abs(self.p + self.q - 1) > 1e-12:
            raise DomainError(f"need p, q in [0, 1] with p + q = 1, got p={self.p}, q={self.q}")
        if not -self.beta < self.theta < self.beta:
            raise DomainError(
                f"Feller skewness must satisfy -beta < theta < beta, got theta={self.theta}, beta={self.beta}"
            )

    @property
    def base_order(self) -> int:
        return 2 * self.k if self.parity == "even" else 2 * self.k + 1

    @property
    def alpha(self) -> float:
        return self.beta * self.base_order


def _polar_power(gamma_ord, xi, phase_sign):
    xi = np.asarray(xi, dtype=float)
    mag = np.abs(xi) ** gamma_ord
    return mag * np.exp(phase_sign * 1j * math.pi * gamma_ord / 2.0 * np.sign(xi))


def _out(val):
    return complex(val) if np.ndim(val) == 0 else val


def weyl_symbol(gamma_ord: float, side: str, xi):
    """``(-i xi)**gamma`` for ``side="plus"``, ``(i xi)**gamma`` for ``side="minus"``."""
    if not gamma_ord > 0:
        raise DomainError("Weyl order must be positive")
    if side not in ("plus", "minus"):
        raise DomainError(f"side must be 'plus' or 'minus', got {side!r}")
    return _out(_polar_power(gamma_ord, xi, -1.0 if side == "plus" else 1.0))


def is_odd_integer(gamma_ord: float, tol: float = 1e-12) -> bool:
    return abs(gamma_ord - round(gamma_ord)) < tol and int(round(gamma_ord)) % 2 == 1


def riesz_symbol(gamma_ord: float, xi):
    """Riesz multiplier ``-|xi|**gamma``."""
    if not gamma_ord > 0:
        raise DomainError("Riesz order must be positive")
    val = -np.abs(np.asarray(xi, dtype=float)) ** gamma_ord
    return float(val) if val.ndim == 0 else val


def riesz_assembled(gamma_ord: float, xi):
    """Riesz multiplier rebuilt from the two Weyl symbols; undefined at odd integer order."""
    if is_odd_integer(gamma_ord):
        raise DomainError(f"Riesz assembly is 0/0 at odd integer order {gamma_ord}")
    num = weyl_symbol(gamma_ord, "plus", xi) + weyl_symbol(gamma_ord, "minus", xi)
    return _out(-num / (2.0 * math.cos(math.pi * gamma_ord / 2.0)))


@dataclass(frozen=True)
class IdentityCheck:
    skipped: bool
    max_abs_error: float = math.nan
    reason: str = ""


def riesz_identity_check(gamma_ord: float, xi) -> IdentityCheck:
    """Compare the direct Riesz symbol with its Weyl assembly."""
    if is_odd_integer(gamma_ord):
        return IdentityCheck(True, reason="odd integer order: cos(pi gamma / 2) = 0")
    err = np.abs(np.asarray(riesz_assembled(gamma_ord, xi)) - riesz_symbol(gamma_ord, xi))
    return IdentityCheck(False, float(np.max(err)))


@dataclass(frozen=True)
class FellerSymbol:
    value: complex | np.ndarray
    growth: bool
    """True when ``cos(theta pi / 2)`` is outside ``(0, 1]``, i.e. ``exp(t psi)`` is unbounded."""


def feller_growth_flag(theta: float) -> bool:
    # cos(pi/2) rounds to 6e-17, so treat values at rounding level as zero
    c = math.cos(theta * math.pi / 2.0)
    return not (1e-14 < c <= 1.0)


def feller_window_flag(theta: float) -> bool:
    """True when ``4m - 1 < theta < 4m + 1`` holds for some integer m."""
    m = round(theta / 4.0)
    return 4 * m - 1 < theta < 4 * m + 1


def feller_symbol(gamma_ord: float, theta: float, xi) -> FellerSymbol:
    """Feller multiplier ``-|xi|**gamma * exp(i pi theta / 2 * sign(xi))``."""
    if not gamma_ord > 0:
        raise DomainError("Feller order must be positive")
    xi = np.asarray(xi, dtype=float)
    val = -np.abs(xi) ** gamma_ord * np.exp(1j * math.pi * theta / 2.0 * np.sign(xi))
    return FellerSymbol(_out(val), feller_growth_flag(theta))


def feller_weyl_coefficients(gamma_ord: float, theta: float) -> tuple[float, float]:
    """Coefficients ``(a, b)`` with ``F D = -(a D_plus + b D_minus)``."""
    s = math.sin(math.pi * gamma_ord)
    if abs(s) < 1e-12:
        raise DomainError(f"Feller operator undefined at integer order {gamma_ord}")
    return (
        math.sin(math.pi / 2.0 * (gamma_ord - theta)) / s,
        math.sin(math.pi / 2.0 * (gamma_ord + theta)) / s,
    )


def feller_assembled(gamma_ord: float, theta: float, xi):
    a, b = feller_weyl_coefficients(gamma_ord, theta)
    return _out(-(a * weyl_symbol(gamma_ord, "plus", xi) + b * weyl_symbol(gamma_ord, "minus", xi)))


def _require(m: ModelParams, parity: str):
    if m.parity != parity:
        raise DomainError(f"operation needs parity {parity!r}, model has {m.parity!r}")


def rfrak_symbol(m: ModelParams, xi):
    """Closed-form multiplier of the weighted odd-order operator.

    ``-|xi|**alpha * (1 - i sign(xi) (p - q) tan(beta pi / 2))`` with
    ``alpha = beta (2k + 1)``; reduces to Riesz of order alpha when p = q.
    """
    _require(m, "odd")
    xi = np.asarray(xi, dtype=float)
    skew = (m.p - m.q) * math.tan(m.beta * math.pi / 2.0)
    return _out(-np.abs(xi) ** m.alpha * (1.0 - 1j * np.sign(xi) * skew))


def rfrak_assembled(m: ModelParams, xi, branch: str = "hermitian"):
    """The operator rebuilt from weighted Weyl symbols.

    ``-(p e^{i pi beta k} (-i xi)^alpha + q e^{-i pi beta k} (i xi)^alpha) / cos(beta pi / 2)``.

    With principal-branch Weyl powers (``branch="principal"``) this matches the
    closed form only for ``xi >= 0``; for ``xi < 0`` it differs by the phase
    ``exp(+-2 i pi beta k)``.  ``branch="hermitian"`` evaluates the assembly at
    ``|xi|`` and extends it by ``psi(-xi) = conj(psi(xi))``, which is the
    multiplier of a real operator and agrees with the closed form everywhere.
    """
    _require(m, "odd")
    if branch not in ("hermitian", "principal"):
        raise DomainError(f"branch must be 'hermitian' or 'principal', got {branch!r}")
    xi = np.asarray(xi, dtype=float)
    phase = math.pi * m.beta * m.k
    c = math.cos(m.beta * math.pi / 2.0)

    def assemble(v):
        return -(
            m.p * np.exp(1j * phase) * _polar_power(m.alpha, v, -1.0)
            + m.q * np.exp(-1j * phase) * _polar_power(m.alpha, v, 1.0)
        ) / c

    if branch == "principal":
        return _out(assemble(xi))
    val = assemble(np.abs(xi))
    return _out(np.where(xi < 0, np.conj(val), val))


def rfrak_weyl_coefficients(m: ModelParams) -> tuple[float, float]:
    """Real ``(a, b)`` with ``R = -(a D_plus + b D_minus)`` carrying the closed-form multiplier.

    Solves ``a (-i xi)^alpha + b (i xi)^alpha = |xi|^alpha (1 - i s (p - q) tan(beta pi/2))``.
    Fails when alpha is an integer (the two Weyl symbols are then collinear).
    """
    _require(m, "odd")
    alpha = m.alpha
    ca, sa = math.cos(math.pi * alpha / 2.0), math.sin(math.pi * alpha / 2.0)
    if abs(ca) < 1e-12 or abs(sa) < 1e-12:
        raise DomainError(f"real Weyl form of the operator undefined at integer order {alpha}")
    skew = (m.p - m.q) * math.tan(m.beta * math.pi / 2.0)
    return 0.5 * (1.0 / ca + skew / sa), 0.5 * (1.0 / ca - skew / sa)


def limit_cf(m: ModelParams, family: str, xi, t: float):
    """Characteristic function of the limiting pseudoprocess at time ``t``.

    * ``even``: ``exp(-t |xi|^{2k beta})``
    * ``odd_pq``: ``exp(-t |xi|^alpha (1 - i sign(xi) (p - q) tan(beta pi / 2)))``
    * ``feller`` (odd parity): ``exp(-t |xi|^alpha exp(i pi theta / 2 sign(xi)))``
    * ``feller`` (even parity): ``exp(-t |xi|^{2k beta} cos(pi theta / 2) / cos(pi beta / 2))``
    """
    if family not in FAMILIES:
        raise DomainError(f"family must be one of {FAMILIES}, got {family!r}")
    if not t > 0:
        raise DomainError("time must be positive")
    xi = np.asarray(xi, dtype=float)
    if family == "even":
        _require(m, "even")
        expo = riesz_symbol(m.alpha, xi) + 0j
    elif family == "odd_pq":
        _require(m, "odd")
        expo = rfrak_symbol(m, xi)
    elif m.parity == "odd":
        expo = feller_symbol(m.alpha, m.theta, xi).value
    else:
        scale = math.cos(math.pi * m.theta / 2.0) / math.cos(math.pi * m.beta / 2.0)
        expo = scale * riesz_symbol(m.alpha, xi) + 0j
    return _out(np.exp(t * np.asarray(expo)))
