import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from fracpseudo import walks as W
from fracpseudo.errors import DomainError
from fracpseudo.symbols import ModelParams, limit_cf

EVEN = ModelParams(0.5, 1, "even")


def test_rate_enforced():
    w = W.WalkParams(0.1, EVEN)
    assert w.lam * math.gamma(0.5) == pytest.approx(1.0, rel=1e-15)
    with pytest.raises(DomainError):
        W.WalkParams(0.1, EVEN, lam=1.0)
    with pytest.raises(DomainError):
        W.WalkParams(0.0, EVEN)


def test_q_survival():
    assert W.q_survival(0.2, 1.5, 0.1) == 1.0
    assert W.q_survival(0.2, 1.5, 0.4) == pytest.approx(2**-1.5)
    ws = np.linspace(0, 10, 200)
    s = W.q_survival(0.2, 1.5, ws)
    assert np.all(np.diff(s) <= 0) and s[-1] < 1e-2


def test_q_fractional_moment():
    # E Q^{1/2} for alpha = 1.5: alpha gamma^alpha int w^{1/2 - alpha - 1} = gamma^{1/2} alpha / (alpha - 1/2)
    g, a = 0.3, 1.5
    num = integrate.quad(lambda w: w**0.5 * a * g**a * w ** (-a - 1), g, np.inf)[0]
    assert num == pytest.approx(g**0.5 * a / (a - 0.5), rel=1e-10)


def test_prelimit_frozen():
    # mpmath: direct quadrature (even) and complex incomplete gamma (odd)
    assert W.prelimit_cf_even(W.WalkParams(0.1, EVEN), 1.0, 1.0) == pytest.approx(0.3891949572288653, abs=1e-10)
    m = ModelParams(0.5, 1, "odd", p=0.8)
    got = W.prelimit_cf_odd(W.WalkParams(0.1, m), 1.3, 1.0)
    assert got == pytest.approx(0.28831055513014368 + 0.19951139464910739j, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(
    beta=st.floats(0.1, 0.9),
    gam=st.floats(1e-3, 1.0),
    xi=st.floats(0.01, 8.0),
    p=st.floats(0, 1),
    family=st.sampled_from(["even", "odd_pq", "feller_even", "feller_odd"]),
)
def test_prelimit_hermitian_and_bounded(beta, gam, xi, p, family):
    parity = "odd" if family in ("odd_pq", "feller_odd") else "even"
    m = ModelParams(beta, 1, parity, p=p, theta=0.3 * beta)
    fam = "feller" if family.startswith("feller") else family
    w = W.WalkParams(gam, m)
    a, b = W.prelimit_cf(w, fam, xi, 1.0), W.prelimit_cf(w, fam, -xi, 1.0)
    assert b == pytest.approx(np.conj(a), abs=1e-12)
    assert abs(a) <= 1 + 1e-12
    assert W.prelimit_cf(w, fam, 0.0, 1.0) == 1.0


def test_odd_symmetric_is_real_in_limit():
    m = ModelParams(0.5, 1, "odd", p=0.5)
    val = W.prelimit_cf_odd(W.WalkParams(1e-3, m), 1.2, 1.0)
    assert abs(np.angle(val)) < 1e-12


def test_odd_shrinks_to_walk_limit():
    m = ModelParams(0.5, 1, "odd", p=0.8)
    target = W.walk_limit_cf(m, "odd_pq", 1.3, 1.0)
    d = [abs(W.prelimit_cf_odd(W.WalkParams(g, m), 1.3, 1.0) - target) for g in (0.1, 0.01)]
    assert d[1] < d[0]


def test_odd_walk_limit_is_time_rescaled():
    m = ModelParams(0.5, 1, "odd", p=0.8)
    xi = np.linspace(-3, 3, 13)
    c, s = math.cos(math.pi / 4), math.sin(math.pi / 4)
    expect = np.exp(-np.abs(xi) ** 1.5 * (c - 1j * np.sign(xi) * 0.6 * s))
    assert np.allclose(W.walk_limit_cf(m, "odd_pq", xi, 1.0), expect, atol=1e-14)


def test_cauchy_walk_limit():
    # beta = 1/(2k+1): the walk limit is Cauchy with scale cos(pi/(2(2k+1))) and location (p - q) sin(...)
    m = ModelParams(1 / 3, 1, "odd", p=0.9)
    xi = np.linspace(-4, 4, 9)
    a = math.pi / 6
    expect = np.exp(-np.abs(xi) * math.cos(a) + 1j * xi * 0.8 * math.sin(a))
    assert np.allclose(W.walk_limit_cf(m, "odd_pq", xi, 1.0), expect, atol=1e-14)


def test_feller_even_theta_zero_limit():
    m = ModelParams(0.4, 1, "even", theta=0.0)
    val = W.prelimit_cf_feller(W.WalkParams(1e-4, m), 2.0, 1.0)
    assert val == pytest.approx(math.exp(-(2.0**0.8) / math.cos(0.2 * math.pi)), abs=5e-3)


def test_feller_odd_shrinks():
    m = ModelParams(0.4, 1, "odd", theta=0.2)
    target = limit_cf(m, "feller", 2.0, 1.0)
    d = [abs(W.prelimit_cf_feller(W.WalkParams(g, m), 2.0, 1.0) - target) for g in (0.1, 0.01)]
    assert d[1] < d[0]


def test_convergence_report_even_small_scale():
    rep = W.convergence_report(EVEN, "even", np.linspace(-5, 5, 41), (0.1, 0.01, 1e-3))
    assert rep.decreasing and rep.sup_errors[-1] < 1e-2
    with pytest.raises(DomainError):
        W.convergence_report(EVEN, "even", [1.0], (0.1, 0.2))


def test_mc_zero_frequency_and_reproducible():
    w = W.WalkParams(0.1, EVEN)
    e = W.mc_walk_cf(w, "even", 0.0, 1.0, 1000, 5)
    assert e.value == 1.0 and e.std_error == 0.0
    a = W.mc_walk_cf(w, "even", 1.0, 1.0, 40000, 5)
    b = W.mc_walk_cf(w, "even", 1.0, 1.0, 40000, 5)
    assert a == b


def test_mc_independent_of_threads(monkeypatch):
    w = W.WalkParams(0.1, ModelParams(0.5, 1, "odd", p=0.7))
    monkeypatch.setenv("FRACPSEUDO_THREADS", "1")
    a = W.mc_walk_cf(w, "odd_pq", 1.0, 1.0, 50000, 9)
    monkeypatch.setenv("FRACPSEUDO_THREADS", "4")
    b = W.mc_walk_cf(w, "odd_pq", 1.0, 1.0, 50000, 9)
    assert a == b


@pytest.mark.parametrize(
    "family,model",
    [
        ("odd_pq", ModelParams(0.5, 1, "odd", p=0.7)),
        ("feller", ModelParams(0.5, 1, "odd", theta=0.25)),
        ("feller", ModelParams(0.5, 1, "even", theta=0.25)),
    ],
)
def test_mc_matches_closed_form(family, model):
    w = W.WalkParams(0.1, model)
    est = W.mc_walk_cf(w, family, 1.3, 1.0, 100000, 11)
    assert abs(est.value - W.prelimit_cf(w, family, 1.3, 1.0)) < 4 * est.std_error


def test_mc_even_modulus():
    est = W.mc_walk_cf(W.WalkParams(0.1, EVEN), "even", 2.0, 1.0, 20000, 1)
    assert abs(est.value) <= 1 + 3 * est.std_error
