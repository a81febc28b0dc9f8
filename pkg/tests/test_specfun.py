import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from fracpseudo import specfun
from fracpseudo._quad import log_trapezoid
from fracpseudo.errors import DomainError
from fracpseudo.specfun import MLParams, SubordinatorParams


def test_ml_exponential_and_cosine():
    for z in (-30.0, -3.0, -0.2, 0.0, 0.7, 4.0):
        assert specfun.mittag_leffler(MLParams(1.0, 1.0), z) == pytest.approx(math.exp(z), rel=1e-13)
    for y in (0.3, 2.0, 9.5):
        assert specfun.mittag_leffler(MLParams(2.0, 1.0), -y * y) == pytest.approx(math.cos(y), abs=1e-12)


def test_ml_half_is_erfcx():
    # E_{1/2,1}(-z) = exp(z^2) erfc(z)
    for z in (0.1, 1.0, 5.0, 40.0, 300.0):
        assert specfun.mittag_leffler(MLParams(0.5, 1.0), -z) == pytest.approx(special.erfcx(z), rel=1e-11)


def test_ml_one_three_halves_is_dawson():
    # E_{1,3/2}(-y^2) = 2 D(y) / (sqrt(pi) y)
    ml = MLParams(1.0, 1.5)
    for y in (0.05, 0.7, 3.0, 12.0):
        expect = 2.0 * special.dawsn(y) / (math.sqrt(math.pi) * y)
        assert specfun.mittag_leffler(ml, -y * y) == pytest.approx(expect, rel=1e-11)


@pytest.mark.parametrize("nu", [0.3, 0.8, 1.2, 1.6])
@pytest.mark.parametrize("mu", [0.4, 1.0, 2.7])
def test_ml_branches_agree_at_switch(nu, mu):
    r = specfun.ml_asymptotic_radius(nu)
    if not math.isfinite(r):
        pytest.skip("no asymptotic branch")
    z = -1.3 * r
    series = specfun._ml_series(nu, mu, z)
    asym = specfun._ml_asymptotic(nu, mu, z)
    assert series == pytest.approx(asym, abs=1e-12)


def test_ml_rejects_bad_indices():
    with pytest.raises(DomainError):
        MLParams(0.0, 1.0)


def test_airy_matches_scipy():
    xs = np.linspace(-15, 20, 71)
    ours = np.array([specfun.airy_ai(x) for x in xs])
    ref = special.airy(xs)[0]
    assert np.max(np.abs(ours - ref)) < 1e-13


def test_subordinator_half_closed_form():
    xs = np.geomspace(1e-3, 1e3, 40)
    for t in (0.5, 1.0, 2.0):
        got = specfun.subordinator_density(SubordinatorParams(0.5), xs, t)
        assert np.allclose(got, specfun.levy_half_density(xs, t), rtol=1e-10, atol=1e-14)


def test_subordinator_frozen_value():
    # h_{1/2}(2, 1) = 2^{-3/2} e^{-1/8} / (2 sqrt(pi)), evaluated with mpmath
    got = specfun.subordinator_density(SubordinatorParams(0.5), 2.0, 1.0)
    assert got == pytest.approx(0.088016331691074869, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(beta=st.floats(0.15, 0.9), lam=st.floats(0.3, 3.0))
def test_subordinator_laplace_transform(beta, lam):
    h = lambda x: specfun.subordinator_density(SubordinatorParams(beta), x, 1.0) * np.exp(-lam * x)  # noqa: E731
    got = log_trapezoid(h, -30.0, 60.0, 0.02)
    assert got == pytest.approx(math.exp(-(lam**beta)), abs=2e-6)


def test_subordinator_positive_and_scaling():
    s = SubordinatorParams(0.7)
    xs = np.geomspace(0.01, 100, 50)
    a = specfun.subordinator_density(s, xs, 2.0)
    b = 2.0 ** (-1 / 0.7) * specfun.subordinator_density(s, xs * 2.0 ** (-1 / 0.7), 1.0)
    assert np.all(a >= 0)
    assert np.allclose(a, b, rtol=1e-12)


def test_gamma_type_density_normalised():
    mass = log_trapezoid(lambda y: specfun.gamma_type_density(1.3, y, 0.8), -40, 10, 0.02)
    assert mass == pytest.approx(1.0, abs=1e-10)



def test_ml_brute_force_oracle():
    import mpmath

    with mpmath.workdps(40):
        ref = mpmath.fsum((-1) ** j / mpmath.gamma(j + 1.5) for j in range(200))
    assert specfun.mittag_leffler(MLParams(1.0, 1.5), -1.0) == pytest.approx(float(ref), rel=1e-13)
    assert specfun.mittag_leffler(MLParams(1.0, 1.0), 1.0) == pytest.approx(math.e, rel=1e-14)
    assert abs(specfun.mittag_leffler(MLParams(2.0, 1.0), -((math.pi / 2) ** 2))) < 1e-14


def test_airy_special_points():
    assert specfun.airy_ai(0.0) == pytest.approx(1 / (3 ** (2 / 3) * math.gamma(2 / 3)), rel=1e-15)
    assert 0 < specfun.airy_ai(20.0) < 1e-10
    assert abs(specfun.airy_ai(-2.338107410459767)) < 1e-14


@pytest.mark.parametrize("g", [0.5, 1.0, 2.0, 3.5, 6.0])
def test_gamma_type_masses(g):
    mass = log_trapezoid(lambda y: specfun.gamma_type_density(g, y, 2.0), -60, 10, 0.01)
    assert mass == pytest.approx(1.0, abs=1e-10)
    assert specfun.gamma_type_density(2.0, 1.0, 1.0) == pytest.approx(2 * math.exp(-1))


@pytest.mark.parametrize("beta", np.linspace(0.2, 0.9, 8))
def test_subordinator_laplace_grid(beta):
    for lam in (0.5, 1.0, 2.0):
        h = lambda x: specfun.subordinator_density(SubordinatorParams(beta), x, 1.3) * np.exp(-lam * x)  # noqa: E731
        assert log_trapezoid(h, -30.0, 80.0, 0.01) == pytest.approx(math.exp(-1.3 * lam**beta), abs=1e-6)


def test_subordinator_nonnegative_random(rng):
    for _ in range(1000):
        beta, x, t = rng.uniform(0.05, 0.95), 10 ** rng.uniform(-3, 3), 10 ** rng.uniform(-1, 1)
        assert specfun.subordinator_density(SubordinatorParams(beta), x, t) >= 0
