import math

import numpy as np
import pytest
from scipy.special import beta as beta_fn
from scipy.special import dawsn

from fracpseudo import sojourn as S
from fracpseudo.errors import DomainError


def test_half_closed_dawson_oracle():
    for x in (0.1, 0.5, 1.0, 2.0, 5.0):
        y = 1 / math.sqrt(2 * x)
        expect = 2 * dawsn(y) / (math.sqrt(math.pi) * y) / (math.pi * math.sqrt(2 * x**3))
        assert S.sojourn_half_closed(1.0, x) == pytest.approx(expect, abs=1e-12)


def test_half_closed_matches_kernel_quadrature():
    xs = np.array([0.1, 0.5, 1.0, 2.0, 5.0])
    quad = S.arcsine_mixture(lambda s: S.half_kernel(s, 1.0), xs)
    assert np.allclose(S.sojourn_half_closed(1.0, xs), quad, atol=1e-10)


def test_time_rescaling_bridge():
    xs = np.array([0.2, 1.0, 3.0])
    even = S.sojourn_even_density(S.SojournParams(0.5, t=math.sqrt(2)), xs)
    assert np.allclose(even, S.sojourn_half_closed(1.0, xs), atol=1e-10)


def test_large_x_leading_term():
    x = 1e6
    lead = 1.0 / (math.pi * math.sqrt(2 * x**3)) / math.gamma(1.5)
    assert S.sojourn_half_closed(1.0, x) == pytest.approx(lead, rel=1e-6)


def test_lamperti_normalisation():
    for k in (1, 2, 5):
        n = 2 * k + 1
        assert math.sin(math.pi / n) / math.pi == pytest.approx(1 / beta_fn(1 / n, 1 - 1 / n), rel=1e-14)


def test_densities_nonnegative():
    xs = np.geomspace(0.01, 50, 12)
    assert np.all(S.sojourn_even_density(S.SojournParams(0.3), xs) >= 0)
    assert np.all(S.sojourn_odd_density(S.SojournParams(0.6, 2, "odd"), xs) >= 0)


def test_odd_mass():
    mass = S.total_mass(lambda x: S.sojourn_odd_density(S.SojournParams(0.7, 1, "odd"), x), step=0.1)
    assert mass == pytest.approx(1.0, abs=1e-4)


def test_validation():
    with pytest.raises(DomainError):
        S.sojourn_even_density(S.SojournParams(0.5), 0.0)
    with pytest.raises(DomainError):
        S.sojourn_odd_density(S.SojournParams(0.5), 1.0)
    with pytest.raises(DomainError):
        S.SojournParams(1.5)
