import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracpseudo import fracops as F
from fracpseudo.errors import DomainError
from fracpseudo.invert import GridSpec
from fracpseudo.symbols import ModelParams


def gauss(h=1e-2, lim=8.0):
    grid = GridSpec(-lim, lim, int(round(2 * lim / h)) + 1)
    return F.SampledFunction.from_callable(grid, lambda x: np.exp(-(x**2)))


def test_weights_recurrence():
    w = F.gl_weights(2.0, 5)
    assert np.allclose(w, [1, -2, 1, 0, 0])
    w = F.gl_weights(0.5, 4)
    assert np.allclose(w, [1, -0.5, -0.125, -0.0625])


def test_integer_order_reduction():
    f = gauss(1e-3)
    d2 = F.weyl_gl(2.0, "plus", f)
    exact = (4 * f.x**2 - 2) * np.exp(-(f.x**2))
    assert np.max(np.abs(d2.values - exact)[d2.mask]) < 1e-5
    d1 = F.weyl_gl(1.0, "minus", f)
    # minus side of order one is -d/dx
    assert np.max(np.abs(d1.values - 2 * f.x * np.exp(-(f.x**2)))[d1.mask]) < 2e-3


def test_riesz_order_two_is_laplacian():
    f = gauss(1e-3)
    r = F.riesz_apply(2.0, f)
    exact = (4 * f.x**2 - 2) * np.exp(-(f.x**2))
    assert np.max(np.abs(r.values - exact)[r.mask]) < 1e-5
    with pytest.raises(DomainError):
        F.riesz_apply(3.0, f)


def test_spectral_matches_gl_at_first_order():
    errs = []
    for h in (2e-3, 1e-3):
        f = gauss(h)
        a, b = F.weyl_gl(1.5, "plus", f), F.weyl_spectral(1.5, "plus", f)
        errs.append(np.max(np.abs(a.values - b.values)[a.mask]))
    assert errs[1] < 1e-3
    assert 1.7 <= errs[0] / errs[1] <= 2.3


def test_rfrak_symmetric_equals_riesz():
    f = gauss()
    m = ModelParams(0.45, 2, "odd", p=0.5)
    a, b = F.rfrak_apply(m, f), F.riesz_apply(m.alpha, f)
    assert np.max(np.abs(a.values - b.values)) < 1e-10


def test_feller_zero_theta_is_riesz():
    f = gauss()
    a, b = F.feller_apply(1.4, 0.0, f), F.riesz_apply(1.4, f)
    assert np.max(np.abs(a.values - b.values)) < 1e-10


def test_rfrak_complex_form_is_complex(odd_model):
    out = F.rfrak_apply(odd_model, gauss(), form="complex")
    assert np.max(np.abs(out.values.imag)) > 1e-2


@settings(max_examples=20, deadline=None)
@given(g=st.floats(0.3, 3.8), shift=st.integers(1, 20))
def test_translation_equivariance(g, shift):
    grid = GridSpec(-8, 8, 801)
    x = grid.points()
    f = F.SampledFunction(grid, np.exp(-(x**2)))
    fs = F.SampledFunction(grid, np.exp(-((x - shift * grid.step) ** 2)))
    a, b = F.weyl_gl(g, "plus", f), F.weyl_gl(g, "plus", fs)
    sl = slice(200, 600)
    assert np.allclose(a.values[sl], b.values[sl.start + shift : sl.stop + shift], atol=1e-9 * grid.step ** (-g))


@settings(max_examples=20, deadline=None)
@given(g=st.floats(0.3, 3.8), a=st.floats(-3, 3), b=st.floats(-3, 3))
def test_linearity(g, a, b):
    grid = GridSpec(-6, 6, 401)
    x = grid.points()
    u, v = np.exp(-(x**2)), x * np.exp(-(x**2) / 2)
    lhs = F.weyl_gl(g, "minus", F.SampledFunction(grid, a * u + b * v)).values
    rhs = a * F.weyl_gl(g, "minus", F.SampledFunction(grid, u)).values + b * F.weyl_gl(
        g, "minus", F.SampledFunction(grid, v)
    ).values
    assert np.allclose(lhs, rhs, atol=1e-9 * grid.step ** (-g))


def test_residual_skip_and_validation():
    rep = F.pde_residual(ModelParams(0.5, 3, "even"), "even", 1.0, 1e-3, GridSpec(-5, 5, 101))
    assert rep.skipped and "odd integer" in rep.reason
    with pytest.raises(DomainError):
        F.pde_residual(ModelParams(0.5, 2, "even"), "even", 1.0, 2.0, GridSpec(-5, 5, 101))


def test_feller_residual_small():
    m = ModelParams(0.5, 1, "odd", theta=0.25)
    rep = F.pde_residual(m, "feller", 1.0, 1e-3, GridSpec(-20, 20, 4001), report_window=10)
    assert rep.max_norm < 1e-2


def test_non_uniform_grid_rejected():
    with pytest.raises(DomainError):
        F.SampledFunction(GridSpec(0.1, 1.0, 5, spacing="log"), np.ones(5))
