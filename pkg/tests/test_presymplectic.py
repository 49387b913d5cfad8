import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from presym.errors import InputError, SolvabilityError
from presym.families import (
    model_T2,
    model_T3,
    moser_family,
    random_horizontal_beta,
    random_mc_beta,
    raw_gauge_family,
    sample_gauge_path,
)
from presym.foliation import mc_residual_foliation
from presym.presymplectic import (
    alpha_from_hat,
    beta_from_hat,
    classify_gauge_path,
    gauge_transform,
    hat_alpha,
    hat_beta,
    mc_residual_presym,
    moser_solve,
    moser_vector_from_gauge,
    restriction_defect,
    strict_morphism,
)
from presym.torus import FormField, TorusGrid, d, random_band_limited

seeds = st.integers(0, 2**32 - 1)


@pytest.fixture(scope="module")
def t3():
    return model_T3(16)


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_hat_maps_roundtrip(seed):
    model = model_T3(8)
    rng = np.random.default_rng(seed)
    beta = random_horizontal_beta(model, rng, 0.2, 1)
    alpha = FormField(model.grid, 1, random_band_limited(model.grid, (3,), rng, 1))
    assert (beta_from_hat(model, hat_beta(model, beta)) - beta).sup_norm() < 1e-13
    back = alpha_from_hat(model, beta, hat_alpha(model, beta, alpha))
    assert (back - alpha).sup_norm() < 1e-13


@settings(max_examples=5, deadline=None)
@given(seeds)
def test_forward_built_mc_forms_are_closed_and_keep_rank(seed):
    model = model_T3(16)
    beta = random_mc_beta(model, np.random.default_rng(seed), 0.1, 1)
    closed, dev = mc_residual_presym(model, beta)
    assert closed < 1e-9 and dev == 0
    assert restriction_defect(model, beta) < 1e-12


def test_exact_linear_mc_form_on_T2():
    # on the 2-torus every 2-form is closed; beta = c eta stays MC while 1 + c != 0
    model = model_T2(8)
    closed, dev = mc_residual_presym(model, FormField.constant(model.grid, 0.5 * model.eta))
    assert closed == 0.0 and dev == 0


def test_non_closed_horizontal_form_fails(t3):
    x = t3.grid.coords
    v = np.zeros(t3.grid.shape + (3, 3))
    v[..., 1, 2] = 0.1 * np.cos(x[..., 0])  # d of this has a d theta_1 ^ d theta_2 ^ d theta_3 part
    v[..., 2, 1] = -v[..., 1, 2]
    beta = FormField(t3.grid, 2, v)
    closed, _ = mc_residual_presym(t3, beta)
    assert closed > 1e-3
    assert np.isclose(closed, d(hat_beta(t3, beta)).sup_norm())


def test_strict_morphism_of_mc_form_is_involutive():
    from presym.families import model_T4

    model = model_T4(16)
    beta = random_mc_beta(model, np.random.default_rng(7), 0.1, 1)
    _, sup = mc_residual_foliation(strict_morphism(model, beta))
    assert sup < 1e-9


def test_gauge_transform_rejects_non_horizontal_data(t3):
    grid = t3.grid
    b = FormField.zeros(grid, 2)
    a = FormField.constant(grid, np.array([1.0, 0.0, 0.0]))  # d theta_1 does not vanish on K
    with pytest.raises(InputError):
        gauge_transform(t3, np.linspace(0, 1, 5), [b] * 5, [a] * 5)


def test_gauge_verdicts_for_forward_and_control_paths():
    model = model_T3(8)
    fwd = sample_gauge_path(model, *raw_gauge_family(model, 0.1, "moving"), 33)
    assert fwd.verdict() == "gauge-equivalent"
    b, a = raw_gauge_family(model, 0.1, "moving", alpha_scale=1.1)
    times = np.linspace(0, 1, 33)
    verdict, path = classify_gauge_path(model, times, [b(t) for t in times], [a(t) for t in times])
    assert verdict == "not-gauge-equivalent" and path.gauge_residual > 1e-3


def test_isotopy_from_gauge_path():
    model = model_T3(16)
    path = sample_gauge_path(model, *raw_gauge_family(model, 0.1, "moving"), 33)
    res = moser_vector_from_gauge(model, path)
    assert res.identity_residual < 1e-12
    assert res.certificate < 1e-8
    assert res.in_G_defect < 1e-12


def test_moser_families():
    grid = TorusGrid(2, 32)
    eta, gamma, split = moser_family(grid, "symplectic")
    res = moser_solve(grid, eta, gamma, 50, split)
    assert res.certificate < 1e-10 and not res.switches
    grid3 = TorusGrid(3, 16)
    eta, gamma, split = moser_family(grid3, "trivial")
    triv = moser_solve(grid3, eta, gamma, 4, split)
    assert np.max(np.abs(triv.flow.displacement)) == 0.0 and triv.certificate == 0.0
    eta, gamma, split = moser_family(grid3, "nonexact")
    with pytest.raises(SolvabilityError):
        moser_solve(grid3, eta, gamma, 4, split)
