import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from presym.errors import DegreeError, InputError, SizeError
from presym.torus import (
    FormField,
    TorusGrid,
    VectorField,
    compose,
    d,
    flow,
    interior,
    lie_bracket,
    lie_derivative,
    pullback,
    random_band_limited,
    wedge,
)

seeds = st.integers(0, 2**32 - 1)


def rand_form(grid, p, rng, kmax=1):
    vals = random_band_limited(grid, (grid.n,) * p, rng, kmax)
    if p == 2:
        vals = vals - np.swapaxes(vals, -1, -2)
    return FormField(grid, p, vals)


def test_grid_validation():
    with pytest.raises(InputError):
        TorusGrid(2, 12)
    with pytest.raises(InputError):
        TorusGrid(5, 8)
    with pytest.raises(SizeError):
        TorusGrid(4, 64)


def test_d_of_trig_function_is_exact():
    grid = TorusGrid(2, 16)
    x = grid.coords
    f = FormField(grid, 0, np.sin(3 * x[..., 0]) * np.cos(2 * x[..., 1]))
    df = d(f).values
    assert np.allclose(df[..., 0], 3 * np.cos(3 * x[..., 0]) * np.cos(2 * x[..., 1]), atol=1e-12)
    assert np.allclose(df[..., 1], -2 * np.sin(3 * x[..., 0]) * np.sin(2 * x[..., 1]), atol=1e-12)


def test_d_of_one_form_matches_curl():
    grid = TorusGrid(2, 16)
    x = grid.coords
    a = np.stack([np.sin(x[..., 1]), np.cos(x[..., 0])], axis=-1)
    da = d(FormField(grid, 1, a)).values
    assert np.allclose(da[..., 0, 1], -np.sin(x[..., 0]) - np.cos(x[..., 1]), atol=1e-12)
    assert np.allclose(da[..., 1, 0], -da[..., 0, 1])


@settings(max_examples=15, deadline=None)
@given(seeds, st.integers(0, 1))
def test_d_squared_vanishes(seed, p):
    grid = TorusGrid(3, 8)
    w = rand_form(grid, p, np.random.default_rng(seed), kmax=2)
    assert d(d(w)).sup_norm() < 1e-12


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_wedge_of_one_forms_is_antisymmetric_and_leibniz(seed):
    rng = np.random.default_rng(seed)
    grid = TorusGrid(3, 16)
    a, b = rand_form(grid, 1, rng), rand_form(grid, 1, rng)
    assert (wedge(a, b) + wedge(b, a)).sup_norm() < 1e-14
    lhs = d(wedge(a, b))
    rhs = wedge(d(a), b) - wedge(a, d(b))
    assert (lhs - rhs).sup_norm() < 1e-10


@settings(max_examples=15, deadline=None)
@given(seeds, st.integers(1, 2))
def test_cartan_formula(seed, p):
    rng = np.random.default_rng(seed)
    grid = TorusGrid(3, 16)
    w = rand_form(grid, p, rng)
    X = VectorField(grid, random_band_limited(grid, (3,), rng, 1))
    lhs = lie_derivative(X, w)
    rhs = interior(X, d(w)) + d(interior(X, w))
    assert (lhs - rhs).sup_norm() < 1e-10


def test_lie_bracket_of_coordinate_fields():
    grid = TorusGrid(2, 16)
    x = grid.coords
    X = VectorField(grid, np.stack([np.ones(grid.shape), np.zeros(grid.shape)], axis=-1))
    Y = VectorField(grid, np.stack([np.zeros(grid.shape), np.sin(x[..., 0])], axis=-1))
    br = lie_bracket(X, Y).values
    assert np.allclose(br[..., 1], np.cos(x[..., 0]), atol=1e-12)
    assert np.allclose(br[..., 0], 0.0, atol=1e-12)


def test_d_of_top_form_is_rejected():
    grid = TorusGrid(2, 8)
    with pytest.raises(DegreeError):
        d(FormField.zeros(grid, 2))


@settings(max_examples=10, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=2, max_size=2))
def test_constant_field_flows_by_translation(c):
    grid = TorusGrid(2, 8)
    phi = flow(VectorField.constant(grid, np.array(c)), 1.0, steps=4)
    assert np.allclose(phi.points, grid.coords + np.array(c), atol=1e-13)
    assert np.allclose(phi.jac, np.eye(2))


def test_pullback_by_translation_shifts_coefficients():
    grid = TorusGrid(2, 16)
    x = grid.coords
    shift = np.array([0.3, -0.7])
    w = FormField(grid, 2, np.zeros(grid.shape + (2, 2)))
    w.values[..., 0, 1] = np.cos(x[..., 0] + 2 * x[..., 1])
    w.values[..., 1, 0] = -w.values[..., 0, 1]
    phi = flow(VectorField.constant(grid, shift), 1.0, steps=2)
    got = pullback(phi, w).values[..., 0, 1]
    assert np.allclose(got, np.cos(x[..., 0] + shift[0] + 2 * (x[..., 1] + shift[1])), atol=1e-12)


def test_shear_flow_matches_closed_form():
    # X = sin(theta_2) d/d theta_1 is autonomous and theta_2 is constant along it
    grid = TorusGrid(2, 16)
    x = grid.coords
    X = VectorField(grid, np.stack([np.sin(x[..., 1]), np.zeros(grid.shape)], axis=-1))
    phi = flow(X, 1.0, steps=20)
    assert np.allclose(phi.points[..., 0], x[..., 0] + np.sin(x[..., 1]), atol=1e-12)
    assert np.allclose(phi.jac[..., 0, 1], np.cos(x[..., 1]), atol=1e-10)


@settings(max_examples=5, deadline=None)
@given(seeds)
def test_flow_inverse_composes_to_identity(seed):
    rng = np.random.default_rng(seed)
    grid = TorusGrid(2, 16)
    X = VectorField(grid, random_band_limited(grid, (2,), rng, 1, 0.3))
    phi = flow(X, 1.0, steps=40)
    ident = compose(phi, phi.inverse())
    assert np.max(np.abs(ident.points - grid.coords)) < 1e-10
    assert np.max(np.abs(ident.jac - np.eye(2))) < 1e-8
