import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from presym.errors import InputError
from presym.families import coordinate_splitting
from presym.foliation import (
    GraphMapField,
    KGForm,
    bracket_l1,
    bracket_l2,
    gauge_equation_residual,
    integrate_gauge_foliation,
    involutivity_residual,
    mc_residual_foliation,
    product_involutivity_check,
    pushforward_distribution,
)
from presym.torus import TorusGrid, VectorField, flow, random_band_limited

seeds = st.integers(0, 2**32 - 1)


@pytest.fixture(scope="module")
def t3():
    # K = span(d1, d2), G = span(d3)
    return TorusGrid(3, 16), coordinate_splitting(3, [0, 1])


def test_zero_graph_map_is_maurer_cartan(t3):
    grid, split = t3
    R, sup = mc_residual_foliation(GraphMapField.zeros(grid, split))
    assert sup == 0.0


def test_sheared_distribution_residual_equals_derivative(t3):
    # graph of Phi(d1) = a sin(theta_2) d3: [d1 + f d3, d2] = -f' d3, so the residual is max |f'| = a
    grid, split = t3
    a = 0.7
    vals = np.zeros(grid.shape + (1, 2))
    vals[..., 0, 0] = a * np.sin(grid.coords[..., 1])
    phi = GraphMapField(grid, split, vals)
    _, sup = mc_residual_foliation(phi)
    assert abs(sup - a) < 1e-12
    assert abs(involutivity_residual(phi.frame(), grid, complement=split.G) - a) < 1e-12


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_constant_graph_maps_are_involutive(seed):
    grid, split = TorusGrid(3, 8), coordinate_splitting(3, [0, 1])
    c = np.random.default_rng(seed).standard_normal((1, 2))
    phi = GraphMapField(grid, split, np.broadcast_to(c, grid.shape + (1, 2)).copy())
    assert mc_residual_foliation(phi)[1] < 1e-12


@settings(max_examples=8, deadline=None)
@given(seeds, st.floats(0.01, 0.5))
def test_mc_residual_equals_involutivity_along_G(seed, amp):
    grid = TorusGrid(4, 8)
    split = coordinate_splitting(4, [0, 1])
    rng = np.random.default_rng(seed)
    phi = GraphMapField(grid, split, random_band_limited(grid, (2, 2), rng, 1, amp))
    _, sup = mc_residual_foliation(phi)
    inv = involutivity_residual(phi.frame(), grid, complement=split.G)
    assert abs(sup - inv) <= 1e-10 * max(1.0, inv)


def test_l1_is_a_differential(t3):
    grid, split = t3
    rng = np.random.default_rng(3)
    Y = KGForm(grid, split, 0, random_band_limited(grid, (1,), rng, 2))
    assert bracket_l1(bracket_l1(Y)).sup_norm() < 1e-11


@settings(max_examples=5, deadline=None)
@given(seeds)
def test_l2_graded_symmetry_on_degree_one(seed):
    # for shifted degree 0 elements l2 is symmetric
    grid = TorusGrid(3, 8)
    split = coordinate_splitting(3, [0, 1])
    rng = np.random.default_rng(seed)
    a = KGForm(grid, split, 1, random_band_limited(grid, (1, 2), rng, 1))
    b = KGForm(grid, split, 1, random_band_limited(grid, (1, 2), rng, 1))
    assert (bracket_l2(a, b) - bracket_l2(b, a)).sup_norm() < 1e-11


def test_zero_gauge_field_keeps_phi(t3):
    grid, split = t3
    phi0 = GraphMapField(grid, split, 0.1 * np.ones(grid.shape + (1, 2)))
    path = integrate_gauge_foliation(phi0, VectorField.zeros(grid), steps=8)
    assert all(np.array_equal(p.values, phi0.values) for p in path.phis)
    assert gauge_equation_residual(path) < 1e-14


def test_gauge_endpoint_matches_pushforward():
    grid = TorusGrid(3, 16)
    split = coordinate_splitting(3, [0])
    x = grid.coords
    Y = VectorField(grid, (0.2 * np.sin(x[..., 0] + x[..., 1]))[..., None] * split.G[:, -1])
    phi0 = GraphMapField.zeros(grid, split)
    path = integrate_gauge_foliation(phi0, Y, steps=40)
    pushed = pushforward_distribution(flow(Y, 1.0, 40), phi0)
    assert np.max(np.abs(path.phis[-1].values - pushed.values)) < 1e-6
    assert product_involutivity_check(path) < 1e-9


def test_scaled_rhs_breaks_product_involutivity():
    grid = TorusGrid(3, 16)
    split = coordinate_splitting(3, [0])
    x = grid.coords
    Y = VectorField(grid, (0.2 * np.sin(x[..., 0] + x[..., 1]))[..., None] * split.G[:, -1])
    path = integrate_gauge_foliation(GraphMapField.zeros(grid, split), Y, steps=40, rhs_scale=1.1)
    assert product_involutivity_check(path) > 1e-3


def test_Y_must_be_a_section_of_G(t3):
    grid, split = t3
    with pytest.raises(InputError):
        integrate_gauge_foliation(GraphMapField.zeros(grid, split), VectorField.constant(grid, np.array([1.0, 0, 0])), steps=2)


def test_graph_map_shape_is_checked(t3):
    grid, split = t3
    with pytest.raises(InputError):
        GraphMapField(grid, split, np.zeros(grid.shape + (2, 1)))
