import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from presym.errors import InputError, RankError, SingularityError
from presym.pointwise import (
    Splitting,
    build_Z,
    dirac_F,
    dirac_F_prime,
    exp_eta,
    graph_frame,
    horizontal_projection,
    in_I_Z,
    kernel_graph_map,
    numerical_rank,
    principal_angle,
    restriction_to_K,
)

seeds = st.integers(0, 2**32 - 1)


def antisym(rng, n, scale=1.0):
    a = rng.standard_normal((n, n))
    return scale * (a - a.T) / 2


def presym_fiber(rng, n, rank):
    """Random constant pre-symplectic form of the given rank with its kernel splitting."""
    basis = np.linalg.qr(rng.standard_normal((n, n)))[0]
    K, G = basis[:, : n - rank], basis[:, n - rank :]
    core = antisym(rng, rank) + 2 * np.kron(np.eye(rank // 2), [[0.0, 1.0], [-1.0, 0.0]])
    eta = G @ core @ G.T
    return eta, Splitting(K, G)


fibers = st.sampled_from([(2, 2), (3, 2), (4, 2), (4, 4)])


@settings(max_examples=60, deadline=None)
@given(seeds, fibers)
def test_F_is_an_involution_between_I_Z_and_I_minus_Z(seed, dims):
    rng = np.random.default_rng(seed)
    eta, split = presym_fiber(rng, *dims)
    Z = build_Z(eta, split)
    beta = antisym(rng, dims[0], 0.3)
    if not in_I_Z(beta, Z, 1e8):
        return
    back = dirac_F(dirac_F(beta, Z), -Z)
    assert np.allclose(back, beta, atol=1e-9 * max(1.0, np.abs(beta).max()))


@settings(max_examples=40, deadline=None)
@given(seeds, fibers)
def test_F_matches_neumann_series_for_small_beta(seed, dims):
    rng = np.random.default_rng(seed)
    eta, split = presym_fiber(rng, *dims)
    Z = build_Z(eta, split)
    beta = antisym(rng, dims[0])
    beta *= 0.2 / max(np.linalg.norm(Z @ beta, 2), 1e-12)
    series, term = np.zeros_like(beta), beta.copy()
    for _ in range(60):
        series += term
        term = -term @ Z @ beta
    assert np.allclose(dirac_F(beta, Z), series, atol=1e-13)


def test_Z_of_area_form_is_minus_inverse():
    eta = np.array([[0.0, 1.0], [-1.0, 0.0]])
    Z = build_Z(eta, Splitting(np.zeros((2, 0)), np.eye(2)))
    assert np.allclose(Z, [[0.0, 1.0], [-1.0, 0.0]])
    assert np.allclose(Z @ eta, -np.eye(2))


def test_F_blows_up_on_the_boundary_of_I_Z():
    eta = np.array([[0.0, 1.0], [-1.0, 0.0]])
    Z = build_Z(eta, Splitting(np.zeros((2, 0)), np.eye(2)))
    beta = eta.copy()  # Z beta = -id
    assert not in_I_Z(beta, Z)
    with pytest.raises(SingularityError):
        dirac_F(beta, Z)
    assert in_I_Z(0.5 * beta, Z)
    assert np.allclose(dirac_F(0.5 * beta, Z), beta)  # (1 - 1/2)^-1 * beta / 2


def test_F_prime_is_linear_in_alpha():
    rng = np.random.default_rng(1)
    eta, split = presym_fiber(rng, 4, 2)
    Z = build_Z(eta, split)
    beta = antisym(rng, 4, 0.2)
    a, b = rng.standard_normal(4), rng.standard_normal(4)
    lhs = dirac_F_prime(beta, 2 * a - b, Z)
    assert np.allclose(lhs, 2 * dirac_F_prime(beta, a, Z) - dirac_F_prime(beta, b, Z))
    assert np.allclose((np.eye(4) + beta @ Z) @ dirac_F_prime(beta, a, Z), a)


@settings(max_examples=40, deadline=None)
@given(seeds, st.sampled_from([(3, 2), (4, 2), (5, 2), (5, 4)]))
def test_horizontal_exponential_keeps_rank_and_kernel_is_graph(seed, dims):
    rng = np.random.default_rng(seed)
    eta, split = presym_fiber(rng, *dims)
    Z = build_Z(eta, split)
    beta = horizontal_projection(antisym(rng, dims[0], 0.3), split)
    if not in_I_Z(beta, Z, 1e6):
        return
    assert np.allclose(restriction_to_K(beta, split), 0.0)
    new = exp_eta(eta, beta, split, Z)
    assert numerical_rank(new) == dims[1]
    frame = graph_frame(kernel_graph_map(beta, Z, split), split)
    assert np.max(np.abs(new @ frame)) < 1e-10


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, np.pi / 2), st.integers(2, 5))
def test_principal_angle_of_rotated_line(angle, n):
    a = np.eye(n)[:, :1]
    b = (np.cos(angle) * np.eye(n)[:, 0] + np.sin(angle) * np.eye(n)[:, 1])[:, None]
    assert abs(principal_angle(a, b) - angle) < 1e-12


def test_principal_angle_is_small_for_tiny_tilts():
    b = np.array([[1.0], [1e-12], [0.0]])
    assert np.isclose(principal_angle(np.eye(3)[:, :1], b), 1e-12, rtol=1e-6)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 6), st.data())
def test_numerical_rank_of_constructed_matrices(seed, n, data):
    r = data.draw(st.integers(0, n))
    rng = np.random.default_rng(seed)
    u = np.linalg.qr(rng.standard_normal((n, n)))[0]
    v = np.linalg.qr(rng.standard_normal((n, n)))[0]
    s = np.concatenate([rng.uniform(0.5, 2.0, r), np.zeros(n - r)])
    assert numerical_rank(u @ np.diag(s) @ v.T) == r


def test_build_Z_rejects_wrong_kernel():
    eta = np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    with pytest.raises(RankError):
        build_Z(eta, Splitting(np.eye(3)[:, :1], np.eye(3)[:, 1:]))
    with pytest.raises(InputError):
        build_Z(np.ones((3, 3)), Splitting(np.eye(3)[:, 2:], np.eye(3)[:, :2]))


def test_splitting_rejects_dependent_frames():
    with pytest.raises(InputError):
        Splitting(np.array([[1.0], [0.0]]), np.array([[2.0], [0.0]]))
    with pytest.raises(InputError):
        Splitting(np.eye(3)[:, :1], np.eye(3)[:, 1:2])
