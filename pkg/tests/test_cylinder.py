import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from presym import cylinder as cy
from presym.errors import InputError
from presym.pointwise import numerical_rank

seeds = st.integers(0, 2**32 - 1)


def presym(rng, n, rank):
    q = np.linalg.qr(rng.standard_normal((n, n)))[0]
    core = np.zeros((n, n))
    for i in range(rank // 2):
        a = rng.uniform(0.5, 2.0)
        core[2 * i, 2 * i + 1], core[2 * i + 1, 2 * i] = a, -a
    return q @ core @ q.T


def nullity(mat):
    return mat.shape[-1] - int(numerical_rank(mat))


def test_theta_layout():
    eta = np.array([[0.0, 2.0], [-2.0, 0.0]])
    A = np.array([3.0, 5.0])
    th = cy.assemble_theta(eta, A)
    assert np.array_equal(th, [[0, 2, -3], [-2, 0, -5], [3, 5, 0]])


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from([(2, 0), (2, 2), (3, 0), (3, 2), (4, 2), (4, 4), (5, 2), (5, 4)]), st.booleans())
def test_case_analysis_matches_svd_nullity(seed, dims, in_image):
    n, rank = dims
    rng = np.random.default_rng(seed)
    eta = presym(rng, n, rank)
    A = eta @ rng.standard_normal(n) if in_image else rng.standard_normal(n)
    case, ker_eta, dim = (int(x) for x in cy.classify(eta, A))
    theta = cy.assemble_theta(eta, A)
    assert dim == nullity(theta)
    assert ker_eta == nullity(eta)
    if in_image or rank == n:
        assert case == cy.CASE_IMAGE and dim == ker_eta + 1
    else:
        assert case == cy.CASE_TRANSVERSE and dim == ker_eta - 1
    frame, fdim, _ = cy.ker_theta_point(eta, A)
    assert frame.shape == (n + 1, dim) and fdim == dim
    assert np.max(np.abs(theta @ frame), initial=0.0) < 1e-10
    if dim:
        assert numerical_rank(frame) == dim


def test_zero_A_is_case_one():
    case, ker_eta, dim = cy.classify(np.zeros((3, 3)), np.zeros(3))
    assert case == cy.CASE_IMAGE and dim == 4


def test_mixed_example_two_of_three_and_closed_rank():
    th = cy.mixed_example(8, 9)
    rule = cy.lemma_two_of_three(th)
    # eta_0 = 0 makes t = 0 case 2 while later nodes are case 1
    assert rule["consistent"] and not rule["case_uniform"]
    assert 0 < rule["case1_fraction"] < 1
    assert cy.cor_presym_cylinder(th)["applicable"] is False


def test_moser_ready_example_is_closed_and_perturbation_is_not():
    good = cy.cor_presym_cylinder(cy.moser_ready_example(8, 9))
    assert good["lhs"] and good["rhs"] and good["d_theta"] < 1e-10
    bad = cy.cor_presym_cylinder(cy.moser_ready_example(8, 9, A_scale=1.1))
    assert not bad["lhs"] and not bad["rhs"] and bad["variation"] > 1e-3


@settings(max_examples=10, deadline=None)
@given(seeds, st.sampled_from(cy.FAMILY_KINDS))
def test_engineered_families_obey_kernel_formula_and_two_of_three(seed, kind):
    th = cy.engineered_family(np.random.default_rng(seed), kind)
    count, _, _ = cy.rank_formula_mismatches(th.etas, th.As)
    assert count == 0
    assert cy.lemma_two_of_three(th)["consistent"]


def test_cylinder_form_validates_shapes():
    th = cy.mixed_example(8, 5)
    with pytest.raises(InputError):
        cy.CylinderForm(th.grid, th.times, th.etas[:, ..., :1], th.As)
    with pytest.raises(InputError):
        cy.CylinderForm(th.grid, th.times[:3], th.etas, th.As)
