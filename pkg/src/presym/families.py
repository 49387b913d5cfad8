"""Forward-constructed example families used by tests, the acceptance suite and the CLI.

Every family here is built from the side where the relevant condition is
linear or exact, so its expected outcome is known by construction.
"""

import numpy as np

from .pointwise import Splitting, horizontal_projection
from .presymplectic import PresymplecticModel, alpha_from_hat, beta_from_hat, gauge_transform
from .torus import FormField, TorusGrid, random_band_limited, spectral_gradient


def constant_two_form(n, entries):
    """Antisymmetric matrix from 0-based ``(i, j, value)`` triples."""
    mat = np.zeros((n, n))
    for i, j, v in entries:
        mat[i, j] += v
        mat[j, i] -= v
    return mat


def coordinate_splitting(n, kernel_axes):
    """K spanned by the listed coordinate axes, G by the others."""
    eye = np.eye(n)
    rest = [i for i in range(n) if i not in kernel_axes]
    return Splitting(eye[:, list(kernel_axes)], eye[:, rest])


def model_T2(N):
    """Symplectic ``d theta_1 ^ d theta_2`` on the 2-torus (K = 0)."""
    grid = TorusGrid(2, N)
    return PresymplecticModel(grid, constant_two_form(2, [(0, 1, 1.0)]), coordinate_splitting(2, []))


def model_T3(N):
    """``d theta_2 ^ d theta_3`` on the 3-torus, K = span(d/d theta_1)."""
    grid = TorusGrid(3, N)
    return PresymplecticModel(grid, constant_two_form(3, [(1, 2, 1.0)]), coordinate_splitting(3, [0]))


def model_T4(N):
    """``d theta_3 ^ d theta_4`` on the 4-torus, K = span(d/d theta_1, d/d theta_2)."""
    grid = TorusGrid(4, N)
    return PresymplecticModel(grid, constant_two_form(4, [(2, 3, 1.0)]), coordinate_splitting(4, [0, 1]))


def _one_form(grid, comps):
    vals = grid.zeros(grid.n)
    for i, f in comps.items():
        vals[..., i] = f
    return FormField(grid, 1, vals)


def _two_form(grid, comps):
    vals = grid.zeros(grid.n, grid.n)
    for (i, j), f in comps.items():
        vals[..., i, j] += f
        vals[..., j, i] -= f
    return FormField(grid, 2, vals)


# -- gauge paths built on the transformed side ------------------------------------


def hatted_gauge_family(model, eps=0.1, variant="moving"):
    """Callables ``(beta_hat_t, alpha_hat_t)`` with ``d/dt beta_hat = d alpha_hat`` on the 3-torus model.

    ``"static"``: ``alpha_hat = eps sin(theta_2) d theta_3``, the kernel stays
    ``d/d theta_1``.  ``"moving"``: ``alpha_hat = eps sin(theta_1) d theta_3``, so
    ``eta_t = (t eps cos(theta_1) d theta_1 + d theta_2) ^ d theta_3`` and the
    kernel tilts with t and theta_1.
    """
    grid = model.grid
    x = grid.coords
    axis = 1 if variant == "static" else 0
    s, c = np.sin(x[..., axis]), np.cos(x[..., axis])
    a_hat = _one_form(grid, {2: eps * s})
    if variant == "static":
        b_unit = _two_form(grid, {(1, 2): eps * c})
    else:
        b_unit = _two_form(grid, {(0, 2): eps * c})
    return (lambda t: t * b_unit), (lambda t: a_hat)


def raw_gauge_family(model, eps=0.1, variant="moving", alpha_scale=1.0):
    """Callables ``t -> beta_t``, ``t -> alpha_t`` obtained by inverting the transform."""
    bh, ah = hatted_gauge_family(model, eps, variant)

    def beta(t):
        return beta_from_hat(model, bh(t))

    def alpha(t):
        return alpha_scale * alpha_from_hat(model, beta(t), ah(t))

    return beta, alpha


def sample_gauge_path(model, beta_fn, alpha_fn, nodes=65, keep_callables=True):
    times = np.linspace(0.0, 1.0, nodes)
    betas = [beta_fn(t) for t in times]
    alphas = [alpha_fn(t) for t in times]
    kw = dict(beta_fn=beta_fn, alpha_fn=alpha_fn) if keep_callables else {}
    return gauge_transform(model, times, betas, alphas, **kw)


# -- Moser families -------------------------------------------------------------


def moser_family(grid, name, eps=0.1):
    """``(eta_t, gamma_t, split)`` for a named family.

    ``symplectic``: 2-torus, ``eta_t = (1 + t eps cos theta_1) d theta_1 ^ d theta_2``,
    ``gamma = eps sin theta_1 d theta_2``.
    ``degenerate``: 3-torus, ``eta_t = (1 + t eps cos theta_2) d theta_2 ^ d theta_3``,
    ``gamma = eps sin theta_2 d theta_3``.
    ``trivial``: constant ``eta``, ``gamma = 0``.
    ``nonexact``: the degenerate family with ``gamma`` given a kernel component,
    so ``gamma_t`` leaves the image of ``eta_t``.
    """
    x = grid.coords
    if name == "symplectic":
        if grid.n != 2:
            raise ValueError("symplectic Moser family lives on the 2-torus")
        c, s = np.cos(x[..., 0]), np.sin(x[..., 0])
        split = coordinate_splitting(2, [])
        eta = lambda t: _two_form(grid, {(0, 1): 1.0 + t * eps * c})
        gamma = lambda t: _one_form(grid, {1: eps * s})
        return eta, gamma, split
    if grid.n != 3:
        raise ValueError(f"{name} Moser family lives on the 3-torus")
    c, s = np.cos(x[..., 1]), np.sin(x[..., 1])
    split = coordinate_splitting(3, [0])
    if name == "trivial":
        return (lambda t: _two_form(grid, {(1, 2): np.ones(grid.shape)})), (lambda t: _one_form(grid, {})), split
    eta = lambda t: _two_form(grid, {(1, 2): 1.0 + t * eps * c})
    if name == "degenerate":
        return eta, (lambda t: _one_form(grid, {2: eps * s})), split
    if name == "nonexact":
        return eta, (lambda t: _one_form(grid, {0: eps * c, 2: eps * s})), split
    raise ValueError(f"unknown Moser family {name!r}")


# -- random data ------------------------------------------------------------------


def pulled_back_form(model, displacement):
    """``f^* eta`` for ``f = id + displacement``; closed and of the same rank as eta."""
    grid = model.grid
    grad = spectral_gradient(displacement, grid)  # [..., i, a] = d_i g^a
    J = np.eye(grid.n) + np.swapaxes(grad, -1, -2)
    return FormField(grid, 2, np.swapaxes(J, -1, -2) @ model.eta @ J)


def random_mc_beta(model, rng, amplitude=0.1, kmax=2):
    """A horizontal Maurer-Cartan 2-form: ``F^-1`` of ``f^* eta - eta`` for a random near-identity f."""
    disp = random_band_limited(model.grid, (model.grid.n,), rng, kmax, amplitude)
    beta_hat = pulled_back_form(model, disp) - model.eta_field
    return beta_from_hat(model, beta_hat)


def random_two_form(grid, rng, amplitude=0.1, kmax=2):
    vals = random_band_limited(grid, (grid.n, grid.n), rng, kmax, 1.0)
    vals = 0.5 * (vals - np.swapaxes(vals, -1, -2))
    top = np.max(np.abs(vals))
    return FormField(grid, 2, vals * (amplitude / top))


def random_horizontal_beta(model, rng, amplitude=0.1, kmax=2):
    b = random_two_form(model.grid, rng, amplitude, kmax)
    return FormField(model.grid, 2, horizontal_projection(b.values, model.split))
