"""2-forms ``Theta = eta_t + dt ^ A_t`` on the cylinder ``T^n x [0, 1]``.

At a point ``(p, t)`` the kernel of Theta falls into one of two cases:

1. ``A_t`` lies in the image of ``eta_t#`` (equivalently it kills
   ``ker eta_t``).  Then ``ker Theta = {v + c d/dt : iota_v eta_t = -c A_t}``
   and has dimension ``dim ker eta_t + 1``.
2. Otherwise ``ker Theta = ker eta_t  ^  ker A_t`` of dimension
   ``dim ker eta_t - 1``.

Matrices of Theta use the coordinate order ``(theta_1, ..., theta_n, t)``.
"""

import numpy as np

from .errors import InputError
from .pointwise import TAU_RANK, _rank_from_singular_values
from .torus import FormField, TorusGrid, spectral_gradient, time_derivative, uniform_step
from .torus import alternate

CASE_IMAGE = 1
CASE_TRANSVERSE = 2


class CylinderForm:
    """``eta_t`` (2-forms) and ``A_t`` (1-forms) at uniform t-nodes."""

    def __init__(self, grid, times, etas, As):
        times = np.asarray(times, dtype=float)
        if len(etas) != len(times) or len(As) != len(times):
            raise InputError("cylinder form needs one eta and one A per node")
        if len(times) > 1:
            uniform_step(times)
        self.grid = grid
        self.times = times
        self.etas = np.stack([e.values if isinstance(e, FormField) else np.asarray(e, float) for e in etas])
        self.As = np.stack([a.values if isinstance(a, FormField) else np.asarray(a, float) for a in As])
        if self.etas.shape[1:] != grid.shape + (grid.n, grid.n) or self.As.shape[1:] != grid.shape + (grid.n,):
            raise InputError("cylinder form components do not match the grid")
        if not (np.all(np.isfinite(self.etas)) and np.all(np.isfinite(self.As))):
            raise InputError("cylinder form has non-finite values")

    @classmethod
    def from_callables(cls, grid, times, eta_fn, A_fn):
        return cls(grid, times, [eta_fn(t) for t in times], [A_fn(t) for t in times])

    def matrices(self):
        """Theta at every node and grid point, shape ``(m,) + grid.shape + (n+1, n+1)``."""
        return assemble_theta(self.etas, self.As)


def assemble_theta(eta, A):
    eta = np.asarray(eta, dtype=float)
    A = np.asarray(A, dtype=float)
    n = eta.shape[-1]
    out = np.zeros(eta.shape[:-2] + (n + 1, n + 1))
    out[..., :n, :n] = eta
    out[..., n, :n] = A
    out[..., :n, n] = -A
    return out


def _ranks(mats, tau_rank):
    s = np.linalg.svd(mats, compute_uv=False)
    return _rank_from_singular_values(s, tau_rank)


def classify(eta, A, tau_rank=TAU_RANK):
    """Case (1 or 2), ``dim ker eta`` and the case-analysis ``dim ker Theta`` per point.

    ``A`` is in the image of ``eta#`` when the least-squares residual of
    ``eta v = A`` is at most ``tau_rank`` relative to ``|A|``.
    """
    eta = np.asarray(eta, dtype=float)
    A = np.asarray(A, dtype=float)
    n = eta.shape[-1]
    u, s, vh = np.linalg.svd(eta)
    rank = _rank_from_singular_values(s, tau_rank)
    in_range = np.arange(n) < rank[..., None]
    coeff = np.einsum("...ji,...j->...i", u, A)
    # the part of A orthogonal to the range of eta
    outside = np.linalg.norm(np.where(in_range, 0.0, coeff), axis=-1)
    normA = np.linalg.norm(A, axis=-1)
    case = np.where(outside <= tau_rank * np.maximum(normA, np.finfo(float).tiny), CASE_IMAGE, CASE_TRANSVERSE)
    ker_eta = n - rank
    dim = np.where(case == CASE_IMAGE, ker_eta + 1, ker_eta - 1)
    return case, ker_eta, dim


def ker_theta_point(eta, A, tau_rank=TAU_RANK):
    """Explicit kernel frame of Theta at one point: ``(frame (n+1, r), dim, case)``."""
    eta = np.asarray(eta, dtype=float)
    A = np.asarray(A, dtype=float)
    n = eta.shape[-1]
    case, ker_eta, dim = (int(x) for x in classify(eta, A, tau_rank))
    u, s, vh = np.linalg.svd(eta)
    rank = n - ker_eta
    Q = vh[rank:].T
    if case == CASE_IMAGE:
        # iota_v eta = -A  <=>  eta v = A (eta antisymmetric)
        v0 = vh[:rank].T @ ((u[:, :rank].T @ A) / s[:rank])
        cols = [np.concatenate([Q, np.zeros((1, ker_eta))], axis=0), np.concatenate([v0, [1.0]])[:, None]]
        frame = np.hstack(cols)
    else:
        w = A @ Q
        _, _, wvh = np.linalg.svd(w[None, :])
        null = wvh[1:].T
        frame = np.concatenate([Q @ null, np.zeros((1, null.shape[1]))], axis=0)
    return frame, dim, case


def ker_theta(theta, point, node, tau_rank=TAU_RANK):
    """Kernel frame and dimension of Theta at grid index ``point`` and t-node ``node``."""
    eta = theta.etas[(node,) + tuple(point)]
    A = theta.As[(node,) + tuple(point)]
    frame, dim, case = ker_theta_point(eta, A, tau_rank)
    return frame, dim, case


def rank_formula_mismatches(eta, A, tau_rank=TAU_RANK):
    """Number of points where the case-analysis kernel dimension differs from the SVD nullity."""
    _, _, dim = classify(eta, A, tau_rank)
    n = np.asarray(eta).shape[-1]
    nullity = n + 1 - _ranks(assemble_theta(eta, A), tau_rank)
    return int(np.sum(dim != nullity)), dim, nullity


def lemma_two_of_three(theta, tau_rank=TAU_RANK):
    """Which of the three conditions hold on the sampled cylinder.

    (1) Theta has constant rank; (2) ``eta_t`` has constant rank in p and t;
    (3) the case-1 locus is everything or nothing.  ``consistent`` is false
    exactly when two hold and the third fails.
    """
    case, ker_eta, _ = classify(theta.etas, theta.As, tau_rank)
    rank_theta = _ranks(theta.matrices(), tau_rank)
    c1 = bool(np.all(rank_theta == rank_theta.flat[0]))
    c2 = bool(np.all(ker_eta == ker_eta.flat[0]))
    c3 = bool(np.all(case == CASE_IMAGE) or np.all(case == CASE_TRANSVERSE))
    holding = c1 + c2 + c3
    return {
        "constant_rank_theta": c1,
        "constant_rank_eta": c2,
        "case_uniform": c3,
        "consistent": not (holding == 2),
        "case1_fraction": float(np.mean(case == CASE_IMAGE)),
    }


def product_exterior_derivative(theta):
    """``d Theta`` on ``T^n x [0, 1]`` from the assembled (n+1)x(n+1) field.

    Space derivatives are spectral, the t-derivative is the fourth-order
    difference across nodes.  Returns the full 3-form components, shape
    ``(m,) + grid.shape + (n+1,)*3``.
    """
    grid = theta.grid
    n = grid.n
    mats = theta.matrices()
    m = len(theta.times)
    grad = np.empty((m,) + grid.shape + (n + 1,) * 3)
    for i in range(m):
        g = spectral_gradient(mats[i], grid)  # (..., n, n+1, n+1)
        grad[i][..., :n, :, :] = g
    if m >= 5:
        grad[..., n, :, :] = time_derivative(mats, uniform_step(theta.times))
    elif m == 1:
        grad[..., n, :, :] = 0.0
    else:
        raise InputError("t-derivative needs at least 5 nodes")
    return 3 * alternate(grad, 3)


def cor_presym_cylinder(theta, eps=1e-8, tau_rank=TAU_RANK):
    """Compare both sides of the closed constant-rank criterion for Theta on sampled data.

    Left: Theta closed on the product and of constant rank.  Right: every
    ``eta_t`` closed, ``rank eta_t`` independent of p and t, and
    ``d/dt eta_t = d A_t``.  Requires ``A_t`` in the image of ``eta_t#``
    everywhere; otherwise the report is marked inapplicable.
    """
    grid = theta.grid
    case, ker_eta, _ = classify(theta.etas, theta.As, tau_rank)
    if not np.all(case == CASE_IMAGE):
        return {"applicable": False, "lhs": None, "rhs": None, "agree": None}
    dtheta = product_exterior_derivative(theta)
    lhs_closed = float(np.max(np.abs(dtheta)))
    rank_theta = _ranks(theta.matrices(), tau_rank)
    lhs = lhs_closed <= eps and bool(np.all(rank_theta == rank_theta.flat[0]))

    n = grid.n
    closed_eta = 0.0
    if n > 2:
        for e in theta.etas:
            g = spectral_gradient(e, grid)
            closed_eta = max(closed_eta, float(np.max(np.abs(3 * alternate(g, 3)))))
    h = uniform_step(theta.times) if len(theta.times) > 1 else 1.0
    deta = time_derivative(theta.etas, h) if len(theta.times) >= 5 else np.zeros_like(theta.etas)
    variation = 0.0
    for i, a in enumerate(theta.As):
        dA = 2 * alternate(spectral_gradient(a, grid), 2)
        variation = max(variation, float(np.max(np.abs(deta[i] - dA))))
    rhs = closed_eta <= eps and variation <= eps and bool(np.all(ker_eta == ker_eta.flat[0]))
    return {
        "applicable": True,
        "lhs": lhs,
        "rhs": rhs,
        "agree": lhs == rhs,
        "d_theta": lhs_closed,
        "d_eta": closed_eta,
        "variation": variation,
    }


FAMILY_KINDS = ("image", "transverse", "zero_eta", "clipped", "mixed")


# -- example families ----------------------------------------------------------


def mixed_example(N=8, nodes=9):
    """``eta_t = t d theta_1 ^ d theta_2``, ``A_t = d theta_1`` on the 2-torus."""
    grid = TorusGrid(2, N)
    times = np.linspace(0.0, 1.0, nodes)
    eta = lambda t: np.broadcast_to(np.array([[0.0, t], [-t, 0.0]]), grid.shape + (2, 2)).copy()
    A = lambda t: np.broadcast_to(np.array([1.0, 0.0]), grid.shape + (2,)).copy()
    return CylinderForm.from_callables(grid, times, eta, A)


def moser_ready_example(N=8, nodes=9, eps=0.1, A_scale=1.0):
    """``eta_t = (1 + t eps cos theta_2) d theta_2 ^ d theta_3``, ``A_t = eps sin theta_2 d theta_3``."""
    grid = TorusGrid(3, N)
    x = grid.coords
    c, s = np.cos(x[..., 1]), np.sin(x[..., 1])
    times = np.linspace(0.0, 1.0, nodes)

    def eta(t):
        v = grid.zeros(3, 3)
        v[..., 1, 2] = 1.0 + t * eps * c
        v[..., 2, 1] = -v[..., 1, 2]
        return v

    def A(t):
        v = grid.zeros(3)
        v[..., 2] = A_scale * eps * s
        return v

    return CylinderForm.from_callables(grid, times, eta, A)


def constant_symplectic_example(N=8, nodes=5):
    grid = TorusGrid(2, N)
    times = np.linspace(0.0, 1.0, nodes)
    eta = lambda t: np.broadcast_to(np.array([[0.0, 1.0], [-1.0, 0.0]]), grid.shape + (2, 2)).copy()
    return CylinderForm.from_callables(grid, times, eta, lambda t: grid.zeros(2))


def engineered_family(rng, kind, N=8, nodes=5):
    """Random cylinder forms with prescribed structure on a small 3-torus grid.

    ``image``: ``eta_t = c omega`` with ``c > 0`` and ``A_t = eta_t v``, so the
    rank of eta is constant and every point is in case 1.
    ``transverse``: as ``image`` but ``A_t`` gets a nowhere-vanishing kernel
    component, so every point is in case 2.
    ``zero_eta``: ``eta = 0`` with ``A`` nowhere zero (case 2) or zero (case 1).
    ``clipped``: ``c`` vanishes on an open set, so eta drops rank there.
    ``mixed``: eta as in ``image`` while the kernel component of ``A_t`` is
    switched on over part of the torus, so both cases occur.
    """
    grid = TorusGrid(3, N)
    x = grid.coords
    times = np.linspace(0.0, 1.0, nodes)
    w = rng.standard_normal(3)
    w /= np.linalg.norm(w)
    basis = np.linalg.qr(np.column_stack([w, rng.standard_normal((3, 2))]))[0]
    e1, e2 = basis[:, 1], basis[:, 2]
    omega = rng.uniform(0.5, 2.0) * (np.outer(e1, e2) - np.outer(e2, e1))
    kappa = w  # omega(w, .) = 0, so a multiple of w^T is not in the image
    phase = rng.uniform(0, 2 * np.pi, size=3)
    amp = rng.uniform(0.1, 0.9)

    def wave(t, shift=0.0):
        return np.sin(x[..., 0] + phase[0] + shift) * np.cos(x[..., 1] + phase[1]) + np.sin(x[..., 2] + phase[2] + t)

    def v_field(t):
        return np.stack([wave(t, k) for k in range(3)], axis=-1)

    if kind in ("image", "transverse"):
        c = lambda t: 1.0 + amp * np.tanh(wave(t))
    elif kind == "clipped":
        shift = rng.uniform(-0.5, 0.5)
        c = lambda t: np.maximum(wave(t) - shift, 0.0)
    elif kind == "mixed":
        shift = rng.uniform(-0.5, 0.5)
        c = lambda t: 1.0 + amp * np.tanh(wave(t))
        bump = lambda t: np.maximum(wave(t, 1.0) - shift, 0.0)
    elif kind == "zero_eta":
        c = lambda t: np.zeros(grid.shape)
    else:
        raise ValueError(f"unknown family kind {kind!r}")

    with_kappa = kind == "transverse" or (kind in ("zero_eta", "clipped") and rng.random() < 0.5)

    def eta(t):
        return c(t)[..., None, None] * omega

    def A(t):
        base = np.einsum("...ij,...j->...i", eta(t), v_field(t))
        if kind == "mixed":
            return base + bump(t)[..., None] * kappa
        if with_kappa:
            return base + (1.0 + amp * np.tanh(wave(t, 1.0)))[..., None] * kappa
        return base

    return CylinderForm.from_callables(grid, times, eta, A)
