"""Linear algebra at a single tangent space V = R^n.

Two-forms and bivectors are stored as antisymmetric ``(n, n)`` coefficient
matrices, ``mat[i, j] = beta(e_i, e_j)``.  Every function here broadcasts over
leading axes, so a whole grid of tangent spaces (shape ``(..., n, n)``) is
handled by the same call.

For a 2-form the musical map ``v -> iota_v beta`` has matrix ``mat.T``; for a
bivector ``xi -> Z(xi, .)`` likewise.  Products of an even number of musical
maps coincide with the products of the raw coefficient matrices, which is why
the Dirac map below can be written directly in terms of ``mat``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, RankError, SingularityError

TAU_ALG = 1e-10
TAU_RANK = 1e-9
KAPPA_MAX = 1e12


def antisymmetry_defect(mat):
    mat = np.asarray(mat, dtype=float)
    return float(np.max(np.abs(mat + np.swapaxes(mat, -1, -2)), initial=0.0))


def antisymmetrize(mat):
    return 0.5 * (mat - np.swapaxes(mat, -1, -2))


def check_two_form(mat, tol=TAU_ALG, name="form"):
    mat = np.asarray(mat, dtype=float)
    if mat.ndim < 2 or mat.shape[-1] != mat.shape[-2]:
        raise InputError(f"{name} must have trailing shape (n, n), got {mat.shape}")
    scale = max(1.0, float(np.max(np.abs(mat), initial=0.0)))
    if antisymmetry_defect(mat) > tol * scale:
        raise InputError(f"{name} is not antisymmetric")
    return mat


def sharp(form):
    """Matrix of ``v -> iota_v form`` (also ``xi -> Z(xi, .)`` for bivectors)."""
    return np.swapaxes(form, -1, -2)


def interior(vec, form):
    """``iota_v form`` for a vector and a 2-form, broadcasting."""
    return np.einsum("...i,...ij->...j", vec, form)


def _cond(mat):
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.linalg.svd(mat, compute_uv=False)
        c = s[..., 0] / s[..., -1]
    return np.where(np.isfinite(c), c, np.inf)


def cond_estimate(mat):
    """Cheap upper bound ``||A||_F ||A^-1||_F`` on the 2-norm condition number (inf if singular)."""
    mat = np.asarray(mat, dtype=float)
    out = np.full(mat.shape[:-2], np.inf)
    det = np.linalg.det(mat)
    ok = np.isfinite(det) & (det != 0)
    if np.any(ok):
        inv = np.linalg.inv(mat[ok])
        out[ok] = np.linalg.norm(mat[ok], axis=(-2, -1)) * np.linalg.norm(inv, axis=(-2, -1))
    return out if out.ndim else float(out)


def _witness(values, shape):
    idx = int(np.argmax(values))
    return tuple(int(i) for i in np.unravel_index(idx, shape)) if shape else ()


@dataclass(frozen=True)
class Splitting:
    """A decomposition ``V = K + G`` given by two column frames.

    ``K`` has shape ``(n, k)`` and ``G`` shape ``(n, n - k)``.  Either frame
    may be empty.
    """

    K: np.ndarray
    G: np.ndarray
    kappa_max: float = KAPPA_MAX
    _inverse: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        K = np.atleast_2d(np.asarray(self.K, dtype=float))
        G = np.atleast_2d(np.asarray(self.G, dtype=float))
        n = max(K.shape[0], G.shape[0])
        if K.size == 0:
            K = np.zeros((n, 0))
        if G.size == 0:
            G = np.zeros((n, 0))
        if K.shape[0] != G.shape[0] or K.shape[1] + G.shape[1] != K.shape[0]:
            raise InputError(f"frames of shape {K.shape} and {G.shape} do not split R^{K.shape[0]}")
        basis = np.hstack([K, G])
        if _cond(basis) > self.kappa_max:
            raise InputError("K and G frames are not transverse")
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "_inverse", np.linalg.inv(basis))

    @classmethod
    def from_kernel(cls, eta, tau_rank=TAU_RANK, kappa_max=KAPPA_MAX):
        """K = ker(eta), G its orthogonal complement."""
        eta = np.asarray(eta, dtype=float)
        _, s, vh = np.linalg.svd(eta)
        rank = _rank_from_singular_values(s, tau_rank)
        return cls(vh[rank:].T, vh[:rank].T, kappa_max)

    @property
    def n(self):
        return self.K.shape[0]

    @property
    def k(self):
        return self.K.shape[1]

    @property
    def g(self):
        return self.G.shape[1]

    @property
    def basis(self):
        return np.hstack([self.K, self.G])

    def coords(self, vec):
        """K- and G-frame coordinates of vectors of shape ``(..., n)``."""
        c = np.einsum("ij,...j->...i", self._inverse, vec)
        return c[..., : self.k], c[..., self.k:]

    def pr_K(self, vec):
        return np.einsum("ij,...j->...i", self.K, self.coords(vec)[0])

    def pr_G(self, vec):
        return np.einsum("ij,...j->...i", self.G, self.coords(vec)[1])

    def adapted(self, form):
        """Coefficients of a 2-form in the basis ``[K | G]``."""
        P = self.basis
        return np.einsum("ai,...ab,bj->...ij", P, form, P)

    def from_adapted(self, coeffs):
        Q = self._inverse
        return np.einsum("ia,...ij,jb->...ab", Q, coeffs, Q)


def _rank_from_singular_values(s, tau_rank):
    s = np.asarray(s)
    top = s[..., :1]
    return np.sum((s > tau_rank * top) & (top > 0), axis=-1)


def numerical_rank(mat, tau_rank=TAU_RANK):
    """SVD rank with threshold ``tau_rank * largest singular value``."""
    s = np.linalg.svd(np.asarray(mat, dtype=float), compute_uv=False)
    return _rank_from_singular_values(s, tau_rank)


def kernel_and_rank(omega, tau_rank=TAU_RANK):
    """Orthonormal nullspace frame ``(n, n - rank)`` and numerical rank."""
    omega = np.asarray(omega, dtype=float)
    _, s, vh = np.linalg.svd(omega)
    rank = int(_rank_from_singular_values(s, tau_rank))
    return vh[rank:].T, rank


def transverse(frame_a, frame_b, kappa_max=KAPPA_MAX):
    frame_a = np.asarray(frame_a, dtype=float)
    frame_b = np.asarray(frame_b, dtype=float)
    n = frame_a.shape[-2]
    if frame_b.shape[-2] != n or frame_a.shape[-1] + frame_b.shape[-1] != n:
        raise InputError("transversality needs complementary dimensions")
    return _cond(np.concatenate([frame_a, frame_b], axis=-1)) <= kappa_max


def orthonormal_frame(frame):
    q, _ = np.linalg.qr(np.asarray(frame, dtype=float))
    return q


def principal_angle(frame_a, frame_b):
    """Largest principal angle between two column spans of equal dimension.

    Broadcasts over leading axes.  Uses the sine form
    ``||(I - P_a) Q_b||_2`` so that tiny angles keep full relative accuracy.
    """
    qa = orthonormal_frame(frame_a)
    qb = orthonormal_frame(frame_b)
    if qa.shape[-1] != qb.shape[-1]:
        raise InputError("principal angle needs subspaces of equal dimension")
    if qa.shape[-1] == 0:
        return np.zeros(np.broadcast_shapes(qa.shape[:-2], qb.shape[:-2]))
    resid = qb - qa @ (np.swapaxes(qa, -1, -2) @ qb)
    s = np.linalg.svd(resid, compute_uv=False)[..., 0]
    return np.arcsin(np.clip(s, 0.0, 1.0))


def _check_pair(beta, Z):
    beta = np.asarray(beta, dtype=float)
    Z = np.asarray(Z, dtype=float)
    if beta.shape[-1] != Z.shape[-1] or beta.shape[-2:] != Z.shape[-2:]:
        raise InputError(f"dimension mismatch: {beta.shape} vs {Z.shape}")
    return beta, Z


def in_I_Z(beta, Z, kappa_max=KAPPA_MAX):
    """Whether ``id + Z beta`` is invertible with condition number at most ``kappa_max``."""
    beta, Z = _check_pair(beta, Z)
    n = beta.shape[-1]
    ok = _cond(np.eye(n) + Z @ beta) <= kappa_max
    return bool(ok) if np.ndim(ok) == 0 else ok


def _require_I_Z(beta, Z, kappa_max):
    n = beta.shape[-1]
    cond = _cond(np.eye(n) + Z @ beta)
    if np.any(cond > kappa_max):
        lead = np.broadcast_shapes(beta.shape[:-2], Z.shape[:-2])
        worst = np.broadcast_to(cond, lead)
        raise SingularityError(
            f"id + Z beta is singular (cond {float(np.max(worst)):.3g})",
            cond=float(np.max(worst)),
            witness=_witness(worst, lead),
        )


def dirac_F(beta, Z, kappa_max=KAPPA_MAX):
    """``F(beta) = beta (id + Z beta)^-1``; maps I_Z onto I_{-Z}."""
    beta, Z = _check_pair(beta, Z)
    _require_I_Z(beta, Z, kappa_max)
    n = beta.shape[-1]
    # (id + beta Z)^-1 beta == beta (id + Z beta)^-1
    out = np.linalg.solve(np.eye(n) + beta @ Z, beta)
    return antisymmetrize(out)


def dirac_F_prime(beta, alpha, Z, kappa_max=KAPPA_MAX):
    """``(id + beta Z)^-1 alpha`` for a 1-form ``alpha``."""
    beta, Z = _check_pair(beta, Z)
    _require_I_Z(beta, Z, kappa_max)
    n = beta.shape[-1]
    alpha = np.asarray(alpha, dtype=float)
    A = np.broadcast_to(np.eye(n) + beta @ Z, alpha.shape[:-1] + (n, n))
    return np.linalg.solve(A, alpha[..., None])[..., 0]


def build_Z(eta, split, tau_rank=TAU_RANK):
    """The bivector in ``wedge^2 G`` with ``Z# = -(eta|_G#)^-1``.

    ``eta`` must be a single ``(n, n)`` form whose kernel is spanned by
    ``split.K``.
    """
    eta = check_two_form(eta, name="eta")
    if eta.shape != (split.n, split.n):
        raise InputError("eta and splitting have different dimensions")
    scale = max(1.0, float(np.max(np.abs(eta))))
    if split.k and np.max(np.abs(eta @ split.K)) > tau_rank * scale * 1e3:
        raise RankError("declared K frame is not in the kernel of eta")
    if int(numerical_rank(eta, tau_rank)) != split.g:
        raise RankError("rank of eta differs from dim G")
    if split.g == 0:
        return np.zeros_like(eta)
    E = split.G.T @ eta @ split.G
    if _cond(E) > split.kappa_max:
        raise RankError("eta restricted to G is degenerate")
    Z = -split.G @ np.linalg.inv(E) @ split.G.T
    return antisymmetrize(Z)


def exp_eta(eta, beta, split, Z=None, kappa_max=KAPPA_MAX):
    """Dirac exponential ``eta + F(beta)``."""
    if Z is None:
        Z = build_Z(eta, split)
    return eta + dirac_F(beta, Z, kappa_max)


def restriction_to_K(beta, split):
    """``beta`` evaluated on pairs of K-frame vectors."""
    return np.einsum("ai,...ab,bj->...ij", split.K, beta, split.K)


def horizontal_projection(beta, split):
    """Drop the ``wedge^2 K*`` block of ``beta`` (kernel of the restriction map)."""
    c = split.adapted(beta)
    c[..., : split.k, : split.k] = 0.0
    return split.from_adapted(c)


def kernel_graph_map(beta, Z, split):
    """G-frame matrix of ``Z# beta#|_K : K -> G`` (shape ``(..., g, k)``)."""
    images = Z @ beta @ split.K
    _, gc = split.coords(np.swapaxes(images, -1, -2))
    return np.swapaxes(gc, -1, -2)


def graph_frame(phi, split):
    """Columns ``K_i + G phi(K_i)`` spanning the graph of ``phi : K -> G``."""
    return split.K + split.G @ phi
