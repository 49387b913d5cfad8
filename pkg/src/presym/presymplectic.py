"""Deformations of a constant pre-symplectic form on a torus.

A model is a constant closed 2-form ``eta`` of rank ``2r`` with kernel K and a
constant complement G.  A horizontal 2-form ``beta`` (one whose restriction
to K vanishes) is a Maurer-Cartan element exactly when ``F(beta)`` is
closed, and then ``eta + F(beta)`` is pre-symplectic of the same rank.
Gauge equivalences are handled through the transformed data
``beta_hat = F(beta)``, ``alpha_hat = F'(beta, alpha)``, for which the gauge
condition is the linear equation ``d/dt beta_hat = d alpha_hat``.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, RankError, SingularityError, SolvabilityError, TransversalityError
from .foliation import FoliationGaugePath, GraphMapField
from .pointwise import (
    KAPPA_MAX,
    TAU_ALG,
    TAU_RANK,
    Splitting,
    _cond,
    _witness,
    cond_estimate,
    build_Z,
    check_two_form,
    dirac_F,
    dirac_F_prime,
    kernel_graph_map,
    numerical_rank,
)
from .torus import (
    FormField,
    LazyPath,
    SampledPath,
    VectorField,
    d,
    dealias,
    flow,
    pullback,
    stage_nodes,
    time_derivative,
    uniform_step,
)

log = logging.getLogger(__name__)


class PresymplecticModel:
    """Constant pre-symplectic form on a torus grid with a splitting ``K + G``."""

    def __init__(self, grid, eta, split=None, tau_rank=TAU_RANK, kappa_max=KAPPA_MAX):
        eta = check_two_form(eta, name="eta")
        if eta.shape != (grid.n, grid.n):
            raise InputError(f"eta must be {grid.n}x{grid.n}")
        self.grid = grid
        self.eta = eta
        self.split = split if split is not None else Splitting.from_kernel(eta, tau_rank, kappa_max)
        self.tau_rank = tau_rank
        self.kappa_max = kappa_max
        self.Z = build_Z(eta, self.split, tau_rank)
        self.rank = int(numerical_rank(eta, tau_rank))

    @property
    def eta_field(self):
        return FormField.constant(self.grid, self.eta)


def _values(form):
    return form.values if isinstance(form, FormField) else np.asarray(form, dtype=float)


def restriction_defect(model, form):
    """Sup over the grid of ``|form(K_a, K_b)|`` (2-forms) or ``|form(K_a)|`` (1-forms)."""
    v = _values(form)
    K = model.split.K
    if not K.shape[1]:
        return 0.0
    if v.shape[-1] == v.shape[-2] == model.grid.n and v.ndim == model.grid.n + 2:
        r = np.einsum("ai,...ab,bj->...ij", K, v, K)
    else:
        r = v @ K
    return float(np.max(np.abs(r), initial=0.0))


def hat_beta(model, beta):
    """``F(beta)`` pointwise."""
    return FormField(model.grid, 2, dirac_F(_values(beta), model.Z, model.kappa_max))


def hat_alpha(model, beta, alpha):
    """``F'(beta, alpha) = (id + beta Z)^-1 alpha`` pointwise."""
    return FormField(model.grid, 1, dirac_F_prime(_values(beta), _values(alpha), model.Z, model.kappa_max))


def beta_from_hat(model, beta_hat):
    """Inverse of :func:`hat_beta`: ``F_{-Z}(beta_hat)``."""
    return FormField(model.grid, 2, dirac_F(_values(beta_hat), -model.Z, model.kappa_max))


def alpha_from_hat(model, beta, alpha_hat):
    """Inverse of :func:`hat_alpha`: ``alpha = (id + beta Z) alpha_hat``."""
    b = _values(beta)
    A = np.eye(model.grid.n) + b @ model.Z
    return FormField(model.grid, 1, np.einsum("...ij,...j->...i", A, _values(alpha_hat)))


def closedness_residual(form, use_dealias=False):
    """``||d form||_sup``; every top-degree form is closed."""
    if form.degree >= form.grid.n:
        return 0.0
    if use_dealias:
        form = FormField(form.grid, form.degree, dealias(form.values, form.grid))
    return d(form).sup_norm()


def mc_residual_presym(model, beta, use_dealias=False, return_witness=False):
    """``(||d F(beta)||_sup, max |rank(eta + F(beta)) - rank(eta)|)``.

    Raises SingularityError (with the worst grid point as witness) when some
    ``id + Z beta`` leaves the condition-number cap.
    """
    fb = hat_beta(model, beta)
    closed = closedness_residual(fb, use_dealias)
    ranks = numerical_rank(model.eta + fb.values, model.tau_rank)
    dev = np.abs(ranks - model.rank)
    result = (closed, int(np.max(dev, initial=0)))
    if return_witness:
        return result + (_witness(dev, model.grid.shape),)
    return result


def strict_morphism(model, beta):
    """Graph map ``Z# beta#|_K : K -> G`` of a horizontal 2-form."""
    return GraphMapField(model.grid, model.split, kernel_graph_map(_values(beta), model.Z, model.split))


def sharp_Z(model, alpha):
    """``Z# alpha`` as a vector field."""
    return VectorField(model.grid, _values(alpha) @ model.Z)


def _kernel_frames(forms, rank):
    """Orthonormal kernel frames of a stack of 2-forms with a known common rank."""
    _, _, vh = np.linalg.svd(forms)
    return np.swapaxes(vh[..., rank:, :], -1, -2)


def check_hat_alpha_kernel(model, beta, alpha):
    """Sup over the grid of ``|alpha_hat(w)|`` for unit ``w`` in ``ker(eta + beta_hat)``.

    The kernel is taken pointwise by SVD; points where the rank differs from
    the model rank are grouped and handled separately.
    """
    bh = hat_beta(model, beta).values
    ah = hat_alpha(model, beta, alpha).values
    forms = model.eta + bh
    ranks = numerical_rank(forms, model.tau_rank)
    worst = 0.0
    for r in np.unique(ranks):
        mask = ranks == r
        Q = _kernel_frames(forms[mask], int(r))
        proj = np.einsum("...ia,...i->...a", Q, ah[mask])
        if proj.shape[-1]:
            worst = max(worst, float(np.max(np.linalg.norm(proj, axis=-1))))
    return worst


# -- gauge paths ---------------------------------------------------------------


@dataclass
class PresymGaugePath:
    """Raw gauge data ``(beta_t, alpha_t)`` at uniform nodes with transformed images."""

    model: PresymplecticModel
    times: np.ndarray
    betas: list
    alphas: list
    beta_hats: list
    alpha_hats: list
    gauge_residual: float
    mc_residuals: list
    rank_deviations: list
    horizontality: float
    beta_fn: object = None
    alpha_fn: object = None
    witness: tuple = field(default=None)

    def __len__(self):
        return len(self.times)

    def eta_t(self, i):
        return self.model.eta + self.beta_hats[i].values

    def beta_at(self, t):
        if self.beta_fn is not None:
            return self.beta_fn(t)
        return SampledPath(self.times, self.betas).at(t)

    def alpha_at(self, t):
        if self.alpha_fn is not None:
            return self.alpha_fn(t)
        return SampledPath(self.times, self.alphas).at(t)

    def verdict(self, eps_mc=1e-6, eps_gauge=1e-5):
        ok = (
            self.gauge_residual <= eps_gauge
            and max(self.mc_residuals) <= eps_mc
            and max(self.rank_deviations) == 0
        )
        return "gauge-equivalent" if ok else "not-gauge-equivalent"


def gauge_transform(model, times, betas, alphas, require_horizontal=True, beta_fn=None, alpha_fn=None, tol_horizontal=1e-8):
    """Transform raw gauge data and measure ``||d/dt beta_hat - d alpha_hat||_sup``.

    ``betas`` and ``alphas`` are FormFields at the uniform ``times``.  The
    optional callables give off-node values for later flow integration.
    """
    times = np.asarray(times, dtype=float)
    if len(betas) != len(times) or len(alphas) != len(times):
        raise InputError("gauge path needs one beta and one alpha per node")
    h = uniform_step(times)
    horiz = max(max(restriction_defect(model, b) for b in betas), max(restriction_defect(model, a) for a in alphas))
    if require_horizontal and horiz > tol_horizontal:
        raise InputError(f"gauge data is not horizontal (defect {horiz:.3g})")
    bh, ah, mcs, devs = [], [], [], []
    for b, a in zip(betas, alphas):
        bh.append(hat_beta(model, b))
        ah.append(hat_alpha(model, b, a))
        closed, dev = mc_residual_presym(model, b)
        mcs.append(closed)
        devs.append(dev)
    dbh = time_derivative(np.stack([x.values for x in bh]), h)
    worst, witness = 0.0, None
    for i, a in enumerate(ah):
        diff = dbh[i] - d(a).values
        pt = np.linalg.norm(diff.reshape(model.grid.shape + (-1,)), axis=-1)
        val = float(np.max(pt))
        if witness is None or val > worst:
            worst, witness = val, (i,) + _witness(pt, model.grid.shape)
    return PresymGaugePath(model, times, list(betas), list(alphas), bh, ah, worst, mcs, devs, horiz, beta_fn, alpha_fn, witness)


def classify_gauge_path(model, times, betas, alphas, eps_mc=1e-6, eps_gauge=1e-5, **kw):
    """Verdict on raw gauge data; leaving ``I_Z`` anywhere gives ``"indeterminate"``."""
    try:
        path = gauge_transform(model, times, betas, alphas, **kw)
    except SingularityError:
        return "indeterminate", None
    return path.verdict(eps_mc, eps_gauge), path


def gauge_to_foliation_gauge(model, path):
    """``(Phi_t, Y_t) = (Z# beta_t|_K, Z# alpha_t)`` at every node."""
    phis = [strict_morphism(model, b) for b in path.betas]
    ys = [sharp_Z(model, a) for a in path.alphas]
    return FoliationGaugePath(path.times, phis, ys)


# -- Moser -----------------------------------------------------------------------


@dataclass
class MoserResult:
    flow: object
    inverse: object
    certificate: float
    solve_residual: float
    variation_residual: float
    closedness: float
    switches: list
    transversality_max_cond: float = 0.0


def _as_time_fn(obj):
    if isinstance(obj, SampledPath):
        return obj.at
    if isinstance(obj, FormField):
        return lambda t: obj
    return obj


def moser_vector(eta_t, gamma_t, split, tau_rank=TAU_RANK, kappa_max=KAPPA_MAX, tol_solve=1e-8, t=None, events=None):
    """Solve ``iota_X eta_t = -gamma_t`` with X in G (or in the orthogonal complement of the kernel).

    G is used while ``eta_t`` restricted to G stays nondegenerate, which is the
    same as ``ker(eta_t)`` being transverse to G when ``dim G = rank eta_t``.
    """
    eta = _values(eta_t)
    gamma = _values(gamma_t)
    grid_shape = eta.shape[:-2]
    s = np.linalg.svd(eta, compute_uv=False)
    top = s[..., :1]
    ranks = np.sum((s > tau_rank * top) & (top > 0), axis=-1)
    rank = int(ranks.flat[0])
    if np.any(ranks != rank):
        raise RankError(f"rank of eta_t is not constant at t={t}", witness=_witness(np.abs(ranks - rank), grid_shape))
    G = split.G if split is not None else None
    use_G = G is not None and G.shape[1] == rank
    if use_G and rank:
        E = np.swapaxes(G, 0, 1) @ eta @ G
        use_G = bool(np.all(cond_estimate(E) <= kappa_max))
    if use_G:
        # eta X = gamma with X = G c; G^T eta G c = G^T gamma, the other equations hold when gamma kills ker(eta)
        c = np.linalg.solve(E, (gamma @ G)[..., None])[..., 0] if rank else np.zeros(grid_shape + (0,))
        X = c @ G.T
    else:
        if events is not None:
            events.append(float(t) if t is not None else None)
        log.info("moser_solve: kernel not transverse to G at t=%s, using orthogonal complement", t)
        u, s, vh = np.linalg.svd(eta)
        inv_s = np.where(np.arange(s.shape[-1]) < rank, 1.0 / np.where(s > 0, s, 1.0), 0.0)
        coeff = np.einsum("...ji,...j->...i", u, gamma) * inv_s
        X = np.einsum("...ji,...j->...i", vh, coeff)
    resid = np.einsum("...ij,...j->...i", eta, X) - gamma
    scale = max(1.0, float(np.max(np.abs(gamma), initial=0.0)))
    err = float(np.max(np.abs(resid), initial=0.0)) / scale
    if err > tol_solve:
        raise SolvabilityError(
            f"gamma_t is not in the image of eta_t at t={t} (residual {err:.3g})",
            witness=_witness(np.linalg.norm(resid, axis=-1), grid_shape),
        )
    return X, err


def _five_point(fn, t, delta, lo=0.0, hi=1.0):
    """Fourth-order derivative of ``fn`` at ``t`` from five samples inside ``[lo, hi]``."""
    if t - 2 * delta < lo:
        f = [fn(t + i * delta) for i in range(5)]
        return (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * delta)
    if t + 2 * delta > hi:
        f = [fn(t - i * delta) for i in range(5)]
        return -(-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * delta)
    f = [fn(t + i * delta) for i in (-2, -1, 1, 2)]
    return (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * delta)


def check_moser_data(grid, eta_t, gamma_t, check_times=None, delta=1e-3):
    """``(max ||d eta_t||, max ||d/dt eta_t - d gamma_t||)`` over check times."""
    eta_fn = _as_time_fn(eta_t)
    gamma_fn = _as_time_fn(gamma_t)
    if check_times is None:
        check_times = np.linspace(0.0, 1.0, 5)
    closed, variation = 0.0, 0.0
    for t in check_times:
        e = eta_fn(t)
        closed = max(closed, closedness_residual(e))
        if isinstance(eta_t, SampledPath):
            ts = eta_t.times
            i = int(np.argmin(np.abs(ts - t)))
            dedt = time_derivative(np.stack([x.values for x in eta_t.items]), uniform_step(ts))[i]
        else:
            dedt = _five_point(lambda s: eta_fn(s).values, t, delta)
        diff = dedt - d(gamma_fn(t)).values
        variation = max(variation, float(np.max(np.abs(diff), initial=0.0)))
    return closed, variation


def moser_solve(grid, eta_t, gamma_t, steps=100, split=None, tau_rank=TAU_RANK, kappa_max=KAPPA_MAX, tol_solve=1e-8):
    """Moser isotopy for a family ``eta_t`` with ``d/dt eta_t = d gamma_t``.

    ``eta_t`` and ``gamma_t`` are callables ``t -> FormField`` (or
    SampledPaths).  ``X_t`` solves ``iota_X eta_t = -gamma_t`` inside the
    constant complement ``split.G`` while the kernel stays transverse to it,
    otherwise inside the orthogonal complement of the kernel (each switch is
    logged and recorded).  Returns the flow ``g_1`` of ``X_t``, its inverse
    ``f_1`` and the certificate ``||f_1^* eta_0 - eta_1||_sup``.
    """
    eta_fn = _as_time_fn(eta_t)
    gamma_fn = _as_time_fn(gamma_t)
    closed, variation = check_moser_data(grid, eta_t, gamma_t)
    switches = []
    worst_solve = [0.0]

    def X_at(t):
        X, err = moser_vector(eta_fn(t), gamma_fn(t), split, tau_rank, kappa_max, tol_solve, t, switches)
        worst_solve[0] = max(worst_solve[0], err)
        return VectorField(grid, X)

    g1 = flow(LazyPath(stage_nodes(steps), X_at), 1.0, steps)
    f1 = g1.inverse()
    eta0, eta1 = eta_fn(0.0), eta_fn(1.0)
    cert = (pullback(f1, eta0) - eta1).sup_norm()
    return MoserResult(g1, f1, cert, worst_solve[0], variation, closed, sorted(set(switches)))


@dataclass
class GaugeIsotopyResult:
    identity_residual: float
    certificate: float
    flow: object
    max_cond: float
    in_G_defect: float


def moser_vector_from_gauge(model, path, steps=None, monitor_every=1):
    """Integrate ``X_t = Z# alpha_t`` along a gauge path.

    Checks ``iota_{X_t} eta_t + alpha_hat_t = 0`` at every node, monitors the
    transversality of ``ker(eta_t)`` to G at every RK4 step node, and returns
    ``||phi_1^* eta_1 - eta_0||_sup``.  Off-node values come from the path's
    generating callables when present, otherwise by linear interpolation.
    """
    grid = model.grid
    ident, in_G = 0.0, 0.0
    for i, (a, ah) in enumerate(zip(path.alphas, path.alpha_hats)):
        X = sharp_Z(model, a)
        lhs = np.einsum("...i,...ij->...j", X.values, path.eta_t(i)) + ah.values
        ident = max(ident, float(np.max(np.abs(lhs), initial=0.0)))
        kc, _ = model.split.coords(X.values)
        in_G = max(in_G, float(np.max(np.abs(kc), initial=0.0)))
    if steps is None:
        steps = (len(path) - 1) // 2 if len(path) % 2 and path.alpha_fn is None else 100
    step_h = 1.0 / steps
    max_cond = 0.0
    G = model.split.G
    for i in range(0, steps + 1, monitor_every):
        t = i * step_h
        eta = model.eta + hat_beta(model, path.beta_at(t)).values
        Q = _kernel_frames(eta, model.rank)
        cond = _cond(np.concatenate([Q, np.broadcast_to(G, grid.shape + G.shape)], axis=-1))
        max_cond = max(max_cond, float(np.max(cond)))
        if np.any(cond > model.kappa_max):
            raise TransversalityError(
                f"ker(eta_t) stops being transverse to G at t={t:.6g}", t=t, witness=_witness(cond, grid.shape)
            )
    phi1 = flow(lambda t: sharp_Z(model, path.alpha_at(t)), 1.0, steps)
    eta0 = FormField(grid, 2, path.eta_t(0))
    eta1 = FormField(grid, 2, path.eta_t(len(path) - 1))
    cert = (pullback(phi1, eta1) - eta0).sup_norm()
    return GaugeIsotopyResult(ident, cert, phi1, max_cond, in_G)
