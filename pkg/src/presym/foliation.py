"""Deformations of a foliation K on a torus, with a fixed constant complement G.

Sections of ``wedge^p K* (x) G`` are stored as :class:`KGForm` values of shape
``grid.shape + (g,) + (k,)*p``: entry ``[..., c, a1, ..., ap]`` is the G-frame
coordinate ``c`` of ``xi(K_a1, ..., K_ap)``.  A degree-1 KGForm is a graph map
``Phi : K -> G`` whose graph ``{X + Phi(X)}`` is a deformed distribution.

The three brackets are evaluated literally from their defining shuffle sums,
with every bracket of vector fields computed spectrally.  Sign conventions:
the exchanged term of ``l2`` carries the prefactor ``-(-1)^l`` (the sign
``(-1)^k`` after exchanging ``k`` and ``l``), and the cyclic terms of ``l3``
carry Koszul signs for the shifted degrees ``k - 1``.  With these choices
``l1(Phi) - l2(Phi, Phi)/2 + l3(Phi, Phi, Phi)/6`` is exactly the G-component
of the bracket of graph sections, measured along G.
"""

import itertools

import numpy as np

from .errors import DegreeError, FrameError, GridMismatchError, InputError, IntegrationError, TransversalityError
from .pointwise import KAPPA_MAX, Splitting, _cond, _witness
from .torus import (
    LazyPath,
    SampledPath,
    VectorField,
    _perm_sign,
    as_path,
    flow,
    pushforward_frame,
    spectral_gradient,
    stage_nodes,
    time_derivative,
    uniform_step,
)


class KGForm:
    """Alternating map ``wedge^p K -> G`` sampled on a torus grid."""

    def __init__(self, grid, split, degree, values):
        if split.n != grid.n:
            raise InputError("splitting dimension differs from torus dimension")
        if not 0 <= degree <= grid.n:
            raise DegreeError(f"KGForm degree {degree} out of range")
        values = np.asarray(values, dtype=float)
        expected = grid.shape + (split.g,) + (split.k,) * degree
        if values.shape != expected:
            raise InputError(f"KGForm values have shape {values.shape}, expected {expected}")
        self.grid = grid
        self.split = split
        self.degree = degree
        self.values = values

    @classmethod
    def zeros(cls, grid, split, degree):
        return cls(grid, split, degree, np.zeros(grid.shape + (split.g,) + (split.k,) * degree))

    def _like(self, values):
        return KGForm(self.grid, self.split, self.degree, values)

    def _check(self, other):
        if other.grid != self.grid or other.split is not self.split and not _same_split(other.split, self.split):
            raise GridMismatchError("KGForms live on different grids or splittings")
        if other.degree != self.degree:
            raise DegreeError("KGForms of different degree")

    def __add__(self, other):
        self._check(other)
        return self._like(self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return self._like(self.values - other.values)

    def __neg__(self):
        return self._like(-self.values)

    def __mul__(self, c):
        return self._like(self.values * c)

    __rmul__ = __mul__

    def pointwise_norm(self):
        """Max over K-index tuples of the Euclidean G-frame norm, per grid point."""
        norms = np.linalg.norm(self.values, axis=self.grid.n)
        if self.degree == 0:
            return norms
        return np.max(norms.reshape(self.grid.shape + (-1,)), axis=-1)

    def sup_norm(self):
        return float(np.max(self.pointwise_norm(), initial=0.0))


class GraphMapField(KGForm):
    """``Phi : K -> G`` as a degree-1 KGForm, values ``(..., g, k)``."""

    def __init__(self, grid, split, values):
        super().__init__(grid, split, 1, values)

    @classmethod
    def zeros(cls, grid, split):
        return cls(grid, split, np.zeros(grid.shape + (split.g, split.k)))

    @classmethod
    def from_kgform(cls, form):
        if form.degree != 1:
            raise DegreeError("graph maps have degree 1")
        return cls(form.grid, form.split, form.values)

    def _like(self, values):
        return GraphMapField(self.grid, self.split, values)

    def frame(self):
        """Columns ``K_a + G Phi(K_a)``, shape ``grid.shape + (n, k)``."""
        return self.split.K + self.split.G @ self.values

    def transversality_cond(self):
        """Condition number of ``[K + G Phi | G]`` per grid point."""
        G = np.broadcast_to(self.split.G, self.grid.shape + self.split.G.shape)
        return _cond(np.concatenate([self.frame(), G], axis=-1))


def _same_split(a, b):
    return np.array_equal(a.K, b.K) and np.array_equal(a.G, b.G)


def _as_graph_map(form):
    return form if isinstance(form, GraphMapField) else GraphMapField.from_kgform(form)


# -- bracket evaluation --------------------------------------------------------


class _FieldAlgebra:
    """Shared state for one bracket evaluation: cached fields and gradients."""

    def __init__(self, grid, split):
        self.grid = grid
        self.split = split
        self._grads = {}
        self._fields = {}
        self._const = {}
        self._keep = []

    def frame_vector(self, a):
        if a not in self._const:
            vec = np.broadcast_to(self.split.K[:, a], self.grid.shape + (self.split.n,))
            self._const[a] = vec
            self._grads[id(vec)] = 0.0
            self._keep.append(vec)
        return self._const[a]

    def grad(self, V):
        key = id(V)
        if key not in self._grads:
            self._grads[key] = spectral_gradient(V, self.grid)
            self._keep.append(V)
        return self._grads[key]

    def bracket(self, A, B):
        gA, gB = self.grad(A), self.grad(B)
        out = np.zeros(np.broadcast_shapes(A.shape, B.shape))
        if not np.isscalar(gB):
            out = out + np.einsum("...a,...ai->...i", A, gB)
        if not np.isscalar(gA):
            out = out - np.einsum("...a,...ai->...i", B, gA)
        return out

    def pr_G(self, V):
        return self.split.coords(V)[1]

    def pr_K(self, V):
        return self.split.coords(V)[0]

    def evaluate(self, xi, args):
        """G-coordinates of ``xi(args)``; each arg is a frame index or K-coordinate field."""
        k = self.split.k
        out = xi.values
        for arg in reversed(args):
            if isinstance(arg, (int, np.integer)):
                out = out[..., arg]
            else:
                r = out.ndim - self.grid.n
                arg = arg.reshape(self.grid.shape + (1,) * (r - 1) + (k,))
                out = np.sum(out * arg, axis=-1)
        return out

    def vector(self, xi, idx):
        """Cached vector field ``xi(K_idx...)`` as an ``(..., n)`` array."""
        key = (id(xi), tuple(idx))
        if key not in self._fields:
            coords = self.evaluate(xi, list(idx))
            self._fields[key] = coords @ self.split.G.T
            self._keep.append(xi)
        return self._fields[key]


def _shuffle_list(*sizes):
    """Shuffles for consecutive blocks of the given sizes, with their signs.

    Each shuffle ``tau`` is returned as the tuple ``(tau(1), ..., tau(N))``
    (0-based), increasing inside every block.
    """
    total = sum(sizes)
    out = []

    def rec(remaining, blocks, acc):
        if not blocks:
            out.append((tuple(acc), _perm_sign(acc)))
            return
        for chosen in itertools.combinations(remaining, blocks[0]):
            rest = [r for r in remaining if r not in chosen]
            rec(rest, blocks[1:], acc + list(chosen))

    rec(list(range(total)), list(sizes), [])
    return out


def _assemble(grid, split, degree, component):
    """Fill an alternating KGForm from its values on increasing index tuples."""
    k, g = split.k, split.g
    if degree > k:
        return KGForm.zeros(grid, split, degree)
    values = np.zeros(grid.shape + (g,) + (k,) * degree)
    for combo in itertools.combinations(range(k), degree):
        comp = component(combo)
        for perm in itertools.permutations(range(degree)):
            idx = tuple(combo[p] for p in perm)
            values[(Ellipsis, slice(None)) + idx] = _perm_sign(list(perm)) * comp
    return KGForm(grid, split, degree, values)


def _common(*forms):
    grid, split = forms[0].grid, forms[0].split
    for f in forms[1:]:
        if f.grid != grid or not _same_split(f.split, split):
            raise GridMismatchError("bracket arguments on different grids or splittings")
    return grid, split


def _l1_component(alg, xi, X):
    k = xi.degree
    out = 0.0
    for i in range(k + 1):
        rest = X[:i] + X[i + 1:]
        V = alg.vector(xi, rest)
        out = out + (-1) ** i * alg.pr_G(alg.bracket(alg.frame_vector(X[i]), V))
    for i in range(k + 1):
        for j in range(i + 1, k + 1):
            B = alg.bracket(alg.frame_vector(X[i]), alg.frame_vector(X[j]))
            rest = [x for q, x in enumerate(X) if q not in (i, j)]
            out = out + (-1) ** (i + j) * alg.evaluate(xi, [alg.pr_K(B)] + rest)
    return out


def bracket_l1(xi, _alg=None):
    """Bott-type differential on ``Gamma(wedge K* (x) G)``."""
    grid, split = _common(xi)
    alg = _alg or _FieldAlgebra(grid, split)
    if xi.degree + 1 > split.k:
        return KGForm.zeros(grid, split, xi.degree + 1)
    return _assemble(grid, split, xi.degree + 1, lambda X: _l1_component(alg, xi, list(X)))


def _l2_first(alg, xi, psi, X):
    k, l = xi.degree, psi.degree
    out = 0.0
    for tau, sign in _shuffle_list(k, l):
        A = alg.vector(xi, [X[t] for t in tau[:k]])
        B = alg.vector(psi, [X[t] for t in tau[k:]])
        out = out + sign * alg.pr_G(alg.bracket(A, B))
    return (-1) ** k * out


def _l2_second(alg, xi, psi, X):
    k, l = xi.degree, psi.degree
    if k == 0:
        return 0.0
    out = 0.0
    for tau, sign in _shuffle_list(l, 1, k - 1):
        A = alg.vector(psi, [X[t] for t in tau[:l]])
        B = alg.bracket(A, alg.frame_vector(X[tau[l]]))
        rest = [X[t] for t in tau[l + 1:]]
        out = out + sign * alg.evaluate(xi, [alg.pr_K(B)] + rest)
    return (-1) ** (k * (l + 1)) * out


def bracket_l2(xi, psi, _alg=None):
    grid, split = _common(xi, psi)
    alg = _alg or _FieldAlgebra(grid, split)
    k, l = xi.degree, psi.degree
    deg = k + l
    if deg > split.k:
        return KGForm.zeros(grid, split, deg) if deg <= grid.n else _overflow(deg)

    def component(X):
        X = list(X)
        return (
            _l2_first(alg, xi, psi, X)
            + _l2_second(alg, xi, psi, X)
            - (-1) ** l * _l2_second(alg, psi, xi, X)
        )

    return _assemble(grid, split, deg, component)


def _l3_term(alg, xi, psi, phi, X):
    k, l, m = xi.degree, psi.degree, phi.degree
    if k == 0:
        return 0.0
    out = 0.0
    for tau, sign in _shuffle_list(l, m, k - 1):
        A = alg.vector(psi, [X[t] for t in tau[:l]])
        B = alg.vector(phi, [X[t] for t in tau[l:l + m]])
        rest = [X[t] for t in tau[l + m:]]
        out = out + sign * alg.evaluate(xi, [alg.pr_K(alg.bracket(A, B))] + rest)
    return (-1) ** (m + k * (l + m)) * out


def bracket_l3(xi, psi, phi, _alg=None):
    grid, split = _common(xi, psi, phi)
    alg = _alg or _FieldAlgebra(grid, split)
    deg = xi.degree + psi.degree + phi.degree - 1
    if deg < 0:
        raise DegreeError("l3 of three sections of G has negative degree")
    if deg > split.k:
        return KGForm.zeros(grid, split, deg) if deg <= grid.n else _overflow(deg)
    dx, dp, df = xi.degree - 1, psi.degree - 1, phi.degree - 1
    s1 = (-1) ** (dx * (dp + df))
    s2 = (-1) ** (df * (dx + dp))

    def component(X):
        X = list(X)
        return (
            _l3_term(alg, xi, psi, phi, X)
            + s1 * _l3_term(alg, psi, phi, xi, X)
            + s2 * _l3_term(alg, phi, xi, psi, X)
        )

    return _assemble(grid, split, deg, component)


def _overflow(deg):
    raise DegreeError(f"bracket output degree {deg} exceeds the torus dimension")


def mc_residual_foliation(phi):
    """``R = l1(Phi) - l2(Phi, Phi)/2 + l3(Phi, Phi, Phi)/6`` and its sup norm."""
    grid, split = _common(phi)
    if phi.degree != 1:
        raise DegreeError("Maurer-Cartan elements have degree 1")
    if not np.all(np.isfinite(phi.values)):
        raise InputError("graph map has non-finite values")
    alg = _FieldAlgebra(grid, split)
    R = bracket_l1(phi, alg) - 0.5 * bracket_l2(phi, phi, alg) + (1.0 / 6.0) * bracket_l3(phi, phi, phi, alg)
    return R, R.sup_norm()


def gauge_operator(Y, phi):
    """``l1(Y) - l2(Y, Phi) + l3(Y, Phi, Phi)/2`` for a section Y of G (as a degree-0 KGForm)."""
    grid, split = _common(Y, phi)
    alg = _FieldAlgebra(grid, split)
    return bracket_l1(Y, alg) - bracket_l2(Y, phi, alg) + 0.5 * bracket_l3(Y, phi, phi, alg)


# -- involutivity ------------------------------------------------------------


def _frame_brackets(frame, grid):
    r = frame.shape[-1]
    grads = [spectral_gradient(frame[..., i], grid) for i in range(r)]
    out = {}
    for i in range(r):
        for j in range(i + 1, r):
            out[(i, j)] = (
                np.einsum("...a,...ai->...i", frame[..., i], grads[j])
                - np.einsum("...a,...ai->...i", frame[..., j], grads[i])
            )
    return out


def _transverse_coords(frame, complement, vec):
    """Coordinates along ``complement`` of ``vec`` in the basis ``[frame | complement]``."""
    r = frame.shape[-1]
    basis = np.concatenate([frame, np.broadcast_to(complement, frame.shape[:-1] + (complement.shape[-1],))], axis=-1)
    c = np.linalg.solve(basis, vec[..., None])[..., 0]
    return c[..., r:]


def orthogonal_complement(frame):
    u, _, _ = np.linalg.svd(frame, full_matrices=True)
    return u[..., frame.shape[-1]:]


def involutivity_residual(frame, grid, complement=None, kappa_max=KAPPA_MAX, return_witness=False):
    """Sup norm of the part of ``[E_i, E_j]`` transverse to ``span(E)``.

    ``frame`` has shape ``grid.shape + (n, r)``.  The transverse part is
    measured by its coordinates along ``complement`` (a constant ``(n, n-r)``
    frame or a field of such frames) in the basis ``[E | complement]``; by
    default the pointwise orthogonal complement is used.
    """
    frame = np.asarray(frame, dtype=float)
    n, r = frame.shape[-2:]
    if frame.shape[:-2] != grid.shape or n != grid.n:
        raise InputError("frame does not match the grid")
    s = np.linalg.svd(frame, compute_uv=False)
    with np.errstate(divide="ignore"):
        cond = np.where(s[..., -1] > 0, s[..., 0] / s[..., -1], np.inf) if r else np.zeros(grid.shape)
    if np.any(cond > kappa_max):
        raise FrameError("frame drops rank", witness=_witness(cond, grid.shape))
    comp = orthogonal_complement(frame) if complement is None else np.asarray(complement, dtype=float)
    worst = np.zeros(grid.shape)
    for b in _frame_brackets(frame, grid).values():
        w = _transverse_coords(frame, comp, b)
        worst = np.maximum(worst, np.linalg.norm(w, axis=-1))
    value = float(np.max(worst, initial=0.0))
    if return_witness:
        return value, _witness(worst, grid.shape)
    return value


# -- gauge equation ------------------------------------------------------------


def _check_in_G(Y, split, tol=1e-10):
    kc, gc = split.coords(Y.values)
    scale = max(1.0, float(np.max(np.abs(Y.values), initial=0.0)))
    if np.max(np.abs(kc), initial=0.0) > tol * scale:
        raise InputError("Y is not a section of G")
    return gc


def section_of_G(Y, split):
    """A G-valued vector field as a degree-0 KGForm."""
    gc = _check_in_G(Y, split)
    return KGForm(Y.grid, split, 0, gc)


def gauge_rhs_foliation(phi, Y):
    """``dPhi/dt (X) = -pr_G[Y, X + Phi X] + Phi(pr_K[Y, X + Phi X])`` on the K frame."""
    grid, split = phi.grid, phi.split
    if Y.grid != grid:
        raise GridMismatchError("Y and Phi live on different grids")
    _check_in_G(Y, split)
    frame = phi.frame()
    gY = spectral_gradient(Y.values, grid)
    out = np.empty_like(phi.values)
    for a in range(split.k):
        V = frame[..., a]
        gV = spectral_gradient(V, grid)
        b = np.einsum("...a,...ai->...i", Y.values, gV) - np.einsum("...a,...ai->...i", V, gY)
        kc, gc = split.coords(b)
        out[..., a] = -gc + np.einsum("...ca,...a->...c", phi.values, kc)
    return GraphMapField(grid, split, out)


class FoliationGaugePath:
    """Graph maps ``Phi_t`` and sections ``Y_t`` of G at uniform t-nodes."""

    def __init__(self, times, phis, ys):
        times = np.asarray(times, dtype=float)
        if len(times) != len(phis) or len(times) != len(ys):
            raise InputError("path needs one Phi and one Y per node")
        if len(times) > 1:
            uniform_step(times)
        self.times = times
        self.phis = [_as_graph_map(p) for p in phis]
        self.ys = list(ys)

    @property
    def grid(self):
        return self.phis[0].grid

    @property
    def split(self):
        return self.phis[0].split

    def __len__(self):
        return len(self.times)


def _path_sampler(Y):
    if callable(Y) and not isinstance(Y, (VectorField, SampledPath)):
        return Y
    path = as_path(Y)
    return path.at


def _require_transverse(phi, t, kappa_max):
    cond = phi.transversality_cond()
    if np.any(cond > kappa_max) or not np.all(np.isfinite(phi.values)):
        cond = np.where(np.isfinite(cond), cond, np.inf)
        raise TransversalityError(
            f"graph stops being transverse to G at t={t:.6g}", t=float(t), witness=_witness(cond, phi.grid.shape)
        )


def integrate_gauge_foliation(phi0, Y, steps=100, t_final=1.0, kappa_max=KAPPA_MAX, rhs_scale=1.0):
    """RK4 integration of the gauge equation from ``Phi_0``.

    ``Y`` is a VectorField, a SampledPath of them, or a callable ``t -> Y_t``.
    Transversality of the graph to G is checked after every step.
    ``rhs_scale`` multiplies the right-hand side (used for negative controls).
    """
    if steps < 1:
        raise InputError("steps must be >= 1")
    Yt = _path_sampler(Y)
    h = t_final / steps
    phi = _as_graph_map(phi0)
    _require_transverse(phi, 0.0, kappa_max)
    times = [0.0]
    phis = [phi]
    ys = [Yt(0.0)]

    def rhs(t, p):
        return rhs_scale * gauge_rhs_foliation(p, Yt(t)).values

    for i in range(steps):
        t = i * h
        v = phi.values
        k1 = rhs(t, phi)
        k2 = rhs(t + h / 2, phi._like(v + h / 2 * k1))
        k3 = rhs(t + h / 2, phi._like(v + h / 2 * k2))
        k4 = rhs(t + h, phi._like(v + h * k3))
        phi = phi._like(v + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4))
        t_next = (i + 1) * h
        if not np.all(np.isfinite(phi.values)):
            raise IntegrationError(f"gauge flow blew up at t={t_next:.6g}")
        _require_transverse(phi, t_next, kappa_max)
        times.append(t_next)
        phis.append(phi)
        ys.append(Yt(t_next))
    return FoliationGaugePath(times, phis, ys)


def graph_from_frame(frame, split, kappa_max=KAPPA_MAX, t=None):
    """Re-express a frame field transverse to G as a graph map over K."""
    kc, gc = split.coords(np.swapaxes(frame, -1, -2))  # (..., k, k) and (..., k, g)
    u = np.swapaxes(kc, -1, -2)
    v = np.swapaxes(gc, -1, -2)
    cond = _cond(u) if split.k else np.zeros(frame.shape[:-2])
    if np.any(cond > kappa_max):
        lead = frame.shape[:-2]
        raise TransversalityError(
            "distribution is not transverse to G", t=t, witness=_witness(np.where(np.isfinite(cond), cond, np.inf), lead)
        )
    return v @ np.linalg.inv(u)


def pushforward_distribution(phi_map, phi0, inverse=None, kappa_max=KAPPA_MAX):
    """Graph map of ``phi_* graph(Phi_0)``."""
    phi0 = _as_graph_map(phi0)
    pushed = pushforward_frame(phi_map, phi0.frame(), inverse=inverse)
    return GraphMapField(phi0.grid, phi0.split, graph_from_frame(pushed, phi0.split, kappa_max))


def gauge_equation_residual(path):
    """Sup over nodes of ``|dPhi/dt - rhs(Phi_t, Y_t)|`` with fourth-order time differences."""
    h = uniform_step(path.times)
    dphi = time_derivative(np.stack([p.values for p in path.phis]), h)
    worst = 0.0
    for i, (p, Y) in enumerate(zip(path.phis, path.ys)):
        diff = dphi[i] - gauge_rhs_foliation(p, Y).values
        worst = max(worst, float(np.max(np.linalg.norm(diff, axis=p.grid.n), initial=0.0)))
    return worst


def product_involutivity_check(path, return_witness=False):
    """Involutivity residual of ``D = graph(Phi_t) + span(d/dt + Y_t)`` on ``T^n x [0, 1]``.

    Brackets on the product are assembled from spectral space derivatives and
    fourth-order differences in t; the transverse part is measured along the
    lifted complement ``G x 0``.
    """
    if len(path) < 5:
        raise InputError("product involutivity check needs at least 5 t-nodes")
    grid, split = path.grid, path.split
    n = grid.n
    h = uniform_step(path.times)
    frames = np.stack([p.frame() for p in path.phis])  # (m, ..., n, k)
    dframes = time_derivative(frames, h)
    G = split.G
    worst_val, worst_at = 0.0, None
    for i, (phi, Y) in enumerate(zip(path.phis, path.ys)):
        E = frames[i]
        # product frame on R^{n+1}: columns (E_a, 0) and (Y, 1); complement (G, 0)
        T = np.concatenate([Y.values, np.ones(grid.shape + (1,))], axis=-1)
        Ep = np.concatenate([E, np.zeros(grid.shape + (1, split.k))], axis=-2)
        basis = np.concatenate(
            [Ep, T[..., None], np.broadcast_to(np.vstack([G, np.zeros((1, split.g))]), grid.shape + (n + 1, split.g))],
            axis=-1,
        )
        brackets = list(_frame_brackets(E, grid).values())
        gY = spectral_gradient(Y.values, grid)
        for a in range(split.k):
            gE = spectral_gradient(E[..., a], grid)
            spatial = dframes[i][..., a] + np.einsum("...b,...bi->...i", Y.values, gE) - np.einsum(
                "...b,...bi->...i", E[..., a], gY
            )
            brackets.append(spatial)
        for b in brackets:
            bp = np.concatenate([b, np.zeros(grid.shape + (1,))], axis=-1)
            c = np.linalg.solve(basis, bp[..., None])[..., 0]
            norms = np.linalg.norm(c[..., split.k + 1:], axis=-1)
            val = float(np.max(norms, initial=0.0))
            if val > worst_val or worst_at is None:
                worst_val, worst_at = val, (i,) + _witness(norms, grid.shape)
    if return_witness:
        return worst_val, worst_at
    return worst_val


def isotopy_to_gauge(V, phi0, steps=50, t_final=1.0, kappa_max=KAPPA_MAX):
    """Gauge data ``(Phi_t, Y_t)`` induced by the isotopy generated by ``V_t``.

    ``Phi_t`` is the graph map of the pushed distribution and ``Y_t`` the
    G-component of ``V_t`` taken along ``graph(Phi_t)``.
    """
    phi0 = _as_graph_map(phi0)
    grid, split = phi0.grid, phi0.split
    Vt = _path_sampler(V)
    flows = flow(_nodes_path(Vt, steps, t_final), t_final=t_final, steps=steps, record=True)
    times, phis, ys = [], [], []
    for i, fm in enumerate(flows):
        t = i * t_final / steps
        phi = pushforward_distribution(fm, phi0, kappa_max=kappa_max) if i else phi0
        _require_transverse(phi, t, kappa_max)
        Vv = Vt(t).values
        w = _transverse_coords(phi.frame(), split.G, Vv)
        times.append(t)
        phis.append(phi)
        ys.append(VectorField(grid, w @ split.G.T))
    return FoliationGaugePath(times, phis, ys)


def _nodes_path(Vt, steps, t_final):
    """Sample a callable field at the RK4 stage times so no time interpolation is needed."""
    return LazyPath(stage_nodes(steps, t_final), Vt)
