"""Pseudospectral exterior calculus and flows on the flat torus (R / 2 pi Z)^n.

Fields live on a uniform ``N^n`` grid.  A degree-``p`` form stores its full
antisymmetric coefficient tensor per point, so ``values`` has shape
``(N,)*n + (n,)*p`` with ``values[..., i, j] = omega(e_i, e_j)``.  All
derivatives go through the FFT; pointwise products are taken in physical
space without dealiasing unless :func:`dealias` is called explicitly.

Off-grid evaluation (flows, pullbacks) uses the full trigonometric
interpolant of the grid data.  Fourier modes whose coefficients are below
``drop_tol`` times the largest one are skipped, which keeps evaluation cheap
for fields that depend on few modes without changing results beyond
round-off.
"""

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegreeError, GridMismatchError, InputError, IntegrationError, SizeError

MAX_POINTS = 2**21


@dataclass(frozen=True)
class TorusGrid:
    n: int
    N: int
    max_points: int = MAX_POINTS

    def __post_init__(self):
        if not 1 <= self.n <= 4:
            raise InputError(f"torus dimension must be 1..4, got {self.n}")
        if self.N < 8 or self.N & (self.N - 1):
            raise InputError(f"N must be a power of two >= 8, got {self.N}")
        if self.N**self.n > self.max_points:
            raise SizeError(f"{self.N}^{self.n} grid points exceed budget {self.max_points}")

    @property
    def shape(self):
        return (self.N,) * self.n

    @property
    def size(self):
        return self.N**self.n

    @property
    def spacing(self):
        return 2 * np.pi / self.N

    @property
    def axes(self):
        return tuple(range(self.n))

    @cached_property
    def coords(self):
        """Grid coordinates, shape ``shape + (n,)``."""
        x = np.arange(self.N) * self.spacing
        mesh = np.meshgrid(*([x] * self.n), indexing="ij")
        return np.stack(mesh, axis=-1)

    @cached_property
    def _wavenumbers(self):
        k = np.fft.fftfreq(self.N, 1.0 / self.N)
        k_deriv = k.copy()
        k_deriv[self.N // 2] = 0.0
        return k, k_deriv

    def zeros(self, *comp_shape):
        return np.zeros(self.shape + tuple(comp_shape))


def _check_same_grid(*fields):
    grid = fields[0].grid
    for f in fields[1:]:
        if f.grid != grid:
            raise GridMismatchError("fields live on different grids")
    return grid


@dataclass(frozen=True, eq=False)
class FormField:
    grid: TorusGrid
    degree: int
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        n = self.grid.n
        if not 0 <= self.degree <= n:
            raise DegreeError(f"degree {self.degree} out of range for n={n}")
        expected = self.grid.shape + (n,) * self.degree
        if values.shape != expected:
            raise InputError(f"form values have shape {values.shape}, expected {expected}")
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid, degree):
        return cls(grid, degree, grid.zeros(*((grid.n,) * degree)))

    @classmethod
    def constant(cls, grid, coeffs):
        coeffs = np.asarray(coeffs, dtype=float)
        values = np.broadcast_to(coeffs, grid.shape + coeffs.shape).copy()
        return cls(grid, coeffs.ndim, values)

    def _like(self, values):
        return FormField(self.grid, self.degree, values)

    def __add__(self, other):
        _check_same_grid(self, other)
        if other.degree != self.degree:
            raise DegreeError("cannot add forms of different degree")
        return self._like(self.values + other.values)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __neg__(self):
        return self._like(-self.values)

    def __mul__(self, c):
        return self._like(self.values * c)

    __rmul__ = __mul__

    def sup_norm(self):
        """Max over grid points of the Euclidean norm of the coefficient tensor."""
        flat = self.values.reshape(self.grid.size, -1)
        return float(np.max(np.linalg.norm(flat, axis=1)))


@dataclass(frozen=True, eq=False)
class VectorField:
    grid: TorusGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        expected = self.grid.shape + (self.grid.n,)
        if values.shape != expected:
            raise InputError(f"vector field has shape {values.shape}, expected {expected}")
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid):
        return cls(grid, grid.zeros(grid.n))

    @classmethod
    def constant(cls, grid, vec):
        return cls(grid, np.broadcast_to(np.asarray(vec, dtype=float), grid.shape + (grid.n,)).copy())

    def __add__(self, other):
        _check_same_grid(self, other)
        return VectorField(self.grid, self.values + other.values)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __neg__(self):
        return VectorField(self.grid, -self.values)

    def __mul__(self, c):
        return VectorField(self.grid, self.values * c)

    __rmul__ = __mul__

    def sup_norm(self):
        return float(np.max(np.linalg.norm(self.values, axis=-1)))


# -- spectral differentiation ------------------------------------------------


def spectral_gradient(values, grid):
    """Partial derivatives of grid data.

    ``values`` has shape ``grid.shape + comp``; the result has shape
    ``grid.shape + (n,) + comp`` with ``out[..., a, ...] = d_a values``.
    The Nyquist mode is dropped from derivatives.
    """
    values = np.asarray(values, dtype=float)
    n = grid.n
    comp = values.shape[n:]
    spec = np.fft.fftn(values, axes=grid.axes)
    _, kd = grid._wavenumbers
    out = np.empty(grid.shape + (n,) + comp)
    for a in range(n):
        shape = [1] * values.ndim
        shape[a] = grid.N
        deriv = spec * (1j * kd).reshape(shape)
        out[(Ellipsis,) * 0 + (slice(None),) * n + (a,)] = np.fft.ifftn(deriv, axes=grid.axes).real
    return out


def dealias(values, grid):
    """Two-thirds rule: zero every mode with some |k_a| > N/3."""
    spec = np.fft.fftn(values, axes=grid.axes)
    k, _ = grid._wavenumbers
    keep = np.abs(k) <= grid.N / 3
    for a in range(grid.n):
        shape = [1] * spec.ndim
        shape[a] = grid.N
        spec = spec * keep.reshape(shape)
    return np.fft.ifftn(spec, axes=grid.axes).real


def _perm_sign(perm):
    sign = 1
    seen = list(perm)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            sign = -sign
    return sign


def alternate(tensor, p):
    """Antisymmetrization over the trailing ``p`` axes (averaging convention)."""
    if p <= 1:
        return np.array(tensor, dtype=float)
    lead = tensor.ndim - p
    out = np.zeros_like(tensor, dtype=float)
    for perm in itertools.permutations(range(p)):
        axes = list(range(lead)) + [lead + q for q in perm]
        out += _perm_sign(perm) * np.transpose(tensor, axes)
    return out / math.factorial(p)


def d(omega):
    """Exterior derivative of a form field."""
    p = omega.degree
    if p >= omega.grid.n:
        raise DegreeError(f"d of a top-degree form (p={p}) is not defined here")
    grad = spectral_gradient(omega.values, omega.grid)
    return FormField(omega.grid, p + 1, (p + 1) * alternate(grad, p + 1))


def wedge(omega, sigma):
    grid = _check_same_grid(omega, sigma)
    p, q = omega.degree, sigma.degree
    if p + q > grid.n:
        raise DegreeError(f"wedge of degrees {p} and {q} exceeds n={grid.n}")
    n = grid.n
    a = omega.values.reshape(grid.shape + (n,) * p + (1,) * q)
    b = sigma.values.reshape(grid.shape + (1,) * p + (n,) * q)
    coef = math.factorial(p + q) / (math.factorial(p) * math.factorial(q))
    return FormField(grid, p + q, coef * alternate(a * b, p + q))


def interior(X, omega):
    """``iota_X omega``, contracting the first slot."""
    grid = _check_same_grid(X, omega)
    p = omega.degree
    if p == 0:
        raise DegreeError("interior product of a 0-form")
    Xe = X.values.reshape(grid.shape + (grid.n,) + (1,) * (p - 1))
    return FormField(grid, p - 1, np.sum(Xe * omega.values, axis=grid.n))


_LETTERS = "ijkl"


def lie_derivative(X, omega):
    """Coordinate formula ``X^a d_a w_I + sum_k w_{..a..} d_{i_k} X^a``."""
    grid = _check_same_grid(X, omega)
    p = omega.degree
    grad_w = spectral_gradient(omega.values, grid)
    out = np.einsum("...a,...a" + _LETTERS[:p] + "->..." + _LETTERS[:p], X.values, grad_w)
    if p:
        grad_X = spectral_gradient(X.values, grid)  # [..., b, a] = d_b X^a
        idx = _LETTERS[:p]
        for slot in range(p):
            w_idx = idx[:slot] + "z" + idx[slot + 1:]
            out = out + np.einsum(f"...{w_idx},...{idx[slot]}z->...{idx}", omega.values, grad_X)
    return FormField(grid, p, out)


def directional_derivative(X, values, grid):
    """``(X . grad) values`` for arbitrary component shape."""
    grad = spectral_gradient(values, grid)
    Xv = X.values if isinstance(X, VectorField) else X
    comp = values.ndim - grid.n
    Xe = Xv.reshape(grid.shape + (grid.n,) + (1,) * comp)
    return np.sum(Xe * grad, axis=grid.n)


def lie_bracket(X, Y):
    grid = _check_same_grid(X, Y)
    return VectorField(
        grid, directional_derivative(X, Y.values, grid) - directional_derivative(Y, X.values, grid)
    )


# -- trigonometric interpolation ----------------------------------------------


class TrigInterpolant:
    """Trigonometric interpolant of grid data, evaluable at arbitrary points."""

    def __init__(self, values, grid, drop_tol=1e-15):
        values = np.asarray(values, dtype=float)
        self.grid = grid
        self.comp_shape = values.shape[grid.n:]
        flat = values.reshape(grid.shape + (-1,))
        spec = np.fft.fftn(flat, axes=grid.axes) / grid.size
        spec = spec.reshape(grid.size, -1)
        mag = np.max(np.abs(spec), axis=1)
        top = float(np.max(mag, initial=0.0))
        keep = np.nonzero(mag > drop_tol * top)[0] if top > 0 else np.array([0])
        k, _ = grid._wavenumbers
        modes = np.stack(np.unravel_index(keep, grid.shape), axis=1)
        self.modes = k[modes].astype(int)  # (nnz, n) integer wavenumbers
        self.coeffs = spec[keep]  # (nnz, C)
        self._axis_freqs = []
        self._axis_index = []
        for a in range(grid.n):
            freqs, inv = np.unique(self.modes[:, a], return_inverse=True)
            self._axis_freqs.append(freqs)
            self._axis_index.append(inv)

    def __call__(self, points, chunk=1 << 22):
        points = np.asarray(points, dtype=float)
        lead = points.shape[:-1]
        pts = points.reshape(-1, self.grid.n)
        nnz = len(self.coeffs)
        step = max(1, chunk // max(nnz, 1))
        out = np.empty((len(pts), self.coeffs.shape[1]))
        for start in range(0, len(pts), step):
            x = pts[start:start + step]
            phase = None
            for a in range(self.grid.n):
                freqs = self._axis_freqs[a]
                if len(freqs) == 1 and freqs[0] == 0:
                    continue
                table = _phase_table(x[:, a], freqs)[:, self._axis_index[a]]
                phase = table if phase is None else phase * table
            if phase is None:
                out[start:start + step] = self.coeffs.real.sum(axis=0)
            else:
                out[start:start + step] = (phase @ self.coeffs).real
        return out.reshape(lead + self.comp_shape)


def _phase_table(x, freqs):
    """``exp(i x k)`` for integer ``k`` in ``freqs``, by repeated multiplication."""
    top = int(np.max(np.abs(freqs)))
    base = np.exp(1j * x)
    powers = np.empty((len(x), top + 1), dtype=complex)
    powers[:, 0] = 1.0
    if top:
        powers[:, 1:] = np.cumprod(np.broadcast_to(base[:, None], (len(x), top)), axis=1)
    table = powers[:, np.abs(freqs)]
    neg = freqs < 0
    table[:, neg] = np.conj(table[:, neg])
    return table


def evaluate(field, points):
    """Evaluate a FormField or VectorField at off-grid points ``(..., n)``."""
    return TrigInterpolant(field.values, field.grid)(points)


# -- time-dependent fields ----------------------------------------------------


class SampledPath:
    """A field family stored at increasing t-nodes, linear in t between them."""

    def __init__(self, times, items):
        times = np.asarray(times, dtype=float)
        if times.ndim != 1 or len(times) != len(items) or len(times) == 0:
            raise InputError("path needs one item per t-node")
        if len(times) > 1 and np.any(np.diff(times) <= 0):
            raise InputError("t-nodes must increase")
        self.times = times
        self.items = list(items)

    def __len__(self):
        return len(self.items)

    def bracket(self, t):
        """Indices ``(i, j)`` and weight ``w`` with ``item(t) = (1-w) item_i + w item_j``."""
        ts = self.times
        if len(ts) == 1:
            return 0, 0, 0.0
        if t <= ts[0]:
            return 0, 0, 0.0
        if t >= ts[-1]:
            return len(ts) - 1, len(ts) - 1, 0.0
        j = int(np.searchsorted(ts, t, side="right"))
        i = j - 1
        w = (t - ts[i]) / (ts[j] - ts[i])
        if w < 1e-14:
            return i, i, 0.0
        if w > 1 - 1e-14:
            return j, j, 0.0
        return i, j, w

    def item(self, i):
        return self.items[i]

    def at(self, t):
        i, j, w = self.bracket(t)
        a = self.item(i)
        if w == 0.0:
            return a
        return (1 - w) * a + w * self.item(j)


class LazyPath(SampledPath):
    """A path whose node items are produced on demand by ``fn(t)``.

    Only the most recently used nodes are kept, so long paths of large
    fields do not have to fit in memory at once.
    """

    def __init__(self, times, fn, keep=4):
        times = np.asarray(times, dtype=float)
        super().__init__(times, [None] * len(times))
        self.fn = fn
        self.keep = keep
        self._cache = {}

    def item(self, i):
        if i not in self._cache:
            if len(self._cache) >= self.keep:
                self._cache.pop(next(iter(self._cache)))
            self._cache[i] = self.fn(float(self.times[i]))
        return self._cache[i]


def stage_nodes(steps, t_final=1.0, t0=0.0):
    """t-nodes hit by the RK4 stages of a fixed-step run (``2 steps + 1`` points)."""
    lo, hi = sorted((t0, t_final))
    return np.linspace(lo, hi, 2 * steps + 1)


def as_path(obj):
    if isinstance(obj, SampledPath):
        return obj
    return SampledPath([0.0], [obj])


# -- flows -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FlowMap:
    """A diffeomorphism of the torus sampled on the grid.

    ``points[p]`` is the (unwrapped) image of grid point ``p`` and
    ``jac[p][a, i] = d phi^a / d x_i``.
    """

    grid: TorusGrid
    points: np.ndarray
    jac: np.ndarray

    @classmethod
    def identity(cls, grid):
        eye = np.broadcast_to(np.eye(grid.n), grid.shape + (grid.n, grid.n)).copy()
        return cls(grid, grid.coords.copy(), eye)

    @property
    def displacement(self):
        return self.points - self.grid.coords

    @cached_property
    def _interp(self):
        n = self.grid.n
        stacked = np.concatenate(
            [self.displacement, self.jac.reshape(self.grid.shape + (n * n,))], axis=-1
        )
        return TrigInterpolant(stacked, self.grid)

    def map_points(self, x):
        """Images and Jacobians at arbitrary points ``(..., n)``."""
        n = self.grid.n
        vals = self._interp(x)
        return x + vals[..., :n], vals[..., n:].reshape(x.shape[:-1] + (n, n))

    def inverse(self, tol=1e-13, maxiter=50):
        """Newton inversion on the interpolated map, one solve per grid point."""
        q = self.grid.coords.reshape(-1, self.grid.n)
        disp0 = self._interp(q)[:, : self.grid.n]
        p = q - disp0
        for _ in range(maxiter):
            image, J = self.map_points(p)
            r = image - q
            p = p - np.linalg.solve(J, r[..., None])[..., 0]
            if np.max(np.abs(r)) < tol:
                break
        else:
            raise IntegrationError("Newton inversion of flow map did not converge")
        _, J = self.map_points(p)
        shape = self.grid.shape
        return FlowMap(self.grid, p.reshape(shape + (self.grid.n,)), np.linalg.inv(J).reshape(shape + J.shape[-2:]))

    def det_min(self):
        return float(np.min(np.linalg.det(self.jac)))


def compose(phi, psi):
    """``phi o psi``."""
    _check_same_grid(phi, psi)
    image, J = phi.map_points(psi.points)
    return FlowMap(phi.grid, image, J @ psi.jac)


class _FieldSampler:
    """Evaluates a time-dependent vector field and its gradient along trajectories."""

    def __init__(self, path):
        self.path = as_path(path)
        self._cache = {}

    def _node(self, i):
        if i not in self._cache:
            if len(self._cache) >= 4:
                self._cache.pop(next(iter(self._cache)))
            X = self.path.item(i)
            grid = X.grid
            n = grid.n
            grad = spectral_gradient(X.values, grid)  # [..., b, a] = d_b X^a
            jac = np.swapaxes(grad, -1, -2).reshape(grid.shape + (n * n,))
            self._cache[i] = TrigInterpolant(np.concatenate([X.values, jac], axis=-1), grid)
        return self._cache[i]

    def __call__(self, t, x):
        i, j, w = self.path.bracket(t)
        vals = self._node(i)(x)
        if w:
            vals = (1 - w) * vals + w * self._node(j)(x)
        n = x.shape[-1]
        return vals[:, :n], vals[:, n:].reshape(-1, n, n)


def flow(X, t_final=1.0, steps=100, t0=0.0, record=False):
    """Flow of a (possibly time-dependent) vector field by classical RK4.

    ``X`` is a VectorField (autonomous), a :class:`SampledPath` of
    VectorFields, or a callable ``t -> VectorField`` (sampled at the RK4
    stage times).  Trajectories start at the grid points; the Jacobian is
    integrated alongside through the variational equation
    ``dJ/dt = (grad X)(x(t)) J``.  With ``record=True`` the FlowMap after
    every step is returned as a list (index 0 is the identity).
    """
    if steps < 1:
        raise InputError("steps must be >= 1")
    if callable(X) and not isinstance(X, (VectorField, SampledPath)):
        path = LazyPath(stage_nodes(steps, t_final, t0), X)
    else:
        path = as_path(X)
    grid = path.item(0).grid
    sample = _FieldSampler(path)
    n = grid.n
    x = grid.coords.reshape(-1, n).copy()
    J = np.broadcast_to(np.eye(n), (len(x), n, n)).copy()
    h = (t_final - t0) / steps
    history = [FlowMap.identity(grid)] if record else None
    t = t0
    for _ in range(steps):
        v1, A1 = sample(t, x)
        K1 = A1 @ J
        v2, A2 = sample(t + h / 2, x + h / 2 * v1)
        K2 = A2 @ (J + h / 2 * K1)
        v3, A3 = sample(t + h / 2, x + h / 2 * v2)
        K3 = A3 @ (J + h / 2 * K2)
        v4, A4 = sample(t + h, x + h * v3)
        K4 = A4 @ (J + h * K3)
        x = x + h / 6 * (v1 + 2 * v2 + 2 * v3 + v4)
        J = J + h / 6 * (K1 + 2 * K2 + 2 * K3 + K4)
        t += h
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(J))):
            raise IntegrationError(f"non-finite trajectory at t={t:.6g}")
        if record:
            history.append(FlowMap(grid, x.reshape(grid.shape + (n,)).copy(), J.reshape(grid.shape + (n, n)).copy()))
    if record:
        return history
    return FlowMap(grid, x.reshape(grid.shape + (n,)), J.reshape(grid.shape + (n, n)))


def pullback(phi, omega):
    """``(phi^* omega)(p) = omega(phi(p))`` contracted slot-wise with the Jacobian."""
    grid = _check_same_grid(phi, omega)
    vals = evaluate(omega, phi.points)
    J = phi.jac
    p = omega.degree
    idx = _LETTERS[:p]
    src = "".join("abcd"[s] for s in range(p))
    if p:
        spec = f"...{src}," + ",".join(f"...{src[s]}{idx[s]}" for s in range(p)) + f"->...{idx}"
        vals = np.einsum(spec, vals, *([J] * p))
    return FormField(grid, p, vals)


def pushforward_frame(phi, frame, inverse=None):
    """``(phi_* E)(q) = J(p) E(p)`` with ``p = phi^{-1}(q)``.

    ``frame`` has shape ``grid.shape + (n, r)`` (columns are the vectors) or
    ``(n, r)`` for a constant frame.  A precomputed inverse map may be passed.
    """
    grid = phi.grid
    n = grid.n
    frame = np.asarray(frame, dtype=float)
    inv = inverse if inverse is not None else phi.inverse()
    pre = inv.points
    J_at_pre = np.linalg.inv(inv.jac)
    if frame.ndim == 2:
        E = np.broadcast_to(frame, grid.shape + frame.shape)
    else:
        E = TrigInterpolant(frame, grid)(pre)
    return J_at_pre @ E


# -- band-limited test data ----------------------------------------------------


def random_band_limited(grid, comp_shape, rng, kmax=2, amplitude=1.0):
    """Real random field with Fourier modes ``|k_a| <= kmax``, scaled to sup-norm ``amplitude``."""
    comp_shape = tuple(comp_shape)
    spec = np.zeros(grid.shape + comp_shape, dtype=complex)
    idx = [np.r_[0:kmax + 1, grid.N - kmax:grid.N]] * grid.n
    block = np.ix_(*idx)
    shape = tuple(len(i) for i in idx) + comp_shape
    spec[block] = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    values = np.fft.ifftn(spec, axes=grid.axes).real
    top = np.max(np.abs(values))
    return values * (amplitude / top) if top > 0 else values


def time_derivative(stack, dt):
    """Fourth-order finite difference along axis 0 of uniformly spaced samples.

    Centered five-point stencil in the interior, one-sided five-point
    closures at the two nodes nearest each end.
    """
    f = np.asarray(stack, dtype=float)
    m = f.shape[0]
    if m < 5:
        raise InputError("fourth-order time derivative needs at least 5 nodes")
    out = np.empty_like(f)
    out[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * dt)
    out[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * dt)
    out[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * dt)
    out[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12 * dt)
    out[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / (12 * dt)
    return out


def uniform_step(times, tol=1e-9):
    times = np.asarray(times, dtype=float)
    steps = np.diff(times)
    if len(steps) == 0 or np.max(np.abs(steps - steps[0])) > tol * max(1.0, abs(steps[0])):
        raise InputError("t-nodes must be uniformly spaced")
    return float(steps[0])
