"""Truncated Fourier cohomology of linear foliations and constant splittings.

All operators have constant coefficients, so every complex splits over Fourier
modes ``m`` in ``Z^n``.  On the mode ``e^{i m.theta}`` the de Rham differential
is ``i m ^``; the factor ``i`` does not change any rank, so each mode is handled
with the real matrix of ``m ^``.  Truncated dimensions are sums over the modes
with ``|m|_inf <= cutoff``.

Three complexes per mode, for a splitting ``TM = K + G`` with frames ``K``
(n x k) and ``G``:

* ``Omega(M)``: ``^p (R^n)*`` with ``W_p = m ^``.
* ``Omega(K)``: ``^p (R^k)*`` with ``dK_p = (K^T m) ^``.
* ``Omega_hor``: kernel of the restriction ``r_p = C_p(K^T)``.

Ranks are exact (modular elimination) when the frames are integral and
SVD-based otherwise.
"""

import itertools
import logging
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy

from .errors import InputError, SizeError

log = logging.getLogger(__name__)

# primes below 2**31, so products of two residues fit in int64
PRIMES = (2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549, 2147483543, 2147483497)
FLOAT_RANK_TOL = 1e-9
EPS_RES = 1e-12
MAX_ENTRIES = 60_000_000
LIOUVILLE_DENOMINATOR = 10**6


# -- exact parsing ------------------------------------------------------------------


def exact_entry(x):
    """Decompose a number as ``q_0 + sum_d q_d sqrt(d)`` with squarefree ``d``.

    Returns ``{1: q_0, d: q_d, ...}`` with Fraction values, or None when the
    value is not of that form.  A float counts as exact only when its binary
    value is a fraction with denominator at most ``LIOUVILLE_DENOMINATOR``.
    """
    if isinstance(x, (int, np.integer)):
        return {1: Fraction(int(x))}
    if isinstance(x, Fraction):
        return {1: x}
    if isinstance(x, (float, np.floating)):
        q = Fraction(float(x))
        return {1: q} if q.denominator <= LIOUVILLE_DENOMINATOR else None
    try:
        expr = sympy.expand(sympy.sympify(x, rational=True))
    except (sympy.SympifyError, TypeError, SyntaxError) as exc:
        raise InputError(f"cannot parse number {x!r}") from exc
    out = {}
    for term in sympy.Add.make_args(expr):
        coeff, rest = term.as_coeff_Mul()
        if not coeff.is_Rational:
            return None
        if rest == 1:
            key = 1
        elif rest.is_Pow and rest.exp == sympy.Rational(1, 2) and rest.base.is_Integer and rest.base > 0:
            key = int(rest.base)
        else:
            return None
        out[key] = out.get(key, Fraction(0)) + Fraction(int(coeff.p), int(coeff.q))
    return {k: v for k, v in out.items() if v != 0} or {1: Fraction(0)}


def float_entry(x):
    if isinstance(x, (int, float, np.integer, np.floating, Fraction)):
        return float(x)
    try:
        return float(sympy.N(sympy.sympify(x), 30))
    except (sympy.SympifyError, TypeError, SyntaxError) as exc:
        raise InputError(f"cannot parse number {x!r}") from exc


def parse_vector(v):
    """``(float vector, integer relation matrix or None)`` for a direction vector.

    The relation matrix ``C`` (n x q) satisfies ``m.v = 0  <=>  m @ C = 0`` for
    integer ``m``, because ``1`` and the square roots of distinct squarefree
    integers are linearly independent over the rationals.
    """
    if isinstance(v, str):
        v = [s for s in v.replace(";", ",").split(",") if s.strip()]
    vf = np.array([float_entry(x) for x in v], dtype=float)
    if vf.ndim != 1 or vf.size == 0 or not np.all(np.isfinite(vf)):
        raise InputError("direction vector must be a finite 1-d list")
    parts = [exact_entry(x) for x in v]
    if any(p is None for p in parts):
        return vf, None
    keys = sorted({k for p in parts for k in p})
    cols = []
    for k in keys:
        col = [p.get(k, Fraction(0)) for p in parts]
        den = math.lcm(*(c.denominator for c in col))
        if k == 1 and den > LIOUVILLE_DENOMINATOR:
            warnings.warn(
                f"rational entry with denominator {den} is treated as an exact rational; "
                "Liouville behaviour is not represented",
                stacklevel=2,
            )
        cols.append([int(c * den) for c in col])
    return vf, np.array(cols, dtype=object).T


def _int64(mat):
    big = max((abs(int(x)) for x in np.asarray(mat).ravel()), default=0)
    if big >= 2**62:
        raise SizeError("integer data too large for exact mode arithmetic")
    return np.asarray(mat).astype(np.int64)


# -- modes ----------------------------------------------------------------------------


def mode_grid(n, cutoff):
    """All ``m`` with ``|m|_inf <= cutoff`` in lexicographic order, shape ``(count, n)``."""
    if cutoff < 0:
        raise InputError("cutoff must be non-negative")
    count = (2 * cutoff + 1) ** n
    if count * n > MAX_ENTRIES:
        raise SizeError(f"{count} modes exceed the memory budget")
    axis = np.arange(-cutoff, cutoff + 1)
    return np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1).reshape(-1, n)


def _sup_norm(modes):
    return np.max(np.abs(modes), axis=-1) if modes.shape[-1] else np.zeros(len(modes), int)


def resonant_mask(v, modes, arithmetic="exact", eps_res=EPS_RES):
    """Boolean mask of modes with ``m.v = 0``; exact when the entries allow it."""
    vf, C = parse_vector(v)
    if len(vf) != modes.shape[1]:
        raise InputError("direction vector and modes have different dimension")
    if arithmetic == "exact":
        if C is None:
            raise InputError("exact arithmetic needs entries of the form q0 + sum q_d sqrt(d)")
        return np.all(modes.astype(np.int64) @ _int64(C) == 0, axis=1)
    if arithmetic == "float":
        return np.abs(modes @ vf) <= eps_res
    raise InputError(f"unknown arithmetic {arithmetic!r}")


def foliated_h1_dim(v, cutoff, arithmetic="exact", eps_res=EPS_RES):
    """Truncated ``dim H^1`` of the linear foliation spanned by ``v``.

    Equals the number of modes with ``|m|_inf <= cutoff`` and ``m.v = 0``.
    """
    modes = mode_grid(len(parse_vector(v)[0]), cutoff)
    return int(np.sum(resonant_mask(v, modes, arithmetic, eps_res)))


@dataclass
class DiophantineReport:
    v: list
    s: float
    cutoff: int
    min_raw: float
    min_weighted: float
    resonant_modes: list
    exact: bool

    def as_dict(self):
        return {
            "v": self.v,
            "s": self.s,
            "cutoff": self.cutoff,
            "min_raw": self.min_raw,
            "min_weighted": self.min_weighted,
            "resonant_modes": self.resonant_modes,
            "exact": self.exact,
        }


def diophantine_scan(v, s=1.0, cutoff=16, eps_res=EPS_RES):
    """Small-divisor scan over ``0 < |m|_inf <= cutoff``.

    ``min_weighted`` uses the Euclidean norm of ``m``.  Resonant modes are
    decided exactly when ``v`` parses exactly, otherwise by ``|m.v| <= eps_res``.
    This is a finite diagnostic and proves nothing about the limit.
    """
    vf, C = parse_vector(v)
    if not np.any(vf):
        raise InputError("direction vector must be nonzero")
    modes = mode_grid(len(vf), cutoff)
    modes = modes[_sup_norm(modes) > 0]
    dots = np.abs(modes @ vf)
    if C is not None:
        res = np.all(modes.astype(np.int64) @ _int64(C) == 0, axis=1)
        dots = np.where(res, 0.0, dots)
    else:
        res = dots <= eps_res
    weighted = dots * np.linalg.norm(modes, axis=1) ** s
    return DiophantineReport(
        v=[float(x) for x in vf],
        s=float(s),
        cutoff=int(cutoff),
        min_raw=float(dots.min()) if len(dots) else math.inf,
        min_weighted=float(weighted.min()) if len(dots) else math.inf,
        resonant_modes=[[int(a) for a in m] for m in modes[res]],
        exact=C is not None,
    )


# -- exterior algebra per mode ----------------------------------------------------------


def exterior_basis(n, p):
    return list(itertools.combinations(range(n), p)) if 0 <= p <= n else []


def wedge_matrices(vecs, p):
    """Batched matrices of ``w ^`` from ``^p`` to ``^(p+1)``, shape ``(B, C(n,p+1), C(n,p))``."""
    B, n = vecs.shape
    src = exterior_basis(n, p)
    dst = exterior_basis(n, p + 1)
    out = np.zeros((B, len(dst), len(src)), dtype=vecs.dtype)
    index = {J: a for a, J in enumerate(dst)}
    for b, I in enumerate(src):
        for i in range(n):
            if i in I:
                continue
            J = tuple(sorted(I + (i,)))
            out[:, index[J], b] = (-1) ** J.index(i) * vecs[:, i]
    return out


def compound(mat, p, exact=False):
    """p-th compound matrix: all p x p minors, rows/columns in lexicographic order."""
    mat = np.asarray(mat)
    rows = exterior_basis(mat.shape[0], p)
    cols = exterior_basis(mat.shape[1], p)
    dtype = object if exact else float
    out = np.zeros((len(rows), len(cols)), dtype=dtype)
    for a, R in enumerate(rows):
        for b, Cc in enumerate(cols):
            if p == 0:
                out[a, b] = 1
            elif exact:
                out[a, b] = int(sympy.Matrix(mat[np.ix_(R, Cc)].tolist()).det())
            else:
                out[a, b] = np.linalg.det(mat[np.ix_(R, Cc)].astype(float))
    return out


# -- ranks ------------------------------------------------------------------------------------


def _modinv(x, p):
    result = np.ones_like(x)
    base = x % p
    e = p - 2
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def rank_mod_p(mats, p):
    """Batched rank over ``Z/p`` of integer matrices ``(B, r, c)``."""
    A = np.mod(np.asarray(mats, dtype=np.int64), p)
    B, r, c = A.shape
    rank = np.zeros(B, dtype=np.int64)
    if r == 0 or c == 0:
        return rank
    rows = np.arange(r)
    for j in range(c):
        cand = (A[:, :, j] != 0) & (rows[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        b = np.nonzero(has)[0]
        piv = np.argmax(cand[b], axis=1)
        rr = rank[b]
        top = A[b, piv].copy()
        A[b, piv] = A[b, rr]
        inv = _modinv(top[:, j], p)
        pivrow = top * inv[:, None] % p
        A[b, rr] = pivrow
        fac = A[b, :, j].copy()
        fac[rows[None, :] <= rr[:, None]] = 0
        A[b] = (A[b] - fac[:, :, None] * pivrow[:, None, :]) % p
        rank[b] += 1
        if rank.min() >= r:
            break
    return rank


def _hadamard_log_bound(mats):
    norms = np.sqrt(np.sum(np.asarray(mats, dtype=float) ** 2, axis=-2))
    return float(np.max(np.sum(np.log(np.maximum(norms, 1.0)), axis=-1), initial=0.0))


def exact_rank(mats):
    """Batched rank over Q of integer matrices.

    Rank mod p never exceeds the rational rank, and equals it unless p divides
    every maximal nonzero minor.  Minors are bounded by the Hadamard bound, so
    taking the maximum over enough primes gives the exact rank.
    """
    mats = np.asarray(mats, dtype=np.int64)
    if mats.shape[-1] == 0 or mats.shape[-2] == 0:
        return np.zeros(mats.shape[0], dtype=np.int64)
    need = _hadamard_log_bound(mats) + math.log(2)
    rank = np.zeros(mats.shape[0], dtype=np.int64)
    have = 0.0
    for p in PRIMES:
        rank = np.maximum(rank, rank_mod_p(mats, p))
        have += math.log(p)
        if have > need:
            return rank
    raise SizeError("integer entries too large for the prime set")


def float_rank(mats, tol=FLOAT_RANK_TOL):
    """Batched SVD rank, threshold ``tol * max(1, s_max)``."""
    mats = np.asarray(mats, dtype=float)
    if mats.shape[-1] == 0 or mats.shape[-2] == 0:
        return np.zeros(mats.shape[0], dtype=np.int64)
    s = np.linalg.svd(mats, compute_uv=False)
    thresh = tol * np.maximum(1.0, s[..., :1])
    return np.sum(s > thresh, axis=-1)


def _block(tl, tr, bl):
    """``[[tl, tr], [bl, 0]]`` for batched blocks."""
    B = tl.shape[0]
    br = np.zeros((B, bl.shape[1], tr.shape[2]), dtype=tl.dtype)
    top = np.concatenate([tl, tr], axis=2)
    bottom = np.concatenate([bl, br], axis=2)
    return np.concatenate([top, bottom], axis=1)


def _bcast(mat, B):
    return np.broadcast_to(mat, (B,) + mat.shape)


# -- mode complex ---------------------------------------------------------------------------


class ModeComplex:
    """Per-mode linear maps of the truncated complexes for a constant splitting."""

    def __init__(self, K, G, exact=None):
        K = np.asarray(K, dtype=object if exact else float)
        G = np.asarray(G, dtype=object if exact else float)
        if K.ndim != 2 or G.ndim != 2 or K.shape[0] != G.shape[0] or K.shape[1] + G.shape[1] != K.shape[0]:
            raise InputError("K and G frames must be n x k and n x (n - k)")
        B = np.concatenate([K, G], axis=1)
        if exact is None:
            Bf = B.astype(float)
            exact = bool(np.all(Bf == np.round(Bf)))
        self.exact = exact
        self.direction = None
        self.n, self.k = K.shape
        if exact:
            Bi = [[int(x) for x in row] for row in B]
            Ms = sympy.Matrix(Bi)
            if Ms.det() == 0:
                raise InputError("K and G are not complementary")
            adj = np.array(Ms.adjugate().tolist(), dtype=object)
            self.K = np.array([[int(x) for x in row] for row in K], dtype=object).reshape(self.n, self.k)
        else:
            Bf = B.astype(float)
            if abs(np.linalg.det(Bf)) < 1e-12 * max(1.0, np.max(np.abs(Bf))) ** self.n:
                raise InputError("K and G are not complementary")
            adj = np.linalg.inv(Bf)
            self.K = K.astype(float)
        n, k = self.n, self.k
        self.r = [compound(self.K.T, p, exact) for p in range(n + 1)]
        self.H, self.s = [], []
        for p in range(n + 1):
            C = compound(adj, p, exact)
            combos = exterior_basis(n, p)
            kin = [a for a, A in enumerate(combos) if all(i < k for i in A)]
            hor = [a for a, A in enumerate(combos) if not all(i < k for i in A)]
            self.s.append(C[kin].T.reshape(len(combos), len(kin)))
            self.H.append(C[hor].T.reshape(len(combos), len(hor)))
        dt = np.int64 if exact else float
        self.r = [m.astype(dt) for m in self.r]
        self.H = [m.astype(dt) for m in self.H]
        self.s = [m.astype(dt) for m in self.s]
        self.Kmat = self.K.astype(dt)

    @classmethod
    def from_direction(cls, v):
        """K = span(v), G = the coordinate axes other than the first nonzero entry of v."""
        vf, C = parse_vector(v)
        nz = np.nonzero(vf)[0]
        if len(nz) == 0:
            raise InputError("direction vector must be nonzero")
        j = int(nz[0])
        n = len(vf)
        G = np.eye(n, dtype=int)[:, [i for i in range(n) if i != j]]
        if C is not None and C.shape[1] == 1:
            cx = cls(C.astype(object), G.astype(object), exact=True)
        else:
            cx = cls(vf[:, None], G.astype(float), exact=False)
        cx.direction = list(v) if not isinstance(v, str) else v
        return cx

    @classmethod
    def from_splitting(cls, split):
        return cls(split.K, split.G)

    def _rank(self, mats):
        return exact_rank(mats) if self.exact else float_rank(mats)

    def _wedges(self, modes):
        n, k = self.n, self.k
        B = len(modes)
        dt = np.int64 if self.exact else float
        m = modes.astype(dt)
        W = {p: wedge_matrices(m, p) for p in range(n + 1)}
        W[-1] = np.zeros((B, 1, 0), dtype=dt)
        mK = m @ self.Kmat
        dK = {p: wedge_matrices(mK, p) for p in range(k + 1)}
        for p in range(k + 1, n + 1):
            dK[p] = np.zeros((B, 0, 0), dtype=dt)
        dK[-1] = np.zeros((B, 1, 0), dtype=dt)
        return W, dK

    def check_invariants(self, modes):
        """Largest defect of ``d o d = 0``, ``r o d = d_K o r`` and ``r o H = 0``."""
        W, dK = self._wedges(modes)
        worst = 0.0
        for p in range(self.n):
            worst = max(worst, float(np.max(np.abs(W[p + 1] @ W[p]), initial=0)))
        for p in range(self.n):
            rp1 = self.r[p + 1] if p + 1 <= self.k else np.zeros((0, W[p].shape[1]))
            lhs = rp1 @ W[p]
            rhs = dK[p] @ self.r[p] if p <= self.k else np.zeros_like(lhs)
            if lhs.size:
                worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        for p in range(self.n + 1):
            if self.r[p].size and self.H[p].size:
                worst = max(worst, float(np.max(np.abs(self.r[p] @ self.H[p]))))
        return worst

    def mode_data(self, modes):
        """Per-mode dimensions and connecting-map ranks, as int arrays of shape ``(B,)``."""
        n, k = self.n, self.k
        B = len(modes)
        per = sum(math.comb(n, p) * math.comb(n, p + 1) for p in range(n + 1)) * 4
        if B * per > MAX_ENTRIES:
            raise SizeError(f"{B} modes exceed the memory budget")
        W, dK = self._wedges(modes)
        rank = self._rank
        rW = {p: rank(W[p]) for p in range(-1, n + 1)}
        rdK = {p: rank(dK[p]) if p <= k and p >= 0 else np.zeros(B, np.int64) for p in range(-1, n + 1)}
        WH = {p: W[p] @ self.H[p] for p in range(n + 1)}
        WH[-1] = np.zeros((B, 1, 0), dtype=W[0].dtype)
        rWH = {p: rank(WH[p]) for p in range(-1, n + 1)}
        out = {}
        for p in range(n + 1):
            bp, cp = math.comb(n, p), math.comb(k, p)
            out[f"hM{p}"] = bp - rW[p] - rW[p - 1]
            out[f"hK{p}"] = cp - rdK[p] - rdK[p - 1]
            out[f"hhor{p}"] = (bp - cp) - rWH[p] - rWH[p - 1]
            out[f"zhor{p}"] = (bp - cp) - rWH[p]
            Hb = _bcast(self.H[p], B)
            out[f"iota{p}"] = rank(_block(Hb, W[p - 1], WH[p])) - rWH[p] - rW[p - 1]
            if p <= k:
                rb = _bcast(self.r[p], B)
                dkm = dK[p - 1] if p >= 1 else np.zeros((B, cp, 0), dtype=W[0].dtype)
                out[f"restr{p}"] = rank(_block(rb, dkm, W[p])) - rW[p] - rdK[p - 1]
                Ws = W[p] @ self.s[p]
                out[f"delta{p}"] = rank(_block(Ws, WH[p], dK[p])) - rdK[p] - rWH[p]
            else:
                out[f"restr{p}"] = np.zeros(B, np.int64)
                out[f"delta{p}"] = np.zeros(B, np.int64)
        return out

    def discrepancies(self, data):
        """Per-mode count of junctions of the long exact sequence whose rank identity fails."""
        n = self.n
        bad = np.zeros(len(data["hM0"]), dtype=np.int64)
        for p in range(n + 1):
            dprev = data[f"delta{p - 1}"] if p >= 1 else 0
            bad += data[f"hhor{p}"] != dprev + data[f"iota{p}"]
            bad += data[f"hM{p}"] != data[f"iota{p}"] + data[f"restr{p}"]
            bad += data[f"hK{p}"] != data[f"restr{p}"] + data[f"delta{p}"]
        return bad


def _as_complex(obj):
    if isinstance(obj, ModeComplex):
        return obj
    if hasattr(obj, "split"):
        return ModeComplex.from_splitting(obj.split)
    if hasattr(obj, "K") and hasattr(obj, "G"):
        return ModeComplex.from_splitting(obj)
    return ModeComplex.from_direction(obj)


@dataclass
class ModeSweep:
    """Per-mode data at the largest cutoff, aggregated at each requested cutoff."""

    complex: ModeComplex
    modes: np.ndarray
    data: dict
    discrepancy: np.ndarray
    cutoffs: list = field(default_factory=list)

    def total(self, key, cutoff):
        mask = _sup_norm(self.modes) <= cutoff
        return int(np.sum(self.data[key][mask]))

    def discrepancies_at(self, cutoff):
        mask = _sup_norm(self.modes) <= cutoff
        return int(np.sum(self.discrepancy[mask]))


def mode_sweep(obj, cutoffs):
    cx = _as_complex(obj)
    cutoffs = sorted(int(c) for c in cutoffs)
    modes = mode_grid(cx.n, cutoffs[-1])
    data = cx.mode_data(modes)
    return ModeSweep(cx, modes, data, cx.discrepancies(data), cutoffs)


def hhor_dim_truncated(obj, p, cutoff):
    """Truncated ``dim H^p_hor`` for a constant splitting (model, Splitting, ModeComplex or direction)."""
    cx = _as_complex(obj)
    if not 0 <= p <= cx.n:
        raise InputError(f"degree {p} outside 0..{cx.n}")
    data = cx.mode_data(mode_grid(cx.n, cutoff))
    return int(np.sum(data[f"hhor{p}"]))


def growth_label(values):
    """``saturated`` when the last two values agree, else ``growth-consistent-with-infinite``."""
    if len(values) < 2:
        return "undetermined"
    return "saturated" if values[-1] == values[-2] else "growth-consistent-with-infinite"


def growth_exponent(cutoffs, values):
    """Log-log slope between the last two sweep points (0 when saturated)."""
    c0, c1 = cutoffs[-2], cutoffs[-1]
    v0, v1 = values[-2], values[-1]
    if v0 <= 0 or v1 <= 0 or c0 <= 0:
        return float("nan")
    return math.log(v1 / v0) / math.log(c1 / c0)


def les_consistency(obj, cutoffs, s=1.0):
    """Exactness of the long exact sequence mode by mode, with totals per cutoff.

    Every row holds the truncated dimensions of ``H^1(M)``, ``H^1(K)``,
    ``H^2_hor`` and ``H^2(M)`` together with the number of junctions whose
    rank identity fails.  For one-dimensional K the small-divisor minima of
    the direction are added.
    """
    sweep = mode_sweep(obj, cutoffs)
    cx = sweep.complex
    v = getattr(cx, "direction", None)
    if v is None and cx.k == 1:
        v = cx.Kmat[:, 0].astype(float)
    rows = []
    for c in sweep.cutoffs:
        row = {
            "cutoff": c,
            "dim_H1M": sweep.total("hM1", c),
            "dim_H1K": sweep.total("hK1", c),
            "dim_H2hor": sweep.total("hhor2", c) if cx.n >= 2 else 0,
            "dim_H2M": sweep.total("hM2", c) if cx.n >= 2 else 0,
            "discrepancies": sweep.discrepancies_at(c),
        }
        if v is not None and c > 0:
            rep = diophantine_scan(v, s, c)
            row["min_raw"], row["min_weighted"] = rep.min_raw, rep.min_weighted
        else:
            row["min_raw"], row["min_weighted"] = float("nan"), float("nan")
        rows.append(row)
    h1k = [r["dim_H1K"] for r in rows]
    return {
        "exact": cx.exact,
        "rows": rows,
        "total_discrepancies": int(np.sum(sweep.discrepancy)),
        "invariant_defect": cx.check_invariants(sweep.modes[:: max(1, len(sweep.modes) // 512)]),
        "h1k_growth": growth_label(h1k),
        "h2hor_growth": growth_label([r["dim_H2hor"] for r in rows]),
    }


def formal_tangent_report(obj, cutoffs):
    """Truncated dims of closed horizontal 2-forms and of ``H^2_hor`` across a sweep."""
    sweep = mode_sweep(obj, cutoffs)
    if sweep.complex.n < 2:
        raise InputError("tangent report needs n >= 2")
    rows = [
        {"cutoff": c, "dim_cocycles": sweep.total("zhor2", c), "dim_H2hor": sweep.total("hhor2", c)}
        for c in sweep.cutoffs
    ]
    return {
        "exact": sweep.complex.exact,
        "rows": rows,
        "moduli_growth": growth_label([r["dim_H2hor"] for r in rows]),
    }


SWEEP_COLUMNS = ("cutoff", "dim_H1M", "dim_H1K", "dim_H2hor", "dim_H2M", "min_raw", "min_weighted")
