"""Projective matrix arithmetic and Cartan-subspace functionals.

Elements of PGL(d,R) are stored as a determinant-normalized pair
``(entries, log_scale)``: the represented matrix is
``exp(log_scale) * entries``, the entries have unit max-norm, and the
represented determinant has modulus one.  All spectral quantities are
returned in log-space so that products with singular-value ratios far
beyond double range stay finite.

Singular values of a single matrix are computed with a QR-preconditioned
one-sided Jacobi iteration, which keeps small singular values accurate in
a *relative* sense (plain bidiagonalization-based SVD only bounds the
absolute error, which is useless for ``log sigma_d`` of a badly graded
matrix).
"""

import itertools
import math

import numpy as np
import scipy.linalg

from .errors import (
    DegenerateGap,
    InvalidIndex,
    InvalidInput,
    InvalidMatrix,
    NumericalFailure,
)

#: refuse attractors whose defining singular-value gap is below this
GAP_TOLERANCE = 1e-8

#: tolerance for the sum-zero invariant of Cartan vectors
SUM_TOL = 1e-10

_SIGN_TOL = 1e-12
_JACOBI_MAX_SWEEPS = 64


class ProjectiveMatrix:
    """Determinant-normalized representative of an element of PGL(d,R).

    The represented matrix is ``exp(log_scale) * entries``.  The
    constructor rescales ``entries`` to unit max-norm, recomputes
    ``log_scale`` so the represented determinant has modulus one, and
    fixes the global sign so the first resolvably-nonzero entry of the
    first column is positive.  Any ``log_scale`` passed in is therefore
    only an overall scale of the representative and does not change the
    projective class.
    """

    __slots__ = ("entries", "log_scale")

    def __init__(self, entries, log_scale=0.0):
        mat = np.array(entries, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 2:
            raise InvalidMatrix("expected a square matrix of dimension >= 2")
        if not np.all(np.isfinite(mat)):
            raise InvalidMatrix("matrix entries must be finite")
        peak = np.max(np.abs(mat))
        if peak == 0.0:
            raise InvalidMatrix("zero matrix is not projective")
        mat /= peak
        sign, logabsdet = np.linalg.slogdet(mat)
        if sign == 0.0 or not np.isfinite(logabsdet):
            # LU pivots of extreme-spread matrices can collapse to zero in
            # double even when the matrix is invertible; retry through the
            # singular values before rejecting.
            sigma, _ = _jacobi_pass(mat, want_left=False)
            if sigma[-1] <= 0.0:
                raise InvalidMatrix("matrix is numerically singular")
            logabsdet = float(np.sum(np.log(sigma)))
        col = mat[:, 0]
        lead = np.nonzero(np.abs(col) > _SIGN_TOL)[0]
        pivot = lead[0] if lead.size else int(np.argmax(np.abs(col)))
        if col[pivot] < 0.0:
            mat = -mat
        self.entries = mat
        self.log_scale = -logabsdet / mat.shape[0]

    @property
    def d(self):
        return self.entries.shape[0]

    def matrix(self):
        """The |det| = 1 representative as a dense array.

        Overflows for log_scale beyond ~700; prefer working with
        ``entries``/``log_scale`` directly for extreme elements.
        """
        return math.exp(self.log_scale) * self.entries

    def __matmul__(self, other):
        if not isinstance(other, ProjectiveMatrix):
            return NotImplemented
        return ProjectiveMatrix(self.entries @ other.entries)

    def inverse(self):
        try:
            inv = np.linalg.inv(self.entries)
        except np.linalg.LinAlgError as exc:
            raise NumericalFailure(f"inversion failed: {exc}") from exc
        return ProjectiveMatrix(inv)

    def transpose(self):
        return ProjectiveMatrix(self.entries.T)

    def equals(self, other, tol=1e-9):
        """Equality in PGL (normalized representatives up to global sign)."""
        if self.d != other.d:
            return False
        return min(
            np.max(np.abs(self.entries - other.entries)),
            np.max(np.abs(self.entries + other.entries)),
        ) <= tol

    def to_json(self):
        return {"entries": self.entries.tolist(), "logScale": self.log_scale}

    @classmethod
    def from_json(cls, data):
        return cls(data["entries"], data.get("logScale", 0.0))

    def __repr__(self):
        return f"ProjectiveMatrix(d={self.d}, log_scale={self.log_scale:.6g})"


class CartanVector:
    """Point of the Cartan subspace: weakly descending reals summing to 0."""

    __slots__ = ("values",)

    def __init__(self, values):
        vals = np.array(values, dtype=float)
        if vals.ndim != 1 or vals.size < 2:
            raise InvalidInput("Cartan vector must be a 1-d array of length >= 2")
        if not np.all(np.isfinite(vals)):
            raise InvalidInput("Cartan vector entries must be finite")
        ascents = np.diff(vals)
        if ascents.size and np.max(ascents) > 1e-6:
            raise InvalidInput("values are not weakly descending")
        vals = np.sort(vals)[::-1]  # repair sub-tolerance inversions
        total = vals.sum()
        if abs(total) > max(SUM_TOL, 1e-12 * np.max(np.abs(vals), initial=1.0) * vals.size):
            raise InvalidInput(f"values sum to {total:.3e}, not 0")
        self.values = vals - total / vals.size

    @property
    def d(self):
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return np.array(self.values, dtype=dtype)

    def norm2(self):
        return float(np.linalg.norm(self.values))

    def __repr__(self):
        return f"CartanVector({np.array2string(self.values, precision=6)})"


def _as_values(v):
    if isinstance(v, CartanVector):
        return v.values
    return np.asarray(v, dtype=float)


def simple_root(k, v):
    """alpha_k(v) = v_k - v_{k+1} (1-indexed k in 1..d-1)."""
    vals = _as_values(v)
    if not 1 <= k <= vals.size - 1:
        raise InvalidIndex(f"simple root index {k} outside 1..{vals.size - 1}")
    return float(vals[k - 1] - vals[k])


def fundamental_weight(k, v):
    """omega_k(v) = v_1 + ... + v_k (1-indexed k in 1..d-1)."""
    vals = _as_values(v)
    if not 1 <= k <= vals.size - 1:
        raise InvalidIndex(f"weight index {k} outside 1..{vals.size - 1}")
    return float(vals[:k].sum())


def all_simple_roots(v):
    vals = _as_values(v)
    return -np.diff(vals)


def all_fundamental_weights(v):
    vals = _as_values(v)
    return np.cumsum(vals)[:-1]


class RootFunctional:
    """Linear functional sum_k c_k alpha_k on the Cartan subspace."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=float)
        if c.ndim != 1 or c.size < 1 or not np.all(np.isfinite(c)):
            raise InvalidInput("root coefficients must be a finite 1-d array")
        self.coeffs = c

    @property
    def d(self):
        return self.coeffs.size + 1

    def __call__(self, v):
        return self.evaluate(v)

    def evaluate(self, v):
        vals = _as_values(v)
        if vals.size != self.d:
            raise InvalidInput(f"functional is on d={self.d}, vector has d={vals.size}")
        return float(self.coeffs @ -np.diff(vals))

    def weight_coefficients(self):
        """Coordinates a_k with phi = sum a_k omega_k (discrete Laplacian of c)."""
        c = np.concatenate(([0.0], self.coeffs, [0.0]))
        return 2.0 * c[1:-1] - c[:-2] - c[2:]

    @classmethod
    def from_weight_coefficients(cls, weights):
        a = np.asarray(weights, dtype=float)
        n = a.size
        lap = 2.0 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)
        return cls(np.linalg.solve(lap, a))

    def in_positive_cone(self):
        """Member of (a*)^+: all c_k >= 0 and some c_k > 0."""
        return bool(np.all(self.coeffs >= 0.0) and np.any(self.coeffs > 0.0))

    def total(self):
        return float(self.coeffs.sum())

    def __repr__(self):
        return f"RootFunctional({self.coeffs.tolist()})"


class ThetaSet:
    """Symmetric subset of the simple-root indices {1, ..., d-1}."""

    __slots__ = ("indices", "d")

    def __init__(self, indices, d):
        idx = tuple(sorted(set(int(k) for k in indices)))
        if not idx:
            raise InvalidInput("theta must be nonempty")
        if idx[0] < 1 or idx[-1] > d - 1:
            raise InvalidIndex(f"theta indices outside 1..{d - 1}")
        for k in idx:
            if (d - k) not in idx:
                raise InvalidInput(f"theta is not symmetric: {k} in, {d - k} out")
        self.indices = idx
        self.d = d

    def project(self, v):
        """p_theta(v): constant on blocks between theta indices, preserving
        omega_k for k in theta."""
        vals = _as_values(v)
        if vals.size != self.d:
            raise InvalidInput("dimension mismatch")
        cuts = (0,) + self.indices + (self.d,)
        out = np.empty_like(vals)
        csum = np.concatenate(([0.0], np.cumsum(vals)))
        for a, b in zip(cuts[:-1], cuts[1:]):
            out[a:b] = (csum[b] - csum[a]) / (b - a)
        return CartanVector(out)

    def __contains__(self, k):
        return k in self.indices

    def __iter__(self):
        return iter(self.indices)

    def __repr__(self):
        return f"ThetaSet({list(self.indices)}, d={self.d})"


class Subspace:
    """k-plane in R^d given by orthonormal spanning columns."""

    __slots__ = ("basis",)

    def __init__(self, columns):
        mat = np.array(columns, dtype=float)
        if mat.ndim == 1:
            mat = mat[:, None]
        if mat.shape[0] < mat.shape[1] or mat.shape[1] == 0:
            raise InvalidInput("need between 1 and d spanning columns")
        gram = mat.T @ mat
        if np.max(np.abs(gram - np.eye(mat.shape[1]))) > 1e-12:
            q, r = np.linalg.qr(mat)
            if np.min(np.abs(np.diag(r))) < 1e-12 * max(1.0, np.max(np.abs(mat))):
                raise InvalidInput("spanning columns are numerically dependent")
            mat = q
        self.basis = mat

    @property
    def d(self):
        return self.basis.shape[0]

    @property
    def rank(self):
        return self.basis.shape[1]

    def __repr__(self):
        return f"Subspace(d={self.d}, rank={self.rank})"


def grassmannian_distance(V, W):
    """Angle in [0, pi/2] between the Pluecker lines of two k-planes.

    By Cauchy-Binet the cosine equals |det(V^T W)| for orthonormal bases,
    so the pullback of the projective angle metric has a closed form.
    """
    if V.rank != W.rank or V.d != W.d:
        raise InvalidInput("subspaces must share ambient dimension and rank")
    c = abs(float(np.linalg.det(V.basis.T @ W.basis)))
    return float(math.acos(min(1.0, max(-1.0, c))))


def _onesided_jacobi(X):
    """Rotate columns of X until pairwise orthogonal; returns (X, V, ok)."""
    n = X.shape[1]
    V = np.eye(n)
    eps = np.finfo(float).eps
    for _ in range(_JACOBI_MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                xp = X[:, p]
                xq = X[:, q]
                app = float(xp @ xp)
                aqq = float(xq @ xq)
                apq = float(xp @ xq)
                if app == 0.0 or aqq == 0.0:
                    continue
                if abs(apq) <= eps * math.sqrt(app) * math.sqrt(aqq):
                    continue
                rotated = True
                zeta = (aqq - app) / (2.0 * apq)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.hypot(1.0, zeta))
                c = 1.0 / math.hypot(1.0, t)
                s = c * t
                new_p = c * xp - s * xq
                new_q = s * xp + c * xq
                X[:, p] = new_p
                X[:, q] = new_q
                vp = V[:, p].copy()
                V[:, p] = c * vp - s * V[:, q]
                V[:, q] = s * vp + c * V[:, q]
        if not rotated:
            return X, V, True
    return X, V, False


#: beyond this condition number double-precision Jacobi no longer
#: certifies ~1e-10 relative accuracy; fall back to adaptive precision
_DOUBLE_COND_LIMIT = 1e6
_DPS_CAP = 700


def _log_singular_values_mp(A, logcond_guess):
    """Log singular values via mpmath at a precision sized to the spread."""
    import mpmath as mp

    digits = 30 + int(1.1 * max(0.0, logcond_guess) / math.log(10.0))
    with mp.workdps(min(digits, _DPS_CAP)):
        vals = mp.svd_r(mp.matrix(A.tolist()), compute_uv=False)
        logs = sorted((float(mp.log(v)) for v in vals), reverse=True)
    return np.array(logs)


def _jacobi_pass(A, want_left):
    """QRCP-preconditioned one-sided Jacobi; accuracy degrades with cond."""
    q1, r1, _ = scipy.linalg.qr(A, pivoting=True)
    q2, r2, piv2 = scipy.linalg.qr(np.ascontiguousarray(r1.T), pivoting=True)
    X = np.ascontiguousarray(r2.T)
    X, _, ok = _onesided_jacobi(X)
    if not ok:
        raise NumericalFailure("one-sided Jacobi SVD did not converge")
    sigma = np.linalg.norm(X, axis=0)
    order = np.argsort(sigma)[::-1]
    if not want_left:
        return sigma[order], None
    # A = Q1 P2 (X V^T) Q2^T P1^T with X = U Sigma, so left vectors are
    # Q1 P2 U; P2 permutes rows per scipy's pivot convention.
    with np.errstate(invalid="ignore", divide="ignore"):
        u = X / sigma
    u[:, sigma == 0.0] = 0.0
    tmp = np.empty_like(u)
    tmp[piv2, :] = u
    left = q1 @ tmp
    return sigma[order], left[:, order]


def log_singular_values(mat):
    """Descending logs of all singular values, accurate in each component.

    Double-precision one-sided Jacobi (after two pivoted-QR passes) is
    used while the condition number certifies ~1e-10 accuracy; beyond
    that no double-precision algorithm bounds the *relative* error of
    the small singular values of a general dense matrix, so the values
    are recomputed with mpmath at a working precision sized to the
    spectral spread.  Spread up to e^200 and beyond stays finite.
    """
    A = np.asarray(mat, dtype=float)
    sigma, _ = _jacobi_pass(A, want_left=False)
    d = A.shape[0]
    if sigma[-1] > 0.0 and sigma[0] <= _DOUBLE_COND_LIMIT * sigma[-1]:
        return np.log(sigma)
    if sigma[-1] > 0.0:
        logcond = math.log(sigma[0]) - math.log(sigma[-1])
    else:
        # sigma_min underflowed; bound the spread through the determinant
        _, logabsdet = np.linalg.slogdet(A)
        logcond = d * math.log(sigma[0]) - logabsdet
    return _log_singular_values_mp(A, logcond)


def singular_values_accurate(mat, want_left=False):
    """Singular values (descending) with per-component relative accuracy.

    With ``want_left`` also returns the left singular vector matrix from
    the double-precision pass; vector accuracy is set by the relevant
    singular-value gaps, which is all the attractor API (gaps above
    GAP_TOLERANCE) needs.
    """
    A = np.asarray(mat, dtype=float)
    sigma, left = _jacobi_pass(A, want_left=want_left)
    if not (sigma[-1] > 0.0 and sigma[0] <= _DOUBLE_COND_LIMIT * sigma[-1]):
        if sigma[-1] > 0.0:
            logcond = math.log(sigma[0]) - math.log(sigma[-1])
        else:
            _, logabsdet = np.linalg.slogdet(A)
            logcond = A.shape[0] * math.log(sigma[0]) - logabsdet
        sigma = np.exp(_log_singular_values_mp(A, logcond))
    if want_left:
        return sigma, left
    return sigma


def compound_matrix(mat, k):
    """k-th exterior-power (compound) matrix in the dictionary wedge basis.

    Entry (I, J) is the k x k minor of ``mat`` with rows I and columns J,
    where I, J run over sorted k-subsets of {0..d-1} in dictionary order.
    """
    A = np.asarray(mat, dtype=float)
    d = A.shape[0]
    if not 1 <= k <= d:
        raise InvalidIndex(f"compound order {k} outside 1..{d}")
    if k == 1:
        return A.copy()
    subsets = list(itertools.combinations(range(d), k))
    D = len(subsets)
    blocks = np.empty((D, D, k, k))
    for a, rows in enumerate(subsets):
        sub = A[np.ix_(rows, range(d))]
        for b, cols in enumerate(subsets):
            blocks[a, b] = sub[:, cols]
    return np.linalg.det(blocks)


def cartan_projection(g):
    """kappa(g): descending logs of singular values of the normalized
    representative, recentred to sum exactly zero."""
    logs = log_singular_values(g.entries)
    if not np.all(np.isfinite(logs)):
        raise NumericalFailure("singular values underflowed")
    kappa = logs + g.log_scale
    return CartanVector(kappa - kappa.mean())


def jordan_projection(g):
    """nu(g): descending logs of eigenvalue moduli, sum zero.

    Computed through the exterior-power chain: the log of the dominant
    eigenvalue modulus of the k-th compound equals nu_1 + ... + nu_k, and
    dominant eigenvalues stay well-conditioned where the small ones of a
    graded matrix do not.
    """
    d = g.d
    omegas = np.zeros(d + 1)
    for k in range(1, d):
        comp = compound_matrix(g.entries, k)
        try:
            ev = np.linalg.eigvals(comp)
        except np.linalg.LinAlgError as exc:
            raise NumericalFailure(f"eigenvalue solver failed: {exc}") from exc
        top = float(np.max(np.abs(ev)))
        if top <= 0.0 or not np.isfinite(top):
            raise NumericalFailure("dominant compound eigenvalue degenerate")
        omegas[k] = math.log(top) + k * g.log_scale
    nu = np.diff(omegas)
    if np.max(np.diff(nu), initial=-np.inf) > 1e-6:
        raise NumericalFailure("compound eigenvalue chain is not log-concave")
    nu = np.sort(nu)[::-1]
    return CartanVector(nu - nu.mean())


def jordan_via_powers(g, m):
    """kappa(g^(2^m)) / 2^m by repeated squaring, channel by channel.

    Each exterior power E^k(g) is squared m times with per-step max-norm
    renormalization and logScale accumulation; omega_k of the power is
    then the top singular value of a well-scaled double matrix, so no
    component underflows regardless of the spectral spread.
    """
    if m < 1:
        raise InvalidInput("power exponent m must be >= 1")
    d = g.d
    omegas = np.zeros(d + 1)
    for k in range(1, d):
        comp = compound_matrix(g.entries, k)
        scale = k * g.log_scale
        peak = np.max(np.abs(comp))
        comp /= peak
        scale += math.log(peak)
        for _ in range(m):
            comp = comp @ comp
            peak = np.max(np.abs(comp))
            if peak == 0.0 or not np.isfinite(peak):
                raise NumericalFailure("compound power collapsed despite rescaling")
            comp /= peak
            scale = 2.0 * scale + math.log(peak)
        top = float(np.linalg.norm(comp, 2))
        omegas[k] = scale + math.log(top)
        if not np.isfinite(omegas[k]):
            raise NumericalFailure("log-scale accumulation overflowed")
    kappa = np.diff(omegas) / 2.0 ** m
    kappa = np.sort(kappa)[::-1]
    return CartanVector(kappa - kappa.mean())


def cartan_attractor(g, k, gap_tolerance=GAP_TOLERANCE):
    """U_k(g): span of the top-k left singular vectors of the normalized
    representative.  Refuses when the defining gap alpha_k(kappa(g)) is
    below ``gap_tolerance``."""
    if not 1 <= k <= g.d - 1:
        raise InvalidIndex(f"attractor rank {k} outside 1..{g.d - 1}")
    logs = log_singular_values(g.entries)
    _, left = _jacobi_pass(g.entries, want_left=True)
    gap = logs[k - 1] - logs[k]
    if gap <= gap_tolerance:
        raise DegenerateGap(
            f"alpha_{k}(kappa) = {gap:.3e} <= tolerance {gap_tolerance:.1e}"
        )
    return Subspace(left[:, :k])
