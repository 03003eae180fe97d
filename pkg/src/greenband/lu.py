"""Structured LU (Gauss) factorization of strongly regular banded matrices and
LU-based Green generators of the inverse.

A = L R with L unit lower triangular of lower bandwidth r and R upper
triangular.  L^{-1} is a descending product of embedded elimination blocks
[[1, 0], [-f_k, I_r]], hence lower Green and upper banded of order r; the
generators of A^{-1} = R^{-1} L^{-1} follow from the same backward recursion
as in the QR path.  No pivoting is performed anywhere: the method requires
strong regularity, and a pivot that is zero to working precision raises
ZeroPivotError.  The factorization records its growth factor so instability
on nearly-singular leading blocks is observable.

For a two-sided banded matrix R is upper banded of order r, the window
shrinks to r x (r+1) and the tail stacks to r rows: O(n r^2) total.
"""

import numpy as np
import scipy.linalg

from .errors import ZeroPivotError
from .generators import GreenGenerators
from .transforms import TransformProduct

__all__ = [
    "LuFactorization",
    "lu_factor_lower_band",
    "invert_lower_band_lu",
    "invert_two_sided_lu",
    "elementary_factors_from_entrywise",
]

_EPS = np.finfo(float).eps


def _pivot_tol(a):
    return a.n * _EPS * a.norm_inf()


class LuFactorization:
    """A = L R in factored form.

    ``f[k-1]`` holds the r multipliers eliminating column k (they sit in
    L(k+1:k+r, k), 1-based), ``closing_t`` / ``closing_l`` the unit lower
    triangular trailing block T and its inverse, ``x[k-1] = R(k, k)`` and
    ``rows[k-1]`` the nonzero part of R(k, k+1:), trimmed to r entries when
    ``band_limited``.  ``growth`` is max_k ||Y_k||_inf / ||A||_inf over the
    elimination windows Y_k.
    """

    def __init__(self, n, r, f, closing_t, closing_l, x, rows, band_limited, growth):
        self.n = n
        self.r = r
        self.f = f
        self.closing_t = closing_t
        self.closing_l = closing_l
        self.x = x
        self.rows = rows
        self.band_limited = band_limited
        self.growth = growth

    def l_dense(self):
        """Entrywise unit lower triangular factor L."""
        out = np.eye(self.n)
        for k0 in range(self.n - self.r):
            out[k0 + 1 : k0 + self.r + 1, k0] = self.f[k0]
        out[self.n - self.r :, self.n - self.r :] = self.closing_t
        return out

    def r_dense(self):
        out = np.zeros((self.n, self.n))
        out[np.arange(self.n), np.arange(self.n)] = self.x
        for k0, row in enumerate(self.rows):
            out[k0, k0 + 1 : k0 + 1 + row.size] = row
        return out

    def r_closing(self):
        """The trailing r x r upper triangular block S of R."""
        s = np.zeros((self.r, self.r))
        for j in range(self.r):
            s[j, j] = self.x[self.n - self.r + j]
            if j < self.r - 1:
                s[j, j + 1 :] = self.rows[self.n - self.r + j]
        return s

    def inverse_factors(self):
        """L^{-1} as a descending TransformProduct of the elimination blocks
        [[1, 0], [-f_k, I_r]] with trailing block T^{-1}."""
        factors = []
        for k0 in range(self.n - self.r):
            blk = np.eye(self.r + 1)
            blk[1:, 0] = -self.f[k0]
            factors.append(blk)
        return TransformProduct(self.n, self.r, factors, self.closing_l, order="descending")


def _unpivoted_lu(mat, tol, pivot_offset):
    """LU without pivoting of a small dense block: mat = T S with T unit lower
    triangular.  ``pivot_offset`` is the 1-based index reported for pivot 0."""
    r = mat.shape[0]
    t = np.eye(r)
    s = np.array(mat)
    for j in range(r):
        piv = s[j, j]
        if abs(piv) <= tol:
            raise ZeroPivotError(
                f"pivot {pivot_offset + j} is zero to working precision",
                pivot_index=pivot_offset + j,
            )
        t[j + 1 :, j] = s[j + 1 :, j] / piv
        s[j + 1 :, j:] -= np.outer(t[j + 1 :, j], s[j, j:])
        s[j + 1 :, j] = 0.0
    return t, s


def _finish(a, y, x, rows, f, growth, band_limited):
    n, r = a.n, a.r_lower
    t_mat, s_mat = _unpivoted_lu(y, _pivot_tol(a), n - r + 1)
    growth = max(growth, np.linalg.norm(s_mat, np.inf) / (a.norm_inf() or 1.0))
    closing_l = scipy.linalg.solve_triangular(
        t_mat, np.eye(r), lower=True, unit_diagonal=True, check_finite=False
    )
    for j in range(r):
        x[n - r + j] = s_mat[j, j]
        if j < r - 1:
            rows[n - r + j] = s_mat[j, j + 1 :].copy()
    return LuFactorization(n, r, f, t_mat, closing_l, x, rows, band_limited, growth)


def lu_factor_lower_band(a):
    """Structured unpivoted LU of a strongly regular lower banded matrix of
    order r (full upper part).  O(n^2 r) arithmetic; raises ZeroPivotError
    with the 1-based pivot index when strong regularity fails."""
    n, r = a.n, a.r_lower
    tol = _pivot_tol(a)
    scale = a.norm_inf() or 1.0
    x = np.empty(n)
    rows = [None] * (n - 1)
    f = np.empty((n - r, r))
    growth = np.linalg.norm(a.rows_block(0, r, 0, n), np.inf) / scale
    y = a.rows_block(0, r, 0, n)
    for k1 in range(1, n - r + 1):
        k0 = k1 - 1
        gamma = y[0, 0]
        if abs(gamma) <= tol:
            raise ZeroPivotError(
                f"pivot {k1} is zero to working precision", pivot_index=k1
            )
        xrow = y[0, 1:]
        fk = np.append(y[1:, 0], a.entry(k0 + r, k0)) / gamma
        z = np.vstack([y[1:, 1:], a.row_segment(k0 + r, k0 + 1, n)])
        z -= np.outer(fk, xrow)
        x[k0] = gamma
        rows[k0] = xrow.copy()
        f[k0] = fk
        growth = max(growth, np.linalg.norm(z, np.inf) / scale) if z.size else growth
        y = z
    return _finish(a, y, x, rows, f, growth, band_limited=False)


def _lu_factor_two_sided(a):
    """Unpivoted LU of a strongly regular two-sided banded matrix with an
    r x (r+1) working window: O(n r^2) total."""
    n, r = a.n, a.r_lower
    tol = _pivot_tol(a)
    scale = a.norm_inf() or 1.0
    width = r + 1
    x = np.empty(n)
    rows = [None] * (n - 1)
    f = np.empty((n - r, r))
    y = np.zeros((r, width))
    lead = a.rows_block(0, r, 0, min(width, n))
    y[:, : lead.shape[1]] = lead
    growth = np.linalg.norm(y, np.inf) / scale
    for k1 in range(1, n - r + 1):
        k0 = k1 - 1
        gamma = y[0, 0]
        if abs(gamma) <= tol:
            raise ZeroPivotError(
                f"pivot {k1} is zero to working precision", pivot_index=k1
            )
        xrow = y[0, 1:]
        fk = np.append(y[1:, 0], a.entry(k0 + r, k0)) / gamma
        # rows k+1..k+r-1 were last touched in column k+r at step k-1, so the
        # incoming column k+r+1 is still pristine
        if k0 + r + 1 < n:
            incol = a.col_segment(k0 + r + 1, k0 + 1, k0 + r)
        else:
            incol = np.zeros(r - 1)
        brow = np.zeros(width)
        seg = a.row_segment(k0 + r, k0 + 1, min(k0 + r + 2, n))
        brow[: seg.size] = seg
        z = np.vstack([np.hstack([y[1:, 1:], incol[:, None]]), brow])
        z -= np.outer(fk, np.append(xrow, 0.0))
        x[k0] = gamma
        rows[k0] = xrow[: min(r, n - k1)].copy()
        f[k0] = fk
        growth = max(growth, np.linalg.norm(z, np.inf) / scale)
        y = z
    return _finish(a, np.ascontiguousarray(y[:, :r]), x, rows, f, growth, band_limited=True)


def _generators_from_lu(fact):
    """Backward recursion producing the Green generators of A^{-1} from the
    factored A = L R.  The a(k), q(k) blocks come straight from the
    elimination blocks: a(k) = [-f_k | e_1 .. e_{r-1}], q(k) = e_r, so their
    identity and zero sub-blocks are exact."""
    n, r = fact.n, fact.r
    xs = fact.x
    # trailing block: (T S)^{-1} via two triangular solves
    p_last = scipy.linalg.solve_triangular(
        fact.r_closing(), fact.closing_l, lower=False, check_finite=False
    )
    cap = r if fact.band_limited else n
    m = n - r
    e1 = np.zeros(r)
    e1[0] = 1.0
    shift_cols = np.eye(r)[:, : r - 1]
    p = np.empty((m, r))
    q = np.zeros((m, r))
    q[:, r - 1] = 1.0
    aa = np.empty((m, r, r))
    t = p_last
    for k1 in range(m, 0, -1):
        k0 = k1 - 1
        aa[k0] = np.hstack([-fact.f[k0][:, None], shift_cols])
        ta = t @ aa[k0]
        row = fact.rows[k0]
        p[k0] = (e1 - row @ ta[: row.size]) / xs[k0]
        t = np.vstack([p[k0][None, :], ta[: cap - 1]])
    return GreenGenerators(n, r, p, q, aa, p_last)


def invert_lower_band_lu(a):
    """Green generators of A^{-1} for a strongly regular lower banded matrix
    of order r, via unpivoted structured elimination."""
    return _generators_from_lu(lu_factor_lower_band(a))


def invert_two_sided_lu(a):
    """Green generators of A^{-1} for a strongly regular two-sided banded
    matrix of order r = r_lower (requires r_upper <= r_lower); O(n r^2).

    Up to roundoff this returns the same generators as invert_lower_band_lu
    applied to the same matrix.
    """
    if a.r_upper > a.r_lower:
        raise ValueError(
            f"two-sided path needs r_upper <= r_lower, got {a.r_upper} > {a.r_lower}"
        )
    return _generators_from_lu(_lu_factor_two_sided(a))


def elementary_factors_from_entrywise(l, r):
    """Descending factorization of L^{-1} read off an entrywise unit lower
    triangular banded L, one row segment per factor.

    Writing L as an ascending product of row transforms I + e_i L(i, :i-1)
    and inverting gives

        L^{-1} = (I - e_N g_{N-r}) ... (I - e_{r+1} g_1) . (C^{-1} (+) I)

    with g_k = L(k+r, k:k+r-1) (1-based) and C = L(1:r, 1:r): each main
    factor is the block [[I_r, 0], [-g_k, 1]] embedded at position k, and the
    leading corner inverse (rows 2..r produce row transforms too short to
    fill an (r+1)-window) acts on rows/columns 1..r, so it is absorbed into
    the k = 1 factor.  Multiplying L by the expanded result gives the
    identity.  The input must be exactly unit lower triangular with lower
    bandwidth r.
    """
    l = np.asarray(l, dtype=float)
    n = l.shape[0]
    if l.shape != (n, n):
        raise ValueError("input must be square")
    if np.any(np.diagonal(l) != 1.0):
        raise ValueError("input must have a unit diagonal")
    if np.any(np.triu(l, 1) != 0.0):
        raise ValueError("input must be lower triangular")
    if np.any(np.tril(l, -(r + 1)) != 0.0):
        raise ValueError(f"input must have lower bandwidth {r}")
    corner = np.eye(r + 1)
    corner[:r, :r] = scipy.linalg.solve_triangular(
        l[:r, :r], np.eye(r), lower=True, unit_diagonal=True, check_finite=False
    )
    factors = []
    for k1 in range(1, n - r + 1):
        blk = np.eye(r + 1)
        blk[r, :r] = -l[k1 + r - 1, k1 - 1 : k1 + r - 1]
        factors.append(blk if k1 > 1 else blk @ corner)
    return TransformProduct(n, r, factors, np.eye(r), order="descending")
