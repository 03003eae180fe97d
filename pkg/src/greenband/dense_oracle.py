"""Dense reference computations used only to verify the structured algorithms.

Everything here is O(n^3) or worse and intended for desk-scale checks:
row-pivoted inversion, numerical rank by complete-pivoting elimination, and
Householder reflections.
"""

import warnings

import numpy as np
import scipy.linalg

from .errors import SingularMatrixError

__all__ = [
    "dense_invert",
    "numerical_rank",
    "householder_vector",
    "householder_annihilate",
    "HouseholderResult",
]

_EPS = np.finfo(float).eps


def dense_invert(m):
    """Inverse of a square matrix by row-pivoted Gaussian elimination.

    Raises SingularMatrixError when some elimination pivot falls below
    ``n * eps * ||M||_inf`` (singular to working precision).
    """
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("input must be square")
    tol = n * _EPS * np.linalg.norm(m, np.inf)
    try:
        with warnings.catch_warnings():
            # exact singularity surfaces through the pivot check below
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu, piv = scipy.linalg.lu_factor(m, check_finite=False)
    except scipy.linalg.LinAlgError as exc:
        raise SingularMatrixError(f"LU factorization failed: {exc}") from exc
    pivots = np.abs(np.diagonal(lu))
    if pivots.min() <= tol:
        k = int(pivots.argmin())
        raise SingularMatrixError(
            f"matrix is singular to working precision (pivot {k + 1})",
            pivot_index=k + 1,
        )
    return scipy.linalg.lu_solve((lu, piv), np.eye(n), check_finite=False)


def numerical_rank(m, tol):
    """Numerical rank by Gaussian elimination with complete pivoting.

    Counts the pivots whose magnitude exceeds ``tol`` times the largest pivot.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    work = np.array(m, dtype=float)
    if work.ndim != 2:
        raise ValueError("input must be a matrix")
    pivots = []
    for _ in range(min(work.shape)):
        i, j = np.unravel_index(np.argmax(np.abs(work)), work.shape)
        piv = work[i, j]
        if piv == 0.0:
            break
        pivots.append(abs(piv))
        work -= np.outer(work[:, j] / piv, work[i, :])
        work[i, :] = 0.0
        work[:, j] = 0.0
    if not pivots:
        return 0
    pivots = np.array(pivots)
    return int(np.count_nonzero(pivots > tol * pivots.max()))


def householder_vector(v):
    """Reflection data (w, beta, x) with (I - beta w w^T) v = (x, 0, ..., 0)^T.

    Uses the stable sign choice x = -sign(v[0]) * ||v||, and works on the
    vector scaled by its largest entry so that neither w @ w nor beta can
    overflow or underflow for extreme input magnitudes.  For v = 0 the
    reflection is the identity (beta = 0) and x = 0.
    """
    v = np.asarray(v, dtype=float)
    scale = np.abs(v).max() if v.size else 0.0
    if scale == 0.0:
        return np.zeros(v.size), 0.0, 0.0
    w = v / scale
    norm = np.linalg.norm(w)
    sign = 1.0 if w[0] >= 0 else -1.0
    w[0] += sign * norm  # no cancellation with this sign choice
    beta = 2.0 / (w @ w)
    return w, beta, -sign * norm * scale


class HouseholderResult:
    """Unitary block ``u`` and leading scalar ``x`` with u^T v = (x, 0, ...)^T."""

    def __init__(self, u, x):
        self.u = u
        self.x = x


def householder_annihilate(v):
    """Householder reflection annihilating all but the first entry of v.

    Returns a HouseholderResult whose ``u`` is symmetric orthogonal with
    ``u.T @ v = (x, 0, ..., 0)`` and ``|x| = ||v||_2``.
    """
    v = np.asarray(v, dtype=float)
    w, beta, x = householder_vector(v)
    u = np.eye(v.size) - beta * np.outer(w, w)
    return HouseholderResult(u, x)
