"""Lower Green generator representation of rank-structured matrices.

A matrix B is lower Green of order r when every submatrix
``B[k:, :k + r]`` (0-based, k = 0..n-r-1) has rank at most r; by Asplund's
theorem these are exactly the inverses of invertible lower banded matrices of
order r.  The part of B on and below the (r-1)-th superdiagonal (the *covered
region* ``j - i <= r - 1``) is reproduced by generator parameters

    B[i, j] = p(i) . a(i-1) ... a(s) . q(s-1)      (1-based block indices)

with 1 x r rows p, r x 1 columns q, r x r blocks a, an r x r closing block
``p_last`` for the bottom r rows, and the convention q(0) = I_r (not stored).

Generator sequences are stored 0-based: ``p[k]``, ``q[k]``, ``a[k]`` hold the
1-based parameters p(k+1), q(k+1), a(k+1).
"""

import numpy as np

from .dense_oracle import numerical_rank

__all__ = [
    "BlockPartitionMap",
    "GreenGenerators",
    "entry",
    "reconstruct_structured",
    "tail_stacks",
    "check_green_rank",
    "multiply_upper_triangular",
    "covered_relative_error",
    "identity_residual",
    "write_generators",
    "read_generators",
]


class BlockPartitionMap:
    """The block partition underlying the generator representation.

    An n x n matrix is treated as an (n-r+2) x (n-r+2) block matrix with row
    block sizes (0, 1, ..., 1, r) and column block sizes (r, 1, ..., 1, 0),
    block indices starting at 0.  Scalar rows 0..n-r-1 map to block rows
    1..n-r and the bottom r rows share block row n-r+1; scalar columns
    0..r-1 form block column 0 and column r-1+j is block column j.  The
    covered region is exactly the block strictly lower triangle.
    """

    def __init__(self, n, r):
        if not n > r > 0:
            raise ValueError(f"need n > r > 0, got n={n}, r={r}")
        self.n = int(n)
        self.r = int(r)
        m = self.n - self.r
        self.row_sizes = np.array([0] + [1] * m + [r])
        self.col_sizes = np.array([r] + [1] * m + [0])

    @property
    def blocks(self):
        return self.n - self.r + 2

    def block_row(self, i):
        """Block row index of 0-based scalar row i."""
        return min(i, self.n - self.r) + 1

    def block_col(self, j):
        """Block column index of 0-based scalar column j."""
        return max(j - self.r + 1, 0)

    def row_range(self, bi):
        """0-based scalar row range [lo, hi) of block row bi."""
        lo = int(self.row_sizes[:bi].sum())
        return lo, lo + int(self.row_sizes[bi])

    def col_range(self, bj):
        lo = int(self.col_sizes[:bj].sum())
        return lo, lo + int(self.col_sizes[bj])

    def covered(self, i, j):
        """True when scalar entry (i, j) lies in the block strictly lower
        triangle, equivalently j - i <= r - 1."""
        return self.block_col(j) < self.block_row(i)


class GreenGenerators:
    """Generator parameters of an n x n lower Green matrix of order r.

    p : (n - r, r) rows, q : (n - r, r) columns, a : (n - r, r, r) blocks,
    p_last : (r, r) closing block.  Any finite parameter set defines a valid
    lower Green matrix; no further constraints are imposed.  Arrays are made
    read-only so instances can be shared across threads.
    """

    def __init__(self, n, r, p, q, a, p_last):
        if not n > r > 0:
            raise ValueError(f"need n > r > 0, got n={n}, r={r}")
        self.n = int(n)
        self.r = int(r)
        self.p = np.ascontiguousarray(p, dtype=float)
        self.q = np.ascontiguousarray(q, dtype=float)
        self.a = np.ascontiguousarray(a, dtype=float)
        self.p_last = np.ascontiguousarray(p_last, dtype=float)
        m = self.n - self.r
        if self.p.shape != (m, r) or self.q.shape != (m, r):
            raise ValueError(f"p and q must have shape {(m, r)}")
        if self.a.shape != (m, r, r):
            raise ValueError(f"a must have shape {(m, r, r)}")
        if self.p_last.shape != (r, r):
            raise ValueError(f"p_last must have shape {(r, r)}")
        for arr in (self.p, self.q, self.a, self.p_last):
            if not np.all(np.isfinite(arr)):
                raise ValueError("generator entries must be finite")
            arr.setflags(write=False)

    def p_row(self, i):
        """The generator row attached to 0-based matrix row i (from p_last for
        the bottom r rows)."""
        m = self.n - self.r
        return self.p[i] if i < m else self.p_last[i - m]

    def __repr__(self):
        return f"GreenGenerators(n={self.n}, r={self.r})"


def entry(g, i, j):
    """Single covered entry B[i, j] (0-based) from the generators.

    Raises ValueError when (i, j) lies outside the covered region
    ``j - i <= r - 1``.
    """
    n, r = g.n, g.r
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"index ({i}, {j}) out of range")
    if j - i > r - 1:
        raise ValueError(f"({i}, {j}) is outside the covered region j - i <= r - 1")
    bi = min(i, n - r) + 1  # 1-based block row; the bottom r rows share one
    vec = g.p_row(i)
    if j < r:
        # block column 0 spans matrix columns 0..r-1 and carries q(0) = I_r
        for t in range(bi - 2, -1, -1):  # a(bi-1) ... a(1), 1-based
            vec = vec @ g.a[t]
        return float(vec[j])
    # block column s-1 (1-based s = j - r + 2) is matrix column j
    s = j - r + 2
    for t in range(bi - 2, s - 2, -1):  # a(bi-1) ... a(s), 1-based
        vec = vec @ g.a[t]
    return float(vec @ g.q[s - 2])


def reconstruct_structured(g):
    """Dense n x n image of the covered region (zero above it).

    Runs the tail-stack recursion once, emitting one column segment per block
    column; cost O(n^2 r^2) for the full image, never O(n^3).
    """
    n, r = g.n, g.r
    out = np.zeros((n, n))
    stack = np.zeros((n, r))
    stack[n - r :] = g.p_last
    out[n - r :, n - 1] = stack[n - r :] @ g.q[n - r - 1]
    for k in range(n - r, 0, -1):  # 1-based block row index
        stack[k:] = stack[k:] @ g.a[k - 1]
        stack[k - 1] = g.p[k - 1]
        if k >= 2:
            out[k - 1 :, r + k - 2] = stack[k - 1 :] @ g.q[k - 2]
        else:
            out[:, :r] = stack
    return out


def tail_stacks(g):
    """All tail stacks P_k, returned as a list with element k-1 holding P_k
    (1-based k = 1..n-r+1).

    P_{n-r+1} = p_last and P_k = [p(k); P_{k+1} a(k)]; each P_k has n-k+1
    rows and satisfies ``P_k q(k-1) = B[k-1:, column of block k-1]``.
    """
    n, r = g.n, g.r
    stacks = [g.p_last]
    cur = g.p_last
    for k in range(n - r, 0, -1):
        cur = np.vstack([g.p[k - 1], cur @ g.a[k - 1]])
        stacks.append(cur)
    stacks.reverse()
    return stacks


def check_green_rank(b, r, tol, upper=False):
    """True iff every submatrix B[k:, :k + r] (k = 0..n-r-1) has numerical
    rank at most r.

    With ``upper=True`` the transposed pattern ``B[:k + r, k:]`` is checked
    instead (the two-sided case).
    """
    b = np.asarray(b, dtype=float)
    n = b.shape[0]
    if b.shape != (n, n):
        raise ValueError("input must be square")
    if upper:
        b = b.T
    for k in range(n - r):
        if numerical_rank(b[k:, : k + r], tol) > r:
            return False
    return True


def multiply_upper_triangular(s, g):
    """Generators of C = S B for upper triangular S and lower Green B.

    The product is again lower Green of the same order: q and a carry over
    unchanged, the closing block becomes S[n-r:, n-r:] p_last, and each p row
    picks up the action of the corresponding row of S on the tail stack.
    """
    s = np.asarray(s, dtype=float)
    n, r = g.n, g.r
    if s.shape != (n, n):
        raise ValueError(f"S must be {n} x {n}")
    if np.any(np.tril(s, -1) != 0.0):
        raise ValueError("S must be upper triangular")
    p_last = s[n - r :, n - r :] @ g.p_last
    p_out = np.empty_like(g.p)
    stack = g.p_last  # tail stack of B, grown downward from the closing block
    for k in range(n - r, 0, -1):
        sa = stack @ g.a[k - 1]
        p_out[k - 1] = s[k - 1, k - 1] * g.p[k - 1] + s[k - 1, k:] @ sa
        stack = np.vstack([g.p[k - 1], sa])
    return GreenGenerators(n, r, p_out, g.q, g.a, p_last)


def covered_relative_error(b, reference, r):
    """Frobenius-norm relative error between the covered parts (entries with
    ``j - i <= r - 1``) of ``b`` and ``reference``."""
    b = np.asarray(b, dtype=float)
    reference = np.asarray(reference, dtype=float)
    cov_b = np.tril(b, r - 1)
    cov_ref = np.tril(reference, r - 1)
    return float(np.linalg.norm(cov_b - cov_ref) / np.linalg.norm(cov_ref))


def identity_residual(a, g):
    """Self-contained consistency check of generators against their matrix.

    For B = A^{-1} every strictly-lower entry of A @ B equals zero and is a
    combination of covered entries of B only, so it can be evaluated from the
    reconstruction without knowing A^{-1}.  Returns the largest strictly-lower
    entry of A @ reconstruct(g), scaled by ||A||_inf ||B||_inf.
    """
    b = reconstruct_structured(g)
    n = a.n
    prod = np.zeros((n, n))
    for off in range(-a.r_upper, a.r_lower + 1):
        vals = a.bands[a.r_upper + off]
        j0 = max(0, -off)
        j1 = min(n, n - off)
        idx = np.arange(j0, j1)
        prod[idx + off] += vals[j0:j1, None] * b[idx]
    scale = a.norm_inf() * np.linalg.norm(b, np.inf)
    return float(np.abs(np.tril(prod, -1)).max() / scale)


def _fmt(x):
    return format(float(x), ".17g")


def write_generators(path, g):
    """Write the generator interchange format (JSON, 17 significant digits).

    Fields: n, r, p (n-r rows of r values), q (n-r columns of r values),
    a (n-r blocks of r*r values, row-major), p_last (r*r, row-major).
    """
    m = g.n - g.r

    def row(vals):
        return "[" + ", ".join(_fmt(v) for v in vals) + "]"

    def rows(mat):
        return "[" + ", ".join(row(v) for v in mat) + "]"

    with open(path, "w") as fh:
        fh.write("{\n")
        fh.write(f'  "n": {g.n},\n')
        fh.write(f'  "r": {g.r},\n')
        fh.write(f'  "p": {rows(g.p)},\n')
        fh.write(f'  "q": {rows(g.q)},\n')
        fh.write(f'  "a": {rows(g.a.reshape(m, g.r * g.r))},\n')
        fh.write(f'  "p_last": {row(g.p_last.reshape(g.r * g.r))}\n')
        fh.write("}\n")


def read_generators(path):
    """Parse the generator interchange format written by write_generators."""
    import json

    with open(path) as fh:
        data = json.load(fh)
    try:
        n = int(data["n"])
        r = int(data["r"])
        m = n - r
        p = np.array(data["p"], dtype=float).reshape(m, r)
        q = np.array(data["q"], dtype=float).reshape(m, r)
        a = np.array(data["a"], dtype=float).reshape(m, r, r)
        p_last = np.array(data["p_last"], dtype=float).reshape(r, r)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: malformed generator file: {exc}") from exc
    return GreenGenerators(n, r, p, q, a, p_last)
