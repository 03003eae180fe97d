"""Banded matrix containers: band storage, generators, text format.

Run from the repository root after installing the package:

    python demos/01_banded_containers.py
"""

import os
import tempfile

import numpy as np

from greenband import prescribed_condition_band, random_band, read_matrix, write_matrix

# A banded matrix stores only its diagonals.  Here is a 6x6 matrix with one
# subdiagonal and two superdiagonals:
a = random_band(6, 1, 2, seed=0, diag_shift=1.0)
print("dense image of a (6, r_lower=1, r_upper=2) random band:")
print(np.array_str(a.to_dense(), precision=3, suppress_small=True))
print("compressed band array has shape", a.bands.shape, "instead of", (6, 6))

# Entry access is O(1) and anything off the band is zero by construction.
print("\nA[3, 2] =", a.entry(3, 2), "   A[5, 0] =", a.entry(5, 0))

# A matrix with a full upper part is 'lower banded': only the constraint
# A[i, j] = 0 for i - j > r is imposed.
lower = random_band(6, 2, 5, seed=1)
print("\nlower banded (r=2, full upper part):")
print(np.array_str(lower.to_dense(), precision=3, suppress_small=True))

# The text format round-trips exactly (17 significant digits).
with tempfile.NamedTemporaryFile("w", suffix=".txt", delete=False) as fh:
    path = fh.name
write_matrix(path, a)
assert read_matrix(path) == a
os.unlink(path)
print("\ntext format round trip: exact")

# Test matrices with a prescribed condition number, for accuracy studies.
for target in (1e2, 1e8):
    m = prescribed_condition_band(80, 4, target, seed=2)
    print(f"prescribed kappa {target:.0e}: measured {np.linalg.cond(m.to_dense(), 2):.3e}")
