import numpy as np
from hypothesis import settings

settings.register_profile("ci", deadline=None)
settings.load_profile("ci")


def random_generators(n, r, seed, scale=None):
    """A well-scaled random generator set (a-blocks contracted so that long
    products stay O(1))."""
    from greenband import GreenGenerators

    rng = np.random.Generator(np.random.PCG64(seed))
    m = n - r
    scale = scale if scale is not None else 0.5 / np.sqrt(r)
    return GreenGenerators(
        n,
        r,
        p=rng.uniform(-1.0, 1.0, (m, r)),
        q=rng.uniform(-1.0, 1.0, (m, r)),
        a=rng.standard_normal((m, r, r)) * scale,
        p_last=rng.uniform(-1.0, 1.0, (r, r)),
    )


def random_orthogonal(m, rng):
    q, rr = np.linalg.qr(rng.standard_normal((m, m)))
    return q * np.sign(np.diagonal(rr))
