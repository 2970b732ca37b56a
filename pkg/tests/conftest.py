import numpy as np
from hypothesis import settings

from convexid.bodies import direction_grid, support
from convexid.sampling import random_polytope, random_symmetric_polytope, sample_rng

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def rand_poly(seed, n=2, k=8, **kw):
    return random_polytope(sample_rng(seed, 0), n, k, **kw)


def rand_sym(seed, n=2, k=5, **kw):
    return random_symmetric_polytope(sample_rng(seed, 1), n, k, **kw)


def support_gap(A, B, U=None):
    """max_u h_A(u) - h_B(u) over a grid plus the facet normals of both."""
    U = direction_grid(A.dim) if U is None else U
    U = np.vstack([U, A.hrep[0], B.hrep[0]])
    return float(np.max(support(A, U) - support(B, U)))


def random_admissible_map(rng, K, spread=1.0):
    """Random non-affine FL map whose domain {<c,x> + d > 0} contains K."""
    from convexid.projective import fl_map

    n = K.dim
    while True:
        A = np.eye(n) + spread * rng.normal(size=(n, n)) / np.sqrt(n)
        if abs(np.linalg.det(A)) > 0.1:
            break
    c = rng.normal(size=n)
    d = support(K, -c) + rng.uniform(0.2, 2.0) * np.linalg.norm(c)
    return fl_map(A, rng.normal(size=n), c, float(d), "+")
