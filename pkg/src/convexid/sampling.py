"""Random bodies, directions and matrices used by the suites and tests.

Every sampler takes a ``numpy.random.Generator``; suites derive one per
sample from ``(seed, index)`` so results do not depend on evaluation order.
"""
from __future__ import annotations

import numpy as np

from .bodies import VPolytope, polytope


def sample_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(index)])


def fixture_rng(seed: int) -> np.random.Generator:
    """Stream for bodies shared by every sample of a suite; disjoint from
    the per-sample streams because the entropy has a different length."""
    return np.random.default_rng([int(seed), 0, 1])


def random_unit(rng, n: int) -> np.ndarray:
    while True:
        u = rng.normal(size=n)
        nu = np.linalg.norm(u)
        if nu > 1e-8:
            return u / nu


def random_polytope(rng, n: int, k: int = 8, scale: float = 1.0, shift=None) -> VPolytope:
    while True:
        P = polytope(rng.normal(size=(k, n)) * scale + (0.0 if shift is None else shift))
        if not P.is_flat:
            return P


def random_symmetric_polytope(rng, n: int, k: int = 5, scale: float = 1.0) -> VPolytope:
    """Hull of ``±x_i``: centrally symmetric about 0."""
    while True:
        X = rng.normal(size=(k, n)) * scale
        P = polytope(np.vstack([X, -X]))
        if not P.is_flat:
            return P


def random_simplex(rng, n: int, min_det: float = 1e-6) -> VPolytope:
    """Standard-normal vertices, rejecting ``|det(edges)| < min_det``."""
    while True:
        V = rng.normal(size=(n + 1, n))
        if abs(np.linalg.det(V[1:] - V[0])) >= min_det:
            return polytope(V)


def random_sl(rng, n: int, min_det: float = 1e-6) -> np.ndarray:
    """Normal matrix scaled to ``det = 1``; a negative determinant flips the first column."""
    while True:
        M = rng.normal(size=(n, n))
        d = np.linalg.det(M)
        if abs(d) >= min_det:
            break
    if d < 0:
        M[:, 0] = -M[:, 0]
        d = -d
    return M / d ** (1.0 / n)
