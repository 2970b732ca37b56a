"""Volumes, surface areas, mixed volumes and quermassintegrals (n <= 3).

Mixed volumes use the polarization identity over Minkowski sums, so every
value is an exact polytope computation (up to rounding).  Quermassintegrals
use closed-form Steiner coefficients instead of polytopal ball approximations.
A Monte-Carlo estimator serves as an independent oracle.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ellipe, ellipeinc, ellipkinc

from .bodies import Body, Ellipsoid, VPolytope, minkowski_sum, support
from .errors import ArityMismatch, DegenerateBody, DimensionUnsupported, InvalidParams, UnsupportedOperandPair

SUPPORTED_DIMS = (1, 2, 3)


def ball_volume(n: int) -> float:
    """Volume of the n-dimensional unit ball."""
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def _check_dim(K):
    if K.dim not in SUPPORTED_DIMS:
        raise DimensionUnsupported(f"measures are implemented for n <= 3, got n={K.dim}")


def _shoelace(P) -> float:
    x, y = P[:, 0], P[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def volume(K: Body) -> float:
    """n-dimensional volume; flat bodies have volume 0."""
    _check_dim(K)
    if K.is_flat:
        return 0.0
    if isinstance(K, Ellipsoid):
        return abs(float(np.linalg.det(K.shape))) * ball_volume(K.dim)
    V = K.vertices
    if K.dim == 1:
        return float(V[:, 0].max() - V[:, 0].min())
    if K.dim == 2:
        return abs(_shoelace(V))
    # divergence theorem over the outward triangulated boundary
    T = V[K.triangles]
    return float(np.einsum("ij,ij->i", T[:, 0], np.cross(T[:, 1], T[:, 2])).sum() / 6.0)


def intrinsic_volume_flat(K: Body) -> float:
    """Volume of ``K`` measured inside its own affine hull."""
    if isinstance(K, Ellipsoid):
        k = K.intrinsic_dim
        s = np.linalg.svd(K.shape, compute_uv=False)
        return float(np.prod(s[:k])) * ball_volume(k)
    k = K.intrinsic_dim
    if k == 0:
        return 1.0
    if k == K.dim:
        return volume(K)
    c, Bm = K.affine_frame()
    coords = VPolytope.from_points((K.vertices - c) @ Bm)
    return volume(coords)


def surface_area(K: Body) -> float:
    """Perimeter (2D) or boundary area (3D)."""
    _check_dim(K)
    if K.dim == 1:
        raise DimensionUnsupported("surface area needs n >= 2")
    if K.is_flat:
        raise DegenerateBody("surface area needs a full-dimensional body")
    if isinstance(K, Ellipsoid):
        return _ellipsoid_surface(K)
    V = K.vertices
    if K.dim == 2:
        return float(np.linalg.norm(np.roll(V, -1, axis=0) - V, axis=1).sum())
    T = V[K.triangles]
    return float(0.5 * np.linalg.norm(np.cross(T[:, 1] - T[:, 0], T[:, 2] - T[:, 0]), axis=1).sum())


def _ellipsoid_surface(E: Ellipsoid) -> float:
    s = np.sort(np.linalg.svd(E.shape, compute_uv=False))[::-1]
    if E.dim == 2:
        a, b = s
        return 4 * a * float(ellipe(1 - (b / a) ** 2))
    a, b, c = s
    if a - c <= 1e-14 * a:
        return 4 * math.pi * a * a
    phi = math.acos(c / a)
    m = (a * a * (b * b - c * c)) / (b * b * (a * a - c * c))
    sp = math.sin(phi)
    return 2 * math.pi * c * c + 2 * math.pi * a * b / sp * (
        float(ellipeinc(phi, m)) * sp * sp + float(ellipkinc(phi, m)) * math.cos(phi) ** 2
    )


@dataclass(frozen=True)
class MixedVolumeResult:
    value: float
    operand_count: int
    method: str

    def __float__(self):
        return self.value


def _canonical_key(K: VPolytope):
    return (len(K.vertices), K.intrinsic_dim, np.round(K.vertices, 12).tobytes())


def mixed_volume(Ks) -> MixedVolumeResult:
    """``V(K_1, ..., K_n)`` by polarization, normalized so ``V(K,...,K) = |K|``.

    ``V = (1/n!) sum_{S nonempty} (-1)^{n+|S|} |sum_{i in S} K_i|``.
    Operands are put in a canonical order first, so the result is exactly
    invariant under permutations.
    """
    Ks = list(Ks)
    if not Ks:
        raise ArityMismatch("mixed volume needs n operands")
    n = Ks[0].dim
    if any(K.dim != n for K in Ks):
        raise ArityMismatch("operands have different dimensions")
    if len(Ks) != n:
        raise ArityMismatch(f"mixed volume in R^{n} needs {n} operands, got {len(Ks)}")
    if n not in SUPPORTED_DIMS:
        raise DimensionUnsupported(f"mixed volumes are implemented for n <= 3, got {n}")
    if not all(isinstance(K, VPolytope) for K in Ks):
        raise UnsupportedOperandPair("mixed volumes take polytopes; polytopalize ellipsoids first")
    Ks = sorted(Ks, key=_canonical_key)
    sums = {}
    total = 0.0
    for r in range(1, n + 1):
        for S in itertools.combinations(range(n), r):
            if r == 1:
                body = Ks[S[0]]
            else:
                body = minkowski_sum(sums[S[:-1]], Ks[S[-1]])
            sums[S] = body
            total += (-1) ** (n + r) * volume(body)
    return MixedVolumeResult(total / math.factorial(n), n, f"polarization-{n}d")


def mixed_area(K: VPolytope, L: VPolytope) -> float:
    """2D shortcut ``(|K+L| - |K| - |L|) / 2``."""
    if K.dim != 2 or L.dim != 2:
        raise DimensionUnsupported("mixed_area is planar")
    return 0.5 * (volume(minkowski_sum(K, L)) - volume(K) - volume(L))


@dataclass(frozen=True)
class SteinerCoefficients:
    """``W[i]`` is the quermassintegral ``W_i = V(K[n-i], D[i])``."""

    W: np.ndarray

    @property
    def n(self) -> int:
        return len(self.W) - 1

    def volume_at(self, t: float) -> float:
        n = self.n
        return float(sum(math.comb(n, i) * self.W[i] * t**i for i in range(n + 1)))


def mean_width_integral(K: VPolytope) -> float:
    """``M = 1/2 sum_edges length * exterior dihedral angle`` for a 3D polytope.

    Triangulation diagonals inside a facet contribute a zero angle.
    """
    hull = K.qhull
    normals = hull.equations[:, :3]
    V = K.vertices
    total = 0.0
    for f, nb in enumerate(hull.neighbors):
        for j in range(3):
            g = nb[j]
            if g <= f:
                continue
            a, b = [hull.simplices[f][k] for k in range(3) if k != j]
            n1, n2 = normals[f], normals[g]
            ang = math.atan2(np.linalg.norm(np.cross(n1, n2)), float(n1 @ n2))
            total += np.linalg.norm(V[a] - V[b]) * ang
    return 0.5 * total


def quermassintegrals(K: Body) -> SteinerCoefficients:
    """Steiner coefficients of ``|K + t D| = sum_i C(n,i) W_i t^i``."""
    _check_dim(K)
    n = K.dim
    if n == 1:
        raise DimensionUnsupported("quermassintegrals need n in {2, 3}")
    if K.is_flat:
        raise DegenerateBody("quermassintegrals need a full-dimensional body")
    if isinstance(K, Ellipsoid):
        s = np.linalg.svd(K.shape, compute_uv=False)
        if s[0] - s[-1] > 1e-12 * s[0]:
            raise UnsupportedOperandPair("closed-form quermassintegrals exist for balls only")
        r = float(s[0])
        return SteinerCoefficients(np.array([ball_volume(n) * r ** (n - i) for i in range(n + 1)]))
    if n == 2:
        W = [volume(K), surface_area(K) / 2, math.pi]
    else:
        W = [volume(K), surface_area(K) / 3, mean_width_integral(K) / 3, 4 * math.pi / 3]
    return SteinerCoefficients(np.array(W))


def steiner_volume(K: Body, t: float) -> float:
    """``|K + t D_n|`` from the Steiner coefficients."""
    if t < 0:
        raise InvalidParams("t must be nonnegative")
    return quermassintegrals(K).volume_at(t)


def quermassintegral(K: Body, i: int) -> float:
    return float(quermassintegrals(K).W[i])


# ------------------------------------------------------------ Monte Carlo


def _segment_dist(X, a, b):
    d = b - a
    t = np.clip(((X - a) @ d) / (d @ d), 0.0, 1.0)
    return np.linalg.norm(X - a - t[:, None] * d, axis=1)


def _triangle_dist(X, a, b, c):
    n = np.cross(b - a, c - a)
    nn = n @ n
    w = X - a
    # barycentric coordinates of the plane projection
    s = np.cross(w, c - a) @ n / nn
    t = np.cross(b - a, w) @ n / nn
    inside = (s >= 0) & (t >= 0) & (s + t <= 1)
    plane = np.abs(w @ n) / math.sqrt(nn)
    edge = np.minimum(np.minimum(_segment_dist(X, a, b), _segment_dist(X, b, c)), _segment_dist(X, c, a))
    return np.where(inside, plane, edge)


def distance_to(K: Body, X) -> np.ndarray:
    """Euclidean distance from each row of ``X`` to ``K`` (0 inside)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if isinstance(K, Ellipsoid):
        s = np.linalg.svd(K.shape, compute_uv=False)
        if s[0] - s[-1] > 1e-12 * s[0]:
            raise UnsupportedOperandPair("distance to a non-round ellipsoid is not supported")
        return np.maximum(np.linalg.norm(X - K.center, axis=1) - s[0], 0.0)
    N, b = K.hrep
    inside = np.all(X @ N.T <= b, axis=1)
    V = K.vertices
    if K.dim == 1:
        d = np.maximum(V[:, 0].min() - X[:, 0], X[:, 0] - V[:, 0].max())
        return np.maximum(d, 0.0)
    if K.dim == 2:
        d = np.full(len(X), np.inf)
        for i in range(len(V)):
            d = np.minimum(d, _segment_dist(X, V[i], V[(i + 1) % len(V)]))
    else:
        d = np.full(len(X), np.inf)
        for tri in K.triangles:
            d = np.minimum(d, _triangle_dist(X, *V[tri]))
    return np.where(inside, 0.0, d)


def mc_volume(K: Body, samples: int = 10**6, seed: int = 0, dilate: float = 0.0, chunk: int = 1 << 17):
    """Rejection-sampling estimate of ``|K + dilate * D_n|``.

    Returns ``(estimate, sigma)`` with ``sigma = sqrt(p(1-p)/N) * boxvol``.
    The seed fully determines the sample stream.
    """
    if samples < 10**4:
        raise InvalidParams("use at least 1e4 samples")
    n = K.dim
    E = np.eye(n)
    lo = -support(K, -E) - dilate
    hi = support(K, E) + dilate
    boxvol = float(np.prod(hi - lo))
    rng = np.random.default_rng(seed)
    hits = 0
    left = samples
    while left > 0:
        m = min(chunk, left)
        X = lo + (hi - lo) * rng.random((m, n))
        hits += int(np.count_nonzero(distance_to(K, X) <= dilate))
        left -= m
    p = hits / samples
    return p * boxvol, math.sqrt(p * (1 - p) / samples) * boxvol


def mc_steiner_fit(K: Body, ts=(0.5, 1.0, 2.0), samples: int = 10**6, seed: int = 0):
    """Least-squares Steiner coefficients from Monte-Carlo parallel volumes.

    ``W_n`` (the ball volume) is fixed; the other coefficients are fitted
    against ``mc_volume(K, dilate=t)``.  Returns ``(W_fit, W_sigma, table)``
    where ``table`` lists ``(t, estimate, sigma)``.
    """
    n = K.dim
    kn = ball_volume(n)
    rows, rhs, sig, table = [], [], [], []
    for k, t in enumerate(ts):
        est, s = mc_volume(K, samples, seed=seed + 7919 * k, dilate=t)
        table.append((t, est, s))
        rows.append([math.comb(n, i) * t**i for i in range(n)])
        rhs.append(est - kn * t**n)
        sig.append(s)
    A = np.array(rows) / np.array(sig)[:, None]
    y = np.array(rhs) / np.array(sig)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    cov = np.linalg.pinv(A.T @ A)
    W = np.append(coef, kn)
    Ws = np.append(np.sqrt(np.diag(cov)), 0.0)
    return W, Ws, table
