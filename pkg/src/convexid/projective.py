"""Fractional-linear (projective) maps ``x -> (A x + b) / (<c, x> + d)``.

A map is stored as the invertible block matrix ``[[A, b], [c, d]]`` acting on
homogeneous coordinates, together with the side of the defining hyperplane
``{<c, x> + d = 0}`` it is declared on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bodies import (
    EPS_GEO,
    Body,
    Ellipsoid,
    EllipsoidParams,
    VPolytope,
    hausdorff_distance,
    polar,
    polytope,
    scale_translate,
    support,
)
from .errors import AffineMapHasNoCanonicalForm, DomainViolation, InvalidParams

# 2-norm condition number above which a matrix counts as singular
MAX_CONDITION = 1e13


def _sign(s) -> int:
    if s in ("+", 1, +1.0):
        return 1
    if s in ("-", -1, -1.0):
        return -1
    raise InvalidParams(f"domain sign must be '+' or '-', got {s!r}")


@dataclass(frozen=True, eq=False)
class FLMap:
    """Fractional-linear map with an explicit domain half-space.

    ``domain_sign`` is +1 when the domain is ``{<c, x> + d > 0}`` and -1 for
    the opposite side.  Composition is matrix product, inverse is matrix
    inverse; the domain signs multiply under composition.
    """

    matrix: np.ndarray
    domain_sign: int = 1

    def __post_init__(self):
        M = np.array(self.matrix, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 2:
            raise InvalidParams("FL map matrix must be (n+1) x (n+1), n >= 1")
        if not np.all(np.isfinite(M)):
            raise InvalidParams("non-finite FL map matrix")
        if np.linalg.cond(M) >= MAX_CONDITION:
            raise InvalidParams("FL map matrix is singular")
        sign = _sign(self.domain_sign)
        n = M.shape[0] - 1
        if not np.any(M[n, :n]) and np.sign(M[n, n]) != sign:
            raise InvalidParams("affine map with an empty declared domain")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "domain_sign", sign)

    @property
    def n(self) -> int:
        return self.matrix.shape[0] - 1

    @property
    def A(self):
        return self.matrix[: self.n, : self.n]

    @property
    def b(self):
        return self.matrix[: self.n, self.n]

    @property
    def c(self):
        return self.matrix[self.n, : self.n]

    @property
    def d(self) -> float:
        return float(self.matrix[self.n, self.n])

    @property
    def is_affine(self) -> bool:
        return not np.any(self.c)

    @property
    def hyperplane(self):
        """``(c, -d)``: the defining hyperplane ``{<c, x> = -d}``."""
        return self.c.copy(), -self.d

    def denominator(self, X):
        return np.asarray(X, dtype=float) @ self.c + self.d

    def __matmul__(self, other: "FLMap") -> "FLMap":
        return FLMap(self.matrix @ other.matrix, self.domain_sign * other.domain_sign)

    def inverse(self) -> "FLMap":
        return FLMap(np.linalg.inv(self.matrix), self.domain_sign)

    def __call__(self, x):
        return apply_point(self, x)

    def condition_number(self) -> float:
        return float(np.linalg.cond(self.matrix))

    def to_dict(self) -> dict:
        return {"matrix": self.matrix.tolist(), "domain_sign": "+" if self.domain_sign > 0 else "-"}

    @classmethod
    def from_dict(cls, data) -> "FLMap":
        return cls(np.array(data["matrix"], dtype=float), _sign(data.get("domain_sign", "+")))


def fl_map(A, b, c, d, domain_sign="+") -> FLMap:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    n = A.shape[0]
    M = np.zeros((n + 1, n + 1))
    M[:n, :n] = A
    M[:n, n] = b
    M[n, :n] = c
    M[n, n] = d
    return FLMap(M, domain_sign)


def affine_map(A, b=None) -> FLMap:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    n = A.shape[0]
    return fl_map(A, np.zeros(n) if b is None else b, np.zeros(n), 1.0, "+")


def canonical_f0(n: int, side="+") -> FLMap:
    """``F0(x) = x / (x1 - 1)`` declared on ``{x1 > 1}`` ('+') or ``{x1 < 1}`` ('-')."""
    if n < 1:
        raise InvalidParams("n >= 1 required")
    c = np.zeros(n)
    c[0] = 1.0
    return fl_map(np.eye(n), np.zeros(n), c, -1.0, side)


def apply_point(F: FLMap, x, tol: float = EPS_GEO):
    """``(A x + b) / (<c, x> + d)``; ``x`` may be a single point or a stack."""
    X = np.asarray(x, dtype=float)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    den = F.denominator(X)
    if np.any(np.abs(den) <= tol):
        raise DomainViolation("point on or too close to the defining hyperplane")
    Y = (X @ F.A.T + F.b) / den[:, None]
    return Y[0] if single else Y


def domain_margin(F: FLMap, K: Body) -> float:
    """Signed distance from ``K`` to the defining hyperplane, positive on the domain side."""
    if F.is_affine:
        return math.inf
    c = F.c
    nc = np.linalg.norm(c)
    s = F.domain_sign
    # min over K of s * (<c, x> + d)
    return float((s * F.d - support(K, -s * c)) / nc)


def admissible(F: FLMap, K: Body, margin: float = EPS_GEO) -> bool:
    """True iff ``K`` lies in the open domain half-space with ``margin`` to spare."""
    if K.dim != F.n:
        return False
    return domain_margin(F, K) > margin


def apply_body(F: FLMap, K: Body) -> Body:
    """Projective position ``F(K)``.

    Polytopes map to the hull of their mapped vertices (segments go to
    segments inside the domain).  Ellipsoids map through the quadric
    congruence ``Q -> M^{-T} Q M^{-1}``.
    """
    if not admissible(F, K):
        raise DomainViolation("body is not inside the domain of the map")
    if isinstance(K, VPolytope):
        return polytope(apply_point(F, K.vertices))
    if F.is_affine:
        return Ellipsoid(F.A @ K.center / F.d + F.b / F.d, F.A @ K.shape / F.d)
    Minv = np.linalg.inv(F.matrix)
    Q = Minv.T @ K.quadric() @ Minv
    return Ellipsoid.from_quadric(Q)


def image_volumes(matrices, K: VPolytope) -> np.ndarray:
    """Volumes of ``F(K)`` for a batch of admissible FL matrices (n in {2, 3}).

    FL maps send facets to facets, so the boundary triangulation of ``K``
    carries over; the images' signed simplex volumes give the result without
    re-running a hull.  Admissibility is the caller's responsibility.
    """
    Ms = np.asarray(matrices, dtype=float)
    n = K.dim
    H = np.hstack([K.vertices, np.ones((len(K.vertices), 1))])
    Y = np.einsum("mij,kj->mki", Ms, H)
    P = Y[..., :n] / Y[..., n:]
    if n == 2:
        x, y = P[..., 0], P[..., 1]
        return 0.5 * np.abs(np.sum(x * np.roll(y, -1, axis=1) - y * np.roll(x, -1, axis=1), axis=1))
    if n == 3:
        T = P[:, K.triangles]
        det = np.einsum("mtj,mtj->mt", T[:, :, 0], np.cross(T[:, :, 1], T[:, :, 2]))
        return np.abs(det.sum(axis=1)) / 6.0
    raise InvalidParams("image_volumes supports n in {2, 3}")


@dataclass(frozen=True)
class BallImage:
    """Image parameters of a ball under F0 plus its rounding radii."""

    params: EllipsoidParams
    m: float
    M: float


def ball_image_params(R: float, delta: float) -> BallImage:
    """Parameters of ``F0(E_{R,R,delta})`` and the radii ``m <= M``.

    With ``s = delta + 2R`` the image is ``E_{R/(delta s), R/sqrt(delta s), 1/s}``:
    the axial semi-axis is half the length of ``[1 - 1/delta, 1 - 1/s]`` and the
    transverse one is the slope of the tangent from 0 to the ball.  The image
    contains a translate of ``m D`` and sits in a translate of ``M D``, where
    ``m, M`` are the smaller and larger semi-axis.
    """
    if not (R > 0 and delta > 0):
        raise InvalidParams("R and delta must be positive")
    s = delta + 2 * R
    axial = R / (delta * s)
    transverse = R / math.sqrt(delta * s)
    params = EllipsoidParams(axial, transverse, 1 / s)
    return BallImage(params, min(axial, transverse), max(axial, transverse))


@dataclass(frozen=True)
class CanonicalDecomposition:
    """``B (F(C x + x0) - y0) = F0(x)``."""

    B: np.ndarray
    C: np.ndarray
    x0: np.ndarray
    y0: np.ndarray

    def residual(self, F: FLMap, X) -> float:
        """Max relative residual of the identity over the rows of ``X``."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        lhs = (apply_point(F, X @ self.C.T + self.x0) - self.y0) @ self.B.T
        n = X.shape[1]
        rhs = apply_point(canonical_f0(n, "+"), X)
        err = np.linalg.norm(lhs - rhs, axis=1) / np.maximum(1.0, np.linalg.norm(rhs, axis=1))
        return float(err.max())


def canonical_decompose(F: FLMap, x0) -> CanonicalDecomposition:
    """Conjugate a non-affine map to the canonical form ``F0``.

    After moving ``x0`` and ``y0 = F(x0)`` to the origin the matrix reads
    ``[[A', 0], [c, d']]``.  The first column of ``C`` is chosen along ``c``
    and the rest span ``c``-perp, which makes the hyperplane row ``lambda *
    (e1, -1)`` with ``lambda = -d'``; then ``B = lambda (A' C)^{-1}``.
    """
    if F.is_affine:
        raise AffineMapHasNoCanonicalForm("affine maps have no canonical form")
    x0 = np.asarray(x0, dtype=float)
    n = F.n
    den = float(F.denominator(x0))
    if abs(den) <= EPS_GEO or np.sign(den) != F.domain_sign:
        raise DomainViolation("x0 is not in the domain of F")
    y0 = apply_point(F, x0)
    Tx = np.eye(n + 1)
    Tx[:n, n] = x0
    Ty = np.eye(n + 1)
    Ty[:n, n] = -y0
    G = Ty @ F.matrix @ Tx
    Ap = G[:n, :n]
    c = G[n, :n]
    lam = -G[n, n]
    Q, _ = np.linalg.qr(np.column_stack([c, np.eye(n)]))
    C = Q[:, :n].copy()
    C[:, 0] = lam * c / (c @ c)
    B = lam * np.linalg.inv(Ap @ C)
    return CanonicalDecomposition(B, C, x0, y0)


def polarity_identity_check(K: Body) -> float:
    """Hausdorff gap between ``F0(K)`` and ``(e1 - K°)°``.

    ``K`` must contain 0 in its interior and lie in ``{x1 < 1}``; both sides
    are built independently (map vs. two polar passes).
    """
    n = K.dim
    F0 = canonical_f0(n, "-")
    if not admissible(F0, K):
        raise DomainViolation("K must lie strictly inside {x1 < 1}")
    lhs = apply_body(F0, K)
    e1 = np.zeros(n)
    e1[0] = 1.0
    rhs = polar(scale_translate(polar(K), -1.0, e1))
    return hausdorff_distance(lhs, rhs)
