"""Convex bodies and their support-function algebra.

Two representations are used throughout the package:

* :class:`VPolytope` -- the convex hull of finitely many points, stored as an
  irredundant vertex list.  Flat polytopes (affine hull of dimension < n) are
  allowed and flagged through ``intrinsic_dim``.
* :class:`Ellipsoid` -- the image ``shape @ D_n + center`` of the unit ball.
  A singular ``shape`` gives a flat ellipsoid (used for projections and
  sections of ellipsoids).

All values are immutable.  Operations return new bodies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Union

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError

from .errors import (
    DegenerateBody,
    DegenerateScale,
    DimensionMismatch,
    InvalidDirection,
    InvalidParams,
    OriginNotInterior,
    UnsupportedOperandPair,
)

EPS_GEO = 1e-9
EPS_CMP = 1e-7

# relative singular-value cutoff for the affine-hull dimension
_RANK_TOL = 1e-10


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def householder(u):
    """Orthogonal symmetric matrix ``H`` with ``H @ e1 = u / |u|``.

    The remaining columns of ``H`` are an orthonormal basis of ``u``'s
    orthogonal complement.  ``H`` is an involution, so it also maps ``u`` to e1.
    """
    u = np.asarray(u, dtype=float)
    nrm = np.linalg.norm(u)
    if nrm == 0:
        raise InvalidDirection("zero direction")
    u = u / nrm
    n = len(u)
    e1 = np.zeros(n)
    e1[0] = 1.0
    v = u - e1
    vv = v @ v
    if vv < 1e-24:
        return np.eye(n)
    return np.eye(n) - 2.0 * np.outer(v, v) / vv


def complement_basis(u):
    """(n, n-1) matrix whose columns span ``u``-perp orthonormally."""
    return householder(u)[:, 1:]


@dataclass(frozen=True)
class HullData:
    """Facet structure of a full-dimensional hull, indexed into its vertex list."""

    simplices: np.ndarray
    equations: np.ndarray
    neighbors: np.ndarray

    @classmethod
    def from_qhull(cls, hull: ConvexHull, index_map=None) -> "HullData":
        S = np.asarray(hull.simplices)
        if index_map is not None:
            S = index_map[S]
        return cls(S, np.asarray(hull.equations), np.asarray(hull.neighbors))


def _hull(points, with_facets: bool = False):
    """Irredundant vertices and affine dimension of ``conv(points)``.

    2D (and planar) vertex lists come back in counterclockwise order starting
    at the lexicographically smallest vertex; other dimensions are sorted
    lexicographically.  With ``with_facets`` a third item carries the facet
    structure of a full-dimensional hull in n >= 3 (None otherwise).
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
        raise DegenerateBody("empty point set")
    if not np.all(np.isfinite(pts)):
        raise InvalidParams("non-finite coordinates")
    n = pts.shape[1]
    pts = np.unique(pts, axis=0)
    if len(pts) == 1:
        return (pts, 0, None) if with_facets else (pts, 0)
    centroid = pts.mean(axis=0)
    X = pts - centroid
    _, s, vt = np.linalg.svd(X, full_matrices=False)
    k = int(np.sum(s > _RANK_TOL * s[0]))
    if k == 1:
        t = X @ vt[0]
        idx = sorted({int(np.argmin(t)), int(np.argmax(t))})
        return (pts[idx], 1, None) if with_facets else (pts[idx], 1)
    coords = pts if k == n else X @ vt[:k].T
    try:
        hull = ConvexHull(coords)
    except QhullError:
        hull = ConvexHull(coords, qhull_options="QJ")
    idx = np.asarray(hull.vertices)
    if k == 2:
        # qhull returns 2D hull vertices counterclockwise (in the chosen
        # coordinates); rotate to start at the lexicographic minimum
        start = int(np.argmin(idx))
        idx = np.roll(idx, -start)
        return (pts[idx], 2, None) if with_facets else (pts[idx], 2)
    idx = np.sort(idx)
    if not with_facets:
        return pts[idx], k
    facets = None
    if k == n:
        index_map = np.full(len(pts), -1)
        index_map[idx] = np.arange(len(idx))
        facets = HullData.from_qhull(hull, index_map)
    return pts[idx], k, facets


@dataclass(frozen=True, eq=False)
class VPolytope:
    """Convex hull of an irredundant vertex list.

    Build instances through :meth:`from_points` (or :func:`polytope`), which
    runs the hull pass; the raw constructor trusts its input.
    """

    vertices: np.ndarray
    intrinsic_dim: int

    @classmethod
    def from_points(cls, points) -> "VPolytope":
        verts, k, facets = _hull(points, with_facets=True)
        P = cls(_frozen(verts), k)
        if facets is not None:
            # reuse the hull pass instead of re-running qhull on the vertices
            P.__dict__["qhull"] = facets
        return P

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def is_flat(self) -> bool:
        return self.intrinsic_dim < self.dim

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"VPolytope(n={self.dim}, k={self.intrinsic_dim}, nverts={len(self)})"

    @cached_property
    def qhull(self) -> HullData:
        if self.is_flat or self.dim < 2:
            raise DegenerateBody("qhull data needs a full-dimensional body, n >= 2")
        return HullData.from_qhull(ConvexHull(self.vertices))

    @cached_property
    def hrep(self):
        """Facets as ``(normals, offsets)`` with unit normals: ``N x <= b``."""
        if self.is_flat:
            raise DegenerateBody("flat polytope has no facet description")
        V = self.vertices
        n = self.dim
        if n == 1:
            N = np.array([[1.0], [-1.0]])
            b = np.array([V[:, 0].max(), -V[:, 0].min()])
        elif n == 2:
            E = np.roll(V, -1, axis=0) - V
            N = np.column_stack([E[:, 1], -E[:, 0]])
            N /= np.linalg.norm(N, axis=1)[:, None]
            b = np.einsum("ij,ij->i", N, V)
        else:
            eq = self.qhull.equations
            # coplanar triangles repeat their facet equation
            keep = []
            for i, row in enumerate(eq):
                if not any(np.max(np.abs(row - eq[j])) < 1e-9 for j in keep):
                    keep.append(i)
            eq = eq[keep]
            N = eq[:, :-1]
            b = -eq[:, -1]
        return _frozen(N), _frozen(b)

    @cached_property
    def triangles(self) -> np.ndarray:
        """Outward oriented boundary triangles (3D) as vertex index triples."""
        if self.dim != 3 or self.is_flat:
            raise DegenerateBody("boundary triangulation needs a full-dimensional 3D body")
        hull = self.qhull
        tri = np.array(hull.simplices)
        V = self.vertices
        cr = np.cross(V[tri[:, 1]] - V[tri[:, 0]], V[tri[:, 2]] - V[tri[:, 0]])
        flip = np.einsum("ij,ij->i", cr, hull.equations[:, :3]) < 0
        tri[flip] = tri[flip][:, [0, 2, 1]]
        tri.setflags(write=False)
        return tri

    def edges(self) -> np.ndarray:
        """Index pairs covering every edge (3D: triangulation edges too)."""
        k = len(self.vertices)
        if k == 1:
            return np.zeros((0, 2), dtype=int)
        if self.intrinsic_dim == 1:
            return np.array([[0, 1]])
        if self.intrinsic_dim == 2:
            i = np.arange(k)
            return np.column_stack([i, (i + 1) % k])
        if self.dim == 3 and not self.is_flat:
            t = self.triangles
            e = np.vstack([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
            e.sort(axis=1)
            return np.unique(e, axis=0)
        i, j = np.triu_indices(k, 1)
        return np.column_stack([i, j])

    def affine_frame(self):
        """``(origin, basis)`` of the affine hull; basis columns orthonormal."""
        V = self.vertices
        c = V.mean(axis=0)
        if self.intrinsic_dim == 0:
            return c, np.zeros((self.dim, 0))
        _, _, vt = np.linalg.svd(V - c, full_matrices=False)
        return c, vt[: self.intrinsic_dim].T


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """The body ``shape @ D_n + center``."""

    center: np.ndarray
    shape: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float).reshape(-1)
        S = np.atleast_2d(np.asarray(self.shape, dtype=float))
        if S.shape != (len(c), len(c)):
            raise InvalidParams("shape must be n x n matching the center")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(S))):
            raise InvalidParams("non-finite ellipsoid data")
        object.__setattr__(self, "center", _frozen(c))
        object.__setattr__(self, "shape", _frozen(S))

    @property
    def dim(self) -> int:
        return len(self.center)

    @cached_property
    def intrinsic_dim(self) -> int:
        s = np.linalg.svd(self.shape, compute_uv=False)
        if s[0] == 0:
            return 0
        return int(np.sum(s > _RANK_TOL * s[0]))

    @property
    def is_flat(self) -> bool:
        return self.intrinsic_dim < self.dim

    def __repr__(self):
        return f"Ellipsoid(center={self.center.tolist()}, shape={self.shape.tolist()})"

    @property
    def gram(self) -> np.ndarray:
        S = self.shape
        return S @ S.T

    def quadric(self) -> np.ndarray:
        """Homogeneous matrix Q with body ``{x : [x;1]^T Q [x;1] <= 0}``.

        Normalized so the lower-right entry is -1 (whenever it is nonzero).
        """
        if self.is_flat:
            raise DegenerateBody("flat ellipsoid has no quadric")
        M = np.linalg.inv(self.gram)
        M = 0.5 * (M + M.T)
        c = self.center
        n = self.dim
        Q = np.empty((n + 1, n + 1))
        Q[:n, :n] = M
        Q[:n, n] = Q[n, :n] = -M @ c
        Q[n, n] = c @ M @ c - 1.0
        return normalize_quadric(Q)

    @classmethod
    def from_quadric(cls, Q) -> "Ellipsoid":
        Q = np.asarray(Q, dtype=float)
        Q = 0.5 * (Q + Q.T)
        n = Q.shape[0] - 1
        M = Q[:n, :n]
        w = np.linalg.eigvalsh(M)
        if w[0] < 0 and w[-1] < 0:
            Q, M = -Q, -M
        elif w[0] <= 0:
            raise DegenerateBody("quadric does not bound an ellipsoid")
        p = Q[:n, n]
        c = -np.linalg.solve(M, p)
        k = p @ np.linalg.solve(M, p) - Q[n, n]
        if k <= 0:
            raise DegenerateBody("quadric has empty interior")
        w, U = np.linalg.eigh(M)
        S = U @ np.diag(np.sqrt(k / w)) @ U.T
        return cls(c, S)


def normalize_quadric(Q):
    """Positive rescaling making the lower-right entry +-1."""
    Q = np.array(Q, dtype=float)
    if Q[-1, -1] != 0:
        Q = Q / abs(Q[-1, -1])
    return Q


Body = Union[VPolytope, Ellipsoid]


@dataclass(frozen=True)
class EllipsoidParams:
    """Axis-aligned family ``diag(R, r, ..., r) D_n + (1 - delta - R) e1``.

    ``delta`` is the gap between the body and the hyperplane ``{x1 = 1}``.
    """

    R: float
    r: float
    delta: float

    def __post_init__(self):
        if not (self.R > 0 and self.r > 0 and self.delta > 0):
            raise InvalidParams("R, r, delta must be positive")

    def ellipsoid(self, n: int) -> Ellipsoid:
        c = np.zeros(n)
        c[0] = 1.0 - self.delta - self.R
        return Ellipsoid(c, np.diag([self.R] + [self.r] * (n - 1)))

    @classmethod
    def from_ellipsoid(cls, E: Ellipsoid, tol: float = 1e-9) -> "EllipsoidParams":
        G = E.gram
        n = E.dim
        off = G - np.diag(np.diag(G))
        if np.max(np.abs(off)) > tol * max(1.0, np.max(np.abs(G))) or np.max(
            np.abs(E.center[1:]), initial=0.0
        ) > tol:
            raise InvalidParams("ellipsoid is not in the axis-aligned family")
        R = math.sqrt(G[0, 0])
        r = math.sqrt(G[1, 1]) if n > 1 else R
        return cls(R, r, float(1.0 - E.center[0] - R))


@dataclass(frozen=True)
class Hyperplane:
    """``{x : <normal, x> = offset}``."""

    normal: np.ndarray
    offset: float = 0.0


@dataclass(frozen=True)
class Line:
    """``{point + t * direction}``."""

    point: np.ndarray
    direction: np.ndarray


# ---------------------------------------------------------------- builders


def polytope(points) -> VPolytope:
    return VPolytope.from_points(points)


def box(lo, hi) -> VPolytope:
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    n = len(lo)
    corners = np.array(np.meshgrid(*[[0, 1]] * n, indexing="ij")).reshape(n, -1).T
    return polytope(lo + corners * (hi - lo))


def cube(n: int, side: float = 1.0, centered: bool = False) -> VPolytope:
    lo = np.full(n, -side / 2 if centered else 0.0)
    return box(lo, lo + side)


def segment(p, q) -> VPolytope:
    return polytope([p, q])


def ball(center, radius: float) -> Ellipsoid:
    c = np.asarray(center, dtype=float)
    if radius <= 0:
        raise InvalidParams("radius must be positive")
    return Ellipsoid(c, radius * np.eye(len(c)))


def sphere_points(n: int, m: int) -> np.ndarray:
    """``m`` deterministic unit vectors in R^n (circle grid or Fibonacci sphere)."""
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        th = 2 * np.pi * np.arange(m) / m
        return np.column_stack([np.cos(th), np.sin(th)])
    if n == 3:
        i = np.arange(m) + 0.5
        z = 1 - 2 * i / m
        rho = np.sqrt(1 - z * z)
        phi = np.pi * (1 + 5**0.5) * i
        return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])
    raise InvalidParams("sphere_points supports n <= 3")


def polytopalize(E: Ellipsoid, m: int = 360) -> VPolytope:
    """Inscribed polytope with ``m`` boundary points of ``E``."""
    k = E.intrinsic_dim
    if k == E.dim:
        U = sphere_points(E.dim, m)
        return polytope(E.center + U @ E.shape.T)
    # flat ellipsoid: sample its own principal disk
    Uw, s, _ = np.linalg.svd(E.shape)
    axes = Uw[:, :k] * s[:k]
    P = sphere_points(k, m) if k >= 2 else np.array([[1.0], [-1.0]])
    return polytope(E.center + P @ axes.T)


def disk_polytope(m: int = 360, radius: float = 1.0, n: int = 2) -> VPolytope:
    return polytopalize(ball(np.zeros(n), radius), m)


def reuleaux(width: float = 2.0, m: int = 360, center=(0.0, 0.0)) -> VPolytope:
    """Arc-sampled Reuleaux triangle of constant width ``width``.

    The base equilateral triangle is centered (its incenter) at ``center``.
    Each arc contributes ``m // 3`` samples, and the three corners are always
    among the vertices.
    """
    if width <= 0 or m < 3:
        raise InvalidParams("width > 0 and m >= 3 required")
    per = max(1, m // 3)
    rad = width / math.sqrt(3.0)
    corners_ang = np.deg2rad([90.0, 210.0, 330.0])
    V = rad * np.column_stack([np.cos(corners_ang), np.sin(corners_ang)])
    pts = []
    for k in range(3):
        # arc centered at corner k joins corners k+1 and k+2
        a0 = np.deg2rad(90.0 + 120.0 * k + 150.0)
        phi = a0 + np.deg2rad(60.0) * np.arange(per) / per
        pts.append(V[k] + width * np.column_stack([np.cos(phi), np.sin(phi)]))
    P = np.vstack(pts)
    return polytope(P + np.asarray(center, dtype=float))


def simplex_from_normals(normals, offsets=None) -> VPolytope:
    """Simplex ``{x : <u_j, x> <= c_j}`` for n+1 normals (offsets default 1)."""
    U = np.asarray(normals, dtype=float)
    m, n = U.shape
    if m != n + 1:
        raise InvalidParams("a simplex needs n+1 facet normals")
    c = np.ones(m) if offsets is None else np.asarray(offsets, dtype=float)
    verts = []
    for j in range(m):
        rows = [i for i in range(m) if i != j]
        verts.append(np.linalg.solve(U[rows], c[rows]))
    return polytope(verts)


# ------------------------------------------------------------- operations


def _directions(u, n=None):
    U = np.asarray(u, dtype=float)
    single = U.ndim == 1
    U = np.atleast_2d(U)
    if n is not None and U.shape[1] != n:
        raise DimensionMismatch(f"direction has dimension {U.shape[1]}, body {n}")
    if np.any(np.linalg.norm(U, axis=1) == 0) or not np.all(np.isfinite(U)):
        raise InvalidDirection("direction must be a finite nonzero vector")
    return U, single


def support(K: Body, u):
    """Support function ``h_K(u)``; ``u`` may be one direction or a stack."""
    U, single = _directions(u, K.dim)
    if isinstance(K, VPolytope):
        h = (U @ K.vertices.T).max(axis=1)
    else:
        h = U @ K.center + np.linalg.norm(U @ K.shape, axis=1)
    return float(h[0]) if single else h


def width(K: Body, u):
    U, single = _directions(u, K.dim)
    U = U / np.linalg.norm(U, axis=1)[:, None]
    w = support(K, U) + support(K, -U)
    return float(w[0]) if single else w


def _check_same_dim(K, L):
    if K.dim != L.dim:
        raise DimensionMismatch(f"dimensions differ: {K.dim} vs {L.dim}")


def minkowski_sum(K: Body, L: Body) -> VPolytope:
    if not (isinstance(K, VPolytope) and isinstance(L, VPolytope)):
        raise UnsupportedOperandPair("Minkowski sums are defined for polytopes only; polytopalize first")
    _check_same_dim(K, L)
    if K.dim == 2 and not K.is_flat and not L.is_flat:
        return polytope(_polygon_sum(K.vertices, L.vertices))
    S = (K.vertices[:, None, :] + L.vertices[None, :, :]).reshape(-1, K.dim)
    return polytope(S)


def _edge_angles(V):
    E = np.roll(V, -1, axis=0) - V
    # angle measured from (0, -1); edges leaving the lexicographic minimum come first
    a = np.mod(np.arctan2(E[:, 1], E[:, 0]) + np.pi / 2, 2 * np.pi)
    a[a == 0] = 2 * np.pi
    return E, a


def _polygon_sum(P, Q):
    """Vertices of ``P + Q`` by merging edge sequences (both CCW from their lexicographic minima)."""
    Ep, ap = _edge_angles(P)
    Eq, aq = _edge_angles(Q)
    E = np.vstack([Ep, Eq])
    order = np.argsort(np.concatenate([ap, aq]), kind="stable")
    return P[0] + Q[0] + np.vstack([np.zeros(2), np.cumsum(E[order], axis=0)[:-1]])


def minkowski_combination(bodies, weights=None) -> VPolytope:
    bodies = list(bodies)
    weights = [1.0] * len(bodies) if weights is None else list(weights)
    out = scale_translate(bodies[0], weights[0]) if weights[0] != 1.0 else bodies[0]
    for K, w in zip(bodies[1:], weights[1:]):
        out = minkowski_sum(out, scale_translate(K, w) if w != 1.0 else K)
    return out


def scale_translate(K: Body, t: float, x=None) -> Body:
    """``t K + x``."""
    if t == 0:
        raise DegenerateScale("scale factor must be nonzero")
    x = np.zeros(K.dim) if x is None else np.asarray(x, dtype=float)
    if isinstance(K, VPolytope):
        return polytope(t * K.vertices + x)
    return Ellipsoid(t * K.center + x, abs(t) * K.shape)


def translate(K: Body, x) -> Body:
    return scale_translate(K, 1.0, x)


def linear_image(K: Body, M, x=None) -> Body:
    """``M K + x`` for a (possibly singular) square matrix ``M``."""
    M = np.asarray(M, dtype=float)
    x = np.zeros(K.dim) if x is None else np.asarray(x, dtype=float)
    if isinstance(K, VPolytope):
        return polytope(K.vertices @ M.T + x)
    return Ellipsoid(M @ K.center + x, M @ K.shape)


def _origin_margin(K: Body) -> float:
    """Signed distance from 0 to the boundary (positive inside)."""
    if isinstance(K, VPolytope):
        if K.is_flat:
            return -np.inf
        N, b = K.hrep
        return float(b.min())
    if K.is_flat:
        return -np.inf
    y = np.linalg.solve(K.shape, -K.center)
    s = np.linalg.svd(K.shape, compute_uv=False)
    return float((1 - np.linalg.norm(y)) * s[-1])


def contains_origin(K: Body, margin: float = EPS_GEO) -> bool:
    return _origin_margin(K) > margin


def polar(K: Body) -> Body:
    """Polar body ``{y : <x, y> <= 1 for x in K}`` (0 must be interior)."""
    if not contains_origin(K):
        raise OriginNotInterior("polar needs 0 in the interior of the body")
    if isinstance(K, VPolytope):
        N, b = K.hrep
        return polytope(N / b[:, None])
    if np.allclose(K.center, 0.0, atol=1e-15):
        return Ellipsoid(np.zeros(K.dim), np.linalg.inv(K.shape).T)
    # polarity w.r.t. the unit sphere: Q -> J Q^{-1} J
    n = K.dim
    J = np.eye(n + 1)
    J[n, n] = -1.0
    Qp = J @ np.linalg.inv(K.quadric()) @ J
    return Ellipsoid.from_quadric(Qp)


def difference_body(K: VPolytope) -> VPolytope:
    """``K + (-K)`` from the pairwise vertex differences.

    The point set is closed under negation bit for bit, so the result is
    exactly symmetric (an edge merge would round asymmetrically).
    """
    V = K.vertices
    return polytope((V[:, None, :] - V[None, :, :]).reshape(-1, K.dim))


def project(K: Body, u) -> Body:
    """Orthogonal projection onto ``u``-perp, as a flat body in R^n."""
    U, _ = _directions(u, K.dim)
    v = U[0] / np.linalg.norm(U[0])
    P = np.eye(K.dim) - np.outer(v, v)
    return linear_image(K, P)


def project_coords(K: Body, u):
    """Projection onto ``u``-perp expressed in an orthonormal basis of it.

    Returns ``(body in R^{n-1}, basis)`` where ``basis`` is n x (n-1).
    """
    U, _ = _directions(u, K.dim)
    Bm = complement_basis(U[0])
    if isinstance(K, VPolytope):
        return polytope(K.vertices @ Bm), Bm
    return Ellipsoid(Bm.T @ K.center, Bm.T @ K.shape), Bm


def section(K: Body, E: Union[Hyperplane, Line], tol: float = EPS_GEO) -> Optional[Body]:
    """Intersection of ``K`` with a hyperplane or a line.

    Returns ``None`` (the empty marker) when ``E`` misses the interior of
    ``K``.  Line sections come back as two-point polytopes.
    """
    if isinstance(E, Line):
        return _line_section(K, E, tol)
    a = np.asarray(E.normal, dtype=float)
    na = np.linalg.norm(a)
    if na == 0:
        raise InvalidDirection("hyperplane normal must be nonzero")
    a, beta = a / na, float(E.offset) / na
    if isinstance(K, Ellipsoid):
        return _ellipsoid_section(K, a, beta, tol)
    vals = K.vertices @ a - beta
    if vals.min() >= -tol or vals.max() <= tol:
        return None
    V = K.vertices
    pts = [V[np.abs(vals) <= tol]]
    e = K.edges()
    i, j = e[:, 0], e[:, 1]
    cross = ((vals[i] < -tol) & (vals[j] > tol)) | ((vals[i] > tol) & (vals[j] < -tol))
    i, j = i[cross], j[cross]
    t = vals[i] / (vals[i] - vals[j])
    pts.append(V[i] + t[:, None] * (V[j] - V[i]))
    P = np.vstack(pts)
    # snap onto the plane to remove rounding drift
    P = P - np.outer(P @ a - beta, a)
    return polytope(P)


def _ellipsoid_section(K: Ellipsoid, a, beta, tol):
    S = K.shape
    ap = S.T @ a
    nap = np.linalg.norm(ap)
    bp = beta - a @ K.center
    if nap == 0 or abs(bp) >= nap - tol:
        return None
    ahat = ap / nap
    y0 = bp / nap * ahat
    rho = math.sqrt(1 - (bp / nap) ** 2)
    Pp = np.eye(K.dim) - np.outer(ahat, ahat)
    return Ellipsoid(K.center + S @ y0, rho * S @ Pp)


def _line_section(K: Body, E: Line, tol):
    p = np.asarray(E.point, dtype=float)
    d = np.asarray(E.direction, dtype=float)
    if np.linalg.norm(d) == 0:
        raise InvalidDirection("line direction must be nonzero")
    if isinstance(K, Ellipsoid):
        Sinv = np.linalg.inv(K.shape)
        q = Sinv @ (p - K.center)
        w = Sinv @ d
        A, B, C = w @ w, 2 * q @ w, q @ q - 1
        disc = B * B - 4 * A * C
        if disc <= tol:
            return None
        r = math.sqrt(disc)
        t0, t1 = (-B - r) / (2 * A), (-B + r) / (2 * A)
    else:
        if K.is_flat:
            raise DegenerateBody("line sections need a full-dimensional polytope")
        N, b = K.hrep
        nd = N @ d
        rhs = b - N @ p
        lo, hi = -np.inf, np.inf
        pos, neg = nd > 1e-15, nd < -1e-15
        if np.any(rhs[~(pos | neg)] < -tol):
            return None
        if pos.any():
            hi = np.min(rhs[pos] / nd[pos])
        if neg.any():
            lo = np.max(rhs[neg] / nd[neg])
        if hi - lo <= tol:
            return None
        t0, t1 = lo, hi
    return polytope([p + t0 * d, p + t1 * d])


def contains(B: Body, A: Body, tol: float = EPS_GEO) -> bool:
    """``A ⊆ B`` without translation."""
    _check_same_dim(A, B)
    if isinstance(B, VPolytope):
        if B.is_flat:
            raise DegenerateBody("container must be full-dimensional")
        N, b = B.hrep
        return bool(np.all(support(A, N) <= b + tol))
    if isinstance(A, VPolytope):
        y = np.linalg.solve(B.shape, (A.vertices - B.center).T)
        return bool(np.all(np.linalg.norm(y, axis=0) <= 1 + tol))
    raise UnsupportedOperandPair("ellipsoid-in-ellipsoid inclusion is not supported")


def translative_inclusion(A: Body, B: VPolytope, tol: float = EPS_GEO):
    """A shift ``x`` with ``A + x ⊆ B``, or ``None`` if no shift exists.

    Solves the LP ``max s`` subject to ``<u_j, x> + s <= b_j - h_A(u_j)`` over
    the facets ``(u_j, b_j)`` of ``B``; the returned ``x`` is the most
    interior shift.
    """
    x, s = inclusion_slack(A, B)
    return x if s >= -tol else None


def inclusion_slack(A: Body, B: VPolytope):
    """``(x, s)``: the most interior shift and its slack (negative = infeasible)."""
    _check_same_dim(A, B)
    if not isinstance(B, VPolytope) or B.is_flat:
        raise DegenerateBody("container must be a full-dimensional polytope")
    N, b = B.hrep
    rhs = b - support(A, N)
    n = B.dim
    A_ub = np.hstack([N, np.ones((len(N), 1))])
    c = np.zeros(n + 1)
    c[-1] = -1.0
    res = linprog(c, A_ub=A_ub, b_ub=rhs, bounds=[(None, None)] * (n + 1), method="highs")
    if res.status != 0:
        raise DegenerateBody(f"inclusion LP failed: {res.message}")
    return res.x[:n], float(res.x[n])


def chebyshev_ball(normals, offsets):
    """Largest ball inside ``{N x <= b}``: returns ``(center, radius)``."""
    N = np.asarray(normals, dtype=float)
    b = np.asarray(offsets, dtype=float)
    n = N.shape[1]
    norms = np.linalg.norm(N, axis=1)
    A_ub = np.hstack([N, norms[:, None]])
    c = np.zeros(n + 1)
    c[-1] = -1.0
    bounds = [(None, None)] * n + [(0, None)]
    res = linprog(c, A_ub=A_ub, b_ub=b, bounds=bounds, method="highs")
    if res.status != 0:
        return np.full(n, np.nan), 0.0
    return res.x[:n], float(res.x[n])


def max_scaling(A: Body, B: VPolytope) -> float:
    """``max {t > 0 : t A ⊆ B}`` (scaling about the origin, no shift).

    Each vertex gauge of ``B`` is read off its facets: ``g_B(v) = max_j <u_j, v> / b_j``.
    """
    if not contains_origin(B):
        raise OriginNotInterior("max_scaling needs 0 interior to B")
    N, b = B.hrep
    g = np.max(support(A, N) / b)
    return float(1.0 / g) if g > 0 else math.inf


def is_centrally_symmetric(K: Body, tol: float = 1e-9) -> bool:
    U = direction_grid(K.dim)
    return bool(np.max(np.abs(support(K, U) - support(K, -U))) <= tol * max(1.0, diameter(K)))


def diameter(K: Body) -> float:
    if isinstance(K, Ellipsoid):
        return 2 * float(np.linalg.svd(K.shape, compute_uv=False)[0])
    V = K.vertices
    if len(V) > 2000:
        return float(np.max(width(K, direction_grid(K.dim))))
    d = V[:, None, :] - V[None, :, :]
    return float(np.sqrt(np.max(np.einsum("ijk,ijk->ij", d, d))))


def _icosphere(level: int) -> np.ndarray:
    t = (1 + 5**0.5) / 2
    verts = [
        (-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0),
        (0, -1, t), (0, 1, t), (0, -1, -t), (0, 1, -t),
        (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1),
    ]
    verts = [np.array(v, float) / np.linalg.norm(v) for v in verts]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    for _ in range(level):
        cache = {}

        def mid(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                m = verts[i] + verts[j]
                verts.append(m / np.linalg.norm(m))
                cache[key] = len(verts) - 1
            return cache[key]

        new = []
        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new
    return np.array(verts)


_GRID_CACHE = {}


def direction_grid(n: int, count: Optional[int] = None) -> np.ndarray:
    """Unit-direction grid: 720 angles in 2D, the 2562-point icosphere in 3D."""
    key = (n, count)
    if key not in _GRID_CACHE:
        if n == 1:
            G = np.array([[1.0], [-1.0]])
        elif n == 2:
            G = sphere_points(2, count or 720)
        elif n == 3:
            G = _icosphere(4) if count is None else sphere_points(3, count)
        else:
            raise InvalidParams("direction grids exist for n <= 3")
        G.setflags(write=False)
        _GRID_CACHE[key] = G
    return _GRID_CACHE[key]


def hausdorff_distance(A: Body, B: Body, directions=None) -> float:
    """Grid approximation ``max_u |h_A(u) - h_B(u)|`` of the Hausdorff distance.

    Facet normals of polytope operands are appended to the grid.
    """
    _check_same_dim(A, B)
    U = direction_grid(A.dim) if directions is None else np.asarray(directions, float)
    extra = [K.hrep[0] for K in (A, B) if isinstance(K, VPolytope) and not K.is_flat]
    if extra:
        U = np.vstack([U] + extra)
    return float(np.max(np.abs(support(A, U) - support(B, U))))
