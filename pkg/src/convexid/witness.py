"""Projective witnesses of non-inclusion.

If ``A`` is not contained in ``B`` there is an admissible fractional-linear
map ``F`` with ``W(F A) > W(F B)`` for volume, surface area and every
non-constant quermassintegral.  The map is built from a pair of separated
balls, one inside ``A`` and one around ``B``, and a hyperplane that is
pushed toward ``A`` until the image of ``A`` dwarfs the image of ``B``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from scipy.optimize import linprog

from .bodies import (
    EPS_GEO,
    Ellipsoid,
    VPolytope,
    chebyshev_ball,
    contains,
    diameter,
    direction_grid,
    householder,
    support,
)
from .errors import (
    CapDegenerate,
    DimensionMismatch,
    DimensionUnsupported,
    InvalidDirection,
    InvalidParams,
    MeasuredComparisonFailed,
    NoWitnessPoint,
    UnsupportedOperandPair,
    WitnessSearchFailed,
)
from .measures import quermassintegral, surface_area, volume
from .projective import FLMap, apply_body, ball_image_params, canonical_f0

MAX_ITER = 60
REVERSAL_MARGIN = 1e-9
# closest admissible approach of the map's hyperplane, relative to the diameter
MIN_ETA = 1e-8


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float

    def as_ellipsoid(self) -> Ellipsoid:
        n = len(self.center)
        return Ellipsoid(self.center, self.radius * np.eye(n))


@dataclass(frozen=True)
class BallSeparation:
    """Balls ``D_K ⊆ K`` and ``D_T ⊇ T`` on opposite sides of ``{<u, x> = offset}``.

    ``D_K`` lies on the side where ``<u, x>`` is larger.  Both centers sit on
    one line parallel to ``u``.  ``tangent`` records whether ``D_K`` touches
    the supporting hyperplane of ``K`` with normal ``u``.
    """

    u: np.ndarray
    offset: float
    D_K: Ball
    D_T: Ball
    witness: np.ndarray
    support_K: float
    support_T: float
    tangent: bool = False
    K: Optional[VPolytope] = field(default=None, repr=False, compare=False)

    def violations(self, K: VPolytope, T: VPolytope, tol: float = 1e-9) -> list:
        """Names of the invariants that fail (empty when the separation is valid)."""
        bad = []
        N, b = K.hrep
        aK, rK = self.D_K.center, self.D_K.radius
        aT, rT = self.D_T.center, self.D_T.radius
        scale = max(1.0, diameter(K), diameter(T))
        if np.any(N @ aK + rK > b + tol * scale):
            bad.append("D_K not inside K")
        if np.any(np.linalg.norm(T.vertices - aT, axis=1) > rT + tol * scale):
            bad.append("T not inside D_T")
        if not self.u @ aK - rK > self.offset:
            bad.append("D_K not strictly above H")
        if not self.u @ aT + rT < self.offset:
            bad.append("D_T not strictly below H")
        if not np.linalg.norm(aK - aT) > rK + rT:
            bad.append("balls intersect")
        diam = diameter(VPolytope.from_points(np.vstack([K.vertices, T.vertices])))
        if min(rK, rT) < 1e-6 * diam:
            bad.append("radius below 1e-6 diam")
        return bad


def _check_pair(K, T):
    for X in (K, T):
        if not isinstance(X, VPolytope):
            raise UnsupportedOperandPair("witness search needs polytopes; polytopalize ellipsoids first")
    if K.dim != T.dim:
        raise DimensionMismatch(f"dimensions {K.dim} and {T.dim} differ")
    if K.dim not in (2, 3):
        raise DimensionUnsupported("witness search supports n in {2, 3}")
    if K.is_flat or T.is_flat:
        raise InvalidParams("witness search needs full-dimensional bodies")


def witness_vertex(K: VPolytope, T: VPolytope) -> np.ndarray:
    """Vertex of ``K`` violating the facet inequalities of ``T`` the most."""
    N, b = T.hrep
    viol = np.max(K.vertices @ N.T - b, axis=1)
    best = viol.max()
    if best <= EPS_GEO * max(1.0, diameter(T)):
        raise NoWitnessPoint("K is contained in T")
    ties = np.flatnonzero(viol >= best - 1e-12)
    V = K.vertices[ties]
    first = np.lexsort(V.T[::-1])[0]
    return V[first].copy()


def separating_direction(p, T: VPolytope) -> np.ndarray:
    """Unit ``u`` maximizing ``<u, p> - h_T(u)`` over the box ``|u_i| <= 1``."""
    p = np.asarray(p, dtype=float)
    n = len(p)
    D = p - T.vertices
    A_ub = np.hstack([-D, np.ones((len(D), 1))])
    c = np.zeros(n + 1)
    c[-1] = -1.0
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(len(D)), bounds=[(-1, 1)] * n + [(None, None)], method="highs")
    if res.status != 0 or res.x[n] <= 0:
        raise NoWitnessPoint("point is not separated from T")
    u = res.x[:n]
    return u / np.linalg.norm(u)


def _cap_ball(K: VPolytope, u, level: float, touch: Optional[float] = None) -> Ball:
    """Chebyshev ball of ``K ∩ {<u, x> >= level}``; optionally tangent to ``{<u, x> = touch}``."""
    N, b = K.hrep
    n = K.dim
    Nc = np.vstack([N, -u])
    bc = np.append(b, -level)
    A_ub = np.hstack([Nc, np.ones((len(Nc), 1))])
    c = np.zeros(n + 1)
    c[-1] = -1.0
    kw = {}
    if touch is not None:
        kw = dict(A_eq=np.append(u, 1.0)[None, :], b_eq=[touch])
    res = linprog(c, A_ub=A_ub, b_ub=bc, bounds=[(None, None)] * n + [(0, None)], method="highs", **kw)
    r = float(res.x[n]) if res.status == 0 else 0.0
    if r < 1e-9:
        raise CapDegenerate(f"cap at level {level:.6g} has inradius {r:.3g}")
    return Ball(res.x[:n].copy(), r)


def _receded_ball(T: VPolytope, a, u, level: float) -> Ball:
    """Smallest-recession ball around ``T`` centered on ``a - s u`` with top below ``level``.

    With ``a_i = t_i - a`` and ``g = level - <u, a>`` the ball of radius
    ``g + s`` about ``a - s u`` contains ``t_i`` iff
    ``s >= (|a_i|^2 - g^2) / (2 (g - <a_i, u>))``.
    """
    Ai = T.vertices - a
    g = level - u @ a
    proj = Ai @ u
    s = max(-g, float(np.max((np.einsum("ij,ij->i", Ai, Ai) - g * g) / (2 * (g - proj)))))
    s += 1e-12 * max(1.0, abs(s))
    center = a - s * u
    radius = float(np.max(np.linalg.norm(T.vertices - center, axis=1)))
    return Ball(center, radius)


def _best_facet(K: VPolytope, T: VPolytope):
    """Facet normal of ``K`` with the largest gap ``h_K(u) - h_T(u)``, or None."""
    N, b = K.hrep
    gaps = b - support(T, N)
    k = int(np.argmax(gaps))
    if gaps[k] <= 1e-9 * max(1.0, diameter(K), diameter(T)):
        return None
    return N[k].copy()


def _is_facet_normal(K: VPolytope, u) -> bool:
    N, _ = K.hrep
    return bool(np.min(np.linalg.norm(N - u, axis=1)) < 1e-9)


def separate_by_balls(K: VPolytope, T: VPolytope, direction=None) -> BallSeparation:
    """Disjoint balls ``D_K ⊆ K`` and ``T ⊆ D_T`` split by a hyperplane.

    Without ``direction`` a facet normal of ``K`` with ``T`` strictly below
    the facet is preferred; failing that, the witness vertex is separated
    from ``T`` by LP.  The gap between ``h_T(u)`` and the top of ``K`` is
    split in thirds: ``D_T`` stays below the first third, ``D_K`` is
    inscribed in the cap above the second.  When ``u`` is a facet normal
    ``D_K`` is made tangent to that facet.
    """
    _check_pair(K, T)
    if direction is None:
        p = witness_vertex(K, T)
        u = _best_facet(K, T)
        if u is None:
            u = separating_direction(p, T)
    else:
        u = np.asarray(direction, dtype=float)
        if u.shape != (K.dim,) or np.linalg.norm(u) == 0:
            raise InvalidDirection("direction must be a nonzero vector of length n")
        u = u / np.linalg.norm(u)
    p = K.vertices[int(np.argmax(K.vertices @ u))].copy()
    hK = float(support(K, u))
    tangent = _is_facet_normal(K, u)
    beta = float(support(T, u))
    gap = hK - beta
    if gap <= EPS_GEO * max(1.0, diameter(T)):
        raise InvalidDirection("direction does not separate K from T")
    gamma_T, gamma_K = beta + gap / 3, beta + 2 * gap / 3
    D_K = _cap_ball(K, u, gamma_K, touch=hK if tangent else None)
    D_T = _receded_ball(T, D_K.center, u, gamma_T)
    offset = 0.5 * ((u @ D_T.center + D_T.radius) + (u @ D_K.center - D_K.radius))
    return BallSeparation(u, float(offset), D_K, D_T, p, hK, beta, tangent, K)


# ------------------------------------------------------------ witness maps


@dataclass(frozen=True)
class WitnessMap:
    F: FLMap
    ratio: float
    inner_center: np.ndarray
    eta: float
    delta: float
    R: float
    d: float
    iterations: int


def _ball_ratio(sep: BallSeparation, eta: float):
    a, r = sep.D_K.center, sep.D_K.radius
    level = sep.support_K + eta
    delta = (level - sep.u @ a - r) / r
    R = sep.D_T.radius / r
    d = (level - sep.u @ sep.D_T.center - sep.D_T.radius) / r
    img_K = ball_image_params(1.0, delta)
    img_T = ball_image_params(R, d)
    return img_T.M / img_K.m, delta, R, d, img_K, img_T


def _compose(sep: BallSeparation, delta: float, img_K, img_T) -> FLMap:
    n = len(sep.u)
    a, r = sep.D_K.center, sep.D_K.radius
    H = householder(sep.u)
    e1 = np.zeros(n)
    e1[0] = 1.0
    S = np.eye(n + 1)
    S[:n, :n] = H / r
    S[:n, n] = -H @ a / r - delta * e1
    # centre of F0(D_T) lies on the axis at 1 - gap - axial semi-axis
    cT = (1.0 - img_T.params.delta - img_T.params.R) * e1
    P = np.eye(n + 1)
    P[:n, :n] /= img_K.m
    P[:n, n] = -cT / img_K.m
    return FLMap(P, 1) @ canonical_f0(n, "-") @ FLMap(S, 1)


def search_witness_map(sep: BallSeparation, eps: float, max_iter: int = MAX_ITER) -> WitnessMap:
    """Push the map's hyperplane toward ``D_K`` until ``M_T / m_K <= eps``.

    The hyperplane sits at ``<u, x> = h_K(u) + eta``; each round halves
    ``eta`` (and, for a non-tangent ``D_K``, re-solves the cap ball on a cap
    of half the height).
    """
    if not eps > 0 or eps > 1:
        raise InvalidParams("eps must lie in (0, 1]")
    r = sep.D_K.radius
    eta = r
    ratio = math.inf
    for it in range(1, max_iter + 1):
        ratio, delta, R, d, img_K, img_T = _ball_ratio(sep, eta)
        if ratio <= eps:
            F = _compose(sep, delta, img_K, img_T)
            e1 = np.zeros(len(sep.u))
            e1[0] = 1.0
            cK = 1.0 - img_K.params.delta - img_K.params.R
            cT = 1.0 - img_T.params.delta - img_T.params.R
            inner = (cK - cT) / img_K.m * e1
            return WitnessMap(F, ratio, inner, eta, delta, R, d, it)
        eta *= 0.5
        if not sep.tangent and sep.K is not None:
            height = sep.support_K - (sep.u @ sep.D_K.center - sep.D_K.radius)
            try:
                D_K = _cap_ball(sep.K, sep.u, sep.support_K - 0.5 * height)
            except CapDegenerate:
                break
            sep = replace(sep, D_K=D_K)
    raise WitnessSearchFailed(f"ratio {ratio:.4g} still above eps={eps}", last_ratio=ratio)


def build_witness_map(sep: BallSeparation, eps: float) -> FLMap:
    """FL map sending ``D_T`` into ``eps D`` while ``F(D_K)`` contains a unit ball."""
    return search_witness_map(sep, eps).F


# ------------------------------------------------------------ functionals


def functional_names(n: int):
    return ["volume", "surface"] + [f"W{i}" for i in range(n)]


def resolve_functional(name: str, n: int) -> Callable:
    """Map ``volume``, ``surface`` or ``W<i>`` (``0 <= i < n``) to a callable."""
    if name == "volume":
        return volume
    if name == "surface":
        return surface_area
    if isinstance(name, str) and name.startswith("W") and name[1:].isdigit():
        i = int(name[1:])
        if i == n:
            raise InvalidParams(f"W{n} is the constant volume of the unit ball and cannot separate bodies")
        if 0 <= i < n:
            return lambda K, i=i: quermassintegral(K, i)
    raise InvalidParams(f"unknown functional {name!r}; expected one of {functional_names(n)}")


# ------------------------------------------------------------ certificates


@dataclass(frozen=True)
class WitnessCertificate:
    """An admissible map with a measured reversal ``functional(F A) > functional(F B)``.

    ``ball_certified`` is true when the unit ball about ``inner_center``
    lies in ``F(A)`` and ``F(B)`` lies in ``outer_radius * D`` with
    ``outer_radius <= eps_target``.
    """

    F: FLMap
    eps_target: float
    functional: str
    value_A: float
    value_B: float
    measured: Dict[str, Tuple[float, float]]
    inner_center: np.ndarray
    inner_radius: float
    outer_radius: float
    ball_certified: bool
    route: str
    iterations: int
    condition_number: float = field(default=float("nan"))

    @property
    def margin(self) -> float:
        return self.value_A - self.value_B

    def to_dict(self) -> dict:
        return {
            "flmap": self.F.to_dict(),
            "functional": self.functional,
            "value_A": self.value_A,
            "value_B": self.value_B,
            "eps": self.eps_target,
            "measured": {k: list(v) for k, v in self.measured.items()},
            "inner_ball": {"center": self.inner_center.tolist(), "radius": self.inner_radius},
            "outer_radius": self.outer_radius,
            "ball_certified": self.ball_certified,
            "route": self.route,
            "iterations": self.iterations,
            "condition_number": self.condition_number,
        }


def _measure_all(FA, FB, n):
    return {name: (float(resolve_functional(name, n)(FA)), float(resolve_functional(name, n)(FB)))
            for name in functional_names(n)}


def _inner_ball_ok(FA: VPolytope, center, radius=1.0, tol=1e-9) -> bool:
    N, b = FA.hrep
    return bool(np.all(N @ center + radius <= b + tol * max(1.0, np.max(np.abs(b)))))


def _best_ball_map(A, B, eps, scale):
    """Among facets of ``A`` with ``B`` strictly below, the one whose map keeps
    the hyperplane farthest from ``A``; None when even that is too close."""
    N, b = A.hrep
    gaps = b - support(B, N)
    best = None
    for k in np.argsort(-gaps, kind="stable"):
        if gaps[k] <= 1e-9 * scale:
            break
        try:
            wm = search_witness_map(separate_by_balls(A, B, direction=N[k]), eps)
        except (WitnessSearchFailed, CapDegenerate, InvalidDirection):
            continue
        if best is None or wm.eta > best.eta:
            best = wm
    if best is None or best.eta < MIN_ETA * scale:
        return None
    return best


def _ball_route(A, B, wm, eps, fn):
    F = wm.F
    FA, FB = apply_body(F, A), apply_body(F, B)
    outer = float(np.max(np.linalg.norm(FB.vertices, axis=1)))
    ball_ok = outer <= eps * (1 + 1e-9) and _inner_ball_ok(FA, wm.inner_center)
    vA, vB = float(fn(FA)), float(fn(FB))
    if ball_ok and not vA - vB >= REVERSAL_MARGIN:
        raise MeasuredComparisonFailed(
            f"ball guarantee holds but measured values are {vA!r} vs {vB!r}"
        )
    return F, FA, FB, wm.inner_center, 1.0, outer, ball_ok, wm.iterations


def _vertex_map(p, u, eta, L, n):
    H = householder(u)
    e1 = np.zeros(n)
    e1[0] = 1.0
    S = np.eye(n + 1)
    S[:n, :n] = H / L
    S[:n, n] = -H @ p / L + (1.0 - eta / L) * e1
    return canonical_f0(n, "-") @ FLMap(S, 1)


def _normalize_outer(G: FLMap, B: VPolytope, eps: float) -> FLMap:
    n = B.dim
    V = apply_body(G, B).vertices
    c = 0.5 * (V.min(axis=0) + V.max(axis=0))
    rad = float(np.max(np.linalg.norm(V - c, axis=1)))
    P = np.eye(n + 1)
    P[:n, :n] *= eps / rad
    P[:n, n] = -c * eps / rad
    return FLMap(P, 1) @ G


def _vertex_route(A, B, eps, fn, n, candidates):
    L = diameter(VPolytope.from_points(np.vstack([A.vertices, B.vertices])))
    gaps = support(A, candidates) - support(B, candidates)
    k = int(np.argmax(gaps))
    u = candidates[k] / np.linalg.norm(candidates[k])
    p = A.vertices[int(np.argmax(A.vertices @ u))]
    eta = L
    for it in range(1, MAX_ITER + 1):
        F = _normalize_outer(_vertex_map(p, u, eta, L, n), B, eps)
        FA, FB = apply_body(F, A), apply_body(F, B)
        vA, vB = float(fn(FA)), float(fn(FB))
        if vA - vB >= REVERSAL_MARGIN:
            center, radius = chebyshev_ball(*FA.hrep)
            outer = float(np.max(np.linalg.norm(FB.vertices, axis=1)))
            return F, FA, FB, center, radius, outer, bool(radius >= 1 and outer <= eps), it
        eta *= 0.5
    raise WitnessSearchFailed(f"no measured reversal after {MAX_ITER} halvings", last_ratio=vB / vA)


def find_witness(A: VPolytope, B: VPolytope, functional: str = "volume", eps: float = 0.5) -> WitnessCertificate:
    """Admissible FL map ``F`` with ``functional(F A) > functional(F B)``.

    When ``B`` lies strictly below some facet of ``A`` the map comes from the
    ball construction and carries the ball certificate.  Otherwise the
    hyperplane approaches a vertex of ``A``: the image of ``A`` grows without
    bound while ``F B`` stays put, and the reversal is certified by
    measurement alone.
    """
    _check_pair(A, B)
    n = A.dim
    if not eps > 0 or eps > 1:
        raise InvalidParams("eps must lie in (0, 1]")
    fn = resolve_functional(functional, n)
    if contains(B, A):
        raise NoWitnessPoint("A is contained in B")
    scale = max(1.0, diameter(A), diameter(B))
    result = None
    route = "ball"
    wm = _best_ball_map(A, B, eps, scale)
    if wm is not None:
        result = _ball_route(A, B, wm, eps, fn)
    if result is None:
        route = "vertex"
        p = witness_vertex(A, B)
        NB, _ = B.hrep
        candidates = np.vstack([NB, separating_direction(p, B)[None, :]])
        result = _vertex_route(A, B, eps, fn, n, candidates)
    F, FA, FB, center, radius, outer, ball_ok, iters = result
    measured = _measure_all(FA, FB, n)
    vA, vB = measured[functional] if functional in measured else (float(fn(FA)), float(fn(FB)))
    return WitnessCertificate(
        F=F,
        eps_target=float(eps),
        functional=functional,
        value_A=vA,
        value_B=vB,
        measured=measured,
        inner_center=np.asarray(center, dtype=float),
        inner_radius=float(radius),
        outer_radius=outer,
        ball_certified=ball_ok,
        route=route,
        iterations=iters,
        condition_number=F.condition_number(),
    )


def revalidate(cert: WitnessCertificate, A: VPolytope, B: VPolytope, directions=None) -> bool:
    """Re-check a certificate from scratch.

    Containments are tested by support-function dominance on a direction
    grid; the measured comparison is recomputed on the mapped polytopes.
    """
    n = A.dim
    U = direction_grid(n) if directions is None else directions
    FA, FB = apply_body(cert.F, A), apply_body(cert.F, B)
    fn = resolve_functional(cert.functional, n)
    if not float(fn(FA)) - float(fn(FB)) >= REVERSAL_MARGIN:
        return False
    if cert.ball_certified:
        tol = 1e-9 * max(1.0, cert.outer_radius)
        if np.any(support(FB, U) > cert.outer_radius + tol):
            return False
        if np.any(U @ cert.inner_center + cert.inner_radius > support(FA, U) + 1e-9 * max(1.0, diameter(FA))):
            return False
    return True
