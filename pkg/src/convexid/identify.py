"""Identifying inclusion through Minkowski sums, sections and projections.

The drivers here test the monotone families ``K -> |A + K|``,
``(K, E) -> |E ∩ (A + K)|`` and their relatives.  When the comparison
hypothesis fails they construct an explicit violating instance; when it
holds they confirm the inclusion by LP.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.optimize import linprog

from .bodies import (
    EPS_GEO,
    Body,
    Hyperplane,
    Line,
    VPolytope,
    complement_basis,
    contains,
    cube,
    diameter,
    difference_body,
    disk_polytope,
    inclusion_slack,
    is_centrally_symmetric,
    linear_image,
    minkowski_sum,
    polar,
    polytope,
    project_coords,
    reuleaux,
    scale_translate,
    section,
    simplex_from_normals,
    support,
)
from .errors import (
    DegenerateBody,
    DimensionUnsupported,
    InvalidParams,
    NoViolationExists,
    SymmetryRequired,
)
from .measures import intrinsic_volume_flat, mixed_volume, volume
from .reports import SuiteReport
from .sampling import random_simplex, random_unit, sample_rng

FLAT_BALL_SIDES = 64
MAX_DOUBLINGS = 60


def _check_dim(*bodies):
    n = bodies[0].dim
    if n not in (2, 3):
        raise DimensionUnsupported("identification drivers support n in {2, 3}")
    if any(K.dim != n for K in bodies):
        raise InvalidParams("bodies must share the ambient dimension")
    return n


def _require_symmetric(*bodies):
    for K in bodies:
        if not is_centrally_symmetric(K, 1e-9):
            raise SymmetryRequired("centrally symmetric bodies required (h(u) = h(-u) on the grid)")


def _unit(u):
    u = np.asarray(u, dtype=float)
    return u / np.linalg.norm(u)


# ------------------------------------------------------------ symmetric sums


def flat_ball(u, n: int) -> VPolytope:
    """Flat ball in ``u``-perp of (n-1)-volume 1.

    A unit segment in the plane; in space a regular ``FLAT_BALL_SIDES``-gon whose area is
    exactly 1.
    """
    u = _unit(u)
    Bm = complement_basis(u)
    if n == 2:
        return polytope(np.outer([-0.5, 0.5], Bm[:, 0]))
    if n == 3:
        m = FLAT_BALL_SIDES
        rho = math.sqrt(2.0 / (m * math.sin(2 * math.pi / m)))
        th = 2 * math.pi * np.arange(m) / m
        P = rho * np.column_stack([np.cos(th), np.sin(th)])
        return polytope(P @ Bm.T)
    raise DegenerateBody("flat balls are built for n in {2, 3}")


def width_from_sums(A: Body, u, r_grid=(1.0, 2.0, 4.0, 8.0)) -> float:
    """Width of ``A`` along ``u`` read off the growth of ``|A + r K|``.

    For a flat ``K ⊂ u-perp`` of unit (n-1)-volume, ``|A + rK|`` is a
    polynomial of degree n-1 in ``r`` whose leading coefficient is
    ``w_A(u)``.
    """
    n = _check_dim(A)
    r = np.asarray(r_grid, dtype=float)
    if len(r) < 3 or np.any(np.diff(r) <= 0):
        raise InvalidParams("r_grid must be increasing with at least 3 values")
    K = flat_ball(u, n)
    vals = [volume(minkowski_sum(A, scale_translate(K, t))) for t in r]
    coef = np.polynomial.polynomial.polyfit(r, vals, n - 1)
    return float(coef[n - 1])


def _sum_gap(A, B, K):
    return volume(minkowski_sum(A, K)) - volume(minkowski_sum(B, K))


def _stretch(u, t, n):
    u = _unit(u)
    P = np.eye(n) - np.outer(u, u)
    return t * P + t ** (-(n - 1)) * np.outer(u, u)


def sym_sum_falsifier(A: VPolytope, B: VPolytope, K0: Optional[VPolytope] = None):
    """``(K, r)`` with ``|A + rK| > |B + rK|`` for symmetric ``A ⊄ B``.

    ``u`` is the facet normal of ``B`` that ``A`` overshoots the most; for
    symmetric bodies that gives ``w_A(u) > w_B(u)``.  ``K`` is the flat
    unit ball in ``u``-perp and ``r`` doubles until the volumes separate.
    With ``K0`` the search stays inside its linear images: ``K = L K0``
    with ``L = t P_{u-perp} + t^{1-n} u u^T`` (det 1) and ``r = 1``.
    """
    n = _check_dim(A, B)
    _require_symmetric(A, B)
    N, b = B.hrep
    over = support(A, N) - b
    k = int(np.argmax(over))
    if over[k] <= EPS_GEO * max(1.0, diameter(B)):
        raise NoViolationExists("A is contained in B")
    u = N[k]
    tol = 1e-9 * max(1.0, volume(B))
    t = 1.0
    for _ in range(MAX_DOUBLINGS):
        if K0 is None:
            K = flat_ball(u, n)
            if _sum_gap(A, B, scale_translate(K, t)) > tol:
                return K, t
        else:
            K = linear_image(K0, _stretch(u, t, n))
            if _sum_gap(A, B, K) > tol:
                return K, 1.0
        t *= 2
    raise NoViolationExists("no violation found within the doubling budget")


def mixed_ineq_check(A: VPolytope, B: VPolytope, K: VPolytope):
    """``(V(A, K[n-1]), V(B, K[n-1]))``."""
    n = _check_dim(A, B, K)
    lhs = mixed_volume([A] + [K] * (n - 1)).value
    rhs = mixed_volume([B] + [K] * (n - 1)).value
    return lhs, rhs


def _dual_certificate(A: VPolytope, B: VPolytope):
    """Body with ``V(A, P[n-1]) > V(B, P[n-1])`` from the infeasible inclusion LP.

    Farkas: weights ``y >= 0`` on facets of ``B`` with ``sum y_j u_j = 0``
    and ``sum y_j (b_j - h_A(u_j)) < 0``.  A basic solution uses at most
    n+1 normals: n+1 of them are the facet normals of a simplex with areas
    proportional to ``y``; an opposite pair ``±u`` means ``w_A(u) > w_B(u)``
    and a thin simplex over ``u``-perp does the job.
    """
    n = A.dim
    N, b = B.hrep
    c = b - support(A, N)
    m = len(N)
    res = linprog(c, A_eq=np.vstack([N.T, np.ones((1, m))]), b_eq=np.append(np.zeros(n), 1.0),
                  bounds=[(0, None)] * m, method="highs")
    if res.status != 0 or res.fun >= -1e-12:
        return None
    y = res.x
    idx = np.flatnonzero(y > 1e-12 * y.max())
    if len(idx) == n + 1:
        return simplex_from_normals(N[idx])
    if len(idx) == 2 and np.allclose(N[idx[0]], -N[idx[1]], atol=1e-9):
        u = N[idx[0]]
        base = flat_ball(u, n)
        tau = 1.0
        for _ in range(40):
            P = polytope(np.vstack([base.vertices, tau * u]))
            lhs, rhs = mixed_ineq_check(A, B, P)
            if lhs > rhs + 1e-9:
                return P
            tau *= 0.5
    return None


def lutwak_simplex_suite(A: VPolytope, B: VPolytope, samples: int = 200, seed: int = 0) -> SuiteReport:
    """Compare ``V(A, Δ[n-1])`` with ``V(B, Δ[n-1])`` on random simplices.

    Verdicts: CONSISTENT (no violation and the inclusion LP is feasible),
    VIOLATION (some simplex violates; the LP must then be infeasible) or
    INCONCLUSIVE (sampling found nothing yet the LP is infeasible).  In the
    last case the LP dual is turned into an explicit violating simplex when
    its support allows it.
    """
    n = _check_dim(A, B)
    rep = SuiteReport("lutwak-simplex")
    tol = 1e-9 * max(1.0, volume(A), volume(B))
    violations = 0
    for i in range(samples):
        D = random_simplex(sample_rng(seed, i), n)
        lhs, rhs = mixed_ineq_check(A, B, D)
        bad = lhs > rhs + tol
        violations += bad
        rep.add(i, {"simplex": D.vertices}, lhs, rhs, "violation" if bad else "ok")
    x, slack = inclusion_slack(A, B)
    feasible = slack >= -EPS_GEO
    rep.notes.update(lp_slack=slack, shift=x.tolist(), lp_feasible=feasible)
    if violations:
        rep.verdict = "VIOLATION" if not feasible else "CONTRADICTION"
    elif feasible:
        rep.verdict = "CONSISTENT"
    else:
        P = _dual_certificate(A, B)
        if P is None:
            rep.verdict = "INCONCLUSIVE"
        else:
            lhs, rhs = mixed_ineq_check(A, B, P)
            rep.add(samples, {"lp_dual_body": P.vertices}, lhs, rhs, "violation")
            rep.verdict = "VIOLATION"
    return rep


# ------------------------------------------------------------ sections


def _section_measure(K: VPolytope, E: Hyperplane) -> float:
    S = section(K, E)
    return 0.0 if S is None else intrinsic_volume_flat(S)


def _violation_section_pair(A, B, n):
    """Flat ``K`` in ``u``-perp and a hyperplane ``E ∋ u`` with a strict section violation."""
    N, b = B.hrep
    over = support(A, N) - b
    u = N[int(np.argmax(over))]
    # the normal is any unit vector orthogonal to u, so E contains u
    E = Hyperplane(complement_basis(u)[:, -1], 0.0)
    K = flat_ball(u, n)
    tol = 1e-9 * max(1.0, diameter(B)) ** (n - 1)
    t = 1.0
    for _ in range(MAX_DOUBLINGS):
        Kt = scale_translate(K, t)
        lhs = _section_measure(minkowski_sum(A, Kt), E)
        rhs = _section_measure(minkowski_sum(B, Kt), E)
        if lhs > rhs + tol:
            return Kt, E, lhs, rhs, t
        t *= 2
    raise NoViolationExists("section violation not reached within the doubling budget")


def section_sum_suite(A: VPolytope, B: VPolytope, samples: int = 50, seed: int = 0) -> SuiteReport:
    """``|E ∩ (A + K)|`` vs ``|E ∩ (B + K)|`` for symmetric ``A, B``.

    ``K`` ranges over linear images of the centered unit cube and ``E`` over
    hyperplanes through 0.  If ``A ⊄ B`` a violating pair is built: ``K`` a
    dilated flat ball in ``u``-perp and ``E`` a hyperplane containing ``u``,
    so the section of ``A + K`` grows like ``w_A(u)`` times the section of ``K``.
    """
    n = _check_dim(A, B)
    _require_symmetric(A, B)
    rep = SuiteReport("section-sums")
    C0 = cube(n, 1.0, centered=True)
    tol = 1e-9 * max(1.0, diameter(A), diameter(B)) ** (n - 1)
    bad = 0
    for i in range(samples):
        rng = sample_rng(seed, i)
        L = rng.normal(size=(n, n))
        K = linear_image(C0, L)
        E = Hyperplane(random_unit(rng, n), 0.0)
        lhs = _section_measure(minkowski_sum(A, K), E)
        rhs = _section_measure(minkowski_sum(B, K), E)
        v = lhs > rhs + tol
        bad += v
        rep.add(i, {"L": L, "normal": E.normal}, lhs, rhs, "violation" if v else "ok")
    if contains(B, A):
        rep.verdict = "CONSISTENT" if not bad else "CONTRADICTION"
        return rep
    K, E, lhs, rhs, t = _violation_section_pair(A, B, n)
    rep.add(samples, {"flat_ball_scale": t, "normal": E.normal}, lhs, rhs, "violation")
    rep.verdict = "VIOLATION"
    return rep


@dataclass
class ChainLink:
    name: str
    feasible: bool
    shift: Optional[List[float]]
    slack: float


@dataclass
class ChainReport:
    links: List[ChainLink] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return all(l.feasible for l in self.links)

    @property
    def first_failure(self) -> Optional[str]:
        for l in self.links:
            if not l.feasible:
                return l.name
        return None


def _link(name, x, slack, tol=EPS_GEO):
    ok = slack >= -tol
    return ChainLink(name, bool(ok), list(map(float, x)) if ok else None, float(slack))


def nonsym_sections_driver(A: VPolytope, B: VPolytope) -> ChainReport:
    """Check ``A - A ⊆ B - B`` and the chain ``A + x_A ⊆ B - B ⊆ (n+1)(B + x_B)``.

    Also checks Minkowski's ``-B ⊆ nB + x``.  Every link is an LP; the
    report names the first one that fails.
    """
    n = _check_dim(A, B)
    DA, DB = difference_body(A), difference_body(B)
    rep = ChainReport()
    N, b = DB.hrep
    rep.links.append(_link("A-A in B-B", np.zeros(n), float(np.min(b - support(DA, N)))))
    x, s = inclusion_slack(A, DB)
    rep.links.append(_link("A+x_A in B-B", x, s))
    y, s = inclusion_slack(DB, scale_translate(B, n + 1))
    rep.links.append(_link("B-B in (n+1)(B+x_B)", -y / (n + 1), s))
    y, s = inclusion_slack(scale_translate(B, -1.0), scale_translate(B, n))
    rep.links.append(_link("-B in nB+x", -y, s))
    return rep


# ------------------------------------------------------------ projections


@dataclass
class ProjectionReport:
    per_direction: List[ChainLink]
    factor: float
    shift: List[float]
    dimension_bound: float

    @property
    def all_projections_fit(self) -> bool:
        return all(l.feasible for l in self.per_direction)

    @property
    def factor_in_range(self) -> Optional[float]:
        """Smallest dilation in ``[1, 2]`` admitting a translate, or None."""
        if self.factor > 2:
            return None
        return max(1.0, self.factor)


def min_dilation(A: VPolytope, B: VPolytope):
    """Smallest ``lam`` with ``A + x ⊆ lam B`` (dilation about 0) and the shift ``x``."""
    N, b = B.hrep
    n = A.dim
    hA = support(A, N)
    c = np.zeros(n + 1)
    c[-1] = 1.0
    A_ub = np.hstack([N, -b[:, None]])
    res = linprog(c, A_ub=A_ub, b_ub=-hA, bounds=[(None, None)] * (n + 1), method="highs")
    if res.status != 0:
        return math.inf, np.full(n, np.nan)
    return float(res.x[n]), res.x[:n]


def projection_driver(A: VPolytope, B: VPolytope, E_samples, tol: float = 1e-9) -> ProjectionReport:
    """Translative inclusion of every sampled projection, then the global dilation.

    ``E_samples`` holds normals ``u``; ``E = u``-perp.  The global step
    reports the least ``lam`` with ``A + x ⊆ lam B``, to be compared with
    ``n/(n-1)``.
    """
    n = _check_dim(A, B)
    links = []
    for u in np.atleast_2d(E_samples):
        PA, _ = project_coords(A, u)
        PB, _ = project_coords(B, u)
        if PB.is_flat:
            raise DegenerateBody("projection of B is degenerate")
        x, s = inclusion_slack(PA, PB)
        links.append(_link(f"u={_unit(u).tolist()!r}", x, s, tol))
    lam, x = min_dilation(A, B)
    return ProjectionReport(links, lam, list(map(float, x)), n / (n - 1))


def projection_body_support(K: Body, u) -> float:
    """``h_{ΠK}(u)``: the (n-1)-volume of the shadow of ``K`` on ``u``-perp."""
    _check_dim(K)
    if K.is_flat:
        raise DegenerateBody("projection body needs a full-dimensional K")
    P, _ = project_coords(K, u)
    return intrinsic_volume_flat(P)


# ------------------------------------------------------------ Reuleaux polar


@dataclass
class ReuleauxReport:
    angles_deg: np.ndarray
    chords: np.ndarray
    chords_formula: np.ndarray
    min_chord: float
    argmin_deg: float
    inclusion_slack: float
    translate_exists: bool
    B: VPolytope = field(repr=False)
    A: VPolytope = field(repr=False)

    @property
    def chord_ok(self) -> bool:
        return self.min_chord >= 2 - 1e-6

    @property
    def equality_present(self) -> bool:
        return abs(self.min_chord - 2) <= 1e-6


def reuleaux_counterexample(m: int = 360, disk_vertices: int = 360) -> ReuleauxReport:
    """Chords through 0 of the polar of a Reuleaux triangle all exceed 2,
    yet no translate of that polar contains the unit disk.

    ``R`` has width 2 and its base triangle is centered at 0.  Every chord
    is measured twice: by slicing the polar polytope and by
    ``1/h_R(v) + 1/h_R(-v)``.
    """
    if m < 90:
        raise InvalidParams("m >= 90 arc samples required")
    R = reuleaux(2.0, m)
    B = polar(R)
    A = disk_polytope(disk_vertices)
    ang = np.arange(180.0)
    V = np.column_stack([np.cos(np.deg2rad(ang)), np.sin(np.deg2rad(ang))])
    chords = np.empty(len(ang))
    for k, v in enumerate(V):
        S = section(B, Line(np.zeros(2), v))
        chords[k] = float(np.linalg.norm(S.vertices[1] - S.vertices[0]))
    formula = 1.0 / support(R, V) + 1.0 / support(R, -V)
    k = int(np.argmin(chords))
    _, s = inclusion_slack(A, B)
    return ReuleauxReport(ang, chords, formula, float(chords[k]), float(ang[k]), s, s >= -EPS_GEO, B, A)
