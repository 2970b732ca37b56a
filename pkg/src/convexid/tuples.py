"""Comparing n-tuples of bodies through mixed volumes.

Affine side: ``V(uA, K_2, ..., K_n) <= V(uB, K_2, ..., K_n)`` over ``u`` in
``SL_n`` forces ``A ⊆ B`` for symmetric bodies, and the tuple version
forces ``t_i A_i ⊆ B_i`` with ``prod t_i = 1``.  Projective side: mixed
volumes of projective images identify each ``K_i ⊆ L_i``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from .bodies import (
    EPS_GEO,
    VPolytope,
    contains,
    contains_origin,
    diameter,
    direction_grid,
    disk_polytope,
    householder,
    inclusion_slack,
    is_centrally_symmetric,
    linear_image,
    max_scaling,
    polytope,
    project_coords,
    reuleaux,
    scale_translate,
    support,
    width,
)
from .errors import (
    ArityMismatch,
    DimensionUnsupported,
    InvalidParams,
    NoWitnessPoint,
    OriginNotInterior,
    SymmetryRequired,
    WitnessSearchFailed,
)
from .measures import intrinsic_volume_flat, mixed_area, mixed_volume
from .projective import FLMap, admissible, apply_body, canonical_f0
from .reports import SuiteReport
from .sampling import random_sl, sample_rng
from .witness import separate_by_balls

DEFAULT_STEPS = (1e-1, 1e-2, 1e-3, 1e-4)


def _dim(bodies) -> int:
    n = bodies[0].dim
    if n not in (2, 3):
        raise DimensionUnsupported("tuple drivers support n in {2, 3}")
    if any(K.dim != n for K in bodies):
        raise InvalidParams("bodies must share the ambient dimension")
    return n


def _require_symmetric(bodies):
    for K in bodies:
        if not is_centrally_symmetric(K, 1e-9):
            raise SymmetryRequired("centrally symmetric bodies required")


def _squash(v, t):
    """``P_E + t v v^T`` for ``E = v``-perp."""
    n = len(v)
    return np.eye(n) - (1.0 - t) * np.outer(v, v)


# ------------------------------------------------------------ affine tuples


@dataclass
class MixedLimit:
    steps: List[float]
    values: List[float]
    limit: float
    factorized: float
    order: float

    @property
    def rel_error(self) -> float:
        return abs(self.limit - self.factorized) / max(abs(self.factorized), 1e-300)


def degenerate_mixed_limit(A: VPolytope, Ks: Sequence[VPolytope], v, steps=DEFAULT_STEPS) -> MixedLimit:
    """``V(A, u_t K_2, ..., u_t K_n)`` as ``u_t -> P_E`` against the flat limit.

    The flat limit factorizes as ``w_A(v) V_{n-1}(P_E K_2, ..., P_E K_n) / n``
    with the (n-1)-dimensional mixed volume taken inside ``E``.  The limit of
    the sequence is Richardson-extrapolated from the last two steps
    (first-order convergence in ``t``).
    """
    Ks = list(Ks)
    n = _dim([A] + Ks)
    if len(Ks) != n - 1:
        raise ArityMismatch(f"need {n - 1} bodies K_2..K_n, got {len(Ks)}")
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    steps = [float(t) for t in steps]
    if len(steps) < 2 or any(b >= a for a, b in zip(steps, steps[1:])):
        raise InvalidParams("steps must be decreasing with at least two values")
    vals = [mixed_volume([A] + [linear_image(K, _squash(v, t)) for K in Ks]).value for t in steps]
    t1, t2 = steps[-2], steps[-1]
    f1, f2 = vals[-2], vals[-1]
    limit = (t1 * f2 - t2 * f1) / (t1 - t2)
    flat = [project_coords(K, v)[0] for K in Ks]
    inner = intrinsic_volume_flat(flat[0]) if n == 2 else mixed_area(flat[0], flat[1])
    factorized = float(width(A, v)) * inner / n
    order = math.nan
    if len(vals) >= 3:
        d1, d2 = abs(vals[-3] - vals[-2]), abs(vals[-2] - vals[-1])
        if d1 > 0 and d2 > 0:
            order = math.log(d1 / d2) / math.log(steps[-3] / steps[-2])
    return MixedLimit(steps, vals, float(limit), float(factorized), order)


def _row_params(**kw):
    return kw


def affine_identify_driver(A: VPolytope, B: VPolytope, Ks: Sequence[VPolytope],
                           samples: int = 200, seed: int = 0, steps=DEFAULT_STEPS) -> SuiteReport:
    """``V(uA, K_2, ..., K_n)`` vs ``V(uB, K_2, ..., K_n)`` over ``u`` in ``SL_n``.

    If ``A ⊄ B`` the driver builds the violating map: ``v`` with
    ``w_A(v) > w_B(v)``, then ``u = t^{1/n} (P_E + t v v^T)^{-1}``, which
    satisfies ``V(uA, K..) = t^{1/n-1} V(A, u_t K..)`` and so inherits the
    sign of the flat limit.  Otherwise random ``u`` are sampled.
    """
    Ks = list(Ks)
    n = _dim([A, B] + Ks)
    if len(Ks) != n - 1:
        raise ArityMismatch(f"need {n - 1} bodies K_2..K_n, got {len(Ks)}")
    _require_symmetric([A, B] + Ks)
    rep = SuiteReport("tuples-affine")
    scale = max(1.0, diameter(A), diameter(B)) * max([1.0] + [diameter(K) for K in Ks]) ** (n - 1)
    tol = 1e-9 * scale
    if contains(B, A):
        bad = 0
        for i in range(samples):
            u = random_sl(sample_rng(seed, i), n)
            lhs = mixed_volume([linear_image(A, u)] + Ks).value
            rhs = mixed_volume([linear_image(B, u)] + Ks).value
            v = lhs > rhs + tol
            bad += v
            rep.add(i, {"u": u}, lhs, rhs, "violation" if v else "ok")
        rep.verdict = "CONTRADICTION" if bad else "CONSISTENT"
        return rep
    N, b = B.hrep
    v = N[int(np.argmax(support(A, N) - b))]
    rep.notes.update(direction=v.tolist(), width_A=float(width(A, v)), width_B=float(width(B, v)))
    found = False
    for i, t in enumerate(steps):
        u = t ** (1.0 / n) * np.linalg.inv(_squash(v, t))
        lhs = mixed_volume([linear_image(A, u)] + Ks).value
        rhs = mixed_volume([linear_image(B, u)] + Ks).value
        bad = lhs > rhs + 1e-9 * max(1.0, abs(rhs))
        found |= bad
        rep.add(i, {"t": t, "v": v}, lhs, rhs, "violation" if bad else "ok")
    rep.verdict = "VIOLATION" if found else "INCONCLUSIVE"
    return rep


@dataclass
class TupleSeparation:
    ts: List[float]
    inclusions: List[bool]
    touching: List[np.ndarray]
    violations: List[np.ndarray]
    products: np.ndarray = field(repr=False)

    @property
    def holds(self) -> bool:
        return all(self.inclusions)


def _touching_direction(A: VPolytope, B: VPolytope) -> np.ndarray:
    """Facet normal of ``B`` where ``t A`` first touches ``B`` as ``t`` grows."""
    N, b = B.hrep
    return N[int(np.argmax(support(A, N) / b))]


def tuple_separation_driver(As: Sequence[VPolytope], Bs: Sequence[VPolytope], directions=None) -> TupleSeparation:
    """Constants ``t_i`` with ``prod t_i = 1`` and the inclusions ``t_i A_i ⊆ B_i``.

    ``t_i = max{t : t A_i ⊆ B_i}`` for ``i >= 2`` and ``t_1 = 1 / (t_2 ... t_n)``.
    The degenerate comparison behind the first inclusion is also evaluated:
    segment products ``h_{A_1}(v) prod h_{A_i}(v_i)`` against the same for
    ``B`` with ``v_i`` the touching directions; each ``v`` where the ``A``
    product wins is reported.
    """
    As, Bs = list(As), list(Bs)
    n = _dim(As + Bs)
    if len(As) != n or len(Bs) != n:
        raise ArityMismatch(f"need {n} bodies on each side")
    _require_symmetric(As + Bs)
    ts = [max_scaling(As[i], Bs[i]) for i in range(1, n)]
    ts = [1.0 / float(np.prod(ts))] + ts
    inclusions = [contains(Bs[i], scale_translate(As[i], ts[i]), tol=1e-9) for i in range(n)]
    touching = [_touching_direction(As[i], Bs[i]) for i in range(1, n)]
    V = direction_grid(n) if directions is None else np.atleast_2d(directions)
    a_rest = np.prod([support(As[i], touching[i - 1]) for i in range(1, n)])
    b_rest = np.prod([support(Bs[i], touching[i - 1]) for i in range(1, n)])
    lhs = 2**n * support(As[0], V) * a_rest
    rhs = 2**n * support(Bs[0], V) * b_rest
    bad = lhs > rhs * (1 + 1e-9) + 1e-12
    return TupleSeparation(ts, inclusions, touching, list(V[bad]), np.column_stack([lhs, rhs]))


def segment_mixed_volume(lengths, directions=None) -> float:
    """Mixed volume of centered segments (default: along the axes), by polarization."""
    lengths = np.asarray(lengths, dtype=float)
    n = len(lengths)
    D = np.eye(n) if directions is None else np.asarray(directions, dtype=float)
    segs = [polytope(np.outer([-0.5, 0.5], lengths[i] * D[i])) for i in range(n)]
    return mixed_volume(segs).value


def reuleaux_tuple_suite(samples: int = 200, seed: int = 0, m: int = 360, tol: float = 1e-3) -> SuiteReport:
    """``V(u_1 R, u_2 D) <= V(u_1 D, u_2 D)`` although ``R`` fits in no translate of ``D``.

    ``R`` is the Reuleaux triangle of width 2 and ``D`` the unit disk.  By
    constant width both sides agree up to discretization, so every sample
    passes at relative tolerance ``tol``; the symmetric constants are
    ``t_1 = t_2 = 1`` and the LP shows ``R ⊄ D + x``.  Sample 0 uses
    ``u_1 = u_2 = I``.
    """
    R = reuleaux(2.0, m)
    D = disk_polytope(m)
    rep = SuiteReport("reuleaux-tuples")
    bad = 0
    for i in range(samples):
        if i == 0:
            u1 = u2 = np.eye(2)
        else:
            rng = sample_rng(seed, i)
            u1, u2 = random_sl(rng, 2), random_sl(rng, 2)
        D2 = linear_image(D, u2)
        lhs = mixed_area(linear_image(R, u1), D2)
        rhs = mixed_area(linear_image(D, u1), D2)
        ok = lhs <= rhs * (1 + tol)
        bad += not ok
        rep.add(i, {"u1": u1, "u2": u2}, lhs, rhs, "ok" if ok else "violation")
    t2 = max_scaling(D, D)
    _, slack = inclusion_slack(R, D)
    rep.notes.update(t1=1.0 / t2, t2=t2, inclusion_slack=slack)
    rep.verdict = "COUNTEREXAMPLE" if (not bad and slack < -EPS_GEO) else "INCONCLUSIVE"
    return rep


# ------------------------------------------------------------ projective tuples


def closing_inequality(delta, R, d, eps1, d1, n):
    """``lhs = (1/(delta(delta+2))) (eps1/(d1(d1+2 eps1)))^(n-1)``, ``rhs = (R/(d sqrt(d+2R)))^n``."""
    for name, val in (("delta", delta), ("R", R), ("d", d), ("eps1", eps1), ("d1", d1)):
        if not val > 0:
            raise InvalidParams(f"{name} must be positive")
    if not (d > 2 and d1 > 2):
        raise InvalidParams("d and d1 must exceed 2")
    if int(n) != n or n < 1:
        raise InvalidParams("n must be a positive integer")
    lhs = (1.0 / (delta * (delta + 2))) * (eps1 / (d1 * (d1 + 2 * eps1))) ** (n - 1)
    rhs = (R / (d * math.sqrt(d + 2 * R))) ** n
    return lhs, rhs, bool(lhs <= rhs)


def find_delta_star(R, d, eps1, d1, n, iters: int = 200) -> float:
    """Threshold ``delta*`` with ``holds`` false below it, by bisection."""
    lo, hi = 0.0, 1.0
    while not closing_inequality(hi, R, d, eps1, d1, n)[2]:
        hi *= 2
        if hi > 1e300:
            raise InvalidParams("closing inequality never holds")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if closing_inequality(mid, R, d, eps1, d1, n)[2]:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass
class ProjectiveTupleReport:
    F: FLMap
    eta: float
    delta: float
    lhs: float
    rhs: float
    lambdas: List[float]
    eps0: float
    halvings: int

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs


def _inradius_about_origin(K: VPolytope) -> float:
    _, b = K.hrep
    return float(np.min(b))


def projective_tuple_witness(K1: VPolytope, L1: VPolytope, Kis: Sequence[VPolytope], Lis: Sequence[VPolytope],
                             max_halvings: int = 60, margin: float = 1e-9) -> ProjectiveTupleReport:
    """Admissible ``F`` and scalings with ``V(F K_1, F λ_2K_2, ...) > V(F L_1, F λ_2L_2, ...)``.

    The other bodies are shrunk into the largest ball about 0 inside ``L_1``
    (so they never meet the hyperplane).  The map's hyperplane is
    ``{<u, x> = h_{K_1}(u) + eta}`` with ``u`` the direction of largest
    ``h_{K_1} - h_{L_1}``; ``eta`` halves until the measured mixed volumes
    reverse.  ``delta`` is the hyperplane gap of the inner separating ball
    in units of its radius.
    """
    Kis, Lis = list(Kis), list(Lis)
    n = _dim([K1, L1] + Kis + Lis)
    if len(Kis) != n - 1 or len(Lis) != n - 1:
        raise ArityMismatch(f"need {n - 1} bodies on each side besides K_1, L_1")
    for K in [K1, L1] + Kis + Lis:
        if not contains_origin(K):
            raise OriginNotInterior("all bodies need 0 in their interior")
    if contains(L1, K1):
        raise NoWitnessPoint("K_1 is contained in L_1")
    sep = separate_by_balls(K1, L1)
    N, b = L1.hrep
    gaps = support(K1, N) - b
    u = N[int(np.argmax(gaps))]
    gap = float(gaps.max())
    rho = _inradius_about_origin(L1)
    lambdas = [1.0]
    eps0 = math.inf
    for K, L in zip(Kis, Lis):
        lam = rho / max(np.max(np.linalg.norm(K.vertices, axis=1)), np.max(np.linalg.norm(L.vertices, axis=1)))
        lambdas.append(float(lam))
        eps0 = min(eps0, lam * _inradius_about_origin(K), lam * _inradius_about_origin(L))
    sK = [scale_translate(K, lam) for K, lam in zip(Kis, lambdas[1:])]
    sL = [scale_translate(L, lam) for L, lam in zip(Lis, lambdas[1:])]
    H = householder(u)
    hK = float(support(K1, u))
    aK, rK = sep.D_K.center, sep.D_K.radius
    eta = gap
    lhs = rhs = math.nan
    for k in range(1, max_halvings + 1):
        level = hK + eta
        S = np.eye(n + 1)
        S[:n, :n] = H / level
        F = canonical_f0(n, "-") @ FLMap(S, 1)
        if all(admissible(F, X) for X in [K1, L1] + sK + sL):
            lhs = mixed_volume([apply_body(F, K1)] + [apply_body(F, X) for X in sK]).value
            rhs = mixed_volume([apply_body(F, L1)] + [apply_body(F, X) for X in sL]).value
            if lhs - rhs >= margin:
                delta = (level - float(u @ aK) - rK) / rK
                return ProjectiveTupleReport(F, eta, delta, lhs, rhs, lambdas, eps0, k)
        eta *= 0.5
    raise WitnessSearchFailed("mixed volumes did not reverse", last_ratio=rhs / lhs if lhs else None)
