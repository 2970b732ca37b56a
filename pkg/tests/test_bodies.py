import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rand_poly, rand_sym
from convexid.bodies import (
    Ellipsoid,
    EllipsoidParams,
    Hyperplane,
    Line,
    ball,
    box,
    contains,
    cube,
    diameter,
    difference_body,
    direction_grid,
    hausdorff_distance,
    householder,
    max_scaling,
    minkowski_sum,
    polar,
    polytopalize,
    polytope,
    reuleaux,
    section,
    segment,
    support,
    translate,
    translative_inclusion,
    width,
)
from convexid.errors import DegenerateScale, InvalidDirection, InvalidParams, UnsupportedOperandPair
from convexid.sampling import random_unit, sample_rng

seeds = st.integers(0, 10**6)
dims = st.sampled_from([2, 3])


@given(seeds, dims)
def test_support_is_sublinear(seed, n):
    K = rand_poly(seed, n)
    rng = sample_rng(seed, 7)
    U, V = rng.normal(size=(2, 50, n))
    assert np.all(support(K, U + V) <= support(K, U) + support(K, V) + 1e-9)


@given(seeds, dims)
def test_support_of_sum_is_additive(seed, n):
    A, B = rand_poly(seed, n), rand_poly(seed + 1, n, shift=np.ones(n))
    U = direction_grid(n)
    S = minkowski_sum(A, B)
    lhs, rhs = support(S, U), support(A, U) + support(B, U)
    assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-12)


@given(seeds)
def test_planar_edge_merge_matches_hull_of_pairwise_sums(seed):
    A, B = rand_poly(seed, 2, 12), rand_poly(seed + 3, 2, 7)
    S = minkowski_sum(A, B)
    P = polytope((A.vertices[:, None, :] + B.vertices[None, :, :]).reshape(-1, 2))
    assert len(S.vertices) == len(P.vertices)
    assert hausdorff_distance(S, P) <= 1e-12


@given(seeds, dims)
def test_bipolarity(seed, n):
    K = rand_sym(seed, n)
    assert hausdorff_distance(polar(polar(K)), K) <= 1e-9


@given(seeds, dims)
def test_translative_inclusion_certificate_dominates_support(seed, n):
    B = rand_poly(seed, n, 10)
    A = rand_poly(seed + 1, n, 6, scale=0.3, shift=np.full(n, 5.0))
    x = translative_inclusion(A, B)
    if x is None:
        return
    U = sample_rng(seed, 9).normal(size=(1000, n))
    assert np.all(support(A, U) + U @ x <= support(B, U) + 1e-9)


@given(seeds, dims)
def test_inclusion_implies_width_dominance(seed, n):
    B = rand_poly(seed, n, 10)
    A = polytope(B.vertices[: n + 1] * 0.5 + 0.5 * B.vertices.mean(axis=0))
    assert contains(B, A)
    U = direction_grid(n)
    assert np.all(width(A, U) <= width(B, U) + 1e-12)


@given(seeds, dims)
def test_difference_body_is_exactly_symmetric(seed, n):
    D = difference_body(rand_poly(seed, n))
    U = direction_grid(n)
    assert np.array_equal(support(D, U), support(D, -U))


@given(seeds, dims)
def test_max_scaling_product_at_most_one(seed, n):
    A, B = rand_sym(seed, n), rand_sym(seed + 11, n)
    assert max_scaling(A, B) * max_scaling(B, A) <= 1 + 1e-9


def test_max_scaling_of_homothets():
    Q = cube(2, 2, centered=True)
    assert max_scaling(Q, polytope(3 * Q.vertices)) == pytest.approx(3.0)


def test_polar_of_square_is_diamond():
    P = polar(box([-1, -1], [1, 1]))
    assert sorted(map(tuple, np.round(P.vertices, 12))) == [(-1, 0), (0, -1), (0, 1), (1, 0)]


def test_ellipsoid_polar_and_support():
    E = Ellipsoid(np.zeros(2), np.diag([2.0, 0.5]))
    assert support(E, [1, 0]) == pytest.approx(2.0)
    P = polar(E)
    assert support(P, [0, 1]) == pytest.approx(2.0)


def test_sections():
    C = cube(3, 2, centered=True)
    S = section(C, Hyperplane(np.array([0, 0, 1.0]), 0.5))
    assert S.intrinsic_dim == 2
    assert np.allclose(S.vertices[:, 2], 0.5)
    L = section(C, Line(np.zeros(3), np.array([1.0, 1, 1])))
    assert diameter(L) == pytest.approx(2 * math.sqrt(3))
    assert section(C, Hyperplane(np.array([1.0, 0, 0]), 5.0)) is None


def test_reuleaux_has_constant_width():
    R = reuleaux(2.0, 720)
    U = direction_grid(2, 997)
    w = width(R, U)
    assert w.max() == pytest.approx(2.0, abs=1e-12)
    assert w.min() >= 2.0 - 1e-4


def test_polytopalized_ball_is_inscribed():
    D = ball(np.array([1.0, 2.0, 3.0]), 2.0)
    P = polytopalize(D, 200)
    assert contains(D, P)
    assert hausdorff_distance(D, P) < 0.5


def test_ellipsoid_params_round_trip():
    p = EllipsoidParams(0.7, 0.3, 0.2)
    q = EllipsoidParams.from_ellipsoid(p.ellipsoid(3))
    assert (q.R, q.r, q.delta) == pytest.approx((0.7, 0.3, 0.2), abs=1e-15)
    assert support(p.ellipsoid(2), [1, 0]) == pytest.approx(0.8)


@given(seeds, dims)
def test_householder_sends_e1_to_u(seed, n):
    u = random_unit(sample_rng(seed, 0), n)
    H = householder(u)
    assert np.allclose(H[:, 0], u)
    assert np.allclose(H @ H.T, np.eye(n))


def test_segment_and_translate():
    S = translate(segment([0, 0], [2, 0]), [0, 1])
    assert S.is_flat and S.intrinsic_dim == 1
    assert support(S, [0, 1]) == pytest.approx(1.0)


def test_errors():
    with pytest.raises(InvalidDirection):
        support(cube(2), [0, 0])
    with pytest.raises(UnsupportedOperandPair):
        minkowski_sum(cube(2), ball([0, 0], 1))
    with pytest.raises(InvalidParams):
        reuleaux(-1)
    with pytest.raises(DegenerateScale):
        from convexid.bodies import scale_translate

        scale_translate(cube(2), 0.0)
