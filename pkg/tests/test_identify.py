import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rand_poly, rand_sym
from convexid.bodies import (
    Line,
    box,
    contains,
    cube,
    diameter,
    difference_body,
    minkowski_sum,
    polar,
    polytope,
    polytopalize,
    ball,
    scale_translate,
    section,
    support,
    translative_inclusion,
    width,
)
from convexid.errors import NoViolationExists, SymmetryRequired
from convexid.identify import (
    flat_ball,
    lutwak_simplex_suite,
    min_dilation,
    mixed_ineq_check,
    nonsym_sections_driver,
    projection_body_support,
    projection_driver,
    reuleaux_counterexample,
    section_sum_suite,
    sym_sum_falsifier,
    width_from_sums,
)
from convexid.measures import intrinsic_volume_flat, volume
from convexid.sampling import random_simplex, random_unit, sample_rng

seeds = st.integers(0, 10**6)
dims = st.sampled_from([2, 3])


def test_flat_ball_has_unit_measure():
    for n in (2, 3):
        D = flat_ball(np.eye(n)[0], n)
        assert D.intrinsic_dim == n - 1
        assert intrinsic_volume_flat(D) == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("n,u,expected", [
    (2, [1, 0], 2.0),
    (2, [1, 1], 2 * np.sqrt(2)),
    (3, [0, 0, 1], 2.0),
    (3, [1, 1, 1], 2 * np.sqrt(3)),
])
def test_width_from_sums_on_cube(n, u, expected):
    u = np.asarray(u, float) / np.linalg.norm(u)
    assert width_from_sums(cube(n, 2, centered=True), u) == pytest.approx(expected, rel=1e-9)


@given(seeds)
def test_width_from_sums_matches_width(seed):
    A = rand_sym(seed, 2)
    u = random_unit(sample_rng(seed, 3), 2)
    assert width_from_sums(A, u) == pytest.approx(float(width(A, u)), abs=1e-6)


@given(seeds, dims)
def test_falsifier_fires_iff_not_included(seed, n):
    A = rand_sym(seed, n)
    B = scale_translate(rand_sym(seed + 1, n), 1.3)
    if contains(B, A):
        with pytest.raises(NoViolationExists):
            sym_sum_falsifier(A, B)
        return
    K, r = sym_sum_falsifier(A, B)
    Kr = scale_translate(K, r)
    assert volume(minkowski_sum(A, Kr)) > volume(minkowski_sum(B, Kr))


def test_falsifier_within_linear_images():
    A, B = box([-2, -0.5], [2, 0.5]), cube(2, 2, centered=True)
    K, r = sym_sum_falsifier(A, B, K0=cube(2, 1, centered=True))
    assert r == 1.0
    assert volume(minkowski_sum(A, K)) > volume(minkowski_sum(B, K))
    assert volume(K) == pytest.approx(1.0)


def test_falsifier_needs_symmetry():
    with pytest.raises(SymmetryRequired):
        sym_sum_falsifier(cube(2), cube(2, 2, centered=True))


@given(seeds, dims)
def test_chords_match_polar_support(seed, n):
    K = rand_sym(seed, n)
    u = random_unit(sample_rng(seed, 4), n)
    chord = diameter(section(K, Line(np.zeros(n), u)))
    P = polar(K)
    assert chord == pytest.approx(1 / support(P, u) + 1 / support(P, -u), rel=1e-7)


@given(seeds, dims)
def test_projection_body_is_even(seed, n):
    K = rand_poly(seed, n)
    u = random_unit(sample_rng(seed, 5), n)
    assert projection_body_support(K, u) == pytest.approx(projection_body_support(K, -u), rel=1e-12)


@given(seeds)
def test_planar_projection_body_is_rotated_difference_body(seed):
    K = rand_poly(seed, 2)
    u = random_unit(sample_rng(seed, 6), 2)
    rot = np.array([-u[1], u[0]])
    assert projection_body_support(K, u) == pytest.approx(float(support(difference_body(K), rot)), rel=1e-8)


def test_projection_body_of_cube():
    assert projection_body_support(cube(3), [0, 0, 1]) == pytest.approx(1.0)
    assert projection_body_support(cube(3), np.ones(3) / np.sqrt(3)) == pytest.approx(np.sqrt(3))


def test_lutwak_suite_verdicts():
    B = cube(2, 2, centered=True)
    rep = lutwak_simplex_suite(box([-2, -0.5], [2, 0.5]), B, samples=20, seed=0)
    assert rep.verdict == "VIOLATION"
    rep = lutwak_simplex_suite(scale_translate(B, 0.5), B, samples=20, seed=0)
    assert rep.verdict == "CONSISTENT"
    assert not any(r.verdict == "violation" for r in rep.rows)


def test_lutwak_suite_diamond_has_no_translate():
    D = polytope([[1.2, 0], [0, 1.2], [-1.2, 0], [0, -1.2]])
    B = cube(2, 2, centered=True)
    assert translative_inclusion(D, B) is None
    assert lutwak_simplex_suite(D, B, samples=10, seed=1).verdict == "VIOLATION"


def test_mixed_inequality_for_included_pair():
    A, B = cube(2, 1, centered=True), cube(2, 2, centered=True)
    lhs, rhs = mixed_ineq_check(A, B, rand_poly(0, 2))
    assert lhs <= rhs


def test_section_suite_verdicts():
    B = cube(2, 2, centered=True)
    assert section_sum_suite(scale_translate(B, 0.8), B, samples=10).verdict == "CONSISTENT"
    rep = section_sum_suite(box([-2, -0.5], [2, 0.5]), B, samples=10)
    assert rep.verdict == "VIOLATION"
    last = rep.rows[-1]
    assert last.lhs > last.rhs


@given(seeds, dims)
def test_nonsymmetric_chain_for_included_pairs(seed, n):
    B = rand_poly(seed, n, 9)
    A = polytope(0.6 * B.vertices[: n + 2] + 0.4 * B.vertices.mean(axis=0))
    rep = nonsym_sections_driver(A, B)
    assert rep.feasible, rep.first_failure


def test_chain_reports_first_failure():
    rep = nonsym_sections_driver(cube(2, 4, centered=True), cube(2, 2, centered=True))
    assert rep.first_failure == "A-A in B-B"


@given(seeds, dims)
def test_minkowski_simplex_inclusion(seed, n):
    S = random_simplex(sample_rng(seed, 7), n)
    assert nonsym_sections_driver(S, S).links[-1].feasible


def test_min_dilation():
    lam, x = min_dilation(cube(2, 1), cube(2, 2, centered=True))
    assert lam == pytest.approx(0.5)
    assert x == pytest.approx([-0.5, -0.5])


def test_projection_driver_on_disk_in_triangle():
    D = polytopalize(ball([0, 0], 0.999), 360)
    T = polytope([[-1.7320508, -1], [1.7320508, -1], [0, 2]])
    U = np.array([random_unit(sample_rng(0, i), 2) for i in range(24)])
    rep = projection_driver(D, T, U)
    assert rep.all_projections_fit
    assert rep.factor <= rep.dimension_bound


def test_reuleaux_counterexample():
    rep = reuleaux_counterexample(360)
    assert rep.chord_ok and rep.equality_present
    assert not rep.translate_exists and rep.inclusion_slack < 0
    assert np.allclose(rep.chords, rep.chords_formula, atol=1e-9)
