import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rand_sym
from convexid.bodies import box, contains, cube, linear_image, scale_translate
from convexid.errors import ArityMismatch, InvalidParams, SymmetryRequired
from convexid.measures import mixed_volume
from convexid.projective import admissible, apply_body
from convexid.sampling import random_sl, sample_rng
from convexid.tuples import (
    affine_identify_driver,
    closing_inequality,
    degenerate_mixed_limit,
    find_delta_star,
    projective_tuple_witness,
    reuleaux_tuple_suite,
    segment_mixed_volume,
    tuple_separation_driver,
)

seeds = st.integers(0, 10**6)


def test_sl_samples_have_unit_determinant():
    rng = sample_rng(0, 0)
    for n in (2, 3):
        for _ in range(20):
            assert np.linalg.det(random_sl(rng, n)) == pytest.approx(1.0)


def test_degenerate_limit_planar():
    A = cube(2, 2, centered=True)
    lim = degenerate_mixed_limit(A, [cube(2, 1, centered=True)], [1, 0])
    assert lim.limit == pytest.approx(lim.factorized, rel=1e-9)
    assert lim.order == pytest.approx(1.0, abs=0.1) or math.isnan(lim.order)


@given(seeds)
def test_degenerate_limit_space(seed):
    A = rand_sym(seed, 3)
    Ks = [rand_sym(seed + 1, 3), rand_sym(seed + 2, 3)]
    v = sample_rng(seed, 1).normal(size=3)
    lim = degenerate_mixed_limit(A, Ks, v)
    # convergence is only asymptotically first order, so extrapolation leaves ~1e-5
    assert lim.rel_error <= 1e-4
    err = np.abs(np.array(lim.values) - lim.factorized)
    assert err[-1] <= err[0] + 1e-12 * abs(lim.factorized)


@given(seeds)
def test_affine_driver_never_flags_included_pairs(seed):
    A = rand_sym(seed, 2)
    B = scale_translate(A, 1.1)
    rep = affine_identify_driver(A, B, [rand_sym(seed + 1, 2)], samples=10, seed=seed)
    assert rep.verdict == "CONSISTENT"
    assert all(r.verdict == "ok" for r in rep.rows)


def test_affine_driver_finds_violation():
    rep = affine_identify_driver(box([-2, -0.5], [2, 0.5]), cube(2, 2, centered=True),
                                 [cube(2, 1, centered=True)], samples=5, seed=0)
    assert rep.verdict == "VIOLATION"


def test_tuple_separation_reference_pair():
    Q = cube(2, 2, centered=True)
    sep = tuple_separation_driver([scale_translate(Q, 2), Q], [Q, scale_translate(Q, 2)])
    assert sep.ts == pytest.approx([0.5, 2.0])
    assert sep.holds and not sep.violations


@given(seeds)
def test_tuple_separation_inclusions_recheck(seed):
    As = [rand_sym(seed + i, 2) for i in range(2)]
    Bs = [rand_sym(seed + 10 + i, 2) for i in range(2)]
    sep = tuple_separation_driver(As, Bs)
    assert math.prod(sep.ts) == pytest.approx(1.0)
    assert contains(Bs[1], scale_translate(As[1], sep.ts[1]), tol=1e-9)


def test_segment_mixed_volume():
    assert segment_mixed_volume([1, 2, 3]) == pytest.approx(1.0)
    assert segment_mixed_volume([2, 5]) == pytest.approx(5.0)


def test_reuleaux_tuple_suite_small():
    rep = reuleaux_tuple_suite(samples=5, seed=0)
    assert rep.verdict == "COUNTEREXAMPLE"
    assert rep.notes["inclusion_slack"] < 0


def test_closing_inequality_threshold():
    star = find_delta_star(1, 3, 0.1, 3, 2)
    assert star == pytest.approx(-1 + math.sqrt(1.46875), rel=1e-9)
    assert not closing_inequality(0.99 * star, 1, 3, 0.1, 3, 2)[2]
    assert closing_inequality(1.01 * star, 1, 3, 0.1, 3, 2)[2]


@pytest.mark.parametrize("R,d,eps1,d1,n", [(1, 3, 0.1, 3, 2), (2, 5, 0.5, 2.5, 3), (0.5, 2.1, 1, 4, 2)])
def test_closing_inequality_fails_below_threshold(R, d, eps1, d1, n):
    star = find_delta_star(R, d, eps1, d1, n)
    assert star > 0
    for delta in star * np.array([0.1, 0.5, 0.9]):
        assert not closing_inequality(delta, R, d, eps1, d1, n)[2]


def test_projective_tuple_witness_reverses():
    L1 = cube(2, 2, centered=True)
    K1 = box([-0.5, -0.5], [2, 0.5])
    rep = projective_tuple_witness(K1, L1, [L1], [L1])
    assert rep.lhs > rep.rhs + 1e-9
    F = rep.F
    assert admissible(F, K1) and admissible(F, L1)
    lam = rep.lambdas[1]
    S = scale_translate(L1, lam)
    lhs = mixed_volume([apply_body(F, K1), apply_body(F, S)]).value
    rhs = mixed_volume([apply_body(F, L1), apply_body(F, S)]).value
    assert lhs - rhs >= 1e-9
    assert all(isinstance(x, float) for x in rep.lambdas)


def test_errors():
    with pytest.raises(InvalidParams):
        closing_inequality(0.1, 1, 1, 0.1, 3, 2)
    with pytest.raises(ArityMismatch):
        degenerate_mixed_limit(cube(2), [cube(2), cube(2)], [1, 0])
    with pytest.raises(SymmetryRequired):
        tuple_separation_driver([cube(2), cube(2)], [cube(2), cube(2)])
    rot = linear_image(cube(2, 2, centered=True), [[0, -1], [1, 0]])
    assert rot.dim == 2


def test_nested_tuples_never_reverse():
    from conftest import random_admissible_map
    from convexid.measures import mixed_area

    rng = sample_rng(5, 0)
    L1, L2 = cube(2, 2, centered=True), box([-1.5, -0.5], [1.5, 0.5])
    K1, K2 = scale_translate(L1, 0.6), scale_translate(L2, 0.8)
    worst = -np.inf
    for _ in range(500):
        l1, l2 = rng.choice([0.5, 1.0, 2.0], size=2)
        F = random_admissible_map(rng, scale_translate(L1, 3.5))
        img = lambda K, lam: apply_body(F, scale_translate(K, lam))
        lhs = mixed_area(img(K1, l1), img(K2, l2))
        rhs = mixed_area(img(L1, l1), img(L2, l2))
        worst = max(worst, (lhs - rhs) / rhs)
    assert worst <= 1e-9
