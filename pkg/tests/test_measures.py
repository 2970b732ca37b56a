import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rand_poly
from convexid.bodies import ball, cube, minkowski_sum, polytope, scale_translate, segment
from convexid.errors import ArityMismatch, DimensionUnsupported, UnsupportedOperandPair
from convexid.measures import (
    ball_volume,
    mc_steiner_fit,
    mc_volume,
    mixed_area,
    mixed_volume,
    quermassintegrals,
    steiner_volume,
    surface_area,
    volume,
)

seeds = st.integers(0, 10**6)
dims = st.sampled_from([2, 3])


def combo(a, A, b, B):
    return minkowski_sum(scale_translate(A, a), scale_translate(B, b))


def test_volumes_of_simple_bodies():
    assert volume(cube(3, 2)) == pytest.approx(8.0)
    assert surface_area(cube(3)) == pytest.approx(6.0)
    assert volume(ball([0, 0, 0], 2)) == pytest.approx(32 * math.pi / 3)
    assert ball_volume(2) == pytest.approx(math.pi)
    assert volume(segment([0, 0], [1, 1])) == 0.0


@given(seeds, dims)
def test_diagonal_is_volume(seed, n):
    K = rand_poly(seed, n)
    assert mixed_volume([K] * n).value == pytest.approx(volume(K), rel=1e-10)


@given(seeds, dims)
def test_permutation_symmetry(seed, n):
    Ks = [rand_poly(seed + i, n, 5 + i) for i in range(n)]
    v = mixed_volume(Ks).value
    assert mixed_volume(Ks[::-1]).value == v
    assert mixed_volume(Ks[1:] + Ks[:1]).value == v


@given(seeds, dims, st.floats(0, 3), st.floats(0, 3))
def test_multilinearity(seed, n, lam, mu):
    A, A2 = rand_poly(seed, n), rand_poly(seed + 1, n, 6)
    rest = [rand_poly(seed + 2 + i, n, 5) for i in range(n - 1)]
    lhs = mixed_volume([combo(lam, A, mu, A2)] + rest).value if lam + mu > 0 else 0.0
    rhs = lam * mixed_volume([A] + rest).value + mu * mixed_volume([A2] + rest).value
    assert lhs == pytest.approx(rhs, rel=1e-8, abs=1e-12)


@given(seeds, dims)
def test_monotone_in_first_argument(seed, n):
    B = rand_poly(seed, n, 10)
    A = polytope(B.vertices[: n + 2])
    rest = [rand_poly(seed + 5, n)] * (n - 1)
    assert mixed_volume([A] + rest).value <= mixed_volume([B] + rest).value + 1e-9


@given(seeds)
def test_planar_shortcut_matches_polarization(seed):
    K, L = rand_poly(seed, 2), rand_poly(seed + 1, 2, 11)
    assert mixed_area(K, L) == pytest.approx(mixed_volume([K, L]).value, rel=1e-12)


@given(seeds, dims)
def test_derivative_of_volume_along_a_body(seed, n):
    K, A = rand_poly(seed, n), rand_poly(seed + 1, n, 6)
    target = n * mixed_volume([A] + [K] * (n - 1)).value
    errs = []
    for eps in (1e-2, 1e-3, 1e-4):
        q = (volume(minkowski_sum(K, scale_translate(A, eps))) - volume(K)) / eps
        errs.append(abs(q - target))
    assert errs[-1] <= 1e-3 * max(1.0, target)
    order = math.log10(errs[0] / errs[1]) if errs[1] > 1e-13 else 1.0
    assert order >= 0.9


def test_segment_products():
    S = [segment([0, 0, 0], [1, 0, 0]), segment([0, 0, 0], [0, 2, 0]), segment([0, 0, 0], [0, 0, 3])]
    assert mixed_volume(S).value == pytest.approx(1.0)


def test_closed_form_quermassintegrals():
    assert quermassintegrals(cube(3)).W == pytest.approx([1, 2, math.pi, 4 * math.pi / 3])
    assert quermassintegrals(cube(2)).W == pytest.approx([1, 2, math.pi])
    assert quermassintegrals(ball([0, 0], 2)).W == pytest.approx([4 * math.pi, 2 * math.pi, math.pi])
    # |Q + tD| for the unit square
    assert steiner_volume(cube(2), 1.0) == pytest.approx(1 + 4 + math.pi)


def test_monte_carlo_volume_is_seeded():
    K = cube(2)
    a = mc_volume(K, 10**4, seed=3, dilate=0.5)
    assert a == mc_volume(K, 10**4, seed=3, dilate=0.5)
    assert abs(a[0] - steiner_volume(K, 0.5)) <= 4 * a[1]


def test_monte_carlo_steiner_fit_small():
    W, sig, table = mc_steiner_fit(cube(2), samples=10**5, seed=1)
    assert len(table) == 3
    assert np.all(np.abs(W - [1, 2, math.pi]) <= 4 * sig + 1e-12)


def test_errors():
    with pytest.raises(ArityMismatch):
        mixed_volume([cube(2)])
    with pytest.raises(DimensionUnsupported):
        mixed_volume([cube(4)] * 4)
    with pytest.raises(UnsupportedOperandPair):
        mixed_volume([cube(2), ball([0, 0], 1)])
