import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rand_poly, support_gap
from convexid.bodies import ball, box, cube, diameter, polytope, translate
from convexid.errors import InvalidParams, NoWitnessPoint, UnsupportedOperandPair
from convexid.projective import admissible
from convexid.witness import (
    build_witness_map,
    find_witness,
    functional_names,
    revalidate,
    search_witness_map,
    separate_by_balls,
    witness_vertex,
)

seeds = st.integers(0, 10**6)
dims = st.sampled_from([2, 3])

K0 = cube(2, 1.0)
T0 = translate(cube(2, 1.0), [2.0, 2.0])


def test_witness_vertex_is_outside():
    p = witness_vertex(K0, T0)
    assert p.tolist() == [0.0, 0.0]
    with pytest.raises(NoWitnessPoint):
        witness_vertex(K0, box([-1, -1], [2, 2]))


def test_ball_separation_invariants():
    sep = separate_by_balls(K0, T0)
    assert sep.violations(K0, T0) == []
    assert sep.tangent


@given(seeds, dims)
def test_random_separations_are_valid(seed, n):
    K = rand_poly(seed, n)
    T = rand_poly(seed + 1, n, shift=np.full(n, 3.0))
    sep = separate_by_balls(K, T)
    assert sep.violations(K, T) == []


def test_witness_map_reaches_target_ratio():
    sep = separate_by_balls(K0, T0)
    wm = search_witness_map(sep, 0.5)
    assert wm.ratio <= 0.5
    assert admissible(wm.F, K0) and admissible(wm.F, T0)
    assert build_witness_map(sep, 0.5).matrix.shape == (3, 3)


@pytest.mark.parametrize("functional", ["volume", "surface", "W1"])
def test_certificate_revalidates(functional):
    cert = find_witness(K0, T0, functional, 0.5)
    assert cert.route == "ball" and cert.ball_certified
    assert cert.margin >= 1e-9
    assert revalidate(cert, K0, T0)


def test_all_functionals_reverse_together():
    cert = find_witness(K0, T0, "volume", 0.5)
    for name in functional_names(2):
        a, b = cert.measured[name]
        assert a > b


def test_vertex_configuration_uses_measured_route():
    # only the apex pokes out of B, and every facet of A has B on both sides
    A = polytope([[0, 0], [2, 0], [1, 2]])
    B = box([-5, -5], [5, 1.9])
    cert = find_witness(A, B, "volume", 0.5)
    assert cert.route == "vertex" and not cert.ball_certified
    assert cert.margin >= 1e-9
    assert revalidate(cert, A, B)


@given(seeds, dims)
def test_random_noninclusions_get_witnesses(seed, n):
    A = rand_poly(seed, n)
    B = rand_poly(seed + 1, n, shift=np.full(n, 0.4))
    if support_gap(A, B) < 1e-3 * diameter(B):
        return
    cert = find_witness(A, B, "surface", 0.5)
    assert cert.margin >= 1e-9
    assert revalidate(cert, A, B)


def test_determinism():
    a = find_witness(K0, T0, "W1", 0.3).to_dict()
    b = find_witness(K0, T0, "W1", 0.3).to_dict()
    assert a == b


def test_certificate_serialization_keys():
    d = find_witness(K0, T0).to_dict()
    for key in ("flmap", "functional", "value_A", "value_B", "eps"):
        assert key in d


def test_errors():
    with pytest.raises(NoWitnessPoint):
        find_witness(K0, box([-1, -1], [2, 2]))
    with pytest.raises(InvalidParams):
        find_witness(K0, T0, eps=1.5)
    with pytest.raises(InvalidParams):
        find_witness(K0, T0, functional="W2")
    with pytest.raises(UnsupportedOperandPair):
        find_witness(ball([0, 0], 1), T0)
