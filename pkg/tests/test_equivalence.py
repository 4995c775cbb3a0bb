import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stereoshape.equivalence import (
    Status,
    build_systems,
    degeneracy_check,
    random_round_trip,
    recover_transform,
    relation_axioms_suite,
)
from stereoshape.exceptions import InvalidInputError
from stereoshape.linalg_core import Tolerances
from stereoshape.projection import compatible_d, iota

HAND_IMAGE = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [1, 1, 1, 1], [1, 1, 1, 2]], dtype=float)


def round_trip(rng, n):
    X, g = random_round_trip(rng, n)
    return iota(X), iota(g @ X), g


def test_identity_orbit(rng):
    P, _, _ = round_trip(rng, 7)
    dec = recover_transform(P, P)
    assert dec.status is Status.EQUIVALENT
    np.testing.assert_allclose(dec.g, np.eye(4), atol=1e-12)
    np.testing.assert_allclose(dec.d, np.ones(7), atol=1e-12)
    assert dec.residual <= 1e-12


def test_reflexive_hand_image():
    dec = recover_transform(HAND_IMAGE, HAND_IMAGE)
    assert dec.equivalent
    np.testing.assert_allclose(dec.g, np.eye(4), atol=1e-14)


def test_round_trip_recovers_generator(rng):
    for _ in range(1000):
        n = int(rng.integers(4, 13))
        P, Q, g = round_trip(rng, n)
        dec = recover_transform(P, Q)
        assert dec.equivalent
        assert np.linalg.norm(dec.g - g) <= 1e-8 * np.linalg.norm(g)
        np.testing.assert_allclose(dec.d, compatible_d(g, P), rtol=1e-8)
        assert abs(np.linalg.det(dec.g)) > Tolerances().zero_tol


def test_systems_encode_the_projection_equations(rng):
    # With the true g plugged in, every equation holds: C @ g_row == rhs.
    P, Q, g = round_trip(rng, 9)
    C, B = build_systems(P, Q)
    np.testing.assert_allclose(C @ g[:3].T, B, rtol=1e-10, atol=1e-12)


def test_perturbed_image_not_equivalent(rng):
    P, Q, _ = round_trip(rng, 8)
    Q = np.array(Q)
    Q[0, 3] += 1e-3
    dec = recover_transform(P, Q)
    assert dec.status is Status.NOT_EQUIVALENT
    assert dec.residual > Tolerances().residual_rel_tol
    assert dec.g is None and dec.d is None


def test_four_points_are_always_equivalent(rng):
    # With n = 4 the three systems are square: any two generic images match.
    P, _, _ = round_trip(rng, 4)
    _, Q, _ = round_trip(rng, 4)
    assert recover_transform(P, Q).equivalent


def test_degeneracy_generic(rng):
    P, Q, _ = round_trip(rng, 8)
    report = degeneracy_check(P, Q)
    assert report == {"rank4_ok": True, "ranks": [4, 4, 4, 4]}


def test_degeneracy_rank_deficient_image(rng):
    n = 6
    P = np.ones((4, n))
    P[0] = rng.uniform(-1, 1, n)
    P[1] = rng.uniform(-1, 1, n)
    P[3] = 2 * P[0] - P[1] + 0.5  # t depends linearly on (x, y, 1)
    _, Q, _ = round_trip(rng, n)
    report = degeneracy_check(P, Q)
    assert report["ranks"][0] == 3 and not report["rank4_ok"]
    assert recover_transform(P, Q).status is Status.DEGENERATE


def test_degeneracy_unrelated_images(rng):
    P, _, _ = round_trip(rng, 7)
    _, Q, _ = round_trip(rng, 7)
    report = degeneracy_check(P, Q)
    assert report["ranks"][0] == 4
    assert 5 in report["ranks"][1:]
    assert not report["rank4_ok"]
    assert recover_transform(P, Q).status is Status.NOT_EQUIVALENT


def test_ambiguous_instance_is_degenerate(rng):
    # A loose residual tolerance accepts a perturbation the rank test still sees.
    tol = Tolerances(rank_rel_tol=1e-9, residual_rel_tol=1e-2)
    P, Q, _ = round_trip(rng, 8)
    Q = np.array(Q)
    Q[1, 2] += 1e-5
    dec = recover_transform(P, Q, tol)
    assert dec.residual <= tol.residual_rel_tol
    assert dec.status is Status.DEGENERATE


@pytest.mark.parametrize("mutate", ["size", "third_row", "zero_t"])
def test_invalid_inputs(mutate, rng):
    P, Q, _ = round_trip(rng, 6)
    P, Q = np.array(P), np.array(Q)
    if mutate == "size":
        Q = Q[:, :5]
    elif mutate == "third_row":
        Q[2, 0] = 2.0
    else:
        P[3, 1] = 0.0
    with pytest.raises(InvalidInputError):
        recover_transform(P, Q)


def test_decision_json_fields(rng):
    P, Q, _ = round_trip(rng, 5)
    obj = recover_transform(P, Q).to_json_obj()
    assert set(obj) == {"status", "g", "d", "residual", "ranks"}
    assert obj["status"] == "Equivalent" and len(obj["g"]) == 16 and len(obj["d"]) == 5
    json.dumps(obj)


def test_relation_axioms_suite():
    report = relation_axioms_suite(100, seed=3)
    assert report["reflexive_ok"] and report["symmetric_ok"] and report["transitive_ok"]


def test_symmetric_pair_hand_instance():
    g = np.array([[1.0, 0.2, 0, 0.3], [0, 1.0, 0.1, -0.2], [0.1, 0, 1.2, 0.4], [0, 0, 0, 1]])
    X = np.array([[0.1, 0.5, -0.4, 0.3, 0.2], [0.2, -0.3, 0.6, 0.1, -0.5],
                  [1.0, 1.5, 2.0, 1.2, 0.8], [1, 1, 1, 1, 1]])
    P, Q = iota(X), iota(g @ X)
    forward, backward = recover_transform(P, Q), recover_transform(Q, P)
    assert forward.equivalent and backward.equivalent
    np.testing.assert_allclose(backward.g @ forward.g, np.eye(4), atol=1e-9)
    np.testing.assert_allclose(backward.g, np.linalg.inv(g), atol=1e-9)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(5, 12),
       delta=st.sampled_from([0.0, 1e-12, 1e-10, 1e-9, 1e-7, 1e-3]),
       loose=st.sampled_from([1e-8, 1e-7, 1e-6, 1e-4, 1e-2]))
def test_decision_monotone_in_residual_tolerance(seed, n, delta, loose):
    rng = np.random.default_rng(seed)
    P, Q, _ = round_trip(rng, n)
    Q = np.array(Q)
    Q[0, 0] += delta
    strict = recover_transform(P, Q, Tolerances(residual_rel_tol=1e-8))
    relaxed = recover_transform(P, Q, Tolerances(residual_rel_tol=loose))
    if strict.equivalent:
        assert relaxed.status is not Status.NOT_EQUIVALENT


def test_perturbation_absorbed_when_other_points_coplanar():
    # Points 0, 1, 3, 4 lie on the plane z = 1 + x / 2; point 2 does not.
    # The affine g may then move point 2 independently of the others, so a
    # perturbation of its image stays inside the orbit.
    x = np.array([0.3, -0.4, 0.1, 0.5, -0.2])
    y = np.array([0.2, 0.6, -0.3, -0.5, 0.1])
    z = 1 + x / 2
    z[2] = 0.4
    X = np.vstack([x, y, z, np.ones(5)])
    g = np.array([[1.1, 0.2, 0.0, 0.1], [0.0, 0.9, 0.1, -0.2], [0.1, 0.0, 1.2, 0.3], [0, 0, 0, 1]])
    P, Q = iota(X), np.array(iota(g @ X))
    C, _ = build_systems(P, Q)
    assert np.linalg.matrix_rank(np.delete(C, 2, axis=0)) == 3
    Q[3, 2] += 1e-3
    dec = recover_transform(P, Q)
    assert dec.status is Status.EQUIVALENT
    assert not np.allclose(dec.g, g)
