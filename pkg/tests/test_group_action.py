import numpy as np
import pytest

from stereoshape.exceptions import InvalidInputError
from stereoshape.group_action import (
    PAPER_EXAMPLE_A,
    FullTransform,
    RestrictedTransform,
    act,
    assert_free_restricted,
    free_action_counterexample,
    nonproper_witness,
    paper_example_report,
    random_restricted_transforms,
    scalar_stabilizer_check,
)
from stereoshape.linalg_core import in_M, random_config


def random_full(rng, n):
    while True:
        g = rng.normal(size=(4, 4))
        if abs(np.linalg.det(g)) > 1e-2:
            return FullTransform(g, rng.uniform(0.5, 2, n) * rng.choice([-1, 1], n))


def random_restricted(rng, n):
    gs, ds = random_restricted_transforms(rng, n, 1)
    return RestrictedTransform(gs[0], ds[0])


def test_identity_action(rng):
    A = random_config(6, rng=rng)
    assert np.array_equal(act(FullTransform.identity(6), A), A)


def test_scalar_cancellation(rng):
    A = random_config(7, rng=rng)
    np.testing.assert_allclose(act(FullTransform(2 * np.eye(4), np.full(7, 0.5)), A), A, rtol=0, atol=0)


def test_paper_example_columns_by_hand():
    a, b, c, dl = 2.0, 3.0, 5.0, 7.0
    t = FullTransform(np.diag([a, b, c, dl]), [1 / a, 1 / b, 1 / c, 1 / dl, 1, 1])
    out = act(t, PAPER_EXAMPLE_A)
    np.testing.assert_allclose(out[:, :4], np.eye(4), atol=1e-15)
    np.testing.assert_allclose(out[:, 4], [a, b, c, dl])
    np.testing.assert_allclose(out[:, 5], [a, 2 * b, 3 * c, 5 * dl])


def test_act_dimension_mismatch(rng):
    with pytest.raises(InvalidInputError):
        act(FullTransform.identity(5), random_config(6, rng=rng))


def test_transform_validation():
    with pytest.raises(InvalidInputError):
        FullTransform(np.zeros((4, 4)), np.ones(4))
    with pytest.raises(InvalidInputError):
        FullTransform(np.eye(4), [1, 0, 1, 1])
    g = np.eye(4)
    g[3, 0] = 0.5
    with pytest.raises(InvalidInputError):
        RestrictedTransform(g, np.ones(4))
    with pytest.raises(InvalidInputError):
        RestrictedTransform(np.eye(4), np.ones(3))


@pytest.mark.parametrize("lam", [1.0, 3.0, -2.0])
def test_scalar_stabilizer(lam, rng):
    A = random_config(6, rng=rng, cls="M")
    report = scalar_stabilizer_check(lam, A)
    assert report["holds"]
    assert report["residual"] < 1e-12


def test_scalar_stabilizer_rejects_zero(rng):
    with pytest.raises(InvalidInputError):
        scalar_stabilizer_check(0.0, random_config(4, rng=rng))


def test_scalar_stabilizer_wide_range(rng):
    for lam in np.concatenate([rng.uniform(-1e3, 1e3, 200), [1e-3, -1e3, 1e3]]):
        A = random_config(int(rng.integers(4, 13)), rng=rng)
        assert scalar_stabilizer_check(lam, A)["holds"]


def test_paper_example_reports():
    ones = paper_example_report(1, 1, 1, 1)
    assert ones["holds"] and ones["residual"] == 0.0 and ones["offending_columns"] == []
    alpha2 = paper_example_report(2, 1, 1, 1)
    assert not alpha2["holds"] and alpha2["offending_columns"] == [5, 6]
    # column 5 becomes (2,1,1,1): error 1 in the first entry
    assert alpha2["column_errors"][4] == 1.0
    all2 = paper_example_report(2, 2, 2, 2)
    assert not all2["holds"] and all2["offending_columns"] == [5, 6]


def test_paper_example_rejects_zero():
    with pytest.raises(InvalidInputError):
        paper_example_report(0, 1, 1, 1)


def test_free_restricted_on_M(rng):
    A = random_config(6, rng=rng, cls="M")
    report = assert_free_restricted(A, trials=1000, seed=1)
    assert report["all_moved"] and report["trials"] == 1000
    assert report["max_fixed_residual"] > 1e-6


def test_sampled_transforms_respect_distance_floor(rng):
    gs, ds = random_restricted_transforms(rng, 5, 2000)
    dist = np.maximum(np.abs(gs - np.eye(4)).max(axis=(1, 2)), np.abs(ds - 1).max(axis=1))
    assert dist.min() >= 0.1
    assert np.all(gs[:, 3] == [0, 0, 0, 1])


def test_free_restricted_requires_M():
    A, _ = free_action_counterexample()
    with pytest.raises(InvalidInputError):
        assert_free_restricted(A, trials=10, seed=0)


def test_counterexample_outside_M_is_fixed():
    A, t = free_action_counterexample()
    assert not in_M(A)
    assert t.distance_to_identity() >= 0.1
    assert np.array_equal(act(t, A), A)
    report = assert_free_restricted(A, transforms=(t.g[None], t.d[None]), require_M=False)
    assert not report["all_moved"]


def test_action_law_and_inverse(rng):
    for _ in range(1000):
        n = int(rng.integers(4, 13))
        A = random_config(n, rng=rng)
        t1, t2 = random_full(rng, n), random_full(rng, n)
        lhs = act(t1 @ t2, A)
        rhs = act(t1, act(t2, A))
        assert np.linalg.norm(lhs - rhs) <= 1e-10 * np.linalg.norm(rhs)
        back = act(t1.inverse(), act(t1, A))
        assert np.linalg.norm(back - A) <= 1e-10 * np.linalg.norm(A)


def test_restricted_composition_keeps_affine_row(rng):
    for _ in range(1000):
        t1, t2 = random_restricted(rng, 5), random_restricted(rng, 5)
        prod = t1 @ t2
        assert isinstance(prod, RestrictedTransform)
        assert np.max(np.abs(prod.g[3] - [0, 0, 0, 1])) <= 1e-14
        inv = t1.inverse()
        assert np.array_equal(inv.g[3], [0, 0, 0, 1])
        np.testing.assert_allclose((t1 @ inv).g, np.eye(4), atol=1e-12)


def test_witness_orthogonal_g():
    c, s = np.cos(0.7), np.sin(0.7)
    g = np.array([[c, 0, -s, 0], [0, 1, 0, 0], [s, 0, c, 0], [0, 0, 0, 1]])
    p = np.array([0, 1.0, 0, 0])
    w = nonproper_witness(g, p)
    np.testing.assert_allclose(w.d_prime, np.ones(5), atol=1e-14)
    np.testing.assert_allclose(w.result[:, :4], g @ w.k, atol=1e-14)
    np.testing.assert_allclose(w.result[:, 4], p)


def test_witness_diagonal_family():
    p = np.array([0, 1.0, 0, 0])
    norms = []
    for t in (10.0, 1e2, 1e3):
        w = nonproper_witness(np.diag([t, 1, 1, 1]), p)
        # SVD of a positive diagonal: u = v is a signed permutation with the t-axis first.
        np.testing.assert_allclose(w.d_prime, [1 / t, 1, 1, 1, 1])
        np.testing.assert_allclose(np.abs(w.result[:, :4]).sum(axis=0), np.ones(4))
        np.testing.assert_allclose(w.result[:, :4], w.k, atol=1e-15)
        assert w.orthonormality_residual < 1e-12
        np.testing.assert_array_equal(w.result[:, 4], p)
        norms.append(w.g_norm)
    assert norms == [10.0, 100.0, 1000.0]


def test_witness_preconditions():
    with pytest.raises(InvalidInputError):
        nonproper_witness(np.diag([2.0, 1, 1, 1]), [1.0, 0, 0, 0])
    with pytest.raises(InvalidInputError):
        nonproper_witness(np.diag([0.0, 1, 1, 1]), [0, 1.0, 0, 0])
    with pytest.raises(InvalidInputError):
        nonproper_witness(np.eye(4), [0, 2.0, 0, 0])
