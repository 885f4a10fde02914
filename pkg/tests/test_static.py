import math

import numpy as np
import pytest

from sigkern import (DegenerateBandwidth, DimensionMismatch, InvalidParameter, RbfStaticKernel, RngStream,
                     SequenceDataset, median_heuristic, rbf_eval, rff_kernel, rff_map, sample_spectral)

import oracles


def test_rbf_closed_forms():
    k = RbfStaticKernel(0.7)
    x = np.array([0.3, -1.2])
    assert rbf_eval(k, x, x) == 1.0
    y = x + np.array([0.7 * math.sqrt(2.0), 0.0])
    assert math.isclose(k(x, y), math.exp(-1.0), rel_tol=1e-14)


def test_rbf_grows_with_bandwidth():
    x, y = np.zeros(2), np.ones(2)
    vals = [rbf_eval(RbfStaticKernel(s), x, y) for s in (0.5, 1, 2, 4, 8, 100)]
    assert all(a < b for a, b in zip(vals, vals[1:])) and vals[-1] < 1.0


def test_rbf_gram_matches_pointwise(rng):
    k = RbfStaticKernel(1.3)
    X, Y = rng.normal(size=(4, 3)), rng.normal(size=(5, 3))
    ref = oracles.kernel_matrix(lambda a, b: oracles.rbf(a, b, 1.3), X, Y)
    np.testing.assert_allclose(k.gram(X, Y), ref, rtol=1e-14)


def test_rbf_rejects_bad_input():
    with pytest.raises(InvalidParameter):
        RbfStaticKernel(0.0)
    with pytest.raises(DimensionMismatch):
        rbf_eval(RbfStaticKernel(1.0), np.zeros(2), np.zeros(3))


def test_spectral_moments():
    sigma = 0.4
    W = sample_spectral(sigma, 10, 1000, 100, rng=3)
    entries = np.concatenate([w.ravel() for w in W.levels])
    assert entries.size == 10**6
    assert abs(entries.mean()) < 4 / math.sqrt(entries.size) / sigma
    assert abs(entries.var() * sigma**2 - 1.0) < 0.05


def test_spectral_is_seeded_and_level_stable():
    a = sample_spectral(1.0, 3, 4, 2, rng=11)
    b = sample_spectral(1.0, 3, 4, 5, rng=11)
    for m in range(2):
        np.testing.assert_array_equal(a[m], b[m])
    assert not np.array_equal(a[0], a[1])


def test_rff_map_norm_and_zero_weights(rng):
    W = sample_spectral(0.8, 3, 16, 1, rng=0)[0]
    phi = rff_map(W, rng.normal(size=(20, 3)))
    np.testing.assert_allclose(np.linalg.norm(phi, axis=1), 1.0, atol=1e-12)
    z = rff_map(np.zeros((3, 4)), rng.normal(size=3))
    np.testing.assert_array_equal(z, np.r_[np.ones(4), np.zeros(4)] / 2.0)


def test_rff_inner_product_trig_identity(rng):
    W = sample_spectral(1.1, 2, 32, 1, rng=1)[0]
    x, y = rng.normal(size=(2, 2))
    ref = np.mean(np.cos((x - y) @ W))
    assert abs(rff_map(W, x) @ rff_map(W, y) - ref) < 1e-12
    assert abs(rff_kernel(W, x, y) - ref) < 1e-12
    assert rff_kernel(W, x, x) == 1.0


def test_rff_single_frequency(rng):
    W = rng.normal(size=(3, 1))
    x, y = rng.normal(size=(2, 3))
    assert math.isclose(rff_kernel(W, x, y), math.cos(float((x - y) @ W[:, 0])), rel_tol=1e-14)


def test_rff_kernel_symmetric_and_bounded(rng):
    W = sample_spectral(0.5, 4, 8, 1, rng=2)[0]
    for _ in range(20):
        x, y = rng.normal(size=(2, 4))
        v = rff_kernel(W, x, y)
        assert v == rff_kernel(W, y, x) and -1.0 <= v <= 1.0


def test_rff_kernel_is_unbiased():
    sigma, d, q, n = 0.9, 3, 4, 10**4
    x = np.array([0.2, -0.4, 1.0])
    y = np.array([-0.5, 0.3, 0.6])
    root = RngStream(42)
    vals = np.array([rff_kernel(sample_spectral(sigma, d, q, 1, root.child(r))[0], x, y) for r in range(n)])
    se = vals.std(ddof=1) / math.sqrt(n)
    assert abs(vals.mean() - oracles.rbf(x, y, sigma)) < 3 * se


def test_random_lipschitz_bound(rng):
    for seed in range(50):
        W = sample_spectral(rng.uniform(0.2, 3.0), 3, 8, 1, rng=seed)[0]
        x, y = rng.normal(size=(2, 3)) * 2
        lhs = np.linalg.norm(rff_map(W, x) - rff_map(W, y))
        rhs = np.linalg.norm(W, 2) / math.sqrt(W.shape[1]) * np.linalg.norm(x - y)
        assert lhs <= rhs * (1 + 1e-12)


def test_median_single_pair():
    x, y = np.array([[1.0, 2.0]]), np.array([[4.0, 6.0]])
    assert median_heuristic([x, y], alpha=1.0) == pytest.approx(2.5, rel=1e-15)
    assert median_heuristic([x, y], alpha=0.3) == pytest.approx(0.75, rel=1e-15)


def test_median_invariant_to_duplication(small_dataset):
    ds = small_dataset
    doubled = SequenceDataset(list(ds) + list(ds))
    assert median_heuristic(doubled) == median_heuristic(ds)


@pytest.mark.parametrize("same", [True, False])
def test_median_matches_enumeration(small_dataset, same):
    ref = oracles.upper_median(oracles.all_pairs_half_dists(list(small_dataset), same))
    assert median_heuristic(small_dataset, same_sequence=same) == pytest.approx(ref, rel=1e-14)


def test_median_subsample_close_to_full(rng):
    ds = SequenceDataset([rng.normal(size=(1, 3)) for _ in range(100)])  # 10^4 pairs
    full = median_heuristic(ds)
    sub = median_heuristic(ds, subsample_cap=10**3, rng=RngStream(9))
    assert abs(sub - full) <= 0.1 * full


def test_median_degenerate():
    with pytest.raises(DegenerateBandwidth):
        median_heuristic([np.ones((3, 2)), np.ones((2, 2))])
