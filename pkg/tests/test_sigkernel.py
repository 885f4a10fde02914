import math

import numpy as np
import pytest

from sigkern import (DimensionMismatch, OracleTooLarge, RbfStaticKernel, SequenceDataset, SigKernelConfig,
                     bruteforce_levels, cross_diff, levels_from_cross_diff, sig_gram, sig_kernel_bruteforce,
                     sig_kernel_dp, tabulate)

import oracles

X4 = np.array([[0.0, 0.0], [1.0, 0.5], [0.5, 2.0], [-1.0, 1.0]])
Y4 = np.array([[0.0, 1.0], [1.0, 1.0], [2.0, 0.0], [1.5, -1.0]])


def _rand_instance(rng):
    d = rng.integers(1, 4)
    x = rng.normal(size=(rng.integers(2, 7), d))
    y = rng.normal(size=(rng.integers(2, 7), d))
    return x, y, SigKernelConfig(int(rng.integers(1, 5)), RbfStaticKernel(rng.uniform(0.5, 2.0)))


def test_first_level_two_points_closed_form():
    # k1 = k(1,2) - k(1,0) - k(0,2) + k(0,0) with unit bandwidth
    out = sig_kernel_dp(SigKernelConfig(2), [[0.0], [1.0]], [[0.0], [2.0]])
    assert out[0] == 1.0
    assert math.isclose(out[1], 1.0 - math.exp(-2.0), rel_tol=1e-14)
    assert out[2] == 0.0


def test_frozen_reference_values():
    out = sig_kernel_dp(SigKernelConfig(3, RbfStaticKernel(1.5)), X4, Y4)
    frozen = [1.0, -0.3831600275542515, -0.0778389658396759, -0.015032127032561503]
    np.testing.assert_allclose(out, frozen, rtol=1e-12)


def test_matches_independent_enumeration(rng):
    for _ in range(30):
        x, y, cfg = _rand_instance(rng)
        s = cfg.static.bandwidth
        ref = oracles.signature_kernel_levels(x, y, cfg.n_levels, [lambda a, b: oracles.rbf(a, b, s)] * cfg.n_levels)
        np.testing.assert_allclose(sig_kernel_dp(cfg, x, y), ref, rtol=1e-9, atol=1e-13)


def test_dp_matches_bruteforce(rng):
    for _ in range(50):
        x, y, cfg = _rand_instance(rng)
        np.testing.assert_allclose(sig_kernel_dp(cfg, x, y), sig_kernel_bruteforce(cfg, x, y), rtol=1e-10)


def test_per_level_static_kernels(rng):
    x, y = rng.normal(size=(2, 5, 2))
    sig = [0.6, 1.0, 1.7]
    Ds = [cross_diff(RbfStaticKernel(s).gram(x, y)) for s in sig]
    ref = oracles.signature_kernel_levels(x, y, 3, [lambda a, b, s=s: oracles.rbf(a, b, s) for s in sig])
    np.testing.assert_allclose(levels_from_cross_diff(Ds, 3), ref, rtol=1e-10, atol=1e-14)
    np.testing.assert_allclose(bruteforce_levels(Ds, 3), ref, rtol=1e-12, atol=1e-15)


def test_first_level_telescopes(rng):
    # sum of all cross differences collapses to the four corner entries
    x, y = rng.normal(size=(7, 2)), rng.normal(size=(5, 2))
    k = RbfStaticKernel(0.8)
    expected = k(x[-1], y[-1]) - k(x[-1], y[0]) - k(x[0], y[-1]) + k(x[0], y[0])
    assert math.isclose(sig_kernel_dp(SigKernelConfig(1, k), x, y)[1], expected, rel_tol=1e-12)


def test_levels_beyond_length_vanish(rng):
    x, y = rng.normal(size=(3, 2)), rng.normal(size=(8, 2))
    out = sig_kernel_dp(SigKernelConfig(5), x, y)
    np.testing.assert_array_equal(out[3:], 0.0)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        sig_kernel_dp(SigKernelConfig(2), np.zeros((3, 2)), np.zeros((3, 1)))


def test_bruteforce_refuses_large_problems(rng):
    x = rng.normal(size=(60, 1))
    with pytest.raises(OracleTooLarge):
        sig_kernel_bruteforce(SigKernelConfig(4), x, x)


def test_gram_matches_pairwise_and_is_psd(rng):
    ds = SequenceDataset([rng.normal(size=(n, 2)) for n in (3, 7, 5, 6, 4, 8)])
    cfg = SigKernelConfig(3, RbfStaticKernel(0.9))
    G = sig_gram(cfg, ds)
    ref = np.array([[sig_kernel_dp(cfg, a, b).sum() for b in ds] for a in ds])
    np.testing.assert_allclose(G, ref, rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(G, G.T, rtol=0, atol=1e-13)
    assert np.linalg.eigvalsh((G + G.T) / 2).min() >= -1e-8


def test_gram_per_level_and_cross(rng):
    X = SequenceDataset([rng.normal(size=(n, 3)) for n in (4, 5)])
    Y = SequenceDataset([rng.normal(size=(n, 3)) for n in (6, 2, 3)])
    cfg = SigKernelConfig(2, RbfStaticKernel(1.2), per_level=True)
    G = sig_gram(cfg, X, Y)
    assert G.shape == (2, 3, 3)
    np.testing.assert_allclose(G[1, 2], sig_kernel_dp(cfg, X[1], Y[2]), rtol=1e-10, atol=1e-14)


def test_gram_constant_sequences_all_ones():
    ds = [np.full((4, 2), 0.5), np.full((2, 2), -1.0)]
    np.testing.assert_array_equal(sig_gram(SigKernelConfig(3), ds), np.ones((2, 2)))


def test_gram_thread_count_does_not_change_bits(rng):
    ds = SequenceDataset([rng.normal(size=(30, 2)) for _ in range(40)])
    cfg = SigKernelConfig(3, RbfStaticKernel(1.0))
    a = sig_gram(cfg, ds, threads=1)
    b = sig_gram(cfg, ds, threads=4)
    assert a.tobytes() == b.tobytes()


def test_tabulation_leaves_kernel_unchanged(rng):
    ds = SequenceDataset([rng.normal(size=(n, 2)) for n in (3, 6)])
    cfg = SigKernelConfig(3, RbfStaticKernel(1.0))
    tab = tabulate(ds, 9)
    np.testing.assert_allclose(sig_gram(cfg, tab), sig_gram(cfg, ds), rtol=1e-12, atol=1e-14)
