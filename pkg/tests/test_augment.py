import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sigkern import (AugmentationSpec, InvalidParameter, NormalizationError, add_basepoint, add_time,
                     lead_lag, normalize_features, normalize_kernel)

seqs = arrays(np.float64, st.tuples(st.integers(1, 9), st.integers(1, 3)),
              elements=st.floats(-100, 100, allow_nan=False))


def test_add_time_prepends_scaled_index():
    x = np.arange(8.0).reshape(4, 2)
    out = add_time(x, 2.0)
    np.testing.assert_allclose(out[:, 0], [0.5, 1.0, 1.5, 2.0])
    np.testing.assert_array_equal(out[:, 1:], x)


@settings(max_examples=40, deadline=None)
@given(seqs, st.floats(1e-3, 1e3))
def test_add_time_round_trip(x, beta):
    np.testing.assert_array_equal(add_time(x, beta)[:, 1:], x)


def test_add_time_rejects_nonpositive_beta():
    with pytest.raises(InvalidParameter):
        add_time(np.zeros((3, 1)), 0.0)


def test_basepoint():
    out = add_basepoint([[1.0, 2.0], [3.0, 4.0]])
    np.testing.assert_array_equal(out, [[0, 0], [1, 2], [3, 4]])


def test_lead_lag_small_case():
    out = lead_lag([[1.0], [2.0], [3.0]])
    np.testing.assert_array_equal(out, [[1, 1], [2, 1], [2, 2], [3, 2], [3, 3]])


@settings(max_examples=40, deadline=None)
@given(seqs)
def test_lead_lag_recovers_input(x):
    out = lead_lag(x)
    n, d = x.shape
    assert out.shape == (2 * n - 1, 2 * d)
    # odd positions (1-based) of the lead component are the original states
    np.testing.assert_array_equal(out[::2, :d], x)


def test_spec_order_is_lead_lag_then_basepoint_then_time():
    x = np.array([[1.0], [2.0]])
    out = AugmentationSpec(time_param=1.0, basepoint=True, lead_lag=True)(x)
    expected = add_time(add_basepoint(lead_lag(x)), 1.0)
    np.testing.assert_array_equal(out, expected)
    assert out.shape == (4, 3)
    assert AugmentationSpec().is_identity


def test_normalize_kernel_unit_diagonal_and_idempotent(rng):
    A = rng.normal(size=(6, 4))
    G = A @ A.T
    N = normalize_kernel(G, np.diag(G), np.diag(G))
    assert np.all(np.diag(N) == 1.0)
    np.testing.assert_array_equal(normalize_kernel(N, np.diag(N), np.diag(N)), N)


def test_normalize_kernel_rejects_nonpositive_diagonal():
    with pytest.raises(NormalizationError):
        normalize_kernel(np.eye(2), [1.0, 0.0], [1.0, 1.0])


def test_normalize_features(rng):
    e = np.zeros(5)
    e[2] = 1.0
    np.testing.assert_array_equal(normalize_features(e), e)
    a, b = rng.normal(size=(2, 7))
    lhs = normalize_features(a) @ normalize_features(b)
    assert abs(lhs - a @ b / (np.linalg.norm(a) * np.linalg.norm(b))) < 1e-12
    with pytest.raises(NormalizationError):
        normalize_features(np.zeros(3))
