"""Path augmentations and unit-norm normalization of kernels and features."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, NormalizationError
from .seq import as_sequence, SequenceDataset

__all__ = [
    "AugmentationSpec",
    "add_time",
    "add_basepoint",
    "lead_lag",
    "normalize_kernel",
    "normalize_features",
]


def add_time(x, beta: float) -> np.ndarray:
    """Prepend the coordinate ``beta * i / length`` (``i`` starting at 1)."""
    if not beta > 0:
        raise InvalidParameter(f"time parametrization intensity must be > 0, got {beta}")
    x = as_sequence(x, copy=False)
    n = x.shape[0]
    t = beta * np.arange(1, n + 1, dtype=np.float64) / n
    return as_sequence(np.column_stack([t, x]), copy=False)


def add_basepoint(x) -> np.ndarray:
    """Prepend a zero row."""
    x = as_sequence(x, copy=False)
    return as_sequence(np.vstack([np.zeros((1, x.shape[1])), x]), copy=False)


def lead_lag(x) -> np.ndarray:
    """Lead-lag embedding ``(x1,x1), (x2,x1), (x2,x2), ..., (xL,xL)``.

    Output has length ``2L - 1`` and dimension ``2d``; the lead component
    comes first.
    """
    x = as_sequence(x, copy=False)
    n, d = x.shape
    lead = np.repeat(x, 2, axis=0)[1:]
    lag = np.repeat(x, 2, axis=0)[:-1]
    return as_sequence(np.hstack([lead, lag]), copy=False)


@dataclass(frozen=True)
class AugmentationSpec:
    """Which augmentations to apply; order is always lead-lag, basepoint, time."""

    time_param: float | None = None
    basepoint: bool = False
    lead_lag: bool = False

    def __post_init__(self):
        if self.time_param is not None and not self.time_param > 0:
            raise InvalidParameter(f"time_param must be > 0, got {self.time_param}")

    def __call__(self, x) -> np.ndarray:
        x = as_sequence(x, copy=False)
        if self.lead_lag:
            x = lead_lag(x)
        if self.basepoint:
            x = add_basepoint(x)
        if self.time_param is not None:
            x = add_time(x, self.time_param)
        return x

    def apply(self, dataset) -> SequenceDataset:
        if not isinstance(dataset, SequenceDataset):
            dataset = SequenceDataset(dataset)
        return dataset.map(self)

    @property
    def is_identity(self) -> bool:
        return self.time_param is None and not self.basepoint and not self.lead_lag


def normalize_kernel(gram, diag_x, diag_y) -> np.ndarray:
    """Rescale ``gram[i, j]`` by ``1 / sqrt(diag_x[i] * diag_y[j])``."""
    gram = np.asarray(gram, dtype=np.float64)
    diag_x = np.asarray(diag_x, dtype=np.float64)
    diag_y = np.asarray(diag_y, dtype=np.float64)
    if gram.shape != (diag_x.size, diag_y.size):
        raise ValueError(f"gram shape {gram.shape} does not match diagonals ({diag_x.size}, {diag_y.size})")
    if np.any(diag_x <= 0) or np.any(diag_y <= 0):
        raise NormalizationError("kernel diagonal must be strictly positive to normalize")
    # one square root of the product keeps normalized self-similarities at exactly 1
    return gram / np.sqrt(np.outer(diag_x, diag_y))


def normalize_features(phi) -> np.ndarray:
    """Scale feature vectors to unit Euclidean norm.

    Accepts a single vector or a 2-d array with one feature vector per row.
    """
    phi = np.asarray(phi, dtype=np.float64)
    norms = np.linalg.norm(phi, axis=-1, keepdims=True)
    if np.any(norms == 0):
        raise NormalizationError("cannot normalize a zero feature vector")
    return phi / norms
