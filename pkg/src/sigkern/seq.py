"""Sequence containers, differencing, 1-variation, tabulation and seeded RNG streams.

A sequence is a float64 array of shape ``(length, dim)`` stored row-major, so
that time is the outer axis. Everything here is pure; arrays returned by
:func:`as_sequence` are read-only.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .errors import DegenerateSequence, DimensionMismatch, DataError

__all__ = [
    "as_sequence",
    "SequenceDataset",
    "diff",
    "one_variation",
    "tabulate",
    "RngStream",
]


def as_sequence(values, copy: bool = True) -> np.ndarray:
    """Validate ``values`` and return it as a read-only ``(length, dim)`` array.

    One-dimensional input is read as a univariate sequence.
    """
    # without a copy, freeze a view so the caller's array stays writable
    arr = np.array(values, dtype=np.float64, copy=True if copy else None).view()
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise DataError(f"a sequence must be 2-dimensional (length, dim), got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DataError(f"a sequence needs length >= 1 and dim >= 1, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DataError("sequence contains NaN or Inf entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SequenceDataset:
    """A nonempty collection of sequences sharing one state dimension."""

    sequences: tuple = field()

    def __init__(self, sequences: Iterable):
        seqs = tuple(as_sequence(s) for s in sequences)
        if not seqs:
            raise DataError("a dataset must contain at least one sequence")
        dims = {s.shape[1] for s in seqs}
        if len(dims) != 1:
            raise DimensionMismatch(f"sequences have differing state dimensions {sorted(dims)}")
        object.__setattr__(self, "sequences", seqs)

    @property
    def d(self) -> int:
        return self.sequences[0].shape[1]

    @property
    def lengths(self) -> np.ndarray:
        return np.array([s.shape[0] for s in self.sequences])

    @property
    def max_len(self) -> int:
        return int(self.lengths.max())

    def __len__(self) -> int:
        return len(self.sequences)

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self.sequences)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return SequenceDataset(self.sequences[i])
        return self.sequences[i]

    def map(self, fn) -> "SequenceDataset":
        return SequenceDataset(fn(s) for s in self.sequences)

    def to_array(self) -> np.ndarray:
        """Stack into a ``(n, max_len, d)`` array, padding by :func:`tabulate`."""
        return np.stack(tabulate(self).sequences)


def _dataset(data) -> SequenceDataset:
    return data if isinstance(data, SequenceDataset) else SequenceDataset(data)


def diff(x) -> np.ndarray:
    """First-order forward differences ``x[i+1] - x[i]``.

    Raises
    ------
    DegenerateSequence
        If the sequence has a single element.
    """
    x = as_sequence(x, copy=False)
    if x.shape[0] < 2:
        raise DegenerateSequence("differencing needs a sequence of length >= 2")
    return np.diff(x, axis=0)


def one_variation(x) -> float:
    """Sum of Euclidean norms of the increments; 0 for a length-1 sequence."""
    x = as_sequence(x, copy=False)
    if x.shape[0] < 2:
        return 0.0
    return float(np.sum(np.linalg.norm(np.diff(x, axis=0), axis=1)))


def tabulate(dataset, length: int | None = None) -> SequenceDataset:
    """Pad every sequence to a common length by repeating its final row.

    Repeated rows add zero increments, so every signature level >= 1 is left
    unchanged. Zero-padding would not have this property.
    """
    dataset = _dataset(dataset)
    target = dataset.max_len if length is None else int(length)
    if target < dataset.max_len:
        raise DataError(f"cannot tabulate to length {target} < max length {dataset.max_len}")
    out = []
    for s in dataset.sequences:
        if s.shape[0] == target:
            out.append(s)
        else:
            pad = np.repeat(s[-1:], target - s.shape[0], axis=0)
            out.append(np.concatenate([s, pad], axis=0))
    return SequenceDataset(out)


@dataclass(frozen=True)
class RngStream:
    """Deterministic random stream keyed by ``(seed, stream_id)``.

    ``stream_id`` may be a single integer or a tuple of integers, which makes
    it easy to derive independent streams per level, pair, resample, etc.
    The same key always yields the same draws, whatever the thread schedule.
    """

    seed: int
    stream_id: int | tuple = 0

    def key(self) -> tuple:
        sid = self.stream_id if isinstance(self.stream_id, tuple) else (self.stream_id,)
        return tuple(int(k) % 2**64 for k in sid)

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.seed) % 2**64, spawn_key=self.key())
        return np.random.Generator(np.random.PCG64(ss))

    def child(self, *keys: int) -> "RngStream":
        return RngStream(self.seed, self.key() + tuple(int(k) for k in keys))
