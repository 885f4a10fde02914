"""Exact truncated signature kernel.

The kernel trick reduces every level to sums over strictly increasing index
tuples of products of second-order cross differences of the static kernel
matrix. :func:`sig_kernel_dp` evaluates these sums with exclusive 2-d prefix
sums in ``O(M * lx * ly)``; :func:`sig_kernel_bruteforce` enumerates the
tuples directly and serves as its oracle.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidParameter, OracleTooLarge
from .seq import SequenceDataset, as_sequence, tabulate
from .static import RbfStaticKernel

__all__ = [
    "SigKernelConfig",
    "cross_diff",
    "levels_from_cross_diff",
    "sig_kernel_dp",
    "sig_kernel_bruteforce",
    "bruteforce_levels",
    "sig_gram",
]

ORACLE_LIMIT = 10**7


@dataclass(frozen=True)
class SigKernelConfig:
    n_levels: int
    static: RbfStaticKernel = field(default_factory=lambda: RbfStaticKernel(1.0))
    per_level: bool = False

    def __post_init__(self):
        if int(self.n_levels) < 1:
            raise InvalidParameter(f"truncation level must be >= 1, got {self.n_levels}")


def cross_diff(K: np.ndarray) -> np.ndarray:
    """Second-order cross differences over the last two axes of ``K``."""
    return K[..., 1:, 1:] - K[..., 1:, :-1] - K[..., :-1, 1:] + K[..., :-1, :-1]


def _exclusive_cumsum2(A: np.ndarray) -> np.ndarray:
    # S[k, l] = sum_{k' < k, l' < l} A[k', l']
    C = np.cumsum(np.cumsum(A, axis=-2), axis=-1)
    S = np.zeros_like(A)
    S[..., 1:, 1:] = C[..., :-1, :-1]
    return S


def levels_from_cross_diff(D, n_levels: int, exact_sum: bool = False) -> np.ndarray:
    """Per-level kernel values from cross-difference arrays.

    ``D`` is either one array ``(..., n1, n2)`` shared by all levels or a
    list of ``n_levels`` such arrays (one static kernel per level). Returns an
    array of shape ``(..., n_levels + 1)`` whose entry 0 is 1.

    ``exact_sum`` replaces the final pairwise reduction of each level by a
    correctly rounded one (unbatched input only); level sums cancel heavily
    for nearby sequences.
    """
    per_level = isinstance(D, (list, tuple))
    D0 = np.asarray(D[0] if per_level else D, dtype=np.float64)
    out = np.empty(D0.shape[:-2] + (n_levels + 1,), dtype=np.float64)
    out[..., 0] = 1.0
    reduce = (lambda A: math.fsum(A.ravel())) if exact_sum else (lambda A: A.sum(axis=(-2, -1)))
    A = D0
    out[..., 1] = reduce(A)
    for m in range(2, n_levels + 1):
        Dm = np.asarray(D[m - 1], dtype=np.float64) if per_level else D0
        A = Dm * _exclusive_cumsum2(A)
        out[..., m] = reduce(A)
    return out


def sig_kernel_dp(cfg: SigKernelConfig, x, y) -> np.ndarray:
    """Levels ``0..M`` of the truncated signature kernel of ``x`` and ``y``.

    Levels ``m > length - 1`` of either input are exactly zero.
    """
    x = as_sequence(x, copy=False)
    y = as_sequence(y, copy=False)
    if x.shape[1] != y.shape[1]:
        raise DimensionMismatch(f"state dimensions differ: {x.shape[1]} vs {y.shape[1]}")
    D = cross_diff(cfg.static.gram(x, y))
    return levels_from_cross_diff(D, cfg.n_levels, exact_sum=True)


def bruteforce_levels(D, n_levels: int, limit: int = ORACLE_LIMIT) -> np.ndarray:
    """Direct enumeration over ordered index tuples of the level sums.

    ``D`` as in :func:`levels_from_cross_diff` but without batch axes.
    """
    per_level = isinstance(D, (list, tuple))
    Ds = [np.asarray(d, dtype=np.float64) for d in D] if per_level else [np.asarray(D, dtype=np.float64)] * n_levels
    n1, n2 = Ds[0].shape
    out = np.zeros(n_levels + 1)
    out[0] = 1.0
    for m in range(1, n_levels + 1):
        c1, c2 = math.comb(n1, m), math.comb(n2, m)
        if c1 * c2 > limit:
            raise OracleTooLarge(f"level {m} enumeration has {c1 * c2} index pairs (> {limit})")
        if c1 == 0 or c2 == 0:
            continue
        I = np.array(list(itertools.combinations(range(n1), m)), dtype=np.intp).reshape(c1, m)
        J = np.array(list(itertools.combinations(range(n2), m)), dtype=np.intp).reshape(c2, m)
        prod = np.ones((c1, c2))
        for p in range(m):
            prod *= Ds[p][I[:, p][:, None], J[:, p][None, :]]
        out[m] = math.fsum(prod.ravel())
    return out


def sig_kernel_bruteforce(cfg: SigKernelConfig, x, y, limit: int = ORACLE_LIMIT) -> np.ndarray:
    """Same quantity as :func:`sig_kernel_dp`, by explicit enumeration.

    Raises
    ------
    OracleTooLarge
        If ``C(lx-1, m) * C(ly-1, m)`` exceeds ``limit`` for some level.
    """
    x = as_sequence(x, copy=False)
    y = as_sequence(y, copy=False)
    if x.shape[1] != y.shape[1]:
        raise DimensionMismatch(f"state dimensions differ: {x.shape[1]} vs {y.shape[1]}")
    K = np.array([[cfg.static(a, b) for b in y] for a in x]).reshape(x.shape[0], y.shape[0])
    return bruteforce_levels(cross_diff(K), cfg.n_levels, limit)


def _block_rows(n_rows, n_cols, lx, ly, d, budget=2**22):
    per_row = max(1, n_cols * lx * ly * d)
    return max(1, min(n_rows, budget // per_row))


def sig_gram(cfg: SigKernelConfig, X, Y=None, threads: int | None = None) -> np.ndarray:
    """Gram matrix of the truncated signature kernel between two datasets.

    Returns ``(len(X), len(Y))`` with levels summed, or
    ``(len(X), len(Y), M + 1)`` when ``cfg.per_level`` is set. Rows are
    processed in fixed-size blocks, so the output does not depend on
    ``threads``.
    """
    X = tabulate(X if isinstance(X, SequenceDataset) else SequenceDataset(X))
    Y = X if Y is None else tabulate(Y if isinstance(Y, SequenceDataset) else SequenceDataset(Y))
    if X.d != Y.d:
        raise DimensionMismatch(f"state dimensions differ: {X.d} vs {Y.d}")
    Xa = np.stack(X.sequences)
    Ya = np.stack(Y.sequences)
    n1, lx = Xa.shape[:2]
    n2, ly = Ya.shape[:2]
    step = _block_rows(n1, n2, lx, ly, X.d)
    starts = list(range(0, n1, step))

    def block(s):
        Xb = Xa[s:s + step]
        K = cfg.static.gram(Xb[:, None, :, :], Ya[None, :, :, :])
        return levels_from_cross_diff(cross_diff(K), cfg.n_levels)

    if threads is not None and threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(block, starts))
    else:
        parts = [block(s) for s in starts]
    out = np.concatenate(parts, axis=0)
    return out if cfg.per_level else out.sum(axis=-1)
