"""Random Fourier signature features: full tensor (RFSF), diagonally projected
(RFSF-DP) and tensor-random-projected (RFSF-TRP).

All three maps share one recursion over time. With ``U[m]`` the per-step
increments of the level-``m`` lift, the level-1 state is ``V = U[1]`` and
each further level combines the *exclusive* running sum of ``V`` (shift by
one, then cumulative sum) with ``U[m]``; this realizes the strict ordering
``i_1 < i_2 < ...`` of the index tuples. Summing ``V`` over time gives the
level block.

Layout of a level block is documented per method and is level-major in the
flattened feature vector: for RFSF a level-``m`` block is the row-major
flattening of a ``(2 d~,) * m`` tensor; for RFSF-DP it is ``(d~, 2^m)``
flattened copy-major; for RFSF-TRP it is ``(d~,)``.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, FeatureSizeError, InvalidParameter
from .seq import RngStream, SequenceDataset, tabulate
from .static import RandomFourierWeights, rff_map, sample_spectral

__all__ = [
    "cumsum",
    "slice_sum",
    "shift",
    "hadamard",
    "batch_outer",
    "TrpProjection",
    "sample_trp",
    "LeveledFeatures",
    "rfsf_features",
    "rfsf_dp_features",
    "rfsf_trp_features",
    "feature_gram",
    "level_gram",
    "feature_width",
    "draw_random_maps",
    "METHODS",
]

METHODS = ("rfsf", "rfsf-dp", "rfsf-trp")
RFSF_MAX_WIDTH = 10**6
_CHUNK = 64


# -- array operations -------------------------------------------------------

def cumsum(A: np.ndarray, axis: int) -> np.ndarray:
    return np.cumsum(A, axis=axis)


def slice_sum(A: np.ndarray, axis: int) -> np.ndarray:
    return np.sum(A, axis=axis)


def shift(A: np.ndarray, axis: int, by: int = 1) -> np.ndarray:
    """Shift forward along ``axis`` by ``by`` positions, filling with zeros."""
    out = np.zeros_like(A)
    n = A.shape[axis]
    if by < n:
        src = [slice(None)] * A.ndim
        dst = [slice(None)] * A.ndim
        src[axis] = slice(0, n - by)
        dst[axis] = slice(by, n)
        out[tuple(dst)] = A[tuple(src)]
    return out


def hadamard(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A * B


def batch_outer(A: np.ndarray, B: np.ndarray, axis: int = -1) -> np.ndarray:
    """Outer product along ``axis``; output index ``i * nB + j`` holds
    ``A[..., i, ...] * B[..., j, ...]`` (``A``'s index is major)."""
    axis = axis % A.ndim
    a = np.moveaxis(A, axis, -1)[..., :, None]
    b = np.moveaxis(B, axis, -1)[..., None, :]
    prod = (a * b).reshape(a.shape[:-2] + (-1,))
    return np.moveaxis(prod, -1, axis)


def _exclusive_cumsum(V: np.ndarray, axis: int = 1) -> np.ndarray:
    return cumsum(shift(V, axis, 1), axis)


# -- random maps ------------------------------------------------------------

@dataclass(frozen=True)
class TrpProjection:
    """Per-level Gaussian projections ``P[m]`` of shape ``(2 d~, d~)``."""

    levels: tuple

    @property
    def n_levels(self) -> int:
        return len(self.levels)

    def __getitem__(self, m: int) -> np.ndarray:
        return self.levels[m]


def sample_trp(rff_dim: int, n_levels: int, rng: RngStream | int = 0, first_stream: int | None = None) -> TrpProjection:
    """Standard normal projections; level ``m`` uses stream ``n_levels + m``
    unless ``first_stream`` is given."""
    if not isinstance(rng, RngStream):
        rng = RngStream(int(rng))
    base = n_levels + 1 if first_stream is None else first_stream
    mats = []
    for m in range(1, n_levels + 1):
        P = rng.child(base + m - 1).generator().standard_normal((2 * rff_dim, rff_dim))
        P.setflags(write=False)
        mats.append(P)
    return TrpProjection(tuple(mats))


def draw_random_maps(method: str, bandwidth: float, d: int, rff_dim: int, n_levels: int,
                     rng: RngStream | int = 0):
    """Weights (and projections for RFSF-TRP) from one seed: ``W[m]`` on
    stream ``m``, ``P[m]`` on stream ``M + m``."""
    _check_method(method)
    weights = sample_spectral(bandwidth, d, rff_dim, n_levels, rng)
    proj = sample_trp(rff_dim, n_levels, rng) if method == "rfsf-trp" else None
    return weights, proj


def _check_method(method):
    if method not in METHODS:
        raise InvalidParameter(f"unknown feature method {method!r}; expected one of {METHODS}")


# -- leveled features -------------------------------------------------------

@dataclass(frozen=True)
class LeveledFeatures:
    """Per-level feature blocks for a batch of sequences.

    ``blocks[m]`` has shape ``(n_sequences, width_m)``; ``blocks[0]`` is the
    constant level (a single 1 for RFSF/RFSF-TRP, ``d~`` entries of
    ``1/sqrt(d~)`` for RFSF-DP).
    """

    method: str
    blocks: tuple

    @property
    def n_levels(self) -> int:
        return len(self.blocks) - 1

    @property
    def n_sequences(self) -> int:
        return self.blocks[0].shape[0]

    @property
    def widths(self) -> tuple:
        return tuple(b.shape[1] for b in self.blocks)

    def flat(self, levels=None) -> np.ndarray:
        """Concatenated feature matrix; ``levels`` selects blocks (level 0 always kept)."""
        idx = self._select(levels)
        return np.concatenate([self.blocks[m] for m in idx], axis=1)

    def _select(self, levels):
        if levels is None:
            return list(range(len(self.blocks)))
        idx = sorted({0} | {int(m) for m in levels})
        if idx[-1] > self.n_levels:
            raise InvalidParameter(f"level {idx[-1]} exceeds truncation {self.n_levels}")
        return idx

    def __getitem__(self, i) -> "LeveledFeatures":
        if isinstance(i, (int, np.integer)):
            i = slice(i, i + 1)
        return LeveledFeatures(self.method, tuple(b[i] for b in self.blocks))


def feature_width(method: str, rff_dim: int, n_levels: int) -> int:
    """Length of the flattened feature vector, level 0 included."""
    _check_method(method)
    if method == "rfsf":
        return sum((2 * rff_dim) ** m for m in range(n_levels + 1))
    if method == "rfsf-dp":
        return rff_dim * (2 ** (n_levels + 1) - 1)
    return n_levels * rff_dim + 1


def _as_batch(X) -> np.ndarray:
    if isinstance(X, np.ndarray) and X.ndim == 3:
        return np.asarray(X, dtype=np.float64)
    if isinstance(X, np.ndarray) and X.ndim <= 2:
        X = [X]
    ds = X if isinstance(X, SequenceDataset) else SequenceDataset(X)
    return np.stack(tabulate(ds).sequences)


def _run_chunks(fn, Xa, threads):
    starts = list(range(0, Xa.shape[0], _CHUNK))
    if threads is not None and threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda s: fn(Xa[s:s + _CHUNK]), starts))
    else:
        parts = [fn(Xa[s:s + _CHUNK]) for s in starts]
    return tuple(np.concatenate(level, axis=0) for level in zip(*parts))


def _check_weights(weights: RandomFourierWeights, n_levels, d):
    if n_levels is None:
        n_levels = weights.n_levels
    if n_levels < 1 or n_levels > weights.n_levels:
        raise InvalidParameter(f"need 1 <= M <= {weights.n_levels} weight levels, got M={n_levels}")
    if weights.d != d:
        raise DimensionMismatch(f"weights expect state dimension {weights.d}, data has {d}")
    return n_levels


def rfsf_features(weights: RandomFourierWeights, X, n_levels: int | None = None,
                  threads: int | None = None) -> LeveledFeatures:
    """Full-tensor RFSF map.

    Raises
    ------
    FeatureSizeError
        If the top level would have more than 10**6 coordinates per sequence.
    """
    Xa = _as_batch(X)
    M = _check_weights(weights, n_levels, Xa.shape[2])
    width = (2 * weights.rff_dim) ** M
    if width > RFSF_MAX_WIDTH:
        raise FeatureSizeError(f"RFSF level {M} needs {width} coordinates per sequence (> {RFSF_MAX_WIDTH})")

    def compute(Xc):
        n = Xc.shape[0]
        blocks = [np.ones((n, 1))]
        U = [np.diff(rff_map(weights[m], Xc), axis=1) for m in range(M)]
        V = U[0]
        blocks.append(slice_sum(V, 1))
        for m in range(1, M):
            V = batch_outer(_exclusive_cumsum(V), U[m], axis=2)
            blocks.append(slice_sum(V, 1))
        return blocks

    return LeveledFeatures("rfsf", _run_chunks(compute, Xa, threads))


def rfsf_dp_features(weights: RandomFourierWeights, X, n_levels: int | None = None,
                     threads: int | None = None) -> LeveledFeatures:
    """Diagonally projected RFSF: ``d~`` independent width-1 RFSF copies,
    concatenated and scaled by ``1/sqrt(d~)``."""
    Xa = _as_batch(X)
    M = _check_weights(weights, n_levels, Xa.shape[2])
    q = weights.rff_dim
    scale = 1.0 / np.sqrt(q)

    def compute(Xc):
        n = Xc.shape[0]
        blocks = [np.full((n, q), scale)]
        U = []
        for m in range(M):
            proj = Xc @ weights[m]
            U.append(np.diff(np.stack([np.cos(proj), np.sin(proj)], axis=-1), axis=1))
        V = scale * U[0]
        blocks.append(slice_sum(V, 1).reshape(n, -1))
        for m in range(1, M):
            V = batch_outer(_exclusive_cumsum(V), U[m], axis=3)
            blocks.append(slice_sum(V, 1).reshape(n, -1))
        return blocks

    return LeveledFeatures("rfsf-dp", _run_chunks(compute, Xa, threads))


def rfsf_trp_features(weights: RandomFourierWeights, proj: TrpProjection, X,
                      n_levels: int | None = None, threads: int | None = None) -> LeveledFeatures:
    """RFSF followed by a rank-1 tensor random projection per output coordinate,
    computed without forming the tensors."""
    Xa = _as_batch(X)
    M = _check_weights(weights, n_levels, Xa.shape[2])
    q = weights.rff_dim
    if proj.n_levels < M:
        raise InvalidParameter(f"projection has {proj.n_levels} levels, need {M}")
    for m in range(M):
        if proj[m].shape != (2 * q, q):
            raise DimensionMismatch(f"projection level {m + 1} has shape {proj[m].shape}, expected {(2 * q, q)}")
    scale = 1.0 / np.sqrt(q)

    def compute(Xc):
        n = Xc.shape[0]
        blocks = [np.ones((n, 1))]
        U = [np.diff(rff_map(weights[m], Xc), axis=1) @ proj[m] for m in range(M)]
        V = scale * U[0]
        blocks.append(slice_sum(V, 1))
        for m in range(1, M):
            V = hadamard(_exclusive_cumsum(V), U[m])
            blocks.append(slice_sum(V, 1))
        return blocks

    return LeveledFeatures("rfsf-trp", _run_chunks(compute, Xa, threads))


def compute_features(method: str, X, weights: RandomFourierWeights, proj: TrpProjection | None = None,
                     n_levels: int | None = None, threads: int | None = None) -> LeveledFeatures:
    """Dispatch on ``method`` name."""
    _check_method(method)
    if method == "rfsf":
        return rfsf_features(weights, X, n_levels, threads)
    if method == "rfsf-dp":
        return rfsf_dp_features(weights, X, n_levels, threads)
    if proj is None:
        raise InvalidParameter("rfsf-trp needs a TrpProjection")
    return rfsf_trp_features(weights, proj, X, n_levels, threads)


def feature_gram(FX: LeveledFeatures, FY: LeveledFeatures | None = None, levels=None) -> np.ndarray:
    """Inner products of flattened features (level 0 always included)."""
    FY = FX if FY is None else FY
    if FX.method != FY.method or FX.widths[:len(FY.widths)] != FY.widths[:len(FX.widths)]:
        raise DimensionMismatch(f"incompatible features: {FX.method}{FX.widths} vs {FY.method}{FY.widths}")
    A = FX.flat(levels)
    B = FY.flat(levels)
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatch(f"feature widths differ: {A.shape[1]} vs {B.shape[1]}")
    return A @ B.T


def level_gram(FX: LeveledFeatures, FY: LeveledFeatures | None = None) -> np.ndarray:
    """Per-level inner products, shape ``(n_x, n_y, M + 1)``."""
    FY = FX if FY is None else FY
    if FX.widths != FY.widths:
        raise DimensionMismatch(f"feature widths differ: {FX.widths} vs {FY.widths}")
    return np.stack([a @ b.T for a, b in zip(FX.blocks, FY.blocks)], axis=-1)
