"""Gaussian static kernel, its spectral sampler, random Fourier features and the
median-heuristic bandwidth."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBandwidth, DimensionMismatch, InvalidParameter
from .seq import RngStream, SequenceDataset

__all__ = [
    "RbfStaticKernel",
    "RandomFourierWeights",
    "rbf_eval",
    "sample_spectral",
    "rff_map",
    "rff_kernel",
    "median_heuristic",
]


@dataclass(frozen=True)
class RbfStaticKernel:
    """Gaussian kernel ``exp(-|x - y|^2 / (2 sigma^2))``."""

    bandwidth: float

    def __post_init__(self):
        if not (np.isfinite(self.bandwidth) and self.bandwidth > 0):
            raise InvalidParameter(f"bandwidth must be a positive finite number, got {self.bandwidth}")

    def __call__(self, x, y):
        return rbf_eval(self, x, y)

    def gram(self, X, Y) -> np.ndarray:
        """Kernel matrix between row sets ``X (..., n, d)`` and ``Y (..., m, d)``.

        Leading batch axes broadcast.
        """
        X = np.asarray(X, dtype=np.float64)
        Y = np.asarray(Y, dtype=np.float64)
        if X.shape[-1] != Y.shape[-1]:
            raise DimensionMismatch(f"state dimensions differ: {X.shape[-1]} vs {Y.shape[-1]}")
        # direct differences: the |x|^2 + |y|^2 - 2<x, y> expansion loses
        # digits for nearby states, which cross differencing amplifies
        diff = X[..., :, None, :] - Y[..., None, :, :]
        sq = np.einsum("...k,...k->...", diff, diff)
        return np.exp(-sq / (2.0 * self.bandwidth**2))

    @property
    def lipschitz(self) -> float:
        """Lipschitz constant of the canonical feature map, ``1 / sigma``."""
        return 1.0 / self.bandwidth


def rbf_eval(kernel: RbfStaticKernel, x, y) -> float:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise DimensionMismatch(f"shape mismatch {x.shape} vs {y.shape}")
    diff = x - y
    return float(np.exp(-np.dot(diff.ravel(), diff.ravel()) / (2.0 * kernel.bandwidth**2)))


@dataclass(frozen=True)
class RandomFourierWeights:
    """Per-level frequency matrices ``W[m]`` of shape ``(d, rff_dim)``.

    ``levels[0]`` is the first signature level.
    """

    levels: tuple
    bandwidth: float
    seed: int | None = None

    @property
    def n_levels(self) -> int:
        return len(self.levels)

    @property
    def d(self) -> int:
        return self.levels[0].shape[0]

    @property
    def rff_dim(self) -> int:
        return self.levels[0].shape[1]

    def __getitem__(self, m: int) -> np.ndarray:
        return self.levels[m]


def sample_spectral(bandwidth: float, d: int, rff_dim: int, n_levels: int,
                    rng: RngStream | int = 0, first_stream: int = 1) -> RandomFourierWeights:
    """Draw ``n_levels`` independent ``(d, rff_dim)`` matrices with iid
    ``N(0, 1/bandwidth^2)`` entries.

    Level ``m`` (1-based) is drawn from stream ``m + first_stream - 1`` of the
    given stream's seed, so adding levels leaves earlier draws untouched.
    """
    RbfStaticKernel(bandwidth)
    for name, v in (("d", d), ("rff_dim", rff_dim), ("n_levels", n_levels)):
        if int(v) < 1:
            raise InvalidParameter(f"{name} must be >= 1, got {v}")
    if not isinstance(rng, RngStream):
        rng = RngStream(int(rng))
    mats = []
    for m in range(1, n_levels + 1):
        gen = rng.child(m + first_stream - 1).generator()
        W = gen.standard_normal((d, rff_dim)) / bandwidth
        W.setflags(write=False)
        mats.append(W)
    return RandomFourierWeights(tuple(mats), float(bandwidth), rng.seed)


def rff_map(W, x) -> np.ndarray:
    """Random Fourier features ``(cos(W^T x), sin(W^T x)) / sqrt(rff_dim)``.

    ``x`` may be a single state ``(d,)`` or a stack ``(..., d)``; the output
    has trailing size ``2 * rff_dim`` with the cosines first.
    """
    W = np.asarray(W, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != W.shape[0]:
        raise DimensionMismatch(f"state dimension {x.shape[-1]} does not match weights {W.shape[0]}")
    proj = x @ W
    return np.concatenate([np.cos(proj), np.sin(proj)], axis=-1) / np.sqrt(W.shape[1])


def rff_kernel(W, x, y) -> float:
    """Inner product of random Fourier features of two states.

    Evaluated as ``mean(cos(W^T (x - y)))``, which equals the feature inner
    product by the angle-difference identity and depends on the inputs only
    through ``x - y``.
    """
    W = np.asarray(W, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.shape[-1] != W.shape[0]:
        raise DimensionMismatch(f"shapes {x.shape}, {y.shape} incompatible with weights {W.shape}")
    return float(np.mean(np.cos((x - y) @ W)))


def median_heuristic(dataset, alpha: float = 1.0, subsample_cap: int = 10**6,
                     rng: RngStream | int = 0, same_sequence: bool = True) -> float:
    """Rescaled median heuristic ``alpha * median(|x_i - x'_j| / 2)``.

    The median runs over state pairs ``(x_i, x'_j)`` for all ordered sequence
    pairs ``(x, x')``. With ``same_sequence=True`` the pair ``x = x'`` is
    included, which makes the index set the full Cartesian square of the state
    pool. For an even number of distances the upper median is taken, so a
    two-point pool gives half their distance and duplicating the dataset
    leaves the result unchanged.

    When the pair count exceeds ``subsample_cap``, ``subsample_cap`` pairs
    are drawn uniformly with replacement from the seeded stream.
    """
    if not alpha > 0:
        raise InvalidParameter(f"alpha must be > 0, got {alpha}")
    if not isinstance(dataset, SequenceDataset):
        dataset = SequenceDataset(dataset)
    if not isinstance(rng, RngStream):
        rng = RngStream(int(rng))
    states = np.concatenate(dataset.sequences, axis=0)
    owner = np.repeat(np.arange(len(dataset)), dataset.lengths)
    n = states.shape[0]
    if same_sequence:
        n_pairs = n * n
    else:
        n_pairs = n * n - int(np.sum(dataset.lengths.astype(np.int64) ** 2))
    if n_pairs == 0:
        raise DegenerateBandwidth("no admissible state pairs for the median heuristic")

    if n_pairs <= subsample_cap:
        dists = _pair_dists_chunked(states, owner, same_sequence)
    else:
        gen = rng.generator()
        i = gen.integers(0, n, size=subsample_cap)
        j = gen.integers(0, n, size=subsample_cap)
        if not same_sequence:
            bad = owner[i] == owner[j]
            while np.any(bad):
                i[bad] = gen.integers(0, n, size=int(bad.sum()))
                j[bad] = gen.integers(0, n, size=int(bad.sum()))
                bad = owner[i] == owner[j]
        dists = np.linalg.norm(states[i] - states[j], axis=-1)

    sigma = alpha * _upper_median(dists) / 2.0
    if not sigma > 0:
        raise DegenerateBandwidth("median pairwise state distance is zero; all states (nearly) identical")
    return float(sigma)


def _upper_median(values: np.ndarray) -> float:
    k = values.size // 2
    return float(np.partition(values, k)[k])


def _pair_dists_chunked(states, owner, same_sequence, chunk=256):
    out = []
    for start in range(0, states.shape[0], chunk):
        block = states[start:start + chunk]
        dd = np.linalg.norm(block[:, None, :] - states[None, :, :], axis=-1)
        if not same_sequence:
            dd = dd[owner[start:start + chunk, None] != owner[None, :]]
        out.append(dd.ravel())
    return np.concatenate(out)
