"""VAR(1) synthetic sequences and the approximation-error benchmark of the
random signature kernels against the exact one."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .augment import AugmentationSpec
from .errors import DegenerateTrajectory, InvalidParameter, NumericDegeneracy
from .features import compute_features, draw_random_maps
from .seq import RngStream, SequenceDataset, one_variation
from .sigkernel import SigKernelConfig, sig_kernel_dp
from .static import RbfStaticKernel, median_heuristic

__all__ = [
    "Var1Config",
    "var1_generate",
    "var1_dataset",
    "BenchRow",
    "BenchResult",
    "approx_error_study",
    "loglog_slope",
    "BENCH_METHODS",
]

BENCH_METHODS = ("rfsf-dp", "rfsf-trp")

# stream-id prefixes under the master seed
_DATA, _MAPS, _BANDWIDTH = 1, 2, 3


@dataclass(frozen=True)
class Var1Config:
    """VAR(1) generator settings.

    ``length`` counts recursion steps; with ``include_start`` the emitted
    sequence also carries the zero initial state and has ``length + 1`` rows.
    """

    d: int = 10
    length: int = 100
    noise: float = 0.1
    one_var: float = 100.0
    seed: int = 0
    include_start: bool = True

    def __post_init__(self):
        if self.d < 1 or self.length < 1:
            raise InvalidParameter(f"d and length must be >= 1, got d={self.d}, length={self.length}")
        if self.noise < 0:
            raise InvalidParameter(f"noise scale must be >= 0, got {self.noise}")
        if not self.one_var > 0:
            raise InvalidParameter(f"target 1-variation must be > 0, got {self.one_var}")


def var1_generate(cfg: Var1Config, rng: RngStream | None = None) -> np.ndarray:
    """One trajectory ``x[t+1] = A x[t] / sqrt(d) + eps[t]`` from ``x[0] = 0``,
    rescaled to 1-variation ``cfg.one_var``.

    ``A`` has iid standard normal entries, ``eps[t] ~ N(0, noise^2 I)``.

    Raises
    ------
    DegenerateTrajectory
        If the raw trajectory has zero 1-variation (e.g. ``noise == 0``).
    """
    gen = (rng or RngStream(cfg.seed)).generator()
    d = cfg.d
    A = gen.standard_normal((d, d))
    eps = gen.standard_normal((cfg.length, d)) * cfg.noise
    x = np.zeros((cfg.length + 1, d))
    for t in range(cfg.length):
        x[t + 1] = A @ x[t] / np.sqrt(d) + eps[t]
    if not cfg.include_start:
        x = x[1:]
    v = one_variation(x)
    if not (np.isfinite(v) and v > 0):
        raise DegenerateTrajectory("VAR(1) trajectory has zero 1-variation and cannot be rescaled")
    return cfg.one_var * x / v


def var1_dataset(cfg: Var1Config, n: int) -> SequenceDataset:
    """``n`` independent trajectories; trajectory ``k`` uses stream ``(1, k)``."""
    if n < 1:
        raise InvalidParameter(f"number of sequences must be >= 1, got {n}")
    root = RngStream(cfg.seed)
    return SequenceDataset(var1_generate(cfg, root.child(_DATA, k)) for k in range(n))


@dataclass(frozen=True)
class BenchRow:
    method: str
    trunc: int
    rff_dim: int
    mse_mean: float
    mse_std: float
    n_eval: int


@dataclass
class BenchResult:
    rows: list = field(default_factory=list)
    bandwidth: float | None = None

    def select(self, method: str, trunc: int) -> list:
        return sorted((r for r in self.rows if r.method == method and r.trunc == trunc),
                      key=lambda r: r.rff_dim)

    def cells(self) -> list:
        seen = []
        for r in self.rows:
            if (r.method, r.trunc) not in seen:
                seen.append((r.method, r.trunc))
        return seen


def approx_error_study(data_cfg: Var1Config, methods=BENCH_METHODS, truncs=(2, 3),
                       rff_dims=(16, 32, 64, 128, 256, 512), n_pairs: int = 100,
                       n_resamples: int = 100, alpha: float = 1.0, bandwidth: float | None = None,
                       augment: AugmentationSpec | None = None, threads: int | None = None) -> BenchResult:
    """Squared error of random signature kernels against the exact truncated kernel.

    ``2 * n_pairs`` trajectories are drawn from ``data_cfg`` and paired up.
    For every ``(method, M, d~)`` and pair, ``n_resamples`` independent random
    maps are drawn; each draw is keyed by
    ``(method, M, d~, pair, resample)`` under ``data_cfg.seed``, so the
    result does not depend on ``threads``. The bandwidth is ``bandwidth`` if
    given, else the median heuristic with ``alpha`` over all trajectories.
    """
    methods = tuple(methods)
    for m in methods:
        if m not in BENCH_METHODS:
            raise InvalidParameter(f"benchmark methods must be among {BENCH_METHODS}, got {m!r}")
    truncs = tuple(int(m) for m in truncs)
    rff_dims = tuple(int(q) for q in rff_dims)
    if not methods or not truncs or not rff_dims:
        raise InvalidParameter("methods, truncation levels and RFF dimensions must be nonempty")
    if n_pairs < 1 or n_resamples < 1:
        raise InvalidParameter("n_pairs and n_resamples must be >= 1")

    root = RngStream(data_cfg.seed)
    data = var1_dataset(data_cfg, 2 * n_pairs)
    if augment is not None:
        data = augment.apply(data)
    if bandwidth is None:
        bandwidth = median_heuristic(data, alpha, rng=root.child(_BANDWIDTH))
    static = RbfStaticKernel(bandwidth)
    top = max(truncs)
    cfg = SigKernelConfig(top, static)
    pairs = [(data[2 * p], data[2 * p + 1]) for p in range(n_pairs)]

    def pair_errors(p):
        x, y = pairs[p]
        # exact levels once per pair; reused by every resample
        exact = np.cumsum(sig_kernel_dp(cfg, x, y))
        errs = {}
        for mi, method in enumerate(BENCH_METHODS):
            if method not in methods:
                continue
            for M in truncs:
                for q in rff_dims:
                    e = np.empty(n_resamples)
                    for r in range(n_resamples):
                        stream = root.child(_MAPS, mi, M, q, p, r)
                        W, P = draw_random_maps(method, bandwidth, x.shape[1], q, M, stream)
                        F = compute_features(method, [x, y], W, P, M)
                        flat = F.flat()
                        e[r] = (flat[0] @ flat[1] - exact[M]) ** 2
                    errs[method, M, q] = e
        return errs

    if threads is not None and threads > 1 and n_pairs > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_pair = list(pool.map(pair_errors, range(n_pairs)))
    else:
        per_pair = [pair_errors(p) for p in range(n_pairs)]

    rows = []
    for method in methods:
        for M in truncs:
            for q in rff_dims:
                e = np.concatenate([pp[method, M, q] for pp in per_pair])
                rows.append(BenchRow(method, M, q, float(e.mean()), float(e.std()), int(e.size)))
    return BenchResult(rows, float(bandwidth))


def loglog_slope(result: BenchResult, method: str, trunc: int) -> float:
    """Least-squares slope of ``log(mse_mean)`` against ``log(rff_dim)``."""
    rows = result.select(method, trunc)
    if len(rows) < 3:
        raise InvalidParameter(f"need >= 3 RFF dimensions for a slope, got {len(rows)}")
    q = np.array([r.rff_dim for r in rows], dtype=float)
    mse = np.array([r.mse_mean for r in rows], dtype=float)
    if np.any(mse <= 0):
        raise NumericDegeneracy("mse must be positive to take logarithms")
    return float(np.polyfit(np.log(q), np.log(mse), 1)[0])
