"""``sigkern`` command line: generate, features, gram, bench.

Every command is a pure function of its flags and input files. The default
seed comes from ``SIGKERN_SEED`` (0 when unset); ``--threads`` only changes
scheduling, never results.

Exit codes: 0 success, 2 usage, 3 data or I/O, 4 numeric degeneracy.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import io as sio
from .augment import AugmentationSpec, normalize_features, normalize_kernel
from .errors import DataError, InvalidParameter, NumericDegeneracy, SigKernError
from .features import compute_features, draw_random_maps
from .seq import RngStream, SequenceDataset, tabulate
from .sigkernel import SigKernelConfig, sig_gram
from .static import RbfStaticKernel, median_heuristic, rff_map, sample_spectral
from .synth import Var1Config, approx_error_study, loglog_slope, var1_dataset

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 2, 3, 4
SEED_ENV = "SIGKERN_SEED"
GRAM_METHODS = ("ksig", "rfsf-dp", "rfsf-trp", "rff-flat", "rbf-flat")
FEATURE_METHODS = ("rfsf-dp", "rfsf-trp")

# child stream of the run seed used for median-heuristic subsampling
_BANDWIDTH_STREAM = 3


class UsageError(SigKernError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class RunConfig:
    """Resolved parameters of one invocation; paths and threads aside, this
    is everything the output depends on."""

    command: str
    seed: int
    params: dict = field(default_factory=dict)
    augment: AugmentationSpec = AugmentationSpec()

    def __getattr__(self, name):
        try:
            return self.params[name]
        except KeyError:
            raise AttributeError(name) from None


# -- argument types -----------------------------------------------------------

def _positive_int(s):
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _positive_float(s):
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {s!r}") from None
    if not (np.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"must be a positive finite number, got {s!r}")
    return v


def _nonneg_float(s):
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {s!r}") from None
    if not (np.isfinite(v) and v >= 0):
        raise argparse.ArgumentTypeError(f"must be a nonnegative finite number, got {s!r}")
    return v


def _int_list(s):
    return [_positive_int(p) for p in s.split(",") if p.strip()]


def _choice_list(choices):
    def parse(s):
        items = [p.strip() for p in s.split(",") if p.strip()]
        for it in items:
            if it not in choices:
                raise argparse.ArgumentTypeError(f"invalid choice {it!r} (choose from {', '.join(choices)})")
        return items
    return parse


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return 0
    try:
        v = int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be a nonnegative integer, got {raw!r}") from None
    if v < 0:
        raise UsageError(f"{SEED_ENV} must be a nonnegative integer, got {raw!r}")
    return v


# -- parser -------------------------------------------------------------------

def _add_common(p):
    p.add_argument("-o", "--output", default="-", help="output path ('-' for stdout)")
    p.add_argument("--seed", type=int, default=None, help=f"master seed (default: ${SEED_ENV} or 0)")
    p.add_argument("--threads", type=_positive_int, default=None, help="worker threads (default: all cores)")


def _add_bandwidth(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--bandwidth", type=_positive_float, help="static RBF bandwidth")
    g.add_argument("--alpha", type=_positive_float, help="median heuristic scale (default 1)")


def _add_augment(p):
    p.add_argument("--time", type=_positive_float, default=None, metavar="BETA",
                   help="prepend a time coordinate of intensity BETA")
    p.add_argument("--basepoint", action="store_true", help="prepend a zero state")
    p.add_argument("--lead-lag", action="store_true", help="lead-lag embedding")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sigkern", description="Truncated signature kernels and random signature features.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="VAR(1) sequences as long-format CSV")
    g.add_argument("--n", type=_positive_int, required=True, help="number of sequences")
    g.add_argument("--d", type=_positive_int, default=10)
    g.add_argument("--len", type=_positive_int, default=100, dest="length", help="recursion steps")
    g.add_argument("--sigma", type=_nonneg_float, default=0.1, help="noise scale")
    g.add_argument("--one-var", type=_positive_float, default=100.0, help="target 1-variation")
    g.add_argument("--drop-start", action="store_true", help="omit the zero initial state")
    _add_common(g)

    f = sub.add_parser("features", help="random signature features of a sequence CSV")
    f.add_argument("input")
    f.add_argument("--method", choices=FEATURE_METHODS, default="rfsf-trp")
    f.add_argument("--trunc", type=_positive_int, default=3, help="truncation level M")
    f.add_argument("--rff-dim", type=_positive_int, default=64)
    f.add_argument("--normalize", action="store_true", help="scale rows to unit norm")
    _add_bandwidth(f)
    _add_augment(f)
    _add_common(f)

    k = sub.add_parser("gram", help="Gram matrix of one or two sequence CSVs")
    k.add_argument("input")
    k.add_argument("input2", nargs="?", default=None)
    k.add_argument("--method", choices=GRAM_METHODS, default="ksig")
    k.add_argument("--trunc", type=_positive_int, default=3, help="truncation level M")
    k.add_argument("--rff-dim", type=_positive_int, default=64)
    k.add_argument("--normalize", action="store_true", help="unit diagonal normalization")
    _add_bandwidth(k)
    _add_augment(k)
    _add_common(k)

    b = sub.add_parser("bench", help="approximation error against RFF dimension")
    b.add_argument("--methods", type=_choice_list(FEATURE_METHODS), default=list(FEATURE_METHODS))
    b.add_argument("--truncs", type=_int_list, default=[2, 3])
    b.add_argument("--rff-dims", type=_int_list, default=[16, 32, 64, 128, 256, 512])
    b.add_argument("--pairs", type=_positive_int, default=20)
    b.add_argument("--resamples", type=_positive_int, default=20)
    b.add_argument("--d", type=_positive_int, default=10)
    b.add_argument("--len", type=_positive_int, default=100, dest="length")
    b.add_argument("--sigma", type=_nonneg_float, default=0.1, help="noise scale")
    b.add_argument("--one-var", type=_positive_float, default=100.0)
    b.add_argument("--slopes", default=None, help="also write per-(method, trunc) log-log slopes here")
    _add_bandwidth(b)
    _add_augment(b)
    _add_common(b)
    return parser


def _to_config(args) -> RunConfig:
    seed = _default_seed() if args.seed is None else args.seed
    if seed < 0:
        raise UsageError("--seed must be nonnegative")
    skip = {"command", "seed", "threads", "output", "time", "basepoint", "lead_lag"}
    params = {k: v for k, v in vars(args).items() if k not in skip}
    aug = AugmentationSpec(getattr(args, "time", None), getattr(args, "basepoint", False),
                           getattr(args, "lead_lag", False))
    if "alpha" in params and params["alpha"] is None and params.get("bandwidth") is None:
        params["alpha"] = 1.0
    return RunConfig(args.command, seed, params, aug)


# -- commands -----------------------------------------------------------------

def _bandwidth(cfg: RunConfig, data: SequenceDataset) -> float:
    if cfg.bandwidth is not None:
        return cfg.bandwidth
    return median_heuristic(data, cfg.alpha, rng=RngStream(cfg.seed).child(_BANDWIDTH_STREAM))


def cmd_generate(cfg: RunConfig, out, threads=None):
    vcfg = Var1Config(cfg.d, cfg.length, cfg.sigma, cfg.one_var, cfg.seed, not cfg.drop_start)
    sio.write_sequences_csv(out, var1_dataset(vcfg, cfg.n))


def _features(cfg: RunConfig, data, bandwidth, threads, normalize=None):
    W, P = draw_random_maps(cfg.method, bandwidth, data.d, cfg.rff_dim, cfg.trunc, RngStream(cfg.seed))
    F = compute_features(cfg.method, data, W, P, cfg.trunc, threads).flat()
    normalize = cfg.normalize if normalize is None else normalize
    return normalize_features(F) if normalize else F


def cmd_features(cfg: RunConfig, out, threads=None):
    ids, data = sio.read_sequences_csv(cfg.input)
    data = cfg.augment.apply(data)
    F = _features(cfg, data, _bandwidth(cfg, data), threads)
    sio.write_features_csv(out, F, ids)


def _flatten(X, Y):
    # flat methods see each sequence as one long vector of a common length
    length = max(X.max_len, Y.max_len)
    fx = tabulate(X, length).to_array().reshape(len(X), -1)
    fy = tabulate(Y, length).to_array().reshape(len(Y), -1)
    return fx, fy


def cmd_gram(cfg: RunConfig, out, threads=None):
    _, X = sio.read_sequences_csv(cfg.input)
    Y = X if cfg.input2 is None else sio.read_sequences_csv(cfg.input2)[1]
    X = cfg.augment.apply(X)
    Y = X if cfg.input2 is None else cfg.augment.apply(Y)
    if X.d != Y.d:
        raise DataError(f"inputs have different state dimensions: {X.d} vs {Y.d}")
    pooled = X if cfg.input2 is None else SequenceDataset(list(X) + list(Y))
    method = cfg.method

    if method in ("ksig", "rfsf-dp", "rfsf-trp"):
        bw = _bandwidth(cfg, pooled)
        if method == "ksig":
            kcfg = SigKernelConfig(cfg.trunc, RbfStaticKernel(bw))
            G = sig_gram(kcfg, X, None if cfg.input2 is None else Y, threads)
            if cfg.normalize:
                dx = np.diag(G) if cfg.input2 is None else _ksig_diag(kcfg, X, threads)
                dy = dx if cfg.input2 is None else _ksig_diag(kcfg, Y, threads)
                G = normalize_kernel(G, dx, dy)
        else:
            both = _features(cfg, pooled, bw, threads, normalize=False)
            FX = both[:len(X)]
            FY = FX if cfg.input2 is None else both[len(X):]
            G = FX @ FY.T
            if cfg.normalize:
                dx = np.diag(G) if cfg.input2 is None else np.einsum("ij,ij->i", FX, FX)
                dy = dx if cfg.input2 is None else np.einsum("ij,ij->i", FY, FY)
                G = normalize_kernel(G, dx, dy)
    else:
        fx, fy = _flatten(X, Y)
        flat = fx if cfg.input2 is None else np.vstack([fx, fy])
        bw = _bandwidth(cfg, SequenceDataset(list(flat)))
        if method == "rbf-flat":
            G = RbfStaticKernel(bw).gram(fx, fy)
        else:
            W = sample_spectral(bw, fx.shape[1], cfg.rff_dim, 1, RngStream(cfg.seed))[0]
            ax, ay = rff_map(W, fx), rff_map(W, fy)
            G = ax @ ay.T
        # both flat kernels have unit diagonal already
    sio.write_gram_csv(out, G)


def _ksig_diag(kcfg, data, threads):
    return np.array([sig_gram(kcfg, data[i:i + 1], threads=threads)[0, 0] for i in range(len(data))])


def cmd_bench(cfg: RunConfig, out, threads=None):
    vcfg = Var1Config(cfg.d, cfg.length, cfg.sigma, cfg.one_var, cfg.seed)
    res = approx_error_study(vcfg, cfg.methods, cfg.truncs, cfg.rff_dims, cfg.pairs, cfg.resamples,
                             alpha=cfg.alpha if cfg.alpha is not None else 1.0, bandwidth=cfg.bandwidth,
                             augment=None if cfg.augment.is_identity else cfg.augment, threads=threads)
    sio.write_bench_csv(out, res)
    if cfg.slopes is not None:
        if len(set(cfg.rff_dims)) < 3:
            raise InvalidParameter("--slopes needs at least 3 distinct RFF dimensions")
        slopes = {cell: loglog_slope(res, *cell) for cell in res.cells()}
        sio.write_slopes_csv(cfg.slopes, slopes)


COMMANDS = {"generate": cmd_generate, "features": cmd_features, "gram": cmd_gram, "bench": cmd_bench}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = _to_config(args)
    threads = args.threads or os.cpu_count() or 1
    fn = COMMANDS[cfg.command]
    if args.output == "-":
        fn(cfg, sys.stdout, threads)
        sys.stdout.flush()
    else:
        with open(args.output, "w", newline="", encoding="utf-8") as fh:
            fn(cfg, fh, threads)
    return 0


def _fail(code, message) -> int:
    msg = " ".join(str(message).split())
    print(f"error: {msg}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        return run(argv)
    except (UsageError, InvalidParameter) as e:
        return _fail(EXIT_USAGE, e)
    except NumericDegeneracy as e:
        return _fail(EXIT_NUMERIC, e)
    except DataError as e:
        return _fail(EXIT_DATA, e)
    except OSError as e:
        return _fail(EXIT_DATA, f"{e.strerror or e}: {e.filename}" if e.filename else e)
    except SigKernError as e:
        return _fail(EXIT_USAGE, e)
