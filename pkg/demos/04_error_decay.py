"""Approximation error against RFF dimension on VAR(1) data.

A reduced version of the error-decay study: pairs of 10-dimensional VAR(1)
trajectories, several independent random maps per pair, and the mean squared
deviation from the exact kernel as the RFF dimension doubles. On log-log axes
the curves are close to straight lines with negative slope.
Pass --full for 20 pairs x 20 resamples (a couple of minutes).
"""
import sys

from sigkern import Var1Config, approx_error_study, loglog_slope

full = "--full" in sys.argv
res = approx_error_study(Var1Config(d=10, length=100, noise=0.1, one_var=100.0, seed=0),
                         truncs=(2, 3), rff_dims=(16, 32, 64, 128, 256, 512),
                         n_pairs=20 if full else 4, n_resamples=20 if full else 5)
print(f"bandwidth {res.bandwidth:.4f}")
for method, M in res.cells():
    rows = res.select(method, M)
    curve = "  ".join(f"{r.rff_dim}:{r.mse_mean:.3g}" for r in rows)
    print(f"{method:<9} M={M}  slope {loglog_slope(res, method, M):+.2f}   {curve}")
