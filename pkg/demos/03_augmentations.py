"""Augmentations change what the kernel can see.

A signature kernel is blind to how fast a path is traversed, since repeated
states contribute zero increments. Lead-lag and a basepoint keep that
blindness; a time coordinate breaks it, so the normalized similarity between
a path and its slowed-down copy drops below 1.
"""
import numpy as np

from sigkern import AugmentationSpec, RbfStaticKernel, SigKernelConfig, normalize_kernel, sig_gram

rng = np.random.default_rng(3)
path = np.cumsum(rng.normal(size=(8, 1)), axis=0)
slow = np.repeat(path, 3, axis=0)  # same route, three times slower
cfg = SigKernelConfig(3, RbfStaticKernel(1.0))

for name, spec in [("none", AugmentationSpec()),
                   ("time", AugmentationSpec(time_param=1.0)),
                   ("lead-lag", AugmentationSpec(lead_lag=True)),
                   ("basepoint", AugmentationSpec(basepoint=True))]:
    data = spec.apply([path, slow])
    G = sig_gram(cfg, data)
    N = normalize_kernel(G, np.diag(G), np.diag(G))
    print(f"{name:<10} dim={data.d}  k(path, slow)={G[0, 1]: .6f}  normalized={N[0, 1]: .6f}")
