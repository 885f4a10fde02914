"""Truncated signature kernels on multivariate sequences, computed exactly by
dynamic programming or approximated with random Fourier signature features
(full tensor, diagonally projected and tensor-random-projected variants)."""
from .augment import (AugmentationSpec, add_basepoint, add_time, lead_lag,
                      normalize_features, normalize_kernel)
from .errors import (DataError, DegenerateBandwidth, DegenerateSequence, DegenerateTrajectory,
                     DimensionMismatch, FeatureSizeError, InvalidParameter, NormalizationError,
                     NumericDegeneracy, OracleTooLarge, ParseError, SigKernError)
from .features import (METHODS, LeveledFeatures, TrpProjection, batch_outer, compute_features,
                       cumsum, draw_random_maps, feature_gram, feature_width, hadamard, level_gram,
                       rfsf_dp_features, rfsf_features, rfsf_trp_features, sample_trp, shift,
                       slice_sum)
from .seq import RngStream, SequenceDataset, as_sequence, diff, one_variation, tabulate
from .sigkernel import (SigKernelConfig, bruteforce_levels, cross_diff, levels_from_cross_diff,
                        sig_gram, sig_kernel_bruteforce, sig_kernel_dp)
from .static import (RandomFourierWeights, RbfStaticKernel, median_heuristic, rbf_eval,
                     rff_kernel, rff_map, sample_spectral)
from .synth import (BenchResult, BenchRow, Var1Config, approx_error_study, loglog_slope,
                    var1_dataset, var1_generate)

__version__ = "0.1.0"
