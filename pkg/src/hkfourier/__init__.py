"""Fourier transforms of functions that are not absolutely integrable.

Transforms of L1 + BV0 functions are computed as limits of truncated
integrals (with half-period aligned shells and sequence acceleration) and
through integration by parts, which turns them into absolutely convergent
integrals of the derivative.
"""

from .functions import CorpusEntry, RealFunction, cantor_eval, corpus, corpus_entry, multiply_by_t
from .hake import DivergenceError, HakeConfig, HakeSequence, accelerate, hake_limit
from .hk_core import Gauge, TaggedPartition, check_fineness, make_delta_fine_partition, riemann_sum
from .quadrature import QuadratureConfig, QuadratureResult, integrate_finite
from .transforms import (
    FrequencyDomainError,
    InternalConsistencyError,
    PreconditionError,
    TransformConfig,
    TransformResult,
    decay_profile,
    hkft_by_parts,
    hkft_cos,
    hkft_direct,
    hkft_even,
    hkft_odd,
    hkft_sin,
    transform,
    transform_derivative,
)

__version__ = "0.1.0"

__all__ = [
    "CorpusEntry", "RealFunction", "cantor_eval", "corpus", "corpus_entry", "multiply_by_t",
    "DivergenceError", "HakeConfig", "HakeSequence", "accelerate", "hake_limit",
    "Gauge", "TaggedPartition", "check_fineness", "make_delta_fine_partition", "riemann_sum",
    "QuadratureConfig", "QuadratureResult", "integrate_finite",
    "FrequencyDomainError", "InternalConsistencyError", "PreconditionError",
    "TransformConfig", "TransformResult", "decay_profile",
    "hkft_by_parts", "hkft_cos", "hkft_direct", "hkft_even", "hkft_odd", "hkft_sin",
    "transform", "transform_derivative",
]
