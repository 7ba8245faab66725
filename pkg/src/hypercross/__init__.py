"""Approximation of mixed-smoothness periodic functions by hyperbolic-cross partial sums."""

from .modulus import MixedModulus, check_modulus_axioms, check_S_conditions, omega1_derived, power, power_log
from .norms import (mixed_lebesgue_norm, mixed_lorentz_norm, sequence_norm, tensor_lebesgue_norm,
                    tensor_lorentz_norm)
from .spectral import CoefficientTensor, SampleGrid, analyze, dyadic_block, synthesize
from .index_sets import gamma_set, kappa_set, lambda_set, q_set

__all__ = [
    "CoefficientTensor", "SampleGrid", "analyze", "synthesize", "dyadic_block",
    "MixedModulus", "power", "power_log", "omega1_derived", "check_modulus_axioms", "check_S_conditions",
    "mixed_lorentz_norm", "mixed_lebesgue_norm", "sequence_norm", "tensor_lorentz_norm", "tensor_lebesgue_norm",
    "gamma_set", "lambda_set", "q_set", "kappa_set",
]
__version__ = "0.1.0"
