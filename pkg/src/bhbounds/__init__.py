"""Certified upper bounds for multilinear Bohnenblust--Hille constants."""

from .certificate import BoundCertificate, Evaluator, Interp, Leaf, Split
from .exponents import (
    ExponentTuple,
    ScalarField,
    WeightVector,
    classical_tuple,
    interpolate,
    make_tuple,
    prop21_tuple,
    solve_weights,
)
from .interpolation import (
    GeneratorFamily,
    constant_of_weights,
    default_family,
    family_from_tuples,
    optimize_decomposition,
)
from .intervals import BoundInterval
from .khinchin import gamma, haagerup_threshold, rademacher_constant, steinhaus_constant
from .recurrence import base_constant, best_constant, classical_table, split_bound
from .verifier import FormTensor, campaign, mixed_norm, sup_norm_complex_ascent, sup_norm_real

__version__ = "0.1.0"
