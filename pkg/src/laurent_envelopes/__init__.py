"""Two-sided polynomial envelopes for tan, sec, cot, cosec and x**-p J_p(x).

The pieces, bottom up: exact even zeta values (``special_values``), the
expansion coefficients with an independent direct-sum oracle
(``coefficients``), the bounds themselves (``envelopes``), the Bessel
analogue (``bessel``) and the property sweeps behind ``verify``.
"""

from ._kernels import BACKEND
from .bessel import (
    BesselExpansion,
    UnsupportedRangeError,
    bessel_bounds,
    bessel_j_normalized,
    build_expansion,
    first_zero,
)
from .coefficients import (
    CoefficientTable,
    Family,
    Method,
    OutOfRangeError,
    RemainderConstants,
    ShiftedTable,
    coeff_closed,
    coeff_direct,
    coefficient_table,
    remainder_constant,
    remainder_constants,
    shifted_direct,
    shifted_recursive,
)
from .envelopes import (
    BoundValue,
    DomainError,
    Envelope,
    EnvelopeQuery,
    Side,
    UnsupportedOptionError,
    bound,
    crossover_report,
    envelope,
    partial_expansion,
    reference_value,
    remainder_magnitude_bound,
    shifted_expansion,
    taylor_partial,
)
from .special_values import EvenZetaCache, bernoulli_even, build_even_zeta_cache

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BesselExpansion",
    "BoundValue",
    "CoefficientTable",
    "DomainError",
    "Envelope",
    "EnvelopeQuery",
    "EvenZetaCache",
    "Family",
    "Method",
    "OutOfRangeError",
    "RemainderConstants",
    "ShiftedTable",
    "Side",
    "UnsupportedOptionError",
    "UnsupportedRangeError",
    "bernoulli_even",
    "bessel_bounds",
    "bessel_j_normalized",
    "bound",
    "build_even_zeta_cache",
    "build_expansion",
    "coeff_closed",
    "coeff_direct",
    "coefficient_table",
    "crossover_report",
    "envelope",
    "first_zero",
    "partial_expansion",
    "reference_value",
    "remainder_constant",
    "remainder_constants",
    "remainder_magnitude_bound",
    "shifted_direct",
    "shifted_expansion",
    "shifted_recursive",
    "taylor_partial",
]
