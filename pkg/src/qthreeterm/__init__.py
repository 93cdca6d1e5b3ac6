"""Exact three-term relations for the basic hypergeometric series 2phi1.

Modules:
    qcore       q-shifted factorials, certified values, generic points
    poly        polynomials and rational functions in x
    series      truncated and Laurent series, certified hypergeometric sums
    threeterm   closed forms of P, Q, R and their checks
    transforms  transformation and summation formulas with certified bounds
    contiguity  q-difference operators on the four local solutions
    suites      grid runners used by the command line
    cli         command-line front end
"""

from .qcore import DEFAULT_POINT, BoundedValue, GenericPoint, NonGenericError, qpoch, rqpoch
from .threeterm import ShiftQuad, compute_P_proposition, compute_P_theorem, compute_Q, compute_R

__all__ = [
    "DEFAULT_POINT",
    "BoundedValue",
    "GenericPoint",
    "NonGenericError",
    "ShiftQuad",
    "compute_P_proposition",
    "compute_P_theorem",
    "compute_Q",
    "compute_R",
    "qpoch",
    "rqpoch",
]
