"""qentwine: exact symbolic verification of entwining-structure bundles.

Builds quantum-cylinder / GL_q(2) / braided-line instances and machine
checks the axioms, propositions and explicit formulas that define them,
reporting exact counterexamples on failure.
"""

from ._kernel import BACKEND as KERNEL_BACKEND
from .scalars import Assignment, Scalar, parse_scalar, q_binom, q_factorial, q_int

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "Scalar",
    "Assignment",
    "parse_scalar",
    "q_int",
    "q_factorial",
    "q_binom",
]
