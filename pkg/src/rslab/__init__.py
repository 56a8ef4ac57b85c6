"""Rankin-Selberg coefficient machinery at desk scale.

Library plus CLI for:

* prime-ideal arithmetic over Q and class-number-one quadratic fields,
* Satake-parameter models and Rankin-Selberg coefficient recursions,
* the order-k character power sieve and its detection inequality,
* truncated Euler products over prime-power coefficients,
* smoothed coefficient sums, orthogonality sums, and multiplicity-one
  searches,
* GUE pair/triple correlation statistics for critical-line zeros.
"""

__version__ = "0.1.0"

from .util import ContractError, InputError

__all__ = ["ContractError", "InputError", "__version__"]
