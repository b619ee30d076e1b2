"""Error types shared across the package.

The CLI maps these onto exit codes: input problems exit 1, violated
invariants exit 2, exhausted budgets or searches exit 3.
"""

from __future__ import annotations


class UnitCoverError(Exception):
    """Base class for all package errors."""


class InputError(UnitCoverError):
    """Malformed input: bad rational string, missing field, wrong shape."""


class OutsideBasis(InputError):
    """A prime factor of the input is not in the group's prime basis."""

    def __init__(self, prime: int, value=None):
        self.prime = prime
        self.value = value
        msg = f"prime {prime} outside basis"
        if value is not None:
            msg += f" (while factoring {value})"
        super().__init__(msg)


class NotASolution(InputError):
    """The supplied tuple does not satisfy the equation."""


class ZeroPoint(InputError):
    """A zero vector was supplied where only nonzero points are allowed."""


class ShapeMismatch(InputError):
    """Matrix or vector dimensions do not line up."""


class VerificationError(UnitCoverError):
    """An invariant that must hold by construction failed to verify."""


class FullRank(VerificationError):
    """The kernel requested from a matrix is trivial."""


class TooFewRows(UnitCoverError):
    """Too few rows for the degeneracy condition to say anything."""


class ZeroNormal(VerificationError):
    """A covering hyperplane came out with a zero normal vector."""


class BudgetExceeded(UnitCoverError):
    """A configured search or enumeration budget would be exceeded."""

    def __init__(self, needed, budget, what: str = "search space"):
        self.needed = needed
        self.budget = budget
        super().__init__(f"{what} of size {needed} exceeds budget {budget}")


class NotFound(UnitCoverError):
    """A bounded search ended without finding what was asked for."""


class LimitExceeded(UnitCoverError):
    """An exact cover exists but is larger than the requested limit."""

    def __init__(self, lower_bound: int, limit: int):
        self.lower_bound = lower_bound
        self.limit = limit
        super().__init__(f"minimal cover needs {lower_bound} subspaces, limit was {limit}")
