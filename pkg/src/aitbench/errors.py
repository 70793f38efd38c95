"""Exception types shared across the package.

Budget-related aborts of the reference machine are ordinary result values,
not exceptions.  Exceptions are reserved for contract violations: malformed
inputs, incompatible tables, or queries the backing table cannot certify.
"""

from __future__ import annotations


class AitbenchError(Exception):
    """Base class for all package errors."""


class MalformedCode(AitbenchError):
    """A bit string does not parse as the expected self-delimiting code."""


class VersionMismatch(AitbenchError):
    """Two artifacts were produced by different machine versions."""


class BudgetNotLarger(AitbenchError):
    """A resumed sweep must strictly enlarge the previous budget."""


class OutOfBudget(AitbenchError):
    """A query addresses lengths or steps beyond the table's budget."""


class NotStabilized(AitbenchError):
    """The requested prefix of the halting mass is not certified stable."""


class NotProducible(AitbenchError):
    """No enumerated program produces the requested string."""


class NoSufficientModel(AitbenchError):
    """No enumerated model satisfies the requested description budget."""


class NotMember(AitbenchError):
    """The string is not an element of the model it is described by."""


class PrefixNotReached(AitbenchError):
    """The dovetailer never matched the supplied mass prefix."""


class CountNeverReached(AitbenchError):
    """The dovetailer never saw the supplied number of halting programs."""


class EmptyProfile(AitbenchError):
    """Graphs of the empty profile are undefined."""


class NotExact(AitbenchError):
    """The operation requires a table with no Unknown rows in range."""


class PrefixTooShort(AitbenchError):
    """The certified mass prefix is too short for the requested construction."""


class UsageError(AitbenchError):
    """Bad command-line arguments."""
