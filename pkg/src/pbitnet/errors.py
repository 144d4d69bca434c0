"""Exception and warning types shared across the package."""

from __future__ import annotations


class PBitError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(PBitError):
    """Array shapes of a network's couplings/biases disagree."""


class CycleDetectedError(PBitError):
    """A directed network contains a cycle.

    The offending node sequence is stored in ``cycle`` (first node repeated
    at the end).
    """

    def __init__(self, cycle: list[int]):
        self.cycle = list(cycle)
        super().__init__(f"cycle detected: {' -> '.join(map(str, self.cycle))}")


class WrongKindError(PBitError):
    """Operation only defined for the other network kind."""


class InvalidNetworkError(PBitError):
    """A network failed validation where a valid one is required."""


class PolicyMismatchError(PBitError):
    """Update policy incompatible with the network kind."""


class TooLargeError(PBitError):
    """Exact enumeration requested beyond the supported node count."""


class UnknownNodeError(PBitError):
    """A node index or label does not exist in the given context."""


class SubsetMismatchError(PBitError):
    """Two distribution tables are defined over different node subsets."""


class ConstantTraceError(PBitError):
    """Autocorrelation of a signal with zero variance is undefined."""


class NotConvergedError(PBitError):
    """A measured response never reached its detection threshold."""


class NetworkFormatError(PBitError):
    """A network file is malformed."""


class UnstableTimestepWarning(UserWarning):
    """The chosen integration step is coarse relative to the model's time scales."""
