"""Exception types shared across the package.

Plain ``ValueError`` is used for malformed inputs (bad literals, out-of-range
arguments).  The classes here mark failures of a different character: protocol
misuse, representability limits, and resource guards.
"""

from __future__ import annotations


class PhasekitError(Exception):
    """Base class for package-specific errors."""


class ContractViolation(PhasekitError):
    """An operation was applied to a qubit in the wrong lifecycle state."""


class PrecisionError(PhasekitError):
    """A phase cannot be represented at the requested precision."""


class ConfigurationError(PhasekitError):
    """A run was configured with incompatible options."""


class ResourceLimitError(PhasekitError):
    """A dense simulation would exceed the qubit budget."""


class DegenerateEstimateError(PhasekitError):
    """Both quadrature estimates vanished; the angle is undetermined."""


class ReconstructionError(PhasekitError):
    """Bit reconstruction found no candidate consistent with the estimates.

    ``bit_index`` is the 1-based index l of the phase bit being recovered
    when reconstruction failed.
    """

    def __init__(self, message: str, bit_index: int):
        super().__init__(message)
        self.bit_index = bit_index
