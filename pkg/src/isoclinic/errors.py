"""Domain error hierarchy.

Every error that a caller is expected to catch and act on subclasses
DomainError; the CLI maps DomainError to exit code 1 and schema problems
to exit code 2.
"""


class DomainError(Exception):
    pass


class UnsupportedType(DomainError):
    """Cartan type outside the supported rank <= 3 list."""


class RankTooLarge(DomainError):
    """Brute-force enumeration refused beyond rank 3."""


class NonSplitSpectrum(DomainError):
    """An exact eigenvalue lies outside the active coefficient field."""


class PrecisionUnderflow(DomainError):
    """A requested series coefficient lies beyond tracked precision."""


class NotNilpotent(DomainError):
    """exp-gauge atom at order 0 with a non ad-nilpotent argument."""


class StageLimitExceeded(DomainError):
    """Reduction recursion exceeded its stage cap."""


class NoRegularElement(DomainError):
    """No regular semisimple vector found in the requested graded piece."""


class SlopeZero(DomainError):
    """Regular-singular oper where an irregular one is required."""


class LeadingNotRegularSemisimple(DomainError):
    """Minimal-form leading coefficient fails regular semisimplicity."""


class NotRegularSemisimple(DomainError):
    pass


class SingularBlock(DomainError):
    """A block matrix that the theory certifies invertible failed to be."""


class NotMinimalForm(DomainError):
    pass


class WrongDepth(DomainError):
    """Character depth is not (1+h)/h, or an unsupported odd-h type."""


class NotRegularLeading(DomainError):
    pass


class SurjectivityWitnessFailed(DomainError):
    pass


class SchemaError(Exception):
    """Malformed CLI/JSON input; exit code 2."""
