"""Exception types shared across the package."""


class StoqcureError(Exception):
    """Base class for all errors raised by this package."""


class MixedLength(StoqcureError):
    """Pauli strings of different lengths were combined."""


class TooLarge(StoqcureError):
    """A dense expansion would exceed the configured qubit cap."""


class UnsupportedLetter(StoqcureError):
    """An operation received a Pauli letter outside its supported alphabet."""


class NotSquare(StoqcureError):
    """A matrix argument is not square."""


class UncoverableTerm(StoqcureError):
    """A term's support fits inside no candidate qubit subset."""


class NotDecodable(StoqcureError):
    """A gate assignment lies outside the admissible decoding set."""


class BudgetExceeded(StoqcureError):
    """A search exceeded its configured work budget."""


class NotOrthogonal(StoqcureError):
    """A matrix argument is not orthogonal within tolerance."""


class ConstraintViolated(StoqcureError):
    """Preconditions on the penalty constant do not hold for this instance."""


class NotStoquasticInput(StoqcureError):
    """An operation requiring a stoquastic input received a non-stoquastic one."""


class InvalidInput(StoqcureError):
    """Malformed file content or inconsistent constructor arguments."""
