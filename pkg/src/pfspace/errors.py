"""Exception hierarchy.

Every domain error carries a stable ``code`` equal to its class name; the CLI
prints it on exit status 1.
"""


class MeasureError(Exception):
    """Base class for all domain errors raised by pfspace."""

    @property
    def code(self) -> str:
        return type(self).__name__


class InvalidSpace(MeasureError):
    pass


class MassSumViolation(MeasureError):
    pass


class NegativeMass(MeasureError):
    pass


class UnknownPoint(MeasureError):
    pass


class SpaceMismatch(MeasureError):
    pass


class ParameterOutOfRange(MeasureError):
    pass


class NotInPf(MeasureError):
    """The measure fails the n/(n+1) dominant-mass threshold."""


class DegenerateSupport(MeasureError):
    """A Dirac measure was passed where at least two atoms are required."""


class OutsideDomain(MeasureError):
    """retract_to_pf needs a strictly dominant atom (mass > 1/2)."""


class OutsideNeighborhood(MeasureError):
    pass


class InvalidEmbedding(MeasureError):
    pass


class WitnessInvalid(MeasureError):
    pass


class UnknownMap(MeasureError):
    pass


class UnsupportedDimension(MeasureError):
    pass


class InvariantViolation(AssertionError):
    """A property the construction guarantees turned out false at runtime."""
