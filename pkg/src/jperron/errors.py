"""Exception types shared across the package."""


class JperronError(Exception):
    """Base class for all library errors."""


class MalformedInput(JperronError):
    """Input JSON or vector data does not match the expected schema."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class IndeterminateFloor(JperronError):
    """An interval value straddles an integer beyond the refinement budget."""


class BudgetExceeded(JperronError):
    """A refinement or search budget ran out before a certified answer."""


class EmptyInput(JperronError):
    """A list argument was shorter than the operation requires."""


class NonPositiveEntry(JperronError):
    """An entry that must be strictly positive is not."""


class NonPositiveState(JperronError):
    """An expansion state left the positive cone."""


class DepthExceeded(JperronError):
    """A depth index exceeds the available expansion depth."""


class RankMismatch(JperronError):
    """Two objects of different rank were combined."""


class NotUnimodular(JperronError):
    """An integer matrix with |det| != 1 was used where GL_n(Z) is required."""


class FrameMismatch(JperronError):
    """Two lattices over different coordinate frames were compared."""


class NonInvertibleLeadingEntry(JperronError):
    """The leading lattice vector cannot be divided out in this frame."""


class NoCommonTail(JperronError):
    """No shared tail exists (or was found within budget) for the inputs."""


class NonPositiveImage(JperronError):
    """A group action produced a vector outside the positive cone."""


class UnknownGenerator(JperronError):
    """A word references a generator the representation does not know."""


class InvalidGenus(JperronError):
    """Genus must be a positive integer."""
