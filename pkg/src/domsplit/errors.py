"""Exception types shared across the package."""


class DomsplitError(Exception):
    """Base class for all library errors."""


class EmptyAlphabet(DomsplitError):
    """Transition matrix has no symbols."""


class NonTransitive(DomsplitError):
    """Some ordered symbol pair is not connected by any admissible path."""


class SymbolOutOfRange(DomsplitError):
    """A word contains a symbol outside {1..m}."""


class NotAdmissible(DomsplitError):
    """A word violates the transition structure where admissibility is required."""


class PeriodTooLarge(DomsplitError):
    """Requested enumeration would exceed the configured size cap."""


class DisjointRanges(DomsplitError):
    """Two windows share no usable index range around position 0."""


class WindowTooShort(DomsplitError):
    """A window does not cover the positions a computation needs."""


class InadmissibleWindow(DomsplitError):
    """A window is not in the cocycle generator's domain."""


class NumericalBreakdown(DomsplitError):
    """A matrix is singular or too ill-conditioned for reliable output."""


class CenterNotSorted(DomsplitError):
    """Target exponent list is not non-increasing."""


class InsufficientSamples(DomsplitError):
    """A sampling plan produced no usable orbit segments."""


class GapTooSmall(DomsplitError):
    """Singular-value separation too weak to trust the computed frames."""


class FrameMismatch(DomsplitError):
    """Frames passed as an orbit sequence are inconsistent with each other."""


class SpectralGapTooSmall(DomsplitError):
    """The tolerance eats the whole gap between consecutive exponents."""


class ConfigError(DomsplitError):
    """An experiment configuration file is missing data or malformed."""
