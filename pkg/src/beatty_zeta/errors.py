"""Exception hierarchy shared by all modules.

Every failure mode that callers are expected to handle has its own class;
the CLI maps them onto stable exit codes (see ``cli.EXIT_CODES``).
"""


class BeattyZetaError(Exception):
    """Base class for all package errors."""


class InvalidSpec(BeattyZetaError):
    """A real-number spec is malformed or violates an invariant (value <= 0, q = 0, ...)."""


class PrecisionExhausted(BeattyZetaError):
    """A decimal spec's precision budget cannot certify the requested quantity."""


class NotEnoughTerms(BeattyZetaError):
    """A continued-fraction query needs more terms than are available."""


class NotPeriodic(BeattyZetaError):
    """Period data was requested for an expansion that has none (rational/decimal input)."""


class PoleAt1(BeattyZetaError):
    """Evaluation was requested at the simple pole s = 1."""


class OutOfDomain(BeattyZetaError):
    """The argument lies outside the method's (numeric) domain of validity."""


class DidNotConverge(BeattyZetaError):
    """A truncation target could not be met within the configured limits."""


class ToleranceUnreachable(BeattyZetaError):
    """The requested tolerance is below the method's accuracy floor."""


class RationalAlpha(BeattyZetaError):
    """An operation defined only for irrational parameters got a rational one."""
