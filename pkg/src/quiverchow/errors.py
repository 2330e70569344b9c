"""Error hierarchy shared by the whole package.

Plain ``ValueError``/``TypeError`` are reserved for malformed input (usage
errors); the classes below separate "the math refuses" from "the math broke".
"""


class QuiverChowError(Exception):
    """Base class for engine errors."""


class AssumptionViolation(QuiverChowError):
    """A standing assumption fails (acyclicity, coprimality, gcd conditions).

    The computation is refused, not attempted.  Maps to exit code 2 in the CLI
    and HTTP 409 in the service.
    """


class StructuralError(QuiverChowError):
    """An internal consistency check failed mid-computation.

    Examples: the top graded piece of the quotient is not one-dimensional,
    the two expressions for the point class disagree after reduction, or a
    quantity that must be an integer is not.  Maps to exit code 3 / HTTP 500.
    """
