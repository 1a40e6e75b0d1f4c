"""Exception hierarchy shared by every carmq module."""


class CarmqError(Exception):
    """Base class for all toolkit errors."""


class InvalidInputError(CarmqError, ValueError):
    """An argument violates an operation's precondition."""


class NotCoprimeError(InvalidInputError):
    """Raised when a residue has no inverse; carries the gcd witness."""

    def __init__(self, a: int, modulus: int, gcd: int):
        self.a = a
        self.modulus = modulus
        self.gcd = gcd
        super().__init__(f"{a} is not invertible mod {modulus} (gcd={gcd})")


class HypothesisError(InvalidInputError):
    """Inputs fall outside the hypothesis under which a congruence is stated."""


class SizeGuardError(InvalidInputError):
    """An exact big-integer evaluation would exceed the configured size guard."""


class HorizonTooSmallError(InvalidInputError):
    """A brute-force period search cannot confirm a period within its horizon."""


class InvariantViolation(CarmqError, AssertionError):
    """Two independent evaluation routes disagreed."""
