"""Exception hierarchy shared by every module."""


class MziFisherError(Exception):
    """Base class for all library errors."""


class DomainError(MziFisherError, ValueError):
    """An argument lies outside the domain where the model is defined."""


class VanishingInformationError(MziFisherError, ArithmeticError):
    """Raised when a Fisher quantity needed as a divisor is (numerically) zero."""


class SingularFormulaError(MziFisherError, ArithmeticError):
    """A closed-form expression is evaluated at one of its singular points."""


class UnderTruncationError(MziFisherError, ValueError):
    """A Fock-space truncation leaves too much probability near the cutoff."""

    def __init__(self, tail_mass: float, nmax: int):
        self.tail_mass = tail_mass
        self.nmax = nmax
        super().__init__(
            f"state under-truncated at nmax={nmax}: tail mass {tail_mass:.3e} exceeds 1e-10"
        )


class StateParseError(MziFisherError, ValueError):
    """Malformed port-state text."""

    def __init__(self, text: str, position: int, reason: str):
        self.text = text
        self.position = position
        super().__init__(f"cannot parse state {text!r} at position {position}: {reason}")
