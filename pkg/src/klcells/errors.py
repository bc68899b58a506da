"""Exception types shared across the package."""


class KLCellsError(Exception):
    """Base class for all klcells-specific errors."""


class ParseError(KLCellsError):
    """Malformed textual input; carries the offending position."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


class ElementCapExceeded(KLCellsError):
    """Group enumeration grew past the configured element cap."""

    def __init__(self, cap: int):
        super().__init__(f"enumeration exceeded the element cap of {cap}")
        self.cap = cap


class ValidationError(KLCellsError):
    """Input violates a documented precondition."""


class SkewSymmetryError(KLCellsError):
    """Internal consistency failure: an element that must satisfy
    bar(a) = -a does not.  Signals an arithmetic bug, never bad input."""


class CoefficientOverflow(KLCellsError):
    """The compiled kernel hit its 64-bit coefficient or exponent bounds."""
