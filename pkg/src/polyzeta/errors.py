class PolyzetaError(Exception):
    """Base class for library errors."""


class ZeroPolynomialError(PolyzetaError, ValueError):
    """The zero polynomial has no Newton polyhedron."""


class ForeignObjectError(PolyzetaError, ValueError):
    """A face or cone that does not belong to the structure it was passed to."""


class UnsupportedError(PolyzetaError, ValueError):
    """Input outside the range where an operation is defined."""


class HypothesisError(PolyzetaError):
    """A hypothesis of the pole theorem fails (f(0) != 0, or f degenerate)."""

    def __init__(self, message: str, face=None):
        super().__init__(message)
        self.face = face
