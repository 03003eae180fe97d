"""Exception types shared across the library."""


class BandPatternError(ValueError):
    """A dense array or matrix file has nonzero entries outside its declared band."""


class SingularMatrixError(ArithmeticError):
    """The matrix is singular to working precision.

    ``pivot_index`` is the 1-based index of the first offending pivot /
    diagonal entry, when one can be named.
    """

    def __init__(self, message, pivot_index=None):
        super().__init__(message)
        self.pivot_index = pivot_index


class ZeroPivotError(SingularMatrixError):
    """Elimination without pivoting hit a pivot that is zero to working precision.

    Raised by the LU-based routines when strong regularity fails; the QR-based
    routines do not need it.
    """
