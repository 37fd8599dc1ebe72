"""Matrix-scale laboratory for Jensen-type inequalities in block upper-triangular algebras."""

__version__ = "0.1.0"

from sdlab.errors import (
    DimensionMismatch,
    DomainError,
    NoConvergence,
    NotHermitian,
    NotInAlgebra,
    NotInvertible,
    NotPositiveDefinite,
    NotPSD,
    SdlabError,
    UnknownEnsemble,
)

__all__ = [
    "__version__",
    "SdlabError",
    "DimensionMismatch",
    "DomainError",
    "NoConvergence",
    "NotHermitian",
    "NotInAlgebra",
    "NotInvertible",
    "NotPositiveDefinite",
    "NotPSD",
    "UnknownEnsemble",
]
