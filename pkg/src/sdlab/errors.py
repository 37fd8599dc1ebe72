"""Exception types shared across the package."""


class SdlabError(ValueError):
    """Base class for every error raised deliberately by sdlab."""


class NotHermitian(SdlabError):
    pass


class NoConvergence(SdlabError):
    pass


class NotPositiveDefinite(SdlabError):
    pass


class NotPSD(SdlabError):
    pass


class NotInvertible(SdlabError):
    pass


class NotInAlgebra(SdlabError):
    pass


class DomainError(SdlabError):
    pass


class DimensionMismatch(SdlabError):
    pass


class UnknownEnsemble(SdlabError):
    pass
