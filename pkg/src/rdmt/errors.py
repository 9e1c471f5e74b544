"""Exception types shared across the package."""


class NotPositiveDefinite(ValueError):
    """A Hermitian matrix failed Cholesky factorization (non-positive pivot)."""


class DomainError(ValueError):
    """An argument is outside the domain of a special function or density."""


class OctonionMatrixError(ValueError):
    """Octonion (beta = 8) matrices beyond 1x1 were requested.

    Octonion matrix algebra is non-associative; products, factorizations and
    spectra of octonion matrices with m >= 2 are not well-defined objects in
    this package and are rejected at the API level.  Scalar (1x1) octonion
    arithmetic is fully supported.
    """
