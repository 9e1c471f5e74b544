"""Arithmetic over the four real normed division algebras and the dense
matrix kernels every distribution in this package depends on.

An element of R, C, H or O is stored as its beta real coefficients in the
Cayley-Dickson basis (1, e1, ..., e_{beta-1}); an m x n matrix is a float
array of shape (m, n, beta).  Multiplication is one recursive doubling rule,

    (a, b)(c, d) = (a c - conj(d) b,  d a + b conj(c)),

which builds C from pairs of reals, H from pairs of C, and O from pairs of H.
Under this rule e1*e2 = e3 for quaternions and the norm is multiplicative for
all four algebras.

Octonion matrices with m >= 2 are rejected everywhere: octonion matrix
algebra is non-associative and none of the factorizations below extend to it.
Scalar (1x1) octonion arithmetic is supported so the scalar density formulas
stay exercisable at beta = 8.
"""

from __future__ import annotations

import enum

import numpy as np

from .errors import NotPositiveDefinite, OctonionMatrixError

__all__ = [
    "AlgebraTag",
    "DivScalar",
    "DivMatrix",
    "HermitianPD",
    "scalar_mul",
    "conj_transpose",
    "matmul",
    "cholesky_hpd",
    "logdet_hpd",
    "complex_adjoint",
    "singular_values",
    "hermitian_eigenvalues",
]

# Tolerances fixed package-wide.
HERMITIAN_ATOL = 1e-12          # coefficient-wise, scaled by max(1, |A|_max)
PAIR_COLLAPSE_RTOL = 1e-8       # quaternion adjoint eigenvalue pairing


class AlgebraTag(enum.IntEnum):
    """The four real normed division algebras, keyed by real dimension."""

    REAL = 1
    COMPLEX = 2
    QUATERNION = 4
    OCTONION = 8

    @property
    def beta(self) -> int:
        return int(self)


# ---------------------------------------------------------------------------
# Raw coefficient-array kernels.
#
# These operate on plain float arrays with a trailing coefficient axis of
# length beta and arbitrary leading (batch) axes.  The public classes below
# and the samplers in `distributions` are thin wrappers over them.
# ---------------------------------------------------------------------------


def _conj_coeffs(x: np.ndarray) -> np.ndarray:
    out = x.copy()
    out[..., 1:] *= -1.0
    return out


def _mul_coeffs(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Cayley-Dickson product on (..., beta) coefficient arrays."""
    b = x.shape[-1]
    if b == 1:
        return x * y
    h = b // 2
    a, bb = x[..., :h], x[..., h:]
    c, d = y[..., :h], y[..., h:]
    lo = _mul_coeffs(a, c) - _mul_coeffs(_conj_coeffs(d), bb)
    hi = _mul_coeffs(d, a) + _mul_coeffs(bb, _conj_coeffs(c))
    return np.concatenate([lo, hi], axis=-1)


def _conj_t_raw(x: np.ndarray) -> np.ndarray:
    """(X*)_ij = conj(X_ji) on (..., m, n, beta) arrays."""
    return _conj_coeffs(np.swapaxes(x, -3, -2))


def _matmul_raw(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product on (..., m, k, beta) x (..., k, n, beta) arrays."""
    if a.shape[-2] != b.shape[-3]:
        raise ValueError(
            f"matmul dimension mismatch: {a.shape[-3]}x{a.shape[-2]} by "
            f"{b.shape[-3]}x{b.shape[-2]}"
        )
    prod = _mul_coeffs(a[..., :, :, None, :], b[..., None, :, :, :])
    return prod.sum(axis=-3)


def _identity_raw(m: int, beta: int) -> np.ndarray:
    out = np.zeros((m, m, beta))
    for i in range(m):
        out[i, i, 0] = 1.0
    return out


def _hermitize_raw(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + _conj_t_raw(a))


def _real_trace_raw(a: np.ndarray) -> np.ndarray:
    """Real part of the trace, the scalar every trace kernel here means."""
    return np.einsum("...iik->...k", a)[..., 0]


def _frobenius_sq_raw(a: np.ndarray) -> np.ndarray:
    return np.square(a).sum(axis=(-1, -2, -3))


def _cholesky_raw(a: np.ndarray) -> np.ndarray:
    """Lower-triangular L with L L* = A and real positive diagonal.

    `a` must be Hermitian, shape (..., m, m, beta).  Raises
    NotPositiveDefinite on a non-positive pivot anywhere in the batch.
    """
    m = a.shape[-2]
    lo = np.zeros_like(a)
    for j in range(m):
        acc = a[..., j, j, :].copy()
        for k in range(j):
            acc -= _mul_coeffs(lo[..., j, k, :], _conj_coeffs(lo[..., j, k, :]))
        piv = acc[..., 0]
        if not np.all(np.isfinite(piv)) or np.any(piv <= 0.0):
            raise NotPositiveDefinite(f"non-positive pivot at index {j}")
        ljj = np.sqrt(piv)
        lo[..., j, j, 0] = ljj
        for i in range(j + 1, m):
            acc = a[..., i, j, :].copy()
            for k in range(j):
                acc -= _mul_coeffs(lo[..., i, k, :], _conj_coeffs(lo[..., j, k, :]))
            lo[..., i, j, :] = acc / ljj[..., None]
    return lo


def _chol_logdet_raw(lo: np.ndarray) -> np.ndarray:
    """log det(L L*) = 2 sum_i log l_ii for a Cholesky factor L."""
    diag = np.einsum("...iik->...ik", lo)[..., 0]
    return 2.0 * np.log(diag).sum(axis=-1)


def _solve_lower_raw(lo: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve L X = B by forward substitution; L must have a real diagonal."""
    m = lo.shape[-2]
    x = np.zeros_like(b)
    for i in range(m):
        acc = b[..., i, :, :].copy()
        for k in range(i):
            acc -= _mul_coeffs(lo[..., i, k, None, :], x[..., k, :, :])
        x[..., i, :, :] = acc / lo[..., i, i, 0, None, None]
    return x


def _solve_upper_raw(up: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve U X = B by back substitution; U must have a real diagonal."""
    m = up.shape[-2]
    x = np.zeros_like(b)
    for i in range(m - 1, -1, -1):
        acc = b[..., i, :, :].copy()
        for k in range(i + 1, m):
            acc -= _mul_coeffs(up[..., i, k, None, :], x[..., k, :, :])
        x[..., i, :, :] = acc / up[..., i, i, 0, None, None]
    return x


def _invert_lower_raw(lo: np.ndarray) -> np.ndarray:
    m = lo.shape[-2]
    eye = np.broadcast_to(_identity_raw(m, lo.shape[-1]), lo.shape).copy()
    return _solve_lower_raw(lo, eye)


def _hpd_inverse_raw(a: np.ndarray) -> np.ndarray:
    """Inverse of a Hermitian positive definite array via Cholesky."""
    k = _invert_lower_raw(_cholesky_raw(a))
    return _matmul_raw(_conj_t_raw(k), k)


def _complex_embed_raw(x: np.ndarray, beta: int) -> np.ndarray:
    """Embed (..., m, n, beta) into a complex array, doubling for beta = 4.

    beta = 1, 2 embed entrywise; beta = 4 maps each entry
    w + x e1 + y e2 + z e3 to the 2x2 complex block
    [[w + x i, y + z i], [-y + z i, w - x i]], which is multiplicative.
    """
    if beta == 1:
        return x[..., 0].astype(complex)
    if beta == 2:
        return x[..., 0] + 1j * x[..., 1]
    if beta == 4:
        m, n = x.shape[-3], x.shape[-2]
        a = x[..., 0] + 1j * x[..., 1]
        b = x[..., 2] + 1j * x[..., 3]
        out = np.zeros(x.shape[:-3] + (2 * m, 2 * n), dtype=complex)
        out[..., 0::2, 0::2] = a
        out[..., 0::2, 1::2] = b
        out[..., 1::2, 0::2] = -np.conj(b)
        out[..., 1::2, 1::2] = np.conj(a)
        return out
    raise OctonionMatrixError("no complex adjoint exists for beta = 8")


def _collapse_pairs(vals: np.ndarray, check: bool = True) -> np.ndarray:
    """Average coincident (Kramers) pairs of a descending value array."""
    lead, trail = vals[..., 0::2], vals[..., 1::2]
    if check:
        scale = np.maximum(1.0, np.abs(vals).max())
        if np.any(np.abs(lead - trail) > PAIR_COLLAPSE_RTOL * scale):
            raise ArithmeticError(
                "adjoint spectrum does not split into coincident pairs"
            )
    return 0.5 * (lead + trail)


def _singular_values_raw(x: np.ndarray, beta: int) -> np.ndarray:
    """Descending singular values on (..., m, n, beta), m <= n assumed."""
    s = np.linalg.svd(_complex_embed_raw(x, beta), compute_uv=False)
    if beta == 4:
        s = _collapse_pairs(s, check=False)
    return s


def _eigvalsh_raw(a: np.ndarray, beta: int) -> np.ndarray:
    """Descending real eigenvalues of Hermitian (..., m, m, beta)."""
    w = np.linalg.eigvalsh(_complex_embed_raw(a, beta))[..., ::-1]
    if beta == 4:
        w = _collapse_pairs(w, check=False)
    return w


def _check_beta_shape(beta: int, m: int, n: int) -> None:
    if beta == 8 and max(m, n) > 1:
        raise OctonionMatrixError(
            "octonion (beta = 8) support is limited to 1x1 matrices; "
            f"got {m}x{n}"
        )


# ---------------------------------------------------------------------------
# Public value types.
# ---------------------------------------------------------------------------


class DivScalar:
    """One element of R, C, H or O: beta real Cayley-Dickson coefficients."""

    __slots__ = ("tag", "coeffs")

    def __init__(self, tag: AlgebraTag, coeffs):
        tag = AlgebraTag(tag)
        arr = np.asarray(coeffs, dtype=float).reshape(-1)
        if arr.shape != (tag.beta,):
            raise ValueError(f"expected {tag.beta} coefficients, got {arr.shape}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "tag", tag)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, *_):
        raise AttributeError("DivScalar is immutable")

    @classmethod
    def from_real(cls, tag: AlgebraTag, value: float) -> "DivScalar":
        c = np.zeros(AlgebraTag(tag).beta)
        c[0] = value
        return cls(tag, c)

    @classmethod
    def basis(cls, tag: AlgebraTag, index: int) -> "DivScalar":
        c = np.zeros(AlgebraTag(tag).beta)
        c[index] = 1.0
        return cls(tag, c)

    @property
    def real(self) -> float:
        return float(self.coeffs[0])

    def conj(self) -> "DivScalar":
        return DivScalar(self.tag, _conj_coeffs(self.coeffs))

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.coeffs, self.coeffs)))

    def __add__(self, other: "DivScalar") -> "DivScalar":
        self._check_tag(other)
        return DivScalar(self.tag, self.coeffs + other.coeffs)

    def __sub__(self, other: "DivScalar") -> "DivScalar":
        self._check_tag(other)
        return DivScalar(self.tag, self.coeffs - other.coeffs)

    def __neg__(self) -> "DivScalar":
        return DivScalar(self.tag, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, DivScalar):
            return scalar_mul(self, other)
        return DivScalar(self.tag, self.coeffs * float(other))

    def __rmul__(self, other):
        return DivScalar(self.tag, float(other) * self.coeffs)

    def _check_tag(self, other: "DivScalar") -> None:
        if self.tag != other.tag:
            raise ValueError(f"algebra mismatch: {self.tag!r} vs {other.tag!r}")

    def isclose(self, other: "DivScalar", atol: float = 1e-12) -> bool:
        return self.tag == other.tag and bool(
            np.allclose(self.coeffs, other.coeffs, atol=atol, rtol=0.0)
        )

    def __repr__(self) -> str:
        return f"DivScalar({self.tag.name}, {self.coeffs.tolist()})"


class DivMatrix:
    """Dense m x n matrix over a division algebra, stored as (m, n, beta)."""

    __slots__ = ("tag", "data")

    def __init__(self, tag: AlgebraTag, data):
        tag = AlgebraTag(tag)
        arr = np.asarray(data, dtype=float)
        if arr.ndim != 3 or arr.shape[2] != tag.beta:
            raise ValueError(
                f"expected an (m, n, {tag.beta}) coefficient array, got {arr.shape}"
            )
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("matrix dimensions must be positive")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "tag", tag)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, *_):
        raise AttributeError("DivMatrix is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, tag: AlgebraTag, m: int, n: int) -> "DivMatrix":
        return cls(tag, np.zeros((m, n, AlgebraTag(tag).beta)))

    @classmethod
    def identity(cls, tag: AlgebraTag, m: int) -> "DivMatrix":
        return cls(tag, _identity_raw(m, AlgebraTag(tag).beta))

    @classmethod
    def from_real(cls, tag: AlgebraTag, array2d) -> "DivMatrix":
        """Embed a real 2-D array into coefficient 0."""
        a = np.atleast_2d(np.asarray(array2d, dtype=float))
        out = np.zeros(a.shape + (AlgebraTag(tag).beta,))
        out[..., 0] = a
        return cls(tag, out)

    @classmethod
    def from_scalars(cls, entries) -> "DivMatrix":
        """Build from a nested list of DivScalar (row-major)."""
        rows = [[e for e in row] for row in entries]
        tag = rows[0][0].tag
        arr = np.stack([np.stack([e.coeffs for e in row]) for row in rows])
        return cls(tag, arr)

    # -- shape and access ---------------------------------------------------

    @property
    def m(self) -> int:
        return self.data.shape[0]

    @property
    def n(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple:
        return (self.data.shape[0], self.data.shape[1])

    def entry(self, i: int, j: int) -> DivScalar:
        return DivScalar(self.tag, self.data[i, j])

    def real_trace(self) -> float:
        if self.m != self.n:
            raise ValueError("trace requires a square matrix")
        return float(self.data[..., 0].trace())

    def frobenius_norm(self) -> float:
        return float(np.sqrt(np.square(self.data).sum()))

    def __add__(self, other: "DivMatrix") -> "DivMatrix":
        self._check_compatible(other)
        return DivMatrix(self.tag, self.data + other.data)

    def __sub__(self, other: "DivMatrix") -> "DivMatrix":
        self._check_compatible(other)
        return DivMatrix(self.tag, self.data - other.data)

    def _check_compatible(self, other: "DivMatrix") -> None:
        if self.tag != other.tag:
            raise ValueError(f"algebra mismatch: {self.tag!r} vs {other.tag!r}")
        if self.data.shape != other.data.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    def isclose(self, other: "DivMatrix", atol: float = 1e-12) -> bool:
        return (
            self.tag == other.tag
            and self.data.shape == other.data.shape
            and bool(np.allclose(self.data, other.data, atol=atol, rtol=0.0))
        )

    # -- serialization (repo-wide JSON schema) ------------------------------

    def to_schema_dict(self) -> dict:
        return {
            "beta": int(self.tag.beta),
            "rows": self.m,
            "cols": self.n,
            "data": self.data.tolist(),
        }

    @classmethod
    def from_schema_dict(cls, obj: dict) -> "DivMatrix":
        tag = AlgebraTag(int(obj["beta"]))
        arr = np.asarray(obj["data"], dtype=float)
        if arr.shape != (int(obj["rows"]), int(obj["cols"]), tag.beta):
            raise ValueError(
                f"schema shape mismatch: declared {obj['rows']}x{obj['cols']} "
                f"beta={obj['beta']}, data has shape {arr.shape}"
            )
        return cls(tag, arr)

    def __repr__(self) -> str:
        return f"DivMatrix({self.tag.name}, {self.m}x{self.n})"


class HermitianPD:
    """A Hermitian positive definite matrix, validated at construction.

    The input is checked Hermitian coefficient-wise (tolerance 1e-12 scaled
    by the largest coefficient, tolerating sampler round-off), symmetrized as
    (A + A*)/2, and Cholesky-factorized eagerly; the factor is cached and
    reused by every determinant and solve downstream.
    """

    __slots__ = ("mat", "_chol", "_logdet")

    def __init__(self, mat: DivMatrix):
        if not isinstance(mat, DivMatrix):
            raise TypeError("HermitianPD wraps a DivMatrix")
        if mat.m != mat.n:
            raise ValueError("Hermitian matrix must be square")
        _check_beta_shape(mat.tag.beta, mat.m, mat.n)
        gap = np.abs(mat.data - _conj_t_raw(mat.data)).max()
        scale = max(1.0, float(np.abs(mat.data).max()))
        if gap > HERMITIAN_ATOL * scale:
            raise ValueError(
                f"matrix is not Hermitian: max |A - A*| coefficient {gap:.3e}"
            )
        sym = _hermitize_raw(mat.data)
        chol = _cholesky_raw(sym)  # raises NotPositiveDefinite
        object.__setattr__(self, "mat", DivMatrix(mat.tag, sym))
        object.__setattr__(self, "_chol", DivMatrix(mat.tag, chol))
        object.__setattr__(self, "_logdet", float(_chol_logdet_raw(chol)))

    def __setattr__(self, *_):
        raise AttributeError("HermitianPD is immutable")

    @classmethod
    def identity(cls, tag: AlgebraTag, m: int) -> "HermitianPD":
        return cls(DivMatrix.identity(tag, m))

    @classmethod
    def from_real(cls, tag: AlgebraTag, array2d) -> "HermitianPD":
        return cls(DivMatrix.from_real(tag, array2d))

    @property
    def tag(self) -> AlgebraTag:
        return self.mat.tag

    @property
    def m(self) -> int:
        return self.mat.m

    @property
    def chol(self) -> DivMatrix:
        """Cached lower-triangular L with L L* equal to the wrapped matrix."""
        return self._chol

    @property
    def logdet(self) -> float:
        return self._logdet

    def inverse(self) -> "HermitianPD":
        return HermitianPD(DivMatrix(self.tag, _hpd_inverse_raw(self.mat.data)))

    def to_schema_dict(self) -> dict:
        return self.mat.to_schema_dict()

    @classmethod
    def from_schema_dict(cls, obj: dict) -> "HermitianPD":
        return cls(DivMatrix.from_schema_dict(obj))

    def __repr__(self) -> str:
        return f"HermitianPD({self.tag.name}, {self.m}x{self.m})"


# ---------------------------------------------------------------------------
# Public operations.
# ---------------------------------------------------------------------------


def scalar_mul(a: DivScalar, b: DivScalar) -> DivScalar:
    """Cayley-Dickson product of two algebra elements.

    Associative for beta <= 4; for beta = 8 only alternative, so parenthesize
    deliberately when composing octonion products.
    """
    if a.tag != b.tag:
        raise ValueError(f"algebra mismatch: {a.tag!r} vs {b.tag!r}")
    return DivScalar(a.tag, _mul_coeffs(a.coeffs, b.coeffs))


def conj_transpose(x: DivMatrix) -> DivMatrix:
    return DivMatrix(x.tag, _conj_t_raw(x.data))


def matmul(a: DivMatrix, b: DivMatrix) -> DivMatrix:
    if a.tag != b.tag:
        raise ValueError(f"algebra mismatch: {a.tag!r} vs {b.tag!r}")
    _check_beta_shape(a.tag.beta, a.m, max(a.n, b.n))
    return DivMatrix(a.tag, _matmul_raw(a.data, b.data))


def cholesky_hpd(a: HermitianPD) -> DivMatrix:
    """Lower-triangular L with L L* = A and real positive diagonal."""
    return a.chol


def logdet_hpd(a: HermitianPD) -> float:
    """log of the (Moore-type, always real) determinant of a Hermitian PD matrix.

    Defined as 2 sum_i log l_ii from the Cholesky factor for every beta <= 4;
    this coincides with the Moore determinant for quaternion Hermitian
    matrices and with the ordinary determinant for beta <= 2.
    """
    return a.logdet


def complex_adjoint(x: DivMatrix) -> DivMatrix:
    """Complex representation of a matrix: identity embedding for beta <= 2,
    the multiplicative 2m x 2n block representation for beta = 4."""
    z = _complex_embed_raw(x.data, x.tag.beta)
    return DivMatrix(AlgebraTag.COMPLEX, np.stack([z.real, z.imag], axis=-1))


def singular_values(x: DivMatrix) -> np.ndarray:
    """Singular values in descending order.

    For beta = 4 the values come from the complex adjoint, whose spectrum
    consists of coincident pairs; each pair is reported once.  A matrix with
    m > n is transposed internally, so min(m, n) values are returned.
    """
    if x.tag.beta == 8:
        raise OctonionMatrixError("singular values are not defined for beta = 8")
    data = x.data if x.m <= x.n else _conj_t_raw(x.data)
    s = np.linalg.svd(_complex_embed_raw(data, x.tag.beta), compute_uv=False)
    if x.tag.beta == 4:
        s = _collapse_pairs(s, check=True)
    return s


def hermitian_eigenvalues(a) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, descending.

    Accepts a HermitianPD or a plain Hermitian DivMatrix.  For beta = 4 the
    spectrum of the complex adjoint splits into coincident pairs; each pair
    is reported once.
    """
    mat = a.mat if isinstance(a, HermitianPD) else a
    if mat.tag.beta == 8:
        raise OctonionMatrixError("eigenvalues are not defined for beta = 8")
    if mat.m != mat.n:
        raise ValueError("eigenvalues require a square matrix")
    gap = np.abs(mat.data - _conj_t_raw(mat.data)).max()
    scale = max(1.0, float(np.abs(mat.data).max()))
    if gap > HERMITIAN_ATOL * scale:
        raise ValueError("matrix is not Hermitian")
    w = np.linalg.eigvalsh(_complex_embed_raw(_hermitize_raw(mat.data), mat.tag.beta))
    w = w[::-1]
    if mat.tag.beta == 4:
        w = _collapse_pairs(w, check=True)
    return w
