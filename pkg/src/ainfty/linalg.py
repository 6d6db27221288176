"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction` (always in lowest terms, positive
denominator).  Matrices are small, dense and immutable; every routine here
is exact, so "is zero" means exactly zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Scalar = Fraction
Column = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class LinAlgError(ValueError):
    pass


def as_scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; use Fraction or str")
    if isinstance(x, str):
        return parse_rational(x)
    return Fraction(x)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` (ASCII or unicode minus) into a Fraction."""
    s = str(text).strip().replace("−", "-")
    if not s:
        raise LinAlgError("empty rational literal")
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise LinAlgError(f"malformed rational {text!r}") from None
    if q == 0:
        raise LinAlgError(f"zero denominator in {text!r}")
    return Fraction(p, q)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Matrix:
    """Dense row-major matrix of Fractions; 0xn and nx0 shapes are legal."""

    rows: int
    cols: int
    data: tuple  # tuple of row tuples

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise LinAlgError("negative matrix shape")
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise LinAlgError(f"entry count does not match shape {self.rows}x{self.cols}")

    # -- construction -------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        rows = [tuple(as_scalar(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        cols = [tuple(as_scalar(x) for x in c) for c in columns]
        data = tuple(tuple(c[i] for c in cols) for i in range(rows))
        return cls(rows, len(cols), data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, tuple((ZERO,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def diag(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return cls(n, n, tuple(tuple(as_scalar(entries[i]) if i == j else ZERO
                                     for j in range(n)) for i in range(n)))

    # -- accessors ----------------------------------------------------
    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def column(self, j: int) -> Column:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> "Matrix":
        return Matrix(self.cols, self.rows,
                      tuple(tuple(self.data[i][j] for i in range(self.rows)) for j in range(self.cols)))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.rows, self.cols,
                      tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.rows, self.cols,
                      tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, tuple(tuple(-a for a in r) for r in self.data))

    def scale(self, c) -> "Matrix":
        c = as_scalar(c)
        return Matrix(self.rows, self.cols, tuple(tuple(c * a for a in r) for r in self.data))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise LinAlgError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = other.columns()
        return Matrix(self.rows, other.cols,
                      tuple(tuple(_dot(r, c) for c in ocols) for r in self.data))

    def apply(self, v: Sequence) -> Column:
        if len(v) != self.cols:
            raise LinAlgError(f"vector of length {len(v)} does not fit {self.shape}")
        nz = [(j, x) for j, x in enumerate(v) if x]
        return tuple(sum((r[j] * x for j, x in nz), ZERO) for r in self.data)

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise LinAlgError(f"shape mismatch {self.shape} vs {other.shape}")


def _dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((x * y for x, y in zip(a, b) if x and y), ZERO)


def hstack(left: Matrix, right: Matrix) -> Matrix:
    if left.rows != right.rows:
        raise LinAlgError("row count mismatch in hstack")
    return Matrix(left.rows, left.cols + right.cols,
                  tuple(a + b for a, b in zip(left.data, right.data)))


def rref(A: Matrix) -> tuple:
    """Reduced row echelon form; returns ``(rows, pivot_columns)``."""
    m = [list(r) for r in A.data]
    pivots = []
    r = 0
    for c in range(A.cols):
        if r == A.rows:
            break
        piv = next((i for i in range(r, A.rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(A.rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(A: Matrix) -> int:
    return len(rref(A)[1])


def solve_linear(A: Matrix, b: Sequence) -> Optional[Column]:
    """Return x with ``A x = b`` or None; free variables are set to zero."""
    if len(b) != A.rows:
        raise LinAlgError(f"right-hand side has length {len(b)}, expected {A.rows}")
    aug = hstack(A, Matrix(A.rows, 1, tuple((as_scalar(x),) for x in b)))
    m, pivots = rref(aug)
    if pivots and pivots[-1] == A.cols:
        return None
    x = [ZERO] * A.cols
    for row, c in enumerate(pivots):
        x[c] = m[row][A.cols]
    return tuple(x)


def kernel_basis(A: Matrix) -> list:
    """Standard RREF kernel basis: one vector per free column, that entry set to 1."""
    m, pivots = rref(A)
    pivot_set = set(pivots)
    basis = []
    for f in range(A.cols):
        if f in pivot_set:
            continue
        v = [ZERO] * A.cols
        v[f] = ONE
        for row, c in enumerate(pivots):
            v[c] = -m[row][f]
        basis.append(tuple(v))
    return basis


def inverse(A: Matrix) -> Matrix:
    if A.rows != A.cols:
        raise LinAlgError("only square matrices are invertible")
    m, pivots = rref(hstack(A, Matrix.identity(A.rows)))
    if pivots[:A.rows] != list(range(A.rows)):
        raise LinAlgError("matrix is singular")
    return Matrix(A.rows, A.cols, tuple(tuple(r[A.cols:]) for r in m))


def is_symmetric(A: Matrix) -> bool:
    return A.rows == A.cols and A == A.T


def is_positive_definite(A: Matrix) -> bool:
    """Exact test: symmetric Gaussian elimination without pivoting has positive pivots."""
    if not is_symmetric(A):
        return False
    m = [list(r) for r in A.data]
    n = A.rows
    for k in range(n):
        p = m[k][k]
        if p <= 0:
            return False
        for i in range(k + 1, n):
            f = m[i][k] / p
            if f:
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
    return True


def orthogonal_projector(K: Sequence[Column], gram: Matrix) -> Matrix:
    """Gram-orthogonal projector onto span(K): ``K (K^T G K)^-1 K^T G``."""
    n = gram.rows
    if not K:
        return Matrix.zeros(n, n)
    Km = Matrix.from_columns(K, n)
    return Km @ inverse(Km.T @ gram @ Km) @ Km.T @ gram


def invert_on_complement(A: Matrix, K: Sequence[Column], gram: Matrix) -> Matrix:
    """Generalized inverse of a gram-self-adjoint A that vanishes on ``K = ker A``.

    The result B satisfies ``B A = A B = 1 - pi_K`` with ``pi_K`` the
    gram-orthogonal projector onto span(K), and ``B pi_K = 0``.
    """
    n = A.rows
    if A.cols != n or gram.shape != (n, n):
        raise LinAlgError("invert_on_complement needs square matrices of equal size")
    if not is_positive_definite(gram):
        raise LinAlgError("gram matrix is not positive definite")
    if gram @ A != A.T @ gram:
        raise LinAlgError("matrix is not self-adjoint with respect to gram")
    K = [tuple(as_scalar(x) for x in k) for k in K]
    if any(any(A.apply(k)) for k in K) or rank(Matrix.from_columns(K, n)) != len(K) \
            or len(K) != n - rank(A):
        raise LinAlgError("K does not span the kernel of A")
    proj = orthogonal_projector(K, gram)
    return inverse(A + proj) - proj


def vec_add(a: Sequence, b: Sequence) -> Column:
    return tuple(x + y for x, y in zip(a, b))


def vec_scale(c, a: Sequence) -> Column:
    return tuple(c * x for x in a)


def linear_combination(terms: Iterable, length: int) -> Column:
    out = [ZERO] * length
    for c, v in terms:
        if c:
            for i, x in enumerate(v):
                if x:
                    out[i] += c * x
    return tuple(out)
