"""
Scalar, matrix and truncated-Taylor arithmetic shared by all engines.

Scalars are Python `complex` values (binary64 real and imaginary parts) and
matrices are `numpy` complex arrays. Determinants go through LAPACK's LU
factorization with partial pivoting. `BivariateJet` holds a truncated
two-variable Taylor expansion and supports the ring operations, division by
a jet with non-zero constant term, and differentiation.
"""

from __future__ import annotations

import cmath
import logging
import warnings
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np
from scipy import linalg, signal, special

from .errors import DimensionError, DomainError, ShapeError

logger = logging.getLogger(__name__)

Number = Union[int, float, complex]

# Distance below which an expansion point counts as lying on the kernel's singular locus.
SINGULAR_TOL = 1e-14

# Jet determinants switch from cofactor expansion to fraction-free elimination above this size.
COFACTOR_MAX_N = 4


def principal_sqrt(z: Number) -> complex:
    """Principal square root; the single branch used everywhere in the package."""
    return cmath.sqrt(complex(z))


def relative_difference(x: Number, y: Number) -> float:
    """Symmetric relative difference |x - y| / max(|x|, |y|), zero when both vanish."""
    scale = max(abs(x), abs(y))
    if scale == 0.0:
        return 0.0
    return abs(complex(x) - complex(y)) / scale


def det(m: Union[np.ndarray, Sequence[Sequence[Number]]]) -> complex:
    """
    Determinant of a square complex matrix.

    Uses LU decomposition with partial pivoting by modulus; the sign of the
    row permutation is read from the pivot vector.

    Args:
        m: Square matrix (nested sequences or a numpy array).

    Returns:
        complex: The determinant.

    Raises:
        DimensionError: If `m` is not a non-empty square matrix.
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionError(f"det requires a non-empty square matrix, got shape {a.shape}")

    with warnings.catch_warnings():
        # singular input yields zero
        warnings.simplefilter("ignore", linalg.LinAlgWarning)
        lu, piv = linalg.lu_factor(a, check_finite=True)

    swaps = int(np.count_nonzero(piv != np.arange(a.shape[0])))
    sign = -1.0 if swaps % 2 else 1.0
    return complex(sign * np.prod(np.diag(lu)))


@dataclass(frozen=True, eq=False)
class BivariateJet:
    """
    Truncated Taylor expansion of a function of (alpha, beta) about `center`.

    `coeffs[p, q]` is the coefficient of (alpha - alpha0)^p (beta - beta0)^q, so
    the mixed partial derivative equals `coeffs[p, q] * p! * q!`.
    """
    coeffs: np.ndarray
    center: Tuple[complex, complex] = (0j, 0j)

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex)
        if coeffs.ndim != 2:
            raise ShapeError(f"jet coefficients must be two-dimensional, got shape {coeffs.shape}")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "center", (complex(self.center[0]), complex(self.center[1])))

    @classmethod
    def constant(cls, value: Number, order_a: int, order_b: int,
                 center: Tuple[Number, Number] = (0j, 0j)) -> "BivariateJet":
        coeffs = np.zeros((order_a + 1, order_b + 1), dtype=complex)
        coeffs[0, 0] = value
        return cls(coeffs, center)

    @classmethod
    def variable_a(cls, order_a: int, order_b: int,
                   center: Tuple[Number, Number]) -> "BivariateJet":
        """The jet of the first variable itself: alpha0 + (alpha - alpha0)."""
        jet = cls.constant(center[0], order_a, order_b, center)
        if order_a >= 1:
            jet.coeffs[1, 0] = 1.0
        return jet

    @classmethod
    def variable_b(cls, order_a: int, order_b: int,
                   center: Tuple[Number, Number]) -> "BivariateJet":
        """The jet of the second variable itself: beta0 + (beta - beta0)."""
        jet = cls.constant(center[1], order_a, order_b, center)
        if order_b >= 1:
            jet.coeffs[0, 1] = 1.0
        return jet

    @property
    def order_a(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def order_b(self) -> int:
        return self.coeffs.shape[1] - 1

    @property
    def value(self) -> complex:
        """Value of the expanded function at the expansion point."""
        return complex(self.coeffs[0, 0])

    def partial(self, p: int, q: int) -> complex:
        """Mixed partial derivative d^p/dalpha^p d^q/dbeta^q at the expansion point."""
        return complex(self.coeffs[p, q] * special.factorial(p, exact=True)
                       * special.factorial(q, exact=True))

    def _check_compatible(self, other: "BivariateJet") -> None:
        if self.coeffs.shape != other.coeffs.shape:
            raise ShapeError(
                f"jet orders differ: ({self.order_a}, {self.order_b}) vs ({other.order_a}, {other.order_b})"
            )
        if self.center != other.center:
            raise ShapeError(f"jet expansion points differ: {self.center} vs {other.center}")

    def _wrap(self, coeffs: np.ndarray) -> "BivariateJet":
        return BivariateJet(coeffs, self.center)

    def __add__(self, other):
        if isinstance(other, BivariateJet):
            self._check_compatible(other)
            return self._wrap(self.coeffs + other.coeffs)
        coeffs = self.coeffs.copy()
        coeffs[0, 0] += other
        return self._wrap(coeffs)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, BivariateJet):
            self._check_compatible(other)
            full = signal.convolve2d(self.coeffs, other.coeffs, mode="full")
            return self._wrap(full[: self.order_a + 1, : self.order_b + 1])
        return self._wrap(self.coeffs * other)

    __rmul__ = __mul__

    def reciprocal(self) -> "BivariateJet":
        """
        Jet of 1/g for this jet g.

        The series is normalized to unit constant term and inverted by the
        usual recursion h[p, q] = -sum u[r, s] h[p - r, q - s] over (r, s) != (0, 0).

        Raises:
            DomainError: If the constant term vanishes.
        """
        g00 = self.coeffs[0, 0]
        if abs(g00) == 0.0:
            raise DomainError("cannot invert a jet with vanishing constant term")
        unit = self.coeffs / g00
        h = np.zeros_like(unit)
        h[0, 0] = 1.0
        for p in range(self.order_a + 1):
            for q in range(self.order_b + 1):
                if p == 0 and q == 0:
                    continue
                # h[p, q] is still zero, so the (0, 0) term drops out of the sum
                window = unit[: p + 1, : q + 1][::-1, ::-1]
                h[p, q] = -np.sum(window * h[: p + 1, : q + 1])
        return self._wrap(h / g00)

    def __truediv__(self, other):
        if isinstance(other, BivariateJet):
            return self * other.reciprocal()
        return self._wrap(self.coeffs / other)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def derivative(self, p: int, q: int) -> "BivariateJet":
        """Jet of the (p, q) mixed partial derivative; orders drop by p and q."""
        if p > self.order_a or q > self.order_b:
            raise ShapeError(
                f"cannot differentiate ({p}, {q}) times a jet of order ({self.order_a}, {self.order_b})"
            )
        rows = np.arange(self.order_a - p + 1)
        cols = np.arange(self.order_b - q + 1)
        # (r + p)! / r! and (s + q)! / s!
        scale = np.outer(special.poch(rows + 1, p), special.poch(cols + 1, q))
        return self._wrap(self.coeffs[p:, q:] * scale)

    def truncate(self, order_a: int, order_b: int) -> "BivariateJet":
        if order_a > self.order_a or order_b > self.order_b:
            raise ShapeError("truncation cannot raise a jet's order")
        return self._wrap(self.coeffs[: order_a + 1, : order_b + 1].copy())


def jet_reciprocal_kernel(alpha0: Number, beta0: Number, order_a: int, order_b: int) -> BivariateJet:
    """
    Taylor expansion of f(alpha, beta) = 1 / ((alpha - beta)(1 - alpha beta)).

    The polynomial (alpha - beta)(1 - alpha beta) is expanded exactly as a jet
    and then inverted.

    Raises:
        DomainError: If (alpha0, beta0) lies on alpha = beta or alpha beta = 1.
    """
    alpha0, beta0 = complex(alpha0), complex(beta0)
    if abs(alpha0 - beta0) < SINGULAR_TOL:
        raise DomainError(f"expansion point on the locus alpha = beta: {alpha0}")
    if abs(1.0 - alpha0 * beta0) < SINGULAR_TOL:
        raise DomainError(f"expansion point on the locus alpha*beta = 1: ({alpha0}, {beta0})")

    center = (alpha0, beta0)
    a = BivariateJet.variable_a(order_a, order_b, center)
    b = BivariateJet.variable_b(order_a, order_b, center)
    return ((a - b) * (1 - a * b)).reciprocal()


def _cofactor_det(m: Sequence[Sequence[BivariateJet]]) -> BivariateJet:
    n = len(m)
    if n == 1:
        return m[0][0]
    total = None
    for col in range(n):
        minor = [row[:col] + row[col + 1:] for row in m[1:]]
        term = m[0][col] * _cofactor_det(minor)
        if col % 2:
            term = -term
        total = term if total is None else total + term
    return total


def _bareiss_det(m: Sequence[Sequence[BivariateJet]]) -> BivariateJet:
    work = [list(row) for row in m]
    n = len(work)
    negate = False
    previous = None
    for k in range(n - 1):
        pivot_row = max(range(k, n), key=lambda r: abs(work[r][k].value))
        if abs(work[pivot_row][k].value) == 0.0:
            raise DomainError("fraction-free elimination met a pivot with vanishing constant term")
        if pivot_row != k:
            work[k], work[pivot_row] = work[pivot_row], work[k]
            negate = not negate
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                updated = work[i][j] * work[k][k] - work[i][k] * work[k][j]
                work[i][j] = updated if previous is None else updated / previous
        previous = work[k][k]
    result = work[n - 1][n - 1]
    return -result if negate else result


def jet_det(m: Sequence[Sequence[BivariateJet]]) -> BivariateJet:
    """
    Determinant of a square matrix of jets, in jet arithmetic.

    Cofactor expansion for N <= 4, fraction-free (Bareiss) elimination above.

    Raises:
        DimensionError: If the matrix is empty or not square.
        ShapeError: If the jets do not share orders and expansion point.
    """
    n = len(m)
    if n == 0 or any(len(row) != n for row in m):
        raise DimensionError("jet_det requires a non-empty square matrix")
    first = m[0][0]
    for row in m:
        for entry in row:
            first._check_compatible(entry)
    if n <= COFACTOR_MAX_N:
        return _cofactor_det(m)
    return _bareiss_det(m)


__all__ = [
    "BivariateJet",
    "det",
    "jet_det",
    "jet_reciprocal_kernel",
    "principal_sqrt",
    "relative_difference",
]
