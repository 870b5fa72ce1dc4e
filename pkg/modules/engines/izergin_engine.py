"""
Restricted-case partition function: determinant form, product form, the two
recursions, the homogeneous limit and the 2-Toda relation.

In the restricted case (all rapidity differences zero, or multiples of
2 pi i) the weights reduce to a0 = 1 - alpha beta, b0 = alpha - beta and
c0 = sqrt(1 - alpha^2) sqrt(1 - beta^2), and the partition function has an
Izergin-type determinant form

    Z = prod_{i,j} a0_ij b0_ij / prod_{i<j} (alpha_i - alpha_j)(beta_j - beta_i)
        * prod_k gamma_k delta_k * det[1 / (a0_ij b0_ij)]

which factorizes into prod_k gamma_k delta_k prod_{i<j} (1 - alpha_i alpha_j)(1 - beta_i beta_j).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np
from scipy import special

from ..errors import DegeneratePointError, DomainError, NumericalLimitError, SizeError
from ..model_core import RestrictedParams
from ..numeric_kernel import (
    BivariateJet,
    Number,
    det,
    jet_det,
    jet_reciprocal_kernel,
    principal_sqrt,
    relative_difference,
)

logger = logging.getLogger(__name__)

COLLISION_TOL = 1e-13
HOMOGENEOUS_MAX_N = 6
TAU_FLOOR = 1e-300

# Richardson steps for the alpha_1 beta_1 = 1 limit, and the agreement demanded of the last sample.
LIMIT_STEPS = (1e-4, 1e-5)
LIMIT_AGREEMENT_TOL = 1e-3


def _check_distinct(p: RestrictedParams) -> None:
    for i, j in combinations(range(p.n), 2):
        if abs(p.alpha[i] - p.alpha[j]) <= COLLISION_TOL:
            raise DomainError(f"alpha[{i + 1}] and alpha[{j + 1}] coincide")
        if abs(p.beta[i] - p.beta[j]) <= COLLISION_TOL:
            raise DomainError(f"beta[{i + 1}] and beta[{j + 1}] coincide")


def check_separation(p: RestrictedParams) -> None:
    """
    Raises DomainError naming the first pair that collides.

    The determinant form needs pairwise distinct alphas and betas, and
    alpha_i != beta_j, alpha_i beta_j != 1 (kernel poles).
    """
    _check_distinct(p)
    for i in range(p.n):
        for j in range(p.n):
            if abs(p.alpha[i] - p.beta[j]) <= COLLISION_TOL:
                raise DomainError(f"alpha[{i + 1}] and beta[{j + 1}] coincide (kernel pole)")
            if abs(1 - p.alpha[i] * p.beta[j]) <= COLLISION_TOL:
                raise DomainError(f"alpha[{i + 1}]*beta[{j + 1}] = 1 (kernel pole)")


def _a0b0(p: RestrictedParams) -> np.ndarray:
    alpha = np.array(p.alpha)
    beta = np.array(p.beta)
    return (1 - np.outer(alpha, beta)) * (alpha[:, None] - beta[None, :])


def _vandermonde(p: RestrictedParams) -> complex:
    total = 1 + 0j
    for i, j in combinations(range(p.n), 2):
        total *= (p.alpha[i] - p.alpha[j]) * (p.beta[j] - p.beta[i])
    return total


def _gamma_delta(p: RestrictedParams) -> complex:
    return complex(np.prod(np.array(p.gamma) * np.array(p.delta)))


def kernel_matrix(p: RestrictedParams) -> np.ndarray:
    """M_ij = 1 / ((1 - alpha_i beta_j)(alpha_i - beta_j))."""
    check_separation(p)
    return 1.0 / _a0b0(p)


def dwpf_restricted_det(p: RestrictedParams) -> complex:
    """
    Restricted partition function from the determinant form.

    Raises:
        DomainError: If the separation requirements of `check_separation` fail.
    """
    m = kernel_matrix(p)
    prefactor = np.prod(_a0b0(p)) / _vandermonde(p)
    return complex(prefactor * _gamma_delta(p) * det(m))


def dwpf_cleared_det(p: RestrictedParams) -> complex:
    """
    Determinant form with every kernel pole cleared.

    Row i of the kernel is multiplied by prod_k a0_ik b0_ik, so entry (i, j)
    becomes prod_{k != j} a0_ik b0_ik. Only pairwise distinct alphas and
    betas are required; alpha_i = beta_j and alpha_i beta_j = 1 are regular.
    """
    _check_distinct(p)
    a0b0 = _a0b0(p)
    n = p.n
    cleared = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            cleared[i, j] = np.prod(np.delete(a0b0[i], j))
    return complex(_gamma_delta(p) / _vandermonde(p) * det(cleared))


def dwpf_restricted_product(p: RestrictedParams) -> complex:
    """
    Product form prod_{i,j} sqrt(1 - alpha_i alpha_j) sqrt(1 - beta_i beta_j).

    Diagonal factors come from the cached gamma and delta; each off-diagonal
    pair of square roots multiplies to (1 - alpha_i alpha_j)(1 - beta_i beta_j).
    """
    total = _gamma_delta(p)
    for i, j in combinations(range(p.n), 2):
        total *= (1 - p.alpha[i] * p.alpha[j]) * (1 - p.beta[i] * p.beta[j])
    return complex(total)


def cauchy_factorization_residual(p: RestrictedParams) -> float:
    """Relative defect of det M against its Cauchy-type product."""
    lhs = det(kernel_matrix(p))
    rhs = _vandermonde(p) / np.prod(_a0b0(p))
    for i, j in combinations(range(p.n), 2):
        rhs *= (1 - p.alpha[i] * p.alpha[j]) * (1 - p.beta[i] * p.beta[j])
    return abs(lhs - rhs) / abs(rhs)


def _minor(p: RestrictedParams, row: int, col: int) -> complex:
    """Partition function with one row and one column removed; 1 for the empty lattice."""
    if p.n == 1:
        return 1.0 + 0j
    return dwpf_restricted_det(p.without(row, col))


def _check_index(p: RestrictedParams, index: int, label: str) -> int:
    if not 1 <= index <= p.n:
        raise IndexError(f"{label} index {index} outside 1..{p.n}")
    return index - 1


def korepin_recursion_residual(p: RestrictedParams, m: int, n: int) -> float:
    """
    Checks Z at alpha_m = beta_n against c0_mn prod_{i!=m} a0_in prod_{j!=n} a0_mj Z_(mn).

    Indices are one-based. alpha_m is overwritten with beta_n before
    evaluation; the specialized value comes from the pole-free cleared form.
    """
    row = _check_index(p, m, "row")
    col = _check_index(p, n, "column")
    q = p.with_alpha(row, p.beta[col])
    if q.n > 1:
        check_separation(q.without(row, col))

    lhs = dwpf_cleared_det(q)
    rhs = q.weights(row, col).c0 * _minor(q, row, col)
    for i in range(q.n):
        if i != row:
            rhs *= q.weights(i, col).a0
    for j in range(q.n):
        if j != col:
            rhs *= q.weights(row, j).a0
    return relative_difference(lhs, rhs)


def _richardson(sample, steps=LIMIT_STEPS) -> complex:
    """Eliminates the linear term of sample(eps) = L + c eps + O(eps^2) from two steps."""
    h1, h2 = steps
    z1, z2 = sample(h1), sample(h2)
    limit = (h1 * z2 - h2 * z1) / (h1 - h2)
    if relative_difference(limit, z2) > LIMIT_AGREEMENT_TOL:
        raise NumericalLimitError(
            f"extrapolated limit {limit} disagrees with the sample at eps={h2}: {z2}"
        )
    return limit


def second_recursion_limit(p: RestrictedParams) -> complex:
    """
    Z at beta_1 = 1 / alpha_1, reached by Richardson extrapolation.

    The a0_11 factor of the prefactor vanishes against a kernel pole there,
    so the determinant form is sampled at beta_1 = (1 + eps) / alpha_1.
    """
    if abs(p.alpha[0]) <= COLLISION_TOL:
        raise DomainError("alpha[1] = 0 has no reciprocal")
    target = 1.0 / p.alpha[0]
    return _richardson(lambda eps: dwpf_restricted_det(p.with_beta(0, target * (1 + eps))))


def second_recursion_residual(p: RestrictedParams) -> float:
    """Checks Z at alpha_1 beta_1 = 1 against c0_11 prod_{j>=2} b0_1j (-b0_j1) Z_(11)."""
    limit = second_recursion_limit(p)
    q = p.with_beta(0, 1.0 / p.alpha[0])
    rhs = q.weights(0, 0).c0 * _minor(q, 0, 0)
    for j in range(1, q.n):
        rhs *= q.weights(0, j).b0 * -q.weights(j, 0).b0
    return relative_difference(limit, rhs)


def row_expansion_residual(p: RestrictedParams) -> float:
    """Checks the determinant form against its first-row expansion in c0-weighted minors."""
    check_separation(p)
    n = p.n
    total = 0j
    for i in range(n):
        term = p.weights(0, i).c0 * _minor(p, 0, i)
        for j in range(n):
            if j != i:
                w = p.weights(0, j)
                term *= w.a0 * w.b0
        for j in range(1, n):
            w = p.weights(j, i)
            term *= w.a0 * w.b0
            term /= p.alpha[0] - p.alpha[j]
        for j in range(n):
            if j < i:
                term /= p.beta[i] - p.beta[j]
            elif j > i:
                term /= p.beta[j] - p.beta[i]
        total += -term if i % 2 else term
    return relative_difference(total, dwpf_restricted_det(p))


def symmetry_residual(p: RestrictedParams, perm_alpha: Sequence[int],
                      perm_beta: Optional[Sequence[int]] = None) -> float:
    """Relative change of the determinant form under permutations (zero-based) of alpha and beta."""
    perm_beta = range(p.n) if perm_beta is None else perm_beta
    permuted = RestrictedParams(
        tuple(p.alpha[k] for k in perm_alpha),
        tuple(p.beta[k] for k in perm_beta),
    )
    return relative_difference(dwpf_restricted_det(permuted), dwpf_restricted_det(p))


def degree_residual(p: RestrictedParams, index: int, samples: Sequence[Number],
                    checkpoints: Sequence[Number]) -> float:
    """
    Tests that Z / sqrt(1 - alpha_k^2) is a polynomial of degree N-1 in alpha_k.

    The polynomial through the N `samples` is compared with the determinant
    form at each of the `checkpoints`; the largest relative difference is returned.
    """
    row = _check_index(p, index, "alpha")
    if len(samples) != p.n:
        raise ValueError(f"degree test needs exactly {p.n} samples, got {len(samples)}")

    def reduced(x):
        q = p.with_alpha(row, x)
        return dwpf_restricted_det(q) / q.gamma[row]

    xs = np.array(samples, dtype=complex)
    ys = np.array([reduced(x) for x in xs])
    coeffs = np.linalg.solve(np.vander(xs, p.n), ys)
    return max(relative_difference(np.polyval(coeffs, x), reduced(x)) for x in checkpoints)


def tau_jet(alpha0: Number, beta0: Number, n: int, order_a: int = 0, order_b: int = 0) -> BivariateJet:
    """
    Bi-Wronskian tau_N = det[d^{i-1}/dalpha^{i-1} d^{j-1}/dbeta^{j-1} f] as a jet.

    f = 1 / ((alpha - beta)(1 - alpha beta)); tau_0 = 1.
    """
    center = (complex(alpha0), complex(beta0))
    if n == 0:
        return BivariateJet.constant(1.0, order_a, order_b, center)
    f = jet_reciprocal_kernel(alpha0, beta0, n - 1 + order_a, n - 1 + order_b)
    entries = [
        [f.derivative(i, j).truncate(order_a, order_b) for j in range(n)]
        for i in range(n)
    ]
    return jet_det(entries)


def dwpf_homogeneous(alpha: Number, beta: Number, n: int) -> complex:
    """
    Restricted partition function with all alpha_i = alpha and all beta_j = beta.

    Raises:
        SizeError: If N lies outside 1..6.
        DomainError: If (alpha, beta) is singular.
    """
    if not 1 <= n <= HOMOGENEOUS_MAX_N:
        raise SizeError(f"homogeneous limit supports 1 <= N <= {HOMOGENEOUS_MAX_N}, got N = {n}")
    alpha, beta = complex(alpha), complex(beta)
    tau = tau_jet(alpha, beta, n)
    kernel = (alpha - beta) * (1 - alpha * beta)
    factorials = 1
    for k in range(1, n):
        factorials *= special.factorial(k, exact=True)
    sign = -1.0 if (n * (n - 1) // 2) % 2 else 1.0
    c0 = principal_sqrt(1 - alpha * alpha) * principal_sqrt(1 - beta * beta)
    return complex(sign / factorials ** 2 * kernel ** (n * n) * c0 ** n * tau.value)


@dataclass(frozen=True)
class TodaTau:
    """tau_{N-1}, tau_N and tau_{N+1} expanded about a common point."""
    n: int
    lower: BivariateJet
    middle: BivariateJet
    upper: BivariateJet

    @classmethod
    def build(cls, alpha0: Number, beta0: Number, n: int, order: int = 2) -> "TodaTau":
        return cls(
            n=n,
            lower=tau_jet(alpha0, beta0, n - 1, order, order),
            middle=tau_jet(alpha0, beta0, n, order, order),
            upper=tau_jet(alpha0, beta0, n + 1, order, order),
        )


def toda_residual(alpha0: Number, beta0: Number, n: int) -> float:
    """
    Relative defect of d^2/dalpha dbeta log tau_N = tau_{N+1} tau_{N-1} / tau_N^2.

    Raises:
        DegeneratePointError: If tau_N vanishes at the expansion point.
    """
    if n < 1:
        raise SizeError(f"the Toda relation needs N >= 1, got N = {n}")
    taus = TodaTau.build(alpha0, beta0, n)
    c = taus.middle.coeffs
    if abs(c[0, 0]) < TAU_FLOOR:
        raise DegeneratePointError(f"tau_{n} vanishes at ({alpha0}, {beta0})")
    lhs = c[1, 1] / c[0, 0] - c[1, 0] * c[0, 1] / c[0, 0] ** 2
    rhs = taus.upper.value * taus.lower.value / taus.middle.value ** 2
    return abs(lhs - rhs) / abs(rhs)


__all__ = [
    "RestrictedParams",
    "TodaTau",
    "cauchy_factorization_residual",
    "check_separation",
    "degree_residual",
    "dwpf_cleared_det",
    "dwpf_homogeneous",
    "dwpf_restricted_det",
    "dwpf_restricted_product",
    "kernel_matrix",
    "korepin_recursion_residual",
    "row_expansion_residual",
    "second_recursion_limit",
    "second_recursion_residual",
    "symmetry_residual",
    "tau_jet",
    "toda_residual",
]
