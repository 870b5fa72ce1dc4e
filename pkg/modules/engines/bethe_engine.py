"""
Algebraic Bethe ansatz for the domain-wall partition function.

Site basis: site 1 is the most significant position of a basis index, and
the local index of a site equals its bond value (0 or 1). This is the bond
labelling, not a spin labelling where bit 1 would mean spin up: the
reference state, all spins up in that language, is the all-zero index.
The reference state |0> has every site at index 0 and the dual state <1|
every site at index 1, so Z = <1| B(alpha_1, u_1) ... B(alpha_N, u_N) |0>.

The auxiliary line enters at site 1. A block T[out][in] of the monodromy
maps the auxiliary state `in` (west of site 1) to `out` (east of site N):
A = T[0][0], B = T[0][1], C = T[1][0], D = T[1][1].
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg, optimize

from ..errors import DimensionError, DomainError, InvertibilityError, SizeError
from ..model_core import ModelParams, SixWeights, checked_weights, general_weights
from ..numeric_kernel import Number, principal_sqrt, relative_difference

logger = logging.getLogger(__name__)

OPERATOR_MAX_N = 10
DENOMINATOR_TOL = 1e-12
CONDITION_LIMIT = 1e12

_I2 = np.eye(2, dtype=complex)


def _guard(n: int, route: str) -> None:
    if not 1 <= n <= OPERATOR_MAX_N:
        raise SizeError(f"{route} supports 1 <= N <= {OPERATOR_MAX_N}, got N = {n}")


def _nonzero(value: complex, label: str) -> complex:
    if abs(value) < DENOMINATOR_TOL:
        raise DomainError(f"denominator {label} vanishes ({value})")
    return value


# Operators and states

@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """A 2^N x 2^N operator on N sites; basis index bits are bond values, site 1 first."""
    n_sites: int
    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        dim = 1 << self.n_sites
        if entries.shape != (dim, dim):
            raise DimensionError(
                f"operator on {self.n_sites} sites must be {dim} x {dim}, got {entries.shape}"
            )
        object.__setattr__(self, "entries", entries)

    @classmethod
    def identity(cls, n_sites: int) -> "OperatorMatrix":
        return cls(n_sites, np.eye(1 << n_sites, dtype=complex))

    @classmethod
    def from_factors(cls, factors: Sequence[np.ndarray]) -> "OperatorMatrix":
        """Ordered tensor product of 2 x 2 site factors, site 1 first."""
        return cls(len(factors), reduce(np.kron, factors, np.ones((1, 1), dtype=complex)))

    def _other(self, other: "OperatorMatrix") -> np.ndarray:
        if other.n_sites != self.n_sites:
            raise DimensionError(f"operators act on {self.n_sites} and {other.n_sites} sites")
        return other.entries

    def __matmul__(self, other):
        if isinstance(other, StateVector):
            if other.n_sites != self.n_sites:
                raise DimensionError(f"operator on {self.n_sites} sites applied to a {other.n_sites}-site state")
            return StateVector(self.n_sites, self.entries @ other.amplitudes)
        return OperatorMatrix(self.n_sites, self.entries @ self._other(other))

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.n_sites, self.entries + self._other(other))

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.n_sites, self.entries - self._other(other))

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def is_diagonal(self, tol: float = 0.0) -> bool:
        off = self.entries - np.diag(np.diag(self.entries))
        return bool(np.max(np.abs(off), initial=0.0) <= tol * max(np.max(np.abs(self.entries)), 1.0))

    def difference(self, other: "OperatorMatrix") -> float:
        """Largest entrywise deviation relative to the largest entry of either operator."""
        theirs = self._other(other)
        scale = max(np.max(np.abs(self.entries)), np.max(np.abs(theirs)))
        if scale == 0.0:
            return 0.0
        return float(np.max(np.abs(self.entries - theirs)) / scale)


@dataclass(frozen=True, eq=False)
class StateVector:
    n_sites: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amplitudes.shape[0] != 1 << self.n_sites:
            raise DimensionError(f"state on {self.n_sites} sites needs {1 << self.n_sites} amplitudes")
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def reference(cls, n_sites: int) -> "StateVector":
        """|0>: every site at index 0."""
        amplitudes = np.zeros(1 << n_sites, dtype=complex)
        amplitudes[0] = 1.0
        return cls(n_sites, amplitudes)

    @classmethod
    def dual_reference(cls, n_sites: int) -> "StateVector":
        """<1|: every site at index 1."""
        amplitudes = np.zeros(1 << n_sites, dtype=complex)
        amplitudes[-1] = 1.0
        return cls(n_sites, amplitudes)

    def inner(self, other: "StateVector") -> complex:
        """<self|other> without conjugation; both reference states are real."""
        return complex(self.amplitudes @ other.amplitudes)


def _apply_factors(factors: Sequence[np.ndarray], psi: np.ndarray) -> np.ndarray:
    """Applies a tensor product of site factors to psi of shape (2,) * N."""
    for j, m in enumerate(factors):
        psi = np.moveaxis(np.tensordot(m, psi, axes=([1], [j])), 0, j)
    return psi


# Chains of vertical lines

class Line(NamedTuple):
    """A line crossing the chain: field variable, rapidity and sqrt(1 - field^2)."""
    alpha: complex
    u: complex
    root: complex

    @classmethod
    def of(cls, alpha: Number, u: Number, root: Optional[complex] = None) -> "Line":
        alpha = complex(alpha)
        return cls(alpha, complex(u), principal_sqrt(1 - alpha * alpha) if root is None else complex(root))


@dataclass(frozen=True)
class Chain:
    """The vertical lines (beta_j, v_j) that make up the quantum sites."""
    beta: Tuple[complex, ...]
    v: Tuple[complex, ...]
    delta: Tuple[complex, ...]

    @classmethod
    def from_params(cls, params: ModelParams) -> "Chain":
        return cls(params.beta, params.v, params.delta)

    @property
    def n(self) -> int:
        return len(self.beta)

    def tail(self) -> "Chain":
        """Sites 2..N."""
        return Chain(self.beta[1:], self.v[1:], self.delta[1:])

    def site_line(self, j: int) -> Line:
        """Vertical line j taken as an auxiliary line."""
        return Line(self.beta[j], self.v[j], self.delta[j])

    def weights(self, line: Line) -> List[SixWeights]:
        """Weights of `line` crossing each site: a_{0j}, b_{0j}, ..."""
        return [general_weights(line.alpha, b, line.u, v, sqrt_alpha=line.root, sqrt_beta=d)
                for b, v, d in zip(self.beta, self.v, self.delta)]

    def reverse_weights(self, line: Line) -> List[SixWeights]:
        """Weights with the slots exchanged: a_{j0}, b_{j0}, ..."""
        return [general_weights(b, line.alpha, v, line.u, sqrt_alpha=d, sqrt_beta=line.root)
                for b, v, d in zip(self.beta, self.v, self.delta)]

    def checked(self, l: int, j: int) -> SixWeights:
        return checked_weights(self.beta[l], self.beta[j], self.v[l], self.v[j],
                               sqrt_i=self.delta[l], sqrt_j=self.delta[j])


# R-matrix and monodromy

def _r_from_weights(w: SixWeights) -> np.ndarray:
    """4 x 4 matrix on (auxiliary, site), basis index 2 * aux + site, rows = (east, north)."""
    r = np.zeros((4, 4), dtype=complex)
    r[0, 0] = w.a1
    r[1, 1] = w.b1
    r[1, 2] = w.c1
    r[2, 1] = w.c2
    r[2, 2] = w.b2
    r[3, 3] = w.a2
    return r


def r_matrix(beta_i: Number, beta_j: Number, v_i: Number, v_j: Number, *,
             sqrt_i: Optional[complex] = None, sqrt_j: Optional[complex] = None) -> np.ndarray:
    """R-matrix of two vertical lines, built from the checked weights."""
    return _r_from_weights(checked_weights(beta_i, beta_j, v_i, v_j, sqrt_i=sqrt_i, sqrt_j=sqrt_j))


def _local(r: np.ndarray, out: int, inn: int) -> np.ndarray:
    """Site operator carried by auxiliary transition in -> out."""
    return r.reshape(2, 2, 2, 2)[out, :, inn, :]


class MonodromyBlocks(NamedTuple):
    A: OperatorMatrix
    B: OperatorMatrix
    C: OperatorMatrix
    D: OperatorMatrix


def _chain_blocks(rs: Sequence[np.ndarray]) -> MonodromyBlocks:
    """Blocks of R_{0N} ... R_{01}, built by adding sites at the front."""
    one = np.ones((1, 1), dtype=complex)
    zero = np.zeros((1, 1), dtype=complex)
    a, b, c, d = one, zero, zero, one
    for r in reversed(rs):
        l00, l01, l10, l11 = _local(r, 0, 0), _local(r, 0, 1), _local(r, 1, 0), _local(r, 1, 1)
        a, b, c, d = (
            np.kron(l00, a) + np.kron(l10, b),
            np.kron(l01, a) + np.kron(l11, b),
            np.kron(l00, c) + np.kron(l10, d),
            np.kron(l01, c) + np.kron(l11, d),
        )
    n = len(rs)
    return MonodromyBlocks(*(OperatorMatrix(n, x) for x in (a, b, c, d)))


def chain_monodromy(chain: Chain, line: Line) -> MonodromyBlocks:
    _guard(chain.n, "monodromy")
    return _chain_blocks([_r_from_weights(w) for w in chain.weights(line)])


def monodromy(params: ModelParams, alpha: Number, u: Number) -> MonodromyBlocks:
    """
    Auxiliary-space blocks of the monodromy of a line (alpha, u) over all vertical lines.

    Raises:
        SizeError: If N exceeds the 2^N dimension guard.
    """
    return chain_monodromy(Chain.from_params(params), Line.of(alpha, u))


def _apply_b(rs: Sequence[np.ndarray], psi: np.ndarray) -> np.ndarray:
    """B = T[0][1] applied to psi by contracting one R-matrix per site."""
    phi = np.zeros((2,) + psi.shape, dtype=complex)
    phi[1] = psi
    for j, r in enumerate(rs):
        phi = np.tensordot(r.reshape(2, 2, 2, 2), phi, axes=([2, 3], [0, j + 1]))
        phi = np.moveaxis(phi, 1, j + 1)
    return phi[0]


def dwpf_bethe(params: ModelParams) -> complex:
    """<1| B(alpha_1, u_1) ... B(alpha_N, u_N) |0>, applied right to left without forming products."""
    n = params.n
    _guard(n, "Bethe route")
    chain = Chain.from_params(params)
    psi = np.zeros((2,) * n, dtype=complex)
    psi[(0,) * n] = 1.0
    for k in reversed(range(n)):
        line = Line(params.alpha[k], params.u[k], params.gamma[k])
        psi = _apply_b([_r_from_weights(w) for w in chain.weights(line)], psi)
    return complex(psi[(1,) * n])


def embed_two_site(r4: np.ndarray, a: int, b: int, n: int) -> np.ndarray:
    """
    Places a two-site operator acting on sites (a, b) (zero-based) into an n-site space.

    The first tensor slot of `r4` goes to site a, the second to site b.
    """
    if a == b or not (0 <= a < n and 0 <= b < n):
        raise DimensionError(f"cannot embed on sites ({a}, {b}) of {n}")
    order = [a, b] + [k for k in range(n) if k not in (a, b)]
    big = np.kron(np.asarray(r4, dtype=complex), np.eye(1 << (n - 2), dtype=complex))
    perm = np.argsort(order)
    tensor = big.reshape((2,) * (2 * n)).transpose(list(perm) + [n + p for p in perm])
    return tensor.reshape(1 << n, 1 << n)


# F-matrix

class FMatrix(NamedTuple):
    forward: OperatorMatrix
    inverse: OperatorMatrix
    condition: float


def f_matrix(params: ModelParams) -> FMatrix:
    """
    Factorizing F-matrix, F_{1..N} = F_{2..N} F_{1,2..N}.

    F_{k,k+1..N} = e11_k + e22_k T_{k,k+1..N}(beta_k, v_k): site k acts as the
    auxiliary space of a monodromy over the later sites. The inverse comes
    from an LU solve against the identity.

    Raises:
        InvertibilityError: If F is singular or its 1-norm condition number
            exceeds CONDITION_LIMIT.
    """
    n = params.n
    _guard(n, "F-matrix")
    chain = Chain.from_params(params)
    f = np.eye(2, dtype=complex)
    for k in range(n - 2, -1, -1):
        sub = Chain(chain.beta[k + 1:], chain.v[k + 1:], chain.delta[k + 1:])
        blocks = _chain_blocks([_r_from_weights(w) for w in sub.weights(chain.site_line(k))])
        dim = 1 << (n - k - 1)
        head = np.block([
            [np.eye(dim, dtype=complex), np.zeros((dim, dim), dtype=complex)],
            [blocks.C.entries, blocks.D.entries],
        ])
        f = np.kron(_I2, f) @ head

    with warnings.catch_warnings():
        warnings.simplefilter("error", linalg.LinAlgWarning)
        try:
            lu, piv = linalg.lu_factor(f)
        except (linalg.LinAlgWarning, linalg.LinAlgError) as e:
            raise InvertibilityError(f"F-matrix is singular: {e}")
    if np.min(np.abs(np.diag(lu))) == 0.0:
        raise InvertibilityError("F-matrix is singular: zero pivot")
    inverse = linalg.lu_solve((lu, piv), np.eye(f.shape[0], dtype=complex))
    condition = float(np.linalg.norm(f, 1) * np.linalg.norm(inverse, 1))
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise InvertibilityError(f"F-matrix condition number {condition:.3e} exceeds {CONDITION_LIMIT:.0e}")
    logger.debug(f"F-matrix on {n} sites, condition {condition:.3e}")
    return FMatrix(OperatorMatrix(n, f), OperatorMatrix(n, inverse), condition)


def twist_conjugate(params: ModelParams, alpha: Number, u: Number) -> MonodromyBlocks:
    """Twisted blocks F X F^-1 by direct conjugation."""
    fm = f_matrix(params)
    blocks = monodromy(params, alpha, u)
    return MonodromyBlocks(*(fm.forward @ x @ fm.inverse for x in blocks))


# Closed forms of the twisted operators

def _diag(x: complex, y: complex) -> np.ndarray:
    return np.diag([x, y]).astype(complex)


def _lower(x: complex) -> np.ndarray:
    return np.array([[0, 0], [x, 0]], dtype=complex)


def _upper(x: complex) -> np.ndarray:
    return np.array([[0, x], [0, 0]], dtype=complex)


def _twisted_b_terms(chain: Chain, line: Line) -> List[List[np.ndarray]]:
    """Site factors of each summand l of the twisted B-operator."""
    w = chain.weights(line)
    terms = []
    for l in range(chain.n):
        factors = []
        for j in range(chain.n):
            if j < l:
                jl = chain.checked(j, l)
                factors.append(_diag(w[j].b2, w[j].a2 * jl.a2 / _nonzero(jl.b2, f"b2[{j + 1},{l + 1}]")))
            elif j == l:
                factors.append(_lower(w[l].c1))
            else:
                lj, jl = chain.checked(l, j), chain.checked(j, l)
                factors.append(_diag(lj.a1 * w[j].b2,
                                     lj.a2 * w[j].a2 * jl.a2 / _nonzero(jl.b2, f"b2[{j + 1},{l + 1}]")))
        terms.append(factors)
    return terms


def _twisted_c_terms(chain: Chain, line: Line) -> List[List[np.ndarray]]:
    w = chain.weights(line)
    terms = []
    for l in range(chain.n):
        factors = []
        for j in range(chain.n):
            if j == l:
                factors.append(_upper(w[l].c2))
                continue
            lj = chain.checked(l, j)
            b2 = _nonzero(lj.b2, f"b2[{l + 1},{j + 1}]")
            if j < l:
                factors.append(_diag(lj.a1 * w[j].b2 / b2, w[j].a2))
            else:
                factors.append(_diag(w[j].b2 / b2, w[j].a2 / _nonzero(lj.a2, f"a2[{l + 1},{j + 1}]")))
        terms.append(factors)
    return terms


def _sum_terms(n: int, terms: Iterable[Sequence[np.ndarray]]) -> OperatorMatrix:
    total = np.zeros((1 << n, 1 << n), dtype=complex)
    for factors in terms:
        total += OperatorMatrix.from_factors(factors).entries
    return OperatorMatrix(n, total)


def _twisted_closed_forms(chain: Chain, line: Line) -> MonodromyBlocks:
    _guard(chain.n, "twisted operators")
    w = chain.weights(line)
    wr = chain.reverse_weights(line)
    b_op = _sum_terms(chain.n, _twisted_b_terms(chain, line))
    c_op = _sum_terms(chain.n, _twisted_c_terms(chain, line))
    d_op = OperatorMatrix.from_factors([_diag(x.b2, x.a2) for x in w])
    d_inv = OperatorMatrix.from_factors([
        _diag(1 / _nonzero(x.b2, f"b2[0,{j + 1}]"), 1 / _nonzero(x.a2, f"a2[0,{j + 1}]"))
        for j, x in enumerate(w)
    ])
    head = OperatorMatrix.from_factors([
        _diag(x.a1, r.a2 * x.a2 / _nonzero(r.b2, f"b2[{j + 1},0]"))
        for j, (x, r) in enumerate(zip(w, wr))
    ])
    a_op = head + b_op @ d_inv @ c_op
    return MonodromyBlocks(a_op, b_op, c_op, d_op)


def twisted_closed_forms(params: ModelParams, alpha: Number, u: Number) -> MonodromyBlocks:
    """
    Twisted A, B, C, D assembled from their tensor-product formulas.

    Raises:
        DomainError: If a b2 or a2 denominator vanishes, including those of D^-1.
    """
    return _twisted_closed_forms(Chain.from_params(params), Line.of(alpha, u))


def dwpf_twisted(params: ModelParams) -> complex:
    """<1| B~(alpha_1, u_1) ... B~(alpha_N, u_N) |0> / prod_{j<k} a2_jk, from the closed form of B~."""
    n = params.n
    _guard(n, "twisted route")
    chain = Chain.from_params(params)
    norm = 1 + 0j
    for j in range(n):
        for k in range(j + 1, n):
            norm *= _nonzero(chain.checked(j, k).a2, f"a2[{j + 1},{k + 1}]")

    psi = np.zeros((2,) * n, dtype=complex)
    psi[(0,) * n] = 1.0
    for k in reversed(range(n)):
        terms = _twisted_b_terms(chain, Line(params.alpha[k], params.u[k], params.gamma[k]))
        psi = sum(_apply_factors(factors, psi) for factors in terms)
    return complex(psi[(1,) * n] / norm)


# Recursions and identities

def dwpf_product_general(params: ModelParams) -> complex:
    """
    prod_k e^{k(u_k - v_k)} gamma_k delta_k * prod_{j<k} (e^{u_j - u_k} - alpha_j alpha_k)(e^{v_k - v_j} - beta_k beta_j).

    k counts from 1.
    """
    alpha, beta = np.array(params.alpha), np.array(params.beta)
    u, v = np.array(params.u), np.array(params.v)
    k = np.arange(1, params.n + 1)
    total = np.prod(np.exp(k * (u - v)) * np.array(params.gamma) * np.array(params.delta))
    for j in range(params.n):
        for m in range(j + 1, params.n):
            total *= (np.exp(u[j] - u[m]) - alpha[j] * alpha[m]) * (np.exp(v[m] - v[j]) - beta[m] * beta[j])
    return complex(total)


def bethe_recursion_residual(params: ModelParams) -> float:
    """
    Relative difference between Z and its expansion over the column i hit by the last row's C-vertex.

    Each term carries Z with row N and column i removed.
    """
    n = params.n
    chain = Chain.from_params(params)
    last = n - 1
    total = 0j
    for i in range(n):
        term = params.weights(last, i).c1
        for j in range(last):
            term *= params.weights(j, i).a2
        for k in range(n):
            if k == i:
                continue
            ik = chain.checked(i, k)
            term *= params.weights(last, k).b2 / _nonzero(ik.b2, f"b2[{i + 1},{k + 1}]")
            term *= ik.a2 if k < i else ik.a1
        if n > 1:
            term *= dwpf_bethe(params.without(last, i))
        total += term
    return relative_difference(dwpf_bethe(params), total)


def _a2(x: complex, y: complex, s: complex, t: complex) -> complex:
    return np.exp(s - t) - x * y


def _b2(x: complex, y: complex, s: complex, t: complex) -> complex:
    return y - x * np.exp(s - t)


def partition_identity_residual(params: ModelParams) -> float:
    """
    |sum_i prod_{j<N} a2(alpha_j, beta_i) / a2(alpha_j, alpha_N)
     * prod_{k != i} b2(beta_k, alpha_N) / b2(beta_k, beta_i) - 1|.
    """
    n = params.n
    a, b, u, v = params.alpha, params.beta, params.u, params.v
    last = n - 1
    total = 0j
    for i in range(n):
        term = 1 + 0j
        for j in range(last):
            term *= _a2(a[j], b[i], u[j], v[i]) / _nonzero(_a2(a[j], a[last], u[j], u[last]),
                                                          f"a2(alpha_{j + 1}, alpha_{n})")
        for k in range(n):
            if k != i:
                term *= _b2(b[k], a[last], v[k], u[last]) / _nonzero(_b2(b[k], b[i], v[k], v[i]),
                                                                    f"b2(beta_{k + 1}, beta_{i + 1})")
        total += term
    return float(abs(total - 1))


def product_form_residual(params: ModelParams, points: Sequence[Number]) -> float:
    """
    Largest relative defect of the polynomial identity behind the partition of unity.

    Both sides are evaluated as functions of x = alpha_N:
    sum_i prod_{j<N} a2(alpha_j, beta_i) prod_{k != i} b2(beta_k, x) prod_{j != k, k != i} b2(beta_j, beta_k)
    = prod_{j<N} a2(alpha_j, x) prod_{j != k} b2(beta_j, beta_k).
    """
    n = params.n
    a, b, u, v = params.alpha, params.beta, params.u, params.v
    last = n - 1
    pairs = [(j, k) for j in range(n) for k in range(n) if j != k]
    worst = 0.0
    for x in points:
        lhs = 0j
        for i in range(n):
            term = 1 + 0j
            for j in range(last):
                term *= _a2(a[j], b[i], u[j], v[i])
            for k in range(n):
                if k != i:
                    term *= _b2(b[k], x, v[k], u[last])
            for j, k in pairs:
                if k != i:
                    term *= _b2(b[j], b[k], v[j], v[k])
            lhs += term
        rhs = 1 + 0j
        for j in range(last):
            rhs *= _a2(a[j], x, u[j], u[last])
        for j, k in pairs:
            rhs *= _b2(b[j], b[k], v[j], v[k])
        worst = max(worst, relative_difference(lhs, rhs))
    return worst


def operator_b_recursion_residual(params: ModelParams, alpha: Number, u: Number) -> float:
    """B_{1..N} against A_{2..N} (x) [[0,0],[c1,0]]_1 + B_{2..N} (x) diag(b2, a2)_1, entrywise."""
    if params.n < 2:
        raise SizeError("the operator recursion needs N >= 2")
    chain = Chain.from_params(params)
    line = Line.of(alpha, u)
    full = chain_monodromy(chain, line)
    tail = chain_monodromy(chain.tail(), line)
    w0 = chain.weights(line)[0]
    assembled = OperatorMatrix(
        params.n,
        np.kron(_lower(w0.c1), tail.A.entries) + np.kron(_diag(w0.b2, w0.a2), tail.B.entries),
    )
    return full.B.difference(assembled)


def matrix_equation_residual(params: ModelParams, alpha: Number, u: Number) -> float:
    """
    Balance of B~_{1..N} X = X (A~_{2..N} (x) [[0,0],[c1,0]]_1 + B~_{2..N} (x) diag(b2, a2)_1).

    X = [[1, 0], [C~_{2..N}(beta_1, v_1), D~_{2..N}(beta_1, v_1)]] in space 1, with
    every twisted operator taken from its closed form.
    """
    if params.n < 2:
        raise SizeError("the matrix equation needs N >= 2")
    chain = Chain.from_params(params)
    tail = chain.tail()
    line = Line.of(alpha, u)
    full = _twisted_closed_forms(chain, line)
    ops = _twisted_closed_forms(tail, line)
    site_one = _twisted_closed_forms(tail, chain.site_line(0))
    dim = 1 << tail.n
    x = OperatorMatrix(params.n, np.block([
        [np.eye(dim, dtype=complex), np.zeros((dim, dim), dtype=complex)],
        [site_one.C.entries, site_one.D.entries],
    ]))
    w0 = chain.weights(line)[0]
    bracket = OperatorMatrix(
        params.n,
        np.kron(_lower(w0.c1), ops.A.entries) + np.kron(_diag(w0.b2, w0.a2), ops.B.entries),
    )
    return (full.B @ x).difference(x @ bracket)


def twist_residual(params: ModelParams, alpha: Number, u: Number) -> float:
    """Largest entrywise deviation between the closed forms and direct conjugation."""
    closed = twisted_closed_forms(params, alpha, u)
    conjugated = twist_conjugate(params, alpha, u)
    return max(x.difference(y) for x, y in zip(closed, conjugated))


def spectrum_residual(params: ModelParams, alpha: Number, u: Number) -> float:
    """
    Distance between the spectra of A + D and A~ + D~.

    Eigenvalues are paired by minimum total distance; the result is the
    2-norm of the paired differences relative to the largest eigenvalue.
    """
    plain = monodromy(params, alpha, u)
    twisted = twist_conjugate(params, alpha, u)
    left = np.linalg.eigvals((plain.A + plain.D).entries)
    right = np.linalg.eigvals((twisted.A + twisted.D).entries)
    cost = np.abs(left[:, None] - right[None, :])
    rows, cols = optimize.linear_sum_assignment(cost)
    scale = max(np.max(np.abs(left)), 1e-300)
    return float(np.linalg.norm(left[rows] - right[cols]) / scale)


__all__ = [
    "CONDITION_LIMIT",
    "Chain",
    "DENOMINATOR_TOL",
    "FMatrix",
    "Line",
    "MonodromyBlocks",
    "OPERATOR_MAX_N",
    "OperatorMatrix",
    "StateVector",
    "bethe_recursion_residual",
    "chain_monodromy",
    "dwpf_bethe",
    "dwpf_product_general",
    "dwpf_twisted",
    "embed_two_site",
    "f_matrix",
    "matrix_equation_residual",
    "monodromy",
    "operator_b_recursion_residual",
    "partition_identity_residual",
    "product_form_residual",
    "r_matrix",
    "spectrum_residual",
    "twist_conjugate",
    "twist_residual",
    "twisted_closed_forms",
]
