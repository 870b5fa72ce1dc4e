"""
Parameter sets, weight families and the vertex dictionary of the
trigonometric Felderhof model.

Bond coding: 1 means the arrow points along the line's orientation (left to
right for horizontal lines, bottom to top for vertical lines), 0 means
against it. A vertex is described by its (west, south, east, north) bonds.
With domain-wall boundary conditions the left and top boundaries carry 1,
the right and bottom boundaries carry 0.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, NamedTuple, Optional, Tuple

from .errors import DimensionError, DomainError
from .numeric_kernel import Number, principal_sqrt

logger = logging.getLogger(__name__)

# |sqrt(1 - x^2)| below this means x = +-1 and the c-weights vanish.
REGULARITY_TOL = 1e-14

# Tolerance for e^{u_i - v_j} = 1 in the restricted-case test.
RESTRICTION_TOL = 1e-12


class VertexKind(Enum):
    """The six allowed vertices, valued by their (w, s, e, n) bond signature."""
    A1 = (0, 0, 0, 0)
    A2 = (1, 1, 1, 1)
    B1 = (0, 1, 0, 1)
    B2 = (1, 0, 1, 0)
    C1 = (1, 0, 0, 1)
    C2 = (0, 1, 1, 0)

    @property
    def w(self) -> int:
        return self.value[0]

    @property
    def s(self) -> int:
        return self.value[1]

    @property
    def e(self) -> int:
        return self.value[2]

    @property
    def n(self) -> int:
        return self.value[3]

    @property
    def slot(self) -> int:
        """Position of this kind in declaration order, matching SixWeights.as_tuple()."""
        return _KIND_SLOTS[self]

    @classmethod
    def from_bonds(cls, w: int, s: int, e: int, n: int) -> Optional["VertexKind"]:
        """Kind with the given signature, or None when the bonds form no allowed vertex."""
        try:
            return cls((w, s, e, n))
        except ValueError:
            return None


_KIND_SLOTS: Dict[VertexKind, int] = {kind: index for index, kind in enumerate(VertexKind)}


@dataclass(frozen=True)
class SixWeights:
    """Weights of the six vertex kinds at one lattice site."""
    a1: complex
    a2: complex
    b1: complex
    b2: complex
    c1: complex
    c2: complex

    def as_tuple(self) -> Tuple[complex, ...]:
        return (self.a1, self.a2, self.b1, self.b2, self.c1, self.c2)

    def for_kind(self, kind: VertexKind) -> complex:
        return self.as_tuple()[kind.slot]

    def free_fermion_residual(self) -> float:
        """Relative defect of a1*a2 + b1*b2 = c1*c2."""
        lhs = self.a1 * self.a2 + self.b1 * self.b2
        rhs = self.c1 * self.c2
        scale = max(abs(lhs), abs(rhs), abs(self.a1 * self.a2), abs(self.b1 * self.b2))
        return 0.0 if scale == 0.0 else abs(lhs - rhs) / scale


class RestrictedWeights(NamedTuple):
    """The three weights left when every rapidity difference vanishes."""
    a0: complex
    b0: complex
    c0: complex

    def signed(self, kind: VertexKind) -> complex:
        """Vertex weight of `kind`: A1, A2 -> a0; B1 -> b0; B2 -> -b0; C1, C2 -> c0."""
        if kind in (VertexKind.A1, VertexKind.A2):
            return self.a0
        if kind is VertexKind.B1:
            return self.b0
        if kind is VertexKind.B2:
            return -self.b0
        return self.c0


def general_weights(alpha: Number, beta: Number, u: Number, v: Number, *,
                    sqrt_alpha: Optional[complex] = None,
                    sqrt_beta: Optional[complex] = None) -> SixWeights:
    """
    Weights of the vertex where a horizontal line (alpha, u) crosses a vertical line (beta, v).

    Args:
        alpha, beta: External field variables of the two lines.
        u, v: Rapidities of the two lines.
        sqrt_alpha, sqrt_beta: Cached values of sqrt(1 - alpha^2) and
            sqrt(1 - beta^2). Computed on the principal branch when omitted.

    Returns:
        SixWeights: a1 = 1 - ab x, a2 = x - ab, b1 = a - b x, b2 = b - a x,
        c1 = sqrt(1-a^2) sqrt(1-b^2) x, c2 = sqrt(1-a^2) sqrt(1-b^2), with x = e^{u-v}.
    """
    alpha, beta = complex(alpha), complex(beta)
    x = cmath.exp(complex(u) - complex(v))
    ga = principal_sqrt(1 - alpha * alpha) if sqrt_alpha is None else complex(sqrt_alpha)
    gb = principal_sqrt(1 - beta * beta) if sqrt_beta is None else complex(sqrt_beta)
    return SixWeights(
        a1=1 - alpha * beta * x,
        a2=x - alpha * beta,
        b1=alpha - beta * x,
        b2=beta - alpha * x,
        c1=ga * gb * x,
        c2=ga * gb,
    )


def restricted_weights(alpha: Number, beta: Number, *,
                       sqrt_alpha: Optional[complex] = None,
                       sqrt_beta: Optional[complex] = None) -> RestrictedWeights:
    """a0 = 1 - alpha beta, b0 = alpha - beta, c0 = sqrt(1 - alpha^2) sqrt(1 - beta^2)."""
    alpha, beta = complex(alpha), complex(beta)
    ga = principal_sqrt(1 - alpha * alpha) if sqrt_alpha is None else complex(sqrt_alpha)
    gb = principal_sqrt(1 - beta * beta) if sqrt_beta is None else complex(sqrt_beta)
    return RestrictedWeights(a0=1 - alpha * beta, b0=alpha - beta, c0=ga * gb)


def checked_weights(beta_i: Number, beta_j: Number, v_i: Number, v_j: Number, *,
                    sqrt_i: Optional[complex] = None,
                    sqrt_j: Optional[complex] = None) -> SixWeights:
    """Weights built only from vertical variables; the R-matrix entries."""
    return general_weights(beta_i, beta_j, v_i, v_j, sqrt_alpha=sqrt_i, sqrt_beta=sqrt_j)


def _as_complex_tuple(values: Iterable[Number]) -> Tuple[complex, ...]:
    return tuple(complex(x) for x in values)


@dataclass(frozen=True)
class ModelParams:
    """
    Line variables of an N x N lattice.

    Rows are horizontal lines numbered top to bottom and carry (alpha_i, u_i);
    columns are vertical lines numbered left to right and carry (beta_j, v_j).
    The square roots gamma_i = sqrt(1 - alpha_i^2) and delta_j = sqrt(1 - beta_j^2)
    are computed once here and reused by every route.
    """
    alpha: Tuple[complex, ...]
    beta: Tuple[complex, ...]
    u: Tuple[complex, ...]
    v: Tuple[complex, ...]
    strict: bool = True
    gamma: Tuple[complex, ...] = field(init=False, repr=False, compare=False)
    delta: Tuple[complex, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name in ("alpha", "beta", "u", "v"):
            object.__setattr__(self, name, _as_complex_tuple(getattr(self, name)))
        n = len(self.alpha)
        if n < 1:
            raise DimensionError("lattice size must be at least 1")
        for name in ("beta", "u", "v"):
            if len(getattr(self, name)) != n:
                raise DimensionError(f"{name} has length {len(getattr(self, name))}, expected {n}")

        object.__setattr__(self, "gamma", tuple(principal_sqrt(1 - a * a) for a in self.alpha))
        object.__setattr__(self, "delta", tuple(principal_sqrt(1 - b * b) for b in self.beta))

        if self.strict:
            bad_alpha = [i + 1 for i, g in enumerate(self.gamma) if abs(g) < REGULARITY_TOL]
            bad_beta = [j + 1 for j, d in enumerate(self.delta) if abs(d) < REGULARITY_TOL]
            if bad_alpha or bad_beta:
                raise DomainError(
                    f"field variables equal to +-1 zero the c-weights: alpha indices {bad_alpha}, "
                    f"beta indices {bad_beta}"
                )

    @classmethod
    def restricted_case(cls, alpha: Iterable[Number], beta: Iterable[Number],
                        strict: bool = True) -> "ModelParams":
        """Parameters with every rapidity set to zero."""
        alpha = _as_complex_tuple(alpha)
        zeros = (0j,) * len(alpha)
        return cls(alpha, _as_complex_tuple(beta), zeros, zeros, strict=strict)

    @property
    def n(self) -> int:
        return len(self.alpha)

    def weights(self, i: int, j: int) -> SixWeights:
        """Weights at row i, column j (zero-based) using the cached square roots."""
        return general_weights(self.alpha[i], self.beta[j], self.u[i], self.v[j],
                               sqrt_alpha=self.gamma[i], sqrt_beta=self.delta[j])

    def checked(self, i: int, j: int) -> SixWeights:
        """Checked weights of vertical lines i and j (zero-based)."""
        return checked_weights(self.beta[i], self.beta[j], self.v[i], self.v[j],
                               sqrt_i=self.delta[i], sqrt_j=self.delta[j])

    def without(self, row: int, col: int) -> "ModelParams":
        """Parameters with horizontal line `row` and vertical line `col` (zero-based) removed."""
        if self.n < 2:
            raise DimensionError("cannot remove a line from a 1 x 1 lattice")
        keep_rows = [i for i in range(self.n) if i != row]
        keep_cols = [j for j in range(self.n) if j != col]
        return ModelParams(
            tuple(self.alpha[i] for i in keep_rows),
            tuple(self.beta[j] for j in keep_cols),
            tuple(self.u[i] for i in keep_rows),
            tuple(self.v[j] for j in keep_cols),
            strict=self.strict,
        )

    @property
    def is_restricted(self) -> bool:
        return is_restricted(self)

    def to_restricted(self) -> "RestrictedParams":
        return RestrictedParams(self.alpha, self.beta)


@dataclass(frozen=True)
class RestrictedParams:
    """Field variables of the restricted case, where every rapidity difference vanishes."""
    alpha: Tuple[complex, ...]
    beta: Tuple[complex, ...]
    gamma: Tuple[complex, ...] = field(init=False, repr=False, compare=False)
    delta: Tuple[complex, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "alpha", _as_complex_tuple(self.alpha))
        object.__setattr__(self, "beta", _as_complex_tuple(self.beta))
        if len(self.alpha) < 1 or len(self.alpha) != len(self.beta):
            raise DimensionError(
                f"alpha and beta must be non-empty and of equal length, got {len(self.alpha)} and {len(self.beta)}"
            )
        object.__setattr__(self, "gamma", tuple(principal_sqrt(1 - a * a) for a in self.alpha))
        object.__setattr__(self, "delta", tuple(principal_sqrt(1 - b * b) for b in self.beta))

    @property
    def n(self) -> int:
        return len(self.alpha)

    def weights(self, i: int, j: int) -> RestrictedWeights:
        """Restricted weights at row i, column j (zero-based)."""
        return restricted_weights(self.alpha[i], self.beta[j],
                                  sqrt_alpha=self.gamma[i], sqrt_beta=self.delta[j])

    def without(self, row: int, col: int) -> "RestrictedParams":
        if self.n < 2:
            raise DimensionError("cannot remove a line from a 1 x 1 lattice")
        return RestrictedParams(
            tuple(a for i, a in enumerate(self.alpha) if i != row),
            tuple(b for j, b in enumerate(self.beta) if j != col),
        )

    def with_alpha(self, index: int, value: Number) -> "RestrictedParams":
        alpha = list(self.alpha)
        alpha[index] = value
        return RestrictedParams(tuple(alpha), self.beta)

    def with_beta(self, index: int, value: Number) -> "RestrictedParams":
        beta = list(self.beta)
        beta[index] = value
        return RestrictedParams(self.alpha, tuple(beta))

    def to_model(self, strict: bool = False) -> ModelParams:
        return ModelParams.restricted_case(self.alpha, self.beta, strict=strict)


def is_restricted(params: ModelParams, tol: float = RESTRICTION_TOL) -> bool:
    """True when every u_i - v_j is an integer multiple of 2 pi i, so that all weights restrict."""
    return all(
        abs(cmath.exp(u - v) - 1) <= tol
        for u in params.u
        for v in params.v
    )


def vertex_weight(kind: VertexKind, params: ModelParams, i: int, j: int) -> complex:
    """
    Weight of a vertex of the given kind at row i, column j (one-based).

    Raises:
        IndexError: If (i, j) lies outside the lattice.
    """
    if not (1 <= i <= params.n and 1 <= j <= params.n):
        raise IndexError(f"vertex ({i}, {j}) outside a {params.n} x {params.n} lattice")
    return params.weights(i - 1, j - 1).for_kind(kind)


def two_pi_i_shift(k: int) -> complex:
    """The rapidity shift 2 pi i k, which leaves every weight unchanged."""
    return complex(0.0, 2.0 * math.pi * k)


__all__ = [
    "ModelParams",
    "RestrictedParams",
    "RestrictedWeights",
    "SixWeights",
    "VertexKind",
    "checked_weights",
    "general_weights",
    "is_restricted",
    "restricted_weights",
    "two_pi_i_shift",
    "vertex_weight",
]
