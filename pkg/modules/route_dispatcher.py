"""
Routes a partition-function request to one of the evaluation methods.

This module defines the `RouteDispatcher` class, which knows every way of
computing the domain-wall partition function, the lattice sizes each method
supports and whether it needs restricted parameters. It checks those guards
before delegating, so callers get a typed error instead of a silent wrong value.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from .errors import DomainError, SizeError, UsageError
from .engines import bethe_engine, enumeration_oracle, izergin_engine
from .model_core import ModelParams
from .numeric_kernel import relative_difference

logger = logging.getLogger(__name__)

ALL_METHODS = "all"

# Field variables closer than this count as equal for the homogeneous route.
HOMOGENEOUS_TOL = 1e-14


@dataclass(frozen=True)
class Route:
    """One evaluation method and its domain."""
    name: str
    compute: Callable[[ModelParams], complex]
    max_n: Optional[int]
    restricted: bool
    description: str

    def supports(self, n: int) -> bool:
        return n >= 1 and (self.max_n is None or n <= self.max_n)


def _homogeneous(params: ModelParams) -> complex:
    alpha, beta = params.alpha[0], params.beta[0]
    if any(abs(a - alpha) > HOMOGENEOUS_TOL for a in params.alpha) or \
            any(abs(b - beta) > HOMOGENEOUS_TOL for b in params.beta):
        raise DomainError("the homogeneous route needs all alpha equal and all beta equal")
    return izergin_engine.dwpf_homogeneous(alpha, beta, params.n)


ROUTES: Dict[str, Route] = {route.name: route for route in (
    Route("brute", enumeration_oracle.dwpf_brute, enumeration_oracle.BRUTE_MAX_N, False,
          "sum over all domain-wall configurations"),
    Route("transfer", enumeration_oracle.dwpf_transfer, enumeration_oracle.TRANSFER_MAX_N, False,
          "vertex-by-vertex transfer contraction"),
    Route("det", lambda p: izergin_engine.dwpf_restricted_det(p.to_restricted()), None, True,
          "determinant form (restricted case)"),
    Route("product-restricted", lambda p: izergin_engine.dwpf_restricted_product(p.to_restricted()), None, True,
          "factorized product (restricted case)"),
    Route("bethe", bethe_engine.dwpf_bethe, bethe_engine.OPERATOR_MAX_N, False,
          "string of B-operators on the reference state"),
    Route("twisted", bethe_engine.dwpf_twisted, bethe_engine.OPERATOR_MAX_N, False,
          "string of twisted B-operators"),
    Route("product-general", bethe_engine.dwpf_product_general, None, False,
          "general product formula"),
    Route("homogeneous", _homogeneous, izergin_engine.HOMOGENEOUS_MAX_N, True,
          "homogeneous limit via the bi-Wronskian"),
)}


class RouteDispatcher:
    """
    Dispatches partition-function requests to a named route.

    Use `available_methods(n)` to list routes for a lattice size and
    `compute(method, params)` to evaluate one of them, or every applicable
    route with method "all".
    """

    def __init__(self, routes: Optional[Dict[str, Route]] = None):
        self.routes = dict(ROUTES if routes is None else routes)
        logger.debug(f"RouteDispatcher initialized with routes: {', '.join(self.routes)}")

    def get_route(self, method: str) -> Route:
        try:
            return self.routes[method]
        except KeyError:
            raise UsageError(f"unknown method '{method}'; choose from {', '.join(self.routes)} or '{ALL_METHODS}'")

    def available_methods(self, n: int, restricted: bool = True) -> List[str]:
        """Routes that support an N x N lattice; restricted-only routes are dropped when `restricted` is False."""
        return [name for name, route in self.routes.items()
                if route.supports(n) and (restricted or not route.restricted)]

    def compute(self, method: str, params: ModelParams) -> complex:
        """
        Evaluates the partition function with one route.

        Raises:
            UsageError: If the method is unknown.
            SizeError: If N lies outside the route's range.
            DomainError: If a restricted route gets non-restricted parameters,
                         or the route itself rejects the parameters.
        """
        route = self.get_route(method)
        if not route.supports(params.n):
            raise SizeError(f"method '{method}' supports 1 <= N <= {route.max_n}, got N = {params.n}")
        if route.restricted and not params.is_restricted:
            raise DomainError(f"method '{method}' needs restricted parameters (every u_i - v_j in 2 pi i Z)")
        logger.debug(f"Routing N={params.n} to '{method}' ({route.description})")
        return complex(route.compute(params))

    def compute_all(self, params: ModelParams) -> Dict[str, complex]:
        """Every applicable route; routes that reject the parameters are skipped and logged."""
        results: Dict[str, complex] = {}
        for name in self.available_methods(params.n, restricted=params.is_restricted):
            try:
                results[name] = self.compute(name, params)
            except DomainError as e:
                logger.info(f"Route '{name}' skipped: {e}")
        return results

    @staticmethod
    def spread(results: Dict[str, complex]) -> float:
        """Largest pairwise relative difference among route values."""
        values = list(results.values())
        return max(
            (relative_difference(x, y) for i, x in enumerate(values) for y in values[i + 1:]),
            default=0.0,
        )


__all__ = ["ALL_METHODS", "ROUTES", "Route", "RouteDispatcher"]
