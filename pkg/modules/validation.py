"""
Parameter separation rules.

The determinant and operator routes divide by differences of line
variables. `SeparationValidator` checks that a parameter set keeps a minimum
distance from every locus where one of those denominators vanishes, so that
cross-route comparisons at tight tolerances stay well conditioned. Checks
return a result dictionary; `require` turns a failed check into a
`DomainError` naming the offending pair.
"""

import logging
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Any, Dict, List, Union

from .errors import DomainError
from .model_core import ModelParams, RestrictedParams, general_weights

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SeparationRule:
    """Which loci a parameter set must avoid, and by how much."""
    name: str
    min_distance: float = 0.1
    vertical_denominators: bool = False   # checked a2 and b2 between vertical lines
    horizontal_denominators: bool = False  # a2 between horizontal lines
    cross_denominators: bool = False  # a2, b2 of (alpha_i, beta_j) in both slot orders


RESTRICTED_RULE = SeparationRule("restricted")
GENERAL_RULE = SeparationRule("general", vertical_denominators=True, horizontal_denominators=True)
BETHE_RULE = SeparationRule(
    "bethe", vertical_denominators=True, horizontal_denominators=True, cross_denominators=True
)

RULES: Dict[str, SeparationRule] = {rule.name: rule for rule in (RESTRICTED_RULE, GENERAL_RULE, BETHE_RULE)}


class SeparationValidator:
    """
    Validates parameter sets against a `SeparationRule`.

    The base rule requires pairwise distinct alphas and betas, and distance
    from alpha = beta, alpha*beta = 1 and the unit circle. The optional
    families add the denominators of the operator routes.
    """

    def __init__(self, rule: SeparationRule = RESTRICTED_RULE):
        """
        Initializes the validator.

        Args:
            rule (SeparationRule): The rule to enforce. Defaults to the
                                   restricted-case rule.
        """
        self.rule = rule
        logger.debug(f"SeparationValidator initialized with rule={rule.name}, min_distance={rule.min_distance}")

    def _base_violations(self, alpha, beta) -> List[str]:
        d = self.rule.min_distance
        found = []
        for i, j in combinations(range(len(alpha)), 2):
            if abs(alpha[i] - alpha[j]) < d:
                found.append(f"alpha[{i + 1}] and alpha[{j + 1}] closer than {d}")
            if abs(beta[i] - beta[j]) < d:
                found.append(f"beta[{i + 1}] and beta[{j + 1}] closer than {d}")
        for i, a in enumerate(alpha):
            if abs(abs(a) - 1.0) < d:
                found.append(f"alpha[{i + 1}] within {d} of the unit circle")
            for j, b in enumerate(beta):
                if abs(a - b) < d:
                    found.append(f"alpha[{i + 1}] and beta[{j + 1}] closer than {d}")
                if abs(1 - a * b) < d:
                    found.append(f"alpha[{i + 1}]*beta[{j + 1}] within {d} of 1")
        for j, b in enumerate(beta):
            if abs(abs(b) - 1.0) < d:
                found.append(f"beta[{j + 1}] within {d} of the unit circle")
        return found

    def _operator_violations(self, params: ModelParams) -> List[str]:
        d = self.rule.min_distance
        found = []
        n = params.n
        if self.rule.vertical_denominators:
            for j, k in permutations(range(n), 2):
                w = params.checked(j, k)
                if abs(w.a2) < d or abs(w.b2) < d:
                    found.append(f"vertical lines {j + 1} and {k + 1}: checked weight below {d}")
        if self.rule.horizontal_denominators:
            for j, k in permutations(range(n), 2):
                w = general_weights(params.alpha[j], params.alpha[k], params.u[j], params.u[k],
                                    sqrt_alpha=params.gamma[j], sqrt_beta=params.gamma[k])
                if abs(w.a2) < d:
                    found.append(f"horizontal lines {j + 1} and {k + 1}: a2 below {d}")
        if self.rule.cross_denominators:
            for i in range(n):
                for j in range(n):
                    forward = params.weights(i, j)
                    backward = general_weights(params.beta[j], params.alpha[i], params.v[j], params.u[i],
                                               sqrt_alpha=params.delta[j], sqrt_beta=params.gamma[i])
                    if min(abs(forward.a2), abs(forward.b2), abs(backward.a2), abs(backward.b2)) < d:
                        found.append(f"row {i + 1}, column {j + 1}: a2/b2 below {d}")
        return found

    def validate(self, params: Union[ModelParams, RestrictedParams]) -> Dict[str, Any]:
        """
        Validates a parameter set against the rule.

        Args:
            params: A `ModelParams` or `RestrictedParams` instance. Operator
                    families are only checked for `ModelParams`.

        Returns:
            Dict[str, Any]: 'valid' flag, 'error' (first violation or None)
                            and the full list of 'violations'.
        """
        violations = self._base_violations(params.alpha, params.beta)
        if isinstance(params, ModelParams):
            violations.extend(self._operator_violations(params))
        return {
            "valid": not violations,
            "error": violations[0] if violations else None,
            "violations": violations,
        }

    def require(self, params: Union[ModelParams, RestrictedParams]) -> None:
        """Raises DomainError with the first violation if the parameters fail the rule."""
        result = self.validate(params)
        if not result["valid"]:
            raise DomainError(f"separation rule '{self.rule.name}' violated: {result['error']}")


__all__ = [
    "BETHE_RULE",
    "GENERAL_RULE",
    "RESTRICTED_RULE",
    "RULES",
    "SeparationRule",
    "SeparationValidator",
]
