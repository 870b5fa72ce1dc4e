"""
Parameter documents and seeded random parameter sets.

A parameter document is a JSON object with `n` and the four arrays
`alpha`, `beta`, `u`, `v`. Complex numbers are written as two-element
`[re, im]` arrays; a bare number is read as a real value. Documents are
validated with pydantic and turned into `ModelParams`.

Random draws live here rather than in the engines, so the math modules stay
pure functions of their inputs.
"""

import logging
import math
from typing import Any, Dict, List, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import GeneratorStuckError, SchemaError
from .model_core import ModelParams, RestrictedParams
from .validation import GENERAL_RULE, RESTRICTED_RULE, SeparationRule, SeparationValidator

logger = logging.getLogger(__name__)

ComplexValue = Union[float, Tuple[float, float]]

DISK_RADIUS = 0.7
REAL_RAPIDITY = 0.5
IMAG_RAPIDITY = 0.3
MAX_REJECTIONS = 10000


class ParamsDocument(BaseModel):
    """Schema of one parameter document."""
    model_config = ConfigDict(extra="forbid")

    n: int = Field(ge=1)
    alpha: List[ComplexValue]
    beta: List[ComplexValue]
    u: List[ComplexValue]
    v: List[ComplexValue]


def _to_complex(value: ComplexValue) -> complex:
    if isinstance(value, tuple):
        return complex(value[0], value[1])
    return complex(value)


def _from_complex(value: complex) -> List[float]:
    return [float(value.real), float(value.imag)]


def _describe(exc: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(part) for part in error['loc']) or 'document'}: {error['msg']}"
        for error in exc.errors()
    )


def parse_params(document: Union[str, bytes, Dict[str, Any]], strict: bool = True) -> ModelParams:
    """
    Parses and validates a parameter document.

    Args:
        document: JSON text or an already decoded mapping.
        strict: Reject field variables equal to +-1 (they zero the c-weights).

    Returns:
        ModelParams: Validated parameters with square-root caches filled.

    Raises:
        SchemaError: Malformed JSON, unknown or missing fields, or an array
                     whose length differs from n (the field is named).
        DomainError: Parameters that violate the model's regularity rules.
    """
    try:
        if isinstance(document, (str, bytes)):
            parsed = ParamsDocument.model_validate_json(document)
        else:
            parsed = ParamsDocument.model_validate(document)
    except ValidationError as e:
        raise SchemaError(f"invalid parameter document: {_describe(e)}")

    for name in ("alpha", "beta", "u", "v"):
        length = len(getattr(parsed, name))
        if length != parsed.n:
            raise SchemaError(f"{name} has length {length}, expected n = {parsed.n}")

    return ModelParams(
        tuple(_to_complex(x) for x in parsed.alpha),
        tuple(_to_complex(x) for x in parsed.beta),
        tuple(_to_complex(x) for x in parsed.u),
        tuple(_to_complex(x) for x in parsed.v),
        strict=strict,
    )


def params_to_document(params: Union[ModelParams, RestrictedParams]) -> Dict[str, Any]:
    """Parameter document that parses back to identical values."""
    if isinstance(params, RestrictedParams):
        params = params.to_model()
    return {
        "n": params.n,
        "alpha": [_from_complex(x) for x in params.alpha],
        "beta": [_from_complex(x) for x in params.beta],
        "u": [_from_complex(x) for x in params.u],
        "v": [_from_complex(x) for x in params.v],
    }


def _disk(rng: np.random.Generator, n: int) -> np.ndarray:
    radius = DISK_RADIUS * np.sqrt(rng.random(n))
    angle = 2 * math.pi * rng.random(n)
    return radius * np.exp(1j * angle)


def _rapidities(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.uniform(-REAL_RAPIDITY, REAL_RAPIDITY, n) + 1j * rng.uniform(-IMAG_RAPIDITY, IMAG_RAPIDITY, n)


def generate_params(seed: int, n: int, rule: SeparationRule = GENERAL_RULE,
                    restricted: bool = False, max_rejections: int = MAX_REJECTIONS) -> ModelParams:
    """
    Deterministic random parameter set for a given seed.

    alpha and beta are uniform on the disk of radius 0.7; u and v have real
    parts in [-0.5, 0.5] and imaginary parts in [-0.3, 0.3], or are zero when
    `restricted` is set. Draws are resampled until they pass `rule`.

    Raises:
        GeneratorStuckError: If `max_rejections` draws in a row fail the rule.
    """
    rng = np.random.default_rng(seed)
    validator = SeparationValidator(rule)
    for attempt in range(max_rejections):
        alpha = _disk(rng, n)
        beta = _disk(rng, n)
        if restricted:
            u = v = np.zeros(n, dtype=complex)
        else:
            u = _rapidities(rng, n)
            v = _rapidities(rng, n)
        params = ModelParams(tuple(alpha), tuple(beta), tuple(u), tuple(v))
        if validator.validate(params)["valid"]:
            logger.debug(f"seed {seed}, N={n}: accepted after {attempt} rejections (rule {rule.name})")
            return params
    raise GeneratorStuckError(
        f"no draw for seed {seed}, N={n} passed rule '{rule.name}' after {max_rejections} attempts"
    )


def generate_restricted(seed: int, n: int, rule: SeparationRule = RESTRICTED_RULE) -> RestrictedParams:
    """Restricted-case draw: field variables only, rapidities zero."""
    return generate_params(seed, n, rule=rule, restricted=True).to_restricted()


__all__ = [
    "ParamsDocument",
    "generate_params",
    "generate_restricted",
    "params_to_document",
    "parse_params",
]
