"""
Tests for the separation rules.
"""
import math

import pytest

from modules.errors import DomainError
from modules.model_core import ModelParams, RestrictedParams
from modules.validation import (
    BETHE_RULE,
    GENERAL_RULE,
    RESTRICTED_RULE,
    RULES,
    SeparationRule,
    SeparationValidator,
)


@pytest.mark.unit
class TestSeparationValidator:
    """Tests for SeparationValidator."""

    def test_rules_registry(self):
        assert set(RULES) == {"restricted", "general", "bethe"}
        assert RULES["general"] is GENERAL_RULE

    def test_valid_parameters(self, small_restricted):
        result = SeparationValidator().validate(small_restricted)
        assert result["valid"] is True
        assert result["error"] is None
        assert result["violations"] == []

    def test_close_alphas(self):
        p = RestrictedParams((0.2, 0.25), (-0.4, 0.5j))
        result = SeparationValidator(RESTRICTED_RULE).validate(p)
        assert result["valid"] is False
        assert "alpha[1] and alpha[2]" in result["error"]

    def test_alpha_near_beta(self):
        p = RestrictedParams((0.2,), (0.22,))
        result = SeparationValidator().validate(p)
        assert any("alpha[1] and beta[1]" in v for v in result["violations"])

    def test_unit_circle(self):
        p = RestrictedParams((0.95j,), (0.1,))
        result = SeparationValidator().validate(p)
        assert any("unit circle" in v for v in result["violations"])

    def test_reciprocal_pair(self):
        p = RestrictedParams((0.5,), (1.9,))
        result = SeparationValidator().validate(p)
        assert any("within 0.1 of 1" in v for v in result["violations"])

    def test_custom_distance(self):
        p = RestrictedParams((0.2, 0.25), (-0.4, 0.5j))
        assert SeparationValidator(SeparationRule("loose", min_distance=0.01)).validate(p)["valid"]

    def test_vertical_denominators_only_for_model_params(self):
        # checked b2 is small when two vertical lines nearly share beta and v
        params = ModelParams((0.1, -0.3), (0.4, 0.4 + 0.05j), (0, 0), (0.2, 0.2))
        restricted = SeparationValidator(RESTRICTED_RULE).validate(params)
        general = SeparationValidator(GENERAL_RULE).validate(params)
        assert any("vertical lines" in v for v in general["violations"])
        assert not any("vertical lines" in v for v in restricted["violations"])

    def test_cross_denominators(self):
        # a2 of (alpha, beta) vanishes at e^{u - v} = alpha beta
        alpha, beta = 0.5, 0.7
        params = ModelParams((alpha,), (beta,), (-0.2,), (-0.2 - math.log(alpha * beta),))
        result = SeparationValidator(BETHE_RULE).validate(params)
        assert any("row 1, column 1" in v for v in result["violations"])
        assert not any("row 1" in v for v in SeparationValidator(GENERAL_RULE).validate(params)["violations"])

    def test_require(self):
        with pytest.raises(DomainError, match="restricted"):
            SeparationValidator().require(RestrictedParams((0.2, 0.21), (-0.4, 0.5j)))
        SeparationValidator().require(RestrictedParams((0.2, -0.3), (0.5j, -0.6)))
