"""
Tests for parameter documents and seeded generation.
"""
import json

import pytest

from modules.errors import DomainError, GeneratorStuckError, SchemaError
from modules.model_core import RestrictedParams
from modules.param_io import (
    DISK_RADIUS,
    IMAG_RAPIDITY,
    REAL_RAPIDITY,
    generate_params,
    generate_restricted,
    params_to_document,
    parse_params,
)
from modules.validation import BETHE_RULE, GENERAL_RULE, SeparationRule, SeparationValidator


def _document(**overrides):
    doc = {
        "n": 2,
        "alpha": [0.1, [0.2, -0.3]],
        "beta": [[-0.4, 0.1], 0.5],
        "u": [0, [0.1, 0.2]],
        "v": [[0.0, -0.1], 0.3],
    }
    doc.update(overrides)
    return doc


@pytest.mark.unit
class TestParseParams:
    """Tests for parameter document parsing."""

    def test_parse_mapping(self):
        params = parse_params(_document())
        assert params.n == 2
        assert params.alpha == (0.1 + 0j, 0.2 - 0.3j)
        assert params.u[1] == 0.1 + 0.2j

    def test_parse_json_text(self):
        params = parse_params(json.dumps(_document()))
        assert params.beta == (-0.4 + 0.1j, 0.5 + 0j)

    def test_round_trip(self):
        params = parse_params(_document())
        assert parse_params(params_to_document(params)) == params
        assert parse_params(json.dumps(params_to_document(params))) == params

    def test_length_mismatch_names_field(self):
        with pytest.raises(SchemaError, match="v has length 1"):
            parse_params(_document(v=[0.3]))

    def test_unknown_field(self):
        with pytest.raises(SchemaError, match="gamma"):
            parse_params(_document(gamma=[1, 2]))

    def test_missing_field(self):
        doc = _document()
        del doc["beta"]
        with pytest.raises(SchemaError, match="beta"):
            parse_params(doc)

    def test_bad_size(self):
        with pytest.raises(SchemaError):
            parse_params(_document(n=0, alpha=[], beta=[], u=[], v=[]))

    def test_malformed_json(self):
        with pytest.raises(SchemaError):
            parse_params('{"n": 2, "alpha": [0.1,')

    def test_non_numeric_entry(self):
        with pytest.raises(SchemaError):
            parse_params(_document(alpha=["x", 0.2]))

    def test_unit_field_is_a_domain_error(self):
        with pytest.raises(DomainError):
            parse_params(_document(alpha=[1.0, 0.2]))
        assert parse_params(_document(alpha=[1.0, 0.2]), strict=False).n == 2


@pytest.mark.unit
class TestGenerateParams:
    """Tests for seeded parameter generation."""

    def test_deterministic(self):
        assert generate_params(42, 3) == generate_params(42, 3)
        assert generate_params(42, 3) != generate_params(43, 3)

    def test_ranges(self):
        for seed in range(5):
            params = generate_params(seed, 4)
            assert all(abs(a) <= DISK_RADIUS for a in params.alpha + params.beta)
            for x in params.u + params.v:
                assert abs(x.real) <= REAL_RAPIDITY
                assert abs(x.imag) <= IMAG_RAPIDITY

    def test_draws_pass_their_rule(self):
        for rule in (GENERAL_RULE, BETHE_RULE):
            params = generate_params(9, 3, rule)
            assert SeparationValidator(rule).validate(params)["valid"]

    def test_restricted_draw(self):
        params = generate_params(1, 3, restricted=True)
        assert params.is_restricted
        assert all(x == 0 for x in params.u + params.v)
        restricted = generate_restricted(1, 3)
        assert isinstance(restricted, RestrictedParams)
        assert restricted.n == 3

    def test_stuck_generator(self):
        impossible = SeparationRule("impossible", min_distance=5.0)
        with pytest.raises(GeneratorStuckError, match="impossible"):
            generate_params(0, 2, impossible, max_rejections=5)
