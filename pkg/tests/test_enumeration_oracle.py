"""
Tests for enumeration, brute-force summation and transfer contraction.
"""
import math

import numpy as np
import pytest

from modules.engines import enumeration_oracle as oracle
from modules.errors import SizeError
from modules.model_core import ModelParams, RestrictedParams, VertexKind
from modules.numeric_kernel import relative_difference

ASM_COUNTS = [1, 2, 7, 42, 429, 7436, 218348, 10850216]


@pytest.mark.unit
class TestEnumeration:
    """Tests for the configuration walker."""

    @pytest.mark.parametrize("n", range(1, 6))
    def test_counts_match_asm_numbers(self, n):
        configurations = list(oracle.enumerate_configurations(n))
        assert len(configurations) == ASM_COUNTS[n - 1]
        assert len(set(configurations)) == len(configurations)

    @pytest.mark.parametrize("n", range(1, 5))
    def test_every_configuration_is_consistent(self, n):
        for configuration in oracle.enumerate_configurations(n):
            assert configuration.is_consistent()

    def test_single_vertex(self):
        (only,) = oracle.enumerate_configurations(1)
        assert only.kinds == ((VertexKind.C1,),)

    @pytest.mark.parametrize("n", range(1, 5))
    def test_census_balance(self, n):
        for configuration in oracle.enumerate_configurations(n):
            census = oracle.vertex_census(configuration)
            assert sum(census.values()) == n * n
            assert census[VertexKind.A1] == census[VertexKind.A2]
            assert census[VertexKind.B1] == census[VertexKind.B2]
            assert census[VertexKind.C1] - census[VertexKind.C2] == n

    @pytest.mark.parametrize("n", range(2, 5))
    def test_frozen_top_corners(self, n):
        for configuration in oracle.enumerate_configurations(n):
            top = configuration.kinds[0]
            assert top[-1] in (VertexKind.B1, VertexKind.C1)
            assert top[0] in (VertexKind.A2, VertexKind.C1)

    def test_to_document(self):
        (only,) = oracle.enumerate_configurations(1)
        assert only.to_document() == {"kinds": [["C1"]]}

    def test_size_guard(self):
        with pytest.raises(SizeError):
            list(oracle.enumerate_configurations(0))
        with pytest.raises(SizeError):
            list(oracle.enumerate_configurations(oracle.BRUTE_MAX_N + 1))


@pytest.mark.unit
class TestPartitionFunction:
    """Tests for dwpf_brute and dwpf_transfer."""

    def test_one_by_one_is_c1(self, general_params):
        p = general_params[1]
        assert oracle.dwpf_brute(p) == pytest.approx(p.weights(0, 0).c1)
        assert oracle.dwpf_transfer(p) == pytest.approx(p.weights(0, 0).c1)

    def test_two_by_two_by_hand(self, small_params):
        p = small_params
        # C1 B1 / B2 C1 and A2 C1 / C1 A1
        expected = (
            p.weights(0, 0).c1 * p.weights(0, 1).b1 * p.weights(1, 0).b2 * p.weights(1, 1).c1
            + p.weights(0, 0).a2 * p.weights(0, 1).c1 * p.weights(1, 0).c1 * p.weights(1, 1).a1
        )
        assert relative_difference(oracle.dwpf_brute(p), expected) < 1e-14

    @pytest.mark.parametrize("n", range(1, 5))
    def test_transfer_matches_brute(self, general_params, n):
        p = general_params[n]
        assert relative_difference(oracle.dwpf_transfer(p), oracle.dwpf_brute(p)) < 1e-12

    @pytest.mark.parametrize("n", range(1, 6))
    def test_transfer_matches_brute_on_random_draws(self, n):
        rng = np.random.default_rng(100 + n)
        for _ in range(100):
            fields = 0.7 * np.sqrt(rng.random(2 * n)) * np.exp(2j * np.pi * rng.random(2 * n))
            rapidities = rng.uniform(-0.5, 0.5, 2 * n) + 1j * rng.uniform(-0.3, 0.3, 2 * n)
            p = ModelParams(fields[:n], fields[n:], rapidities[:n], rapidities[n:])
            assert relative_difference(oracle.dwpf_transfer(p), oracle.dwpf_brute(p)) < 1e-11

    @pytest.mark.parametrize("n", range(1, 6))
    def test_zero_fields_count_configurations_without_b_vertices(self, n):
        p = ModelParams.restricted_case((0,) * n, (0,) * n)
        expected = sum(
            1 for census in map(oracle.vertex_census, oracle.enumerate_configurations(n))
            if census[VertexKind.B1] + census[VertexKind.B2] == 0
        )
        assert oracle.dwpf_brute(p) == pytest.approx(expected)
        assert oracle.dwpf_transfer(p) == pytest.approx(expected)

    def test_transfer_reaches_larger_lattices(self):
        p = RestrictedParams(
            tuple(0.05 * k + 0.02j * k for k in range(1, 9)),
            tuple(-0.04 * k + 0.03j for k in range(1, 9)),
        ).to_model()
        value = oracle.dwpf_transfer(p)
        assert math.isfinite(abs(value)) and value != 0

    def test_size_guards(self):
        big = ModelParams.restricted_case([0.01 * k for k in range(7)], [-0.01 * k - 0.3 for k in range(7)])
        with pytest.raises(SizeError):
            oracle.dwpf_brute(big)


@pytest.mark.unit
class TestCounting:
    """Tests for counting and the 2-enumeration point."""

    @pytest.mark.parametrize("n", range(1, 9))
    def test_count_configurations(self, n):
        assert oracle.count_configurations(n) == ASM_COUNTS[n - 1]

    def test_count_guard(self):
        with pytest.raises(SizeError):
            oracle.count_configurations(oracle.COUNT_MAX_N + 1)

    def test_weighted_count_unit_weights(self):
        assert oracle.weighted_count(4, 1, 1, 1) == pytest.approx(42)

    @pytest.mark.parametrize("n", range(1, 6))
    def test_two_enumeration_closed_form(self, n):
        result = oracle.two_enumeration(n)
        assert relative_difference(result.weighted_count, 2 ** (n * n / 2)) < 1e-12
        assert result.two_enumeration == pytest.approx(2 ** (n * (n - 1) / 2))
        assert relative_difference(result.normalized, result.weighted_count) < 1e-10

    def test_two_enumeration_params(self):
        p = oracle.two_enumeration_params(3)
        assert p.is_restricted
        w = p.to_restricted().weights(0, 0)
        assert abs(w.c0 / abs(w.a0)) == pytest.approx(math.sqrt(2))
