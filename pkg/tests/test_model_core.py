"""
Tests for the model core: weights, vertex kinds and parameter sets.
"""
import cmath

import numpy as np
import pytest

from modules.errors import DimensionError, DomainError
from modules.model_core import (
    ModelParams,
    RestrictedParams,
    VertexKind,
    general_weights,
    is_restricted,
    restricted_weights,
    two_pi_i_shift,
    vertex_weight,
)
from modules.numeric_kernel import relative_difference


@pytest.mark.unit
class TestVertexKind:
    """Tests for the six allowed vertices."""

    def test_arrow_conservation(self):
        for kind in VertexKind:
            assert kind.w + kind.s == kind.e + kind.n

    def test_from_bonds(self):
        assert VertexKind.from_bonds(1, 0, 0, 1) is VertexKind.C1
        assert VertexKind.from_bonds(1, 1, 0, 0) is None

    def test_slots_follow_declaration_order(self):
        assert [kind.slot for kind in VertexKind] == list(range(6))


@pytest.mark.unit
class TestWeights:
    """Tests for the trigonometric weight family."""

    def test_general_weights_formulas(self):
        alpha, beta, u, v = 0.3 + 0.1j, -0.2 + 0.4j, 0.2 - 0.1j, -0.1 + 0.05j
        x = cmath.exp(u - v)
        w = general_weights(alpha, beta, u, v)
        assert w.a1 == pytest.approx(1 - alpha * beta * x)
        assert w.a2 == pytest.approx(x - alpha * beta)
        assert w.b1 == pytest.approx(alpha - beta * x)
        assert w.b2 == pytest.approx(beta - alpha * x)
        c = cmath.sqrt(1 - alpha ** 2) * cmath.sqrt(1 - beta ** 2)
        assert w.c1 == pytest.approx(c * x)
        assert w.c2 == pytest.approx(c)

    def test_free_fermion_condition(self):
        for alpha, beta, u, v in [(0.3, -0.6, 0.2, -0.4), (0.1 + 0.5j, 0.7j, 0.3j, 0.1 - 0.2j)]:
            assert general_weights(alpha, beta, u, v).free_fermion_residual() < 1e-14

    def test_free_fermion_condition_on_random_draws(self):
        rng = np.random.default_rng(2024)

        def disk():
            return 0.7 * np.sqrt(rng.uniform()) * cmath.exp(2j * cmath.pi * rng.uniform())

        for _ in range(1000):
            u, v = (complex(rng.uniform(-1, 1), rng.uniform(-3, 3)) for _ in range(2))
            assert general_weights(disk(), disk(), u, v).free_fermion_residual() <= 1e-12

    def test_restricted_limit(self):
        alpha, beta = 0.25 - 0.3j, 0.6 + 0.1j
        w = general_weights(alpha, beta, 0, 0)
        r = restricted_weights(alpha, beta)
        assert w.a1 == pytest.approx(r.a0) and w.a2 == pytest.approx(r.a0)
        assert w.b1 == pytest.approx(r.b0) and w.b2 == pytest.approx(-r.b0)
        assert w.c1 == pytest.approx(r.c0) and w.c2 == pytest.approx(r.c0)
        for kind in VertexKind:
            assert r.signed(kind) == pytest.approx(w.for_kind(kind))

    def test_two_pi_i_shift_leaves_weights_unchanged(self):
        base = general_weights(0.3, 0.1j, 0.2, -0.1)
        shifted = general_weights(0.3, 0.1j, 0.2 + two_pi_i_shift(3), -0.1)
        for x, y in zip(base.as_tuple(), shifted.as_tuple()):
            assert relative_difference(x, y) < 1e-13

    def test_cached_square_roots_are_used(self):
        w = general_weights(0.3, 0.2, 0, 0, sqrt_alpha=-1.0, sqrt_beta=1.0)
        assert w.c2 == pytest.approx(-1.0)


@pytest.mark.unit
class TestModelParams:
    """Tests for parameter sets."""

    def test_construction_and_caches(self, small_params):
        assert small_params.n == 2
        assert all(isinstance(x, complex) for x in small_params.alpha)
        assert small_params.gamma[0] == pytest.approx(cmath.sqrt(1 - small_params.alpha[0] ** 2))

    def test_length_mismatch(self):
        with pytest.raises(DimensionError, match="beta"):
            ModelParams((0.1, 0.2), (0.3,), (0, 0), (0, 0))
        with pytest.raises(DimensionError):
            ModelParams((), (), (), ())

    def test_strict_rejects_unit_field(self):
        with pytest.raises(DomainError):
            ModelParams((1.0,), (0.2,), (0,), (0,))
        relaxed = ModelParams((1.0,), (0.2,), (0,), (0,), strict=False)
        assert relaxed.weights(0, 0).c2 == 0

    def test_without(self, small_restricted):
        params = small_restricted.to_model()
        smaller = params.without(1, 2)
        assert smaller.n == 2
        assert smaller.alpha == (params.alpha[0], params.alpha[2])
        assert smaller.beta == (params.beta[0], params.beta[1])
        with pytest.raises(DimensionError):
            smaller.without(0, 0).without(0, 0)

    def test_is_restricted(self):
        assert ModelParams.restricted_case((0.1, 0.2), (0.3, 0.4)).is_restricted
        shifted = ModelParams((0.1,), (0.3,), (two_pi_i_shift(1),), (two_pi_i_shift(-2),))
        assert is_restricted(shifted)
        assert not ModelParams((0.1,), (0.3,), (0.2,), (0,)).is_restricted

    def test_vertex_weight_is_one_based(self, small_params):
        assert vertex_weight(VertexKind.B2, small_params, 1, 2) == small_params.weights(0, 1).b2
        with pytest.raises(IndexError):
            vertex_weight(VertexKind.A1, small_params, 0, 1)
        with pytest.raises(IndexError):
            vertex_weight(VertexKind.A1, small_params, 1, 3)


@pytest.mark.unit
class TestRestrictedParams:
    """Tests for the restricted-case parameter set."""

    def test_replacements(self, small_restricted):
        q = small_restricted.with_alpha(1, 0.5)
        assert q.alpha[1] == 0.5 and q.alpha[0] == small_restricted.alpha[0]
        q = small_restricted.with_beta(0, -0.5)
        assert q.beta[0] == -0.5

    def test_round_trip_through_model(self, small_restricted):
        assert small_restricted.to_model().to_restricted() == small_restricted

    def test_mismatched_lengths(self):
        with pytest.raises(DimensionError):
            RestrictedParams((0.1, 0.2), (0.3,))
