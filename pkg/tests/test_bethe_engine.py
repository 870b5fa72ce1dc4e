"""
Tests for the Bethe ansatz engine: monodromy, F-matrix, twisted operators
and the general product formula.
"""
import numpy as np
import pytest

from modules.engines import bethe_engine as be
from modules.engines import enumeration_oracle
from modules.engines.izergin_engine import dwpf_restricted_product
from modules.errors import DimensionError, DomainError, SizeError
from modules.model_core import ModelParams, checked_weights
from modules.numeric_kernel import relative_difference


def _site_r_matrices(params, alpha, u):
    chain = be.Chain.from_params(params)
    return [be._r_from_weights(w) for w in chain.weights(be.Line.of(alpha, u))]


def _embedded_monodromy(rs, reverse=False):
    """Product of embedded R_{0j}, auxiliary space as site 0, indexed [out, sites, in, sites]."""
    n = len(rs)
    factors = [be.embed_two_site(r, 0, j + 1, n + 1) for j, r in enumerate(rs)]
    if not reverse:
        factors = factors[::-1]
    total = np.linalg.multi_dot(factors) if n > 1 else factors[0]
    return total.reshape(2, 1 << n, 2, 1 << n)


@pytest.mark.unit
class TestOperators:
    """Tests for OperatorMatrix and StateVector."""

    def test_from_factors_is_kron(self):
        x = np.array([[0, 1], [1, 0]], dtype=complex)
        z = np.diag([1, -1]).astype(complex)
        op = be.OperatorMatrix.from_factors([x, z])
        assert np.allclose(op.entries, np.kron(x, z))
        assert op.n_sites == 2

    def test_shape_checks(self):
        with pytest.raises(DimensionError):
            be.OperatorMatrix(2, np.eye(3))
        with pytest.raises(DimensionError):
            be.OperatorMatrix.identity(1) @ be.OperatorMatrix.identity(2)
        with pytest.raises(DimensionError):
            be.StateVector(2, np.ones(3))

    def test_reference_states(self):
        ref = be.StateVector.reference(3)
        dual = be.StateVector.dual_reference(3)
        assert ref.amplitudes[0] == 1 and dual.amplitudes[-1] == 1
        assert dual.inner(ref) == 0
        flip = be.OperatorMatrix.from_factors([np.array([[0, 1], [1, 0]], dtype=complex)] * 3)
        assert dual.inner(flip @ ref) == 1

    def test_difference_and_diagonal(self):
        a = be.OperatorMatrix.identity(2)
        assert a.is_diagonal()
        assert a.difference(a) == 0.0
        assert a.trace() == 4
        b = be.OperatorMatrix(2, a.entries + 0.5 * np.eye(4, k=1))
        assert not b.is_diagonal()
        assert b.difference(a) == pytest.approx(0.5)

    def test_embed_two_site(self):
        swap = np.eye(4, dtype=complex)[[0, 2, 1, 3]]
        big = be.embed_two_site(swap, 0, 2, 3)
        # swapping sites 1 and 3 maps |100> to |001>
        assert big[0b001, 0b100] == 1
        assert big[0b010, 0b010] == 1
        with pytest.raises(DimensionError):
            be.embed_two_site(swap, 1, 1, 3)


@pytest.mark.unit
class TestMonodromy:
    """Tests for the monodromy blocks and the Bethe route."""

    def test_r_matrix_entries(self):
        r = be.r_matrix(0.3, -0.2j, 0.1, 0.05)
        w = checked_weights(0.3, -0.2j, 0.1, 0.05)
        assert r[0, 0] == w.a1 and r[3, 3] == w.a2
        assert r[1, 1] == w.b1 and r[2, 2] == w.b2
        assert r[1, 2] == w.c1 and r[2, 1] == w.c2
        assert np.count_nonzero(r) == 6

    def test_r_matrix_one_based_positions(self):
        r = be.r_matrix(0.25 + 0.1j, -0.4, 0.2j, -0.3)
        w = checked_weights(0.25 + 0.1j, -0.4, 0.2j, -0.3)

        def entry(row, col):
            return r[row - 1, col - 1]

        assert entry(1, 1) == w.a1 and entry(4, 4) == w.a2
        assert entry(2, 2) == w.b1 and entry(3, 3) == w.b2
        assert entry(2, 3) == w.c1 and entry(3, 2) == w.c2

    @pytest.mark.parametrize("n", range(1, 5))
    def test_blocks_match_embedded_product(self, general_params, n):
        p = general_params[n]
        blocks = be.monodromy(p, p.alpha[0], p.u[0])
        tensor = _embedded_monodromy(_site_r_matrices(p, p.alpha[0], p.u[0]))
        for (out, inn), block in zip([(0, 0), (0, 1), (1, 0), (1, 1)], blocks):
            assert block.difference(be.OperatorMatrix(n, tensor[out, :, inn, :])) < 1e-12

    @pytest.mark.parametrize("n", [2, 3])
    def test_reversed_product_order_changes_b(self, general_params, n):
        p = general_params[n]
        rs = _site_r_matrices(p, p.alpha[1], p.u[1])
        reversed_b = be.OperatorMatrix(n, _embedded_monodromy(rs, reverse=True)[0, :, 1, :])
        assert be.monodromy(p, p.alpha[1], p.u[1]).B.difference(reversed_b) > 1e-6

    def test_single_site_blocks(self):
        params = ModelParams((0.2,), (0.4j,), (0.1,), (-0.1,))
        w = params.weights(0, 0)
        blocks = be.monodromy(params, params.alpha[0], params.u[0])
        assert np.allclose(blocks.A.entries, np.diag([w.a1, w.b1]))
        assert np.allclose(blocks.D.entries, np.diag([w.b2, w.a2]))
        assert np.allclose(blocks.B.entries, [[0, 0], [w.c1, 0]])
        assert np.allclose(blocks.C.entries, [[0, w.c2], [0, 0]])

    @pytest.mark.parametrize("n", range(1, 5))
    def test_bethe_matches_brute(self, general_params, n):
        p = general_params[n]
        assert relative_difference(be.dwpf_bethe(p), enumeration_oracle.dwpf_brute(p)) < 1e-10

    def test_bethe_matches_explicit_operator_string(self, general_params):
        p = general_params[3]
        state = be.StateVector.reference(3)
        for k in reversed(range(3)):
            state = be.monodromy(p, p.alpha[k], p.u[k]).B @ state
        value = be.StateVector.dual_reference(3).inner(state)
        assert relative_difference(value, be.dwpf_bethe(p)) < 1e-12

    def test_size_guard(self):
        n = be.OPERATOR_MAX_N + 1
        params = ModelParams.restricted_case([0.01 * k for k in range(n)], [0.5 - 0.01 * k for k in range(n)])
        with pytest.raises(SizeError):
            be.dwpf_bethe(params)


@pytest.mark.unit
class TestFMatrix:
    """Tests for the factorizing F-matrix and the twisted operators."""

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_inverse(self, bethe_params, n):
        fm = be.f_matrix(bethe_params[n])
        product = fm.forward @ fm.inverse
        assert product.difference(be.OperatorMatrix.identity(n)) < 1e-10
        assert fm.condition >= 1.0

    def test_inverse_fixes_reference_state(self, bethe_params):
        fm = be.f_matrix(bethe_params[3])
        ref = be.StateVector.reference(3)
        assert np.allclose((fm.inverse @ ref).amplitudes, ref.amplitudes)

    def test_two_site_f_matrix_entries(self, bethe_params):
        p = bethe_params[2]
        w = p.checked(0, 1)
        expected = np.array([
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [0, w.c2, w.b2, 0],
            [0, 0, 0, w.a2],
        ], dtype=complex)
        assert be.f_matrix(p).forward.difference(be.OperatorMatrix(2, expected)) < 1e-14

    @pytest.mark.parametrize("n", [2, 3])
    def test_dual_reference_is_left_eigenvector(self, bethe_params, n):
        p = bethe_params[n]
        scale = np.prod([p.checked(j, k).a2 for j in range(n) for k in range(j + 1, n)])
        dual = be.StateVector.dual_reference(n).amplitudes
        row = dual @ be.f_matrix(p).forward.entries
        assert np.max(np.abs(row - scale * dual)) < 1e-11 * max(abs(scale), 1.0)

    def test_singular_f_matrix(self):
        # equal vertical lines zero the checked b2 inside D
        params = ModelParams((0.1, 0.2), (0.3, 0.3), (0, 0), (0, 0))
        with pytest.raises(DomainError):
            be.f_matrix(params)

    @pytest.mark.parametrize("n", [2, 3])
    def test_twist_closed_forms(self, bethe_params, n):
        p = bethe_params[n]
        assert be.twist_residual(p, p.alpha[0], p.u[0]) < 1e-10

    @pytest.mark.parametrize("n", [2, 3])
    def test_twist_preserves_trace_of_a_plus_d(self, bethe_params, n):
        p = bethe_params[n]
        plain = be.monodromy(p, p.alpha[0], p.u[0])
        twisted = be.twist_conjugate(p, p.alpha[0], p.u[0])
        before = plain.A.trace() + plain.D.trace()
        after = twisted.A.trace() + twisted.D.trace()
        assert abs(after - before) < 1e-11 * max(abs(before), 1.0)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_twisted_b_on_reference_has_n_components(self, bethe_params, n):
        p = bethe_params[n]
        b = be.twisted_closed_forms(p, p.alpha[0], p.u[0]).B
        state = b @ be.StateVector.reference(n)
        # one flipped site per summand
        assert sorted(np.flatnonzero(state.amplitudes)) == sorted(1 << (n - 1 - l) for l in range(n))

    def test_twisted_d_is_diagonal(self, bethe_params):
        p = bethe_params[3]
        twisted = be.twist_conjugate(p, p.alpha[1], p.u[1])
        assert twisted.D.is_diagonal(1e-10)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_twisted_route(self, bethe_params, n):
        p = bethe_params[n]
        assert relative_difference(be.dwpf_twisted(p), be.dwpf_bethe(p)) < 1e-10

    def test_spectrum_preserved(self, bethe_params):
        p = bethe_params[2]
        assert be.spectrum_residual(p, p.alpha[0], p.u[0]) < 1e-8

    @pytest.mark.parametrize("n", [2, 3])
    def test_operator_recursions(self, bethe_params, n):
        p = bethe_params[n]
        assert be.operator_b_recursion_residual(p, p.alpha[0], p.u[0]) < 1e-10
        assert be.matrix_equation_residual(p, p.alpha[0], p.u[0]) < 1e-10

    def test_recursions_need_two_sites(self, bethe_params):
        p = bethe_params[1]
        with pytest.raises(SizeError):
            be.operator_b_recursion_residual(p, 0.1, 0.0)
        with pytest.raises(SizeError):
            be.matrix_equation_residual(p, 0.1, 0.0)


@pytest.mark.unit
class TestProductFormula:
    """Tests for the general product formula and its supporting identities."""

    @pytest.mark.parametrize("n", range(1, 5))
    def test_product_matches_brute(self, general_params, n):
        p = general_params[n]
        assert relative_difference(be.dwpf_product_general(p), enumeration_oracle.dwpf_brute(p)) < 1e-10

    def test_product_reduces_to_restricted(self, restricted_params):
        p = restricted_params[5]
        assert relative_difference(be.dwpf_product_general(p.to_model()), dwpf_restricted_product(p)) < 1e-12

    @pytest.mark.parametrize("n", range(2, 5))
    def test_bethe_recursion(self, general_params, n):
        assert be.bethe_recursion_residual(general_params[n]) < 1e-9

    @pytest.mark.parametrize("n", range(1, 5))
    def test_partition_of_unity(self, general_params, n):
        assert be.partition_identity_residual(general_params[n]) < 1e-9

    def test_polynomial_identity(self, general_params):
        points = [0.1, -0.3j, 0.5 + 0.2j, -0.4 - 0.4j]
        assert be.product_form_residual(general_params[3], points) < 1e-10
