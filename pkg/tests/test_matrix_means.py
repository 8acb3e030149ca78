import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meanlab import matrix_means as mm
from meanlab.matrix_core import PsdMatrix, SingularMatrixError, loewner_leq, random_matrix, random_psd
from meanlab.scalar_means import A, G, H, L, Family, MeanDomainError, MeanKind

S2 = np.array([[2.0, 1.0], [1.0, 2.0]])
T2 = np.array([[3.0, 0.0], [0.0, 1.0]])
# 30-digit mpmath (sqrtm, powm, quad) evaluations for the pair (S2, T2)
GEO_2 = [[2.3145502494313786539, 0.46291004988627573078], [0.46291004988627573078, 1.3887301496588271923]]
GEO13_2 = [[2.1720869396501465914, 0.62981243061503267909], [0.62981243061503267909, 1.5637788873700924359]]
LOG_2 = [[2.376042784329714285, 0.475208556865942857], [0.475208556865942857, 1.425625670597828571]]
POW13_2 = [[2.3761871064157370441, 0.47523742128314740881], [0.47523742128314740881, 1.4257122638494422264]]

SEPARABLE = [A, G, L, MeanKind(Family.HEINZ, 0.3), MeanKind(Family.HERON, 0.4), MeanKind(Family.HERON_HAT, 0.4)]


def _instance(n, seed):
    rng = np.random.default_rng(seed)
    return random_psd(n, rng), random_psd(n, rng), random_matrix(n, rng)


class TestQuadrature:
    @pytest.mark.parametrize("k", range(0, 20))
    def test_exact_for_polynomials(self, k):
        x, w = mm.gauss_legendre_01(10)
        assert np.sum(w * x**k) == pytest.approx(1 / (k + 1), rel=1e-14)

    def test_rejects_single_node(self):
        with pytest.raises(ValueError):
            mm.gauss_legendre_01(1)


class TestHadamard:
    def test_diagonal_case_is_entrywise(self):
        s, t = np.diag([1.0, 4.0, 9.0]), np.diag([2.0, 3.0, 5.0])
        x = np.arange(1.0, 10.0).reshape(3, 3)
        out = mm.hadamard_mean(L, s, t, x)
        expected = np.array([[L(si, tj) * x[i, j] for j, tj in enumerate([2, 3, 5])]
                             for i, si in enumerate([1, 4, 9])])
        np.testing.assert_allclose(out, expected, rtol=1e-13)

    @pytest.mark.parametrize("kind", [A, G, H, L, MeanKind(Family.BINOMIAL, 1 / 3)], ids=str)
    def test_same_matrix_identity_input(self, kind):
        s = random_psd(4, 1)
        np.testing.assert_allclose(mm.hadamard_mean(kind, s, s, np.eye(4)), s.matrix, atol=1e-13)

    @pytest.mark.parametrize("kind", SEPARABLE, ids=str)
    @pytest.mark.parametrize("seed", range(5))
    def test_matches_explicit_forms(self, kind, seed):
        s, t, x = _instance(2 + seed, seed)
        had = mm.hadamard_mean(kind, s, t, x)
        exp = mm.explicit_map(kind, s, t, x)
        assert np.linalg.norm(had - exp) <= 1e-10 * max(1.0, np.linalg.norm(had))

    def test_linear_in_x(self):
        s, t, x = _instance(4, 3)
        y = random_matrix(4, 9)
        kind = MeanKind(Family.BRIDGE, 2 / 3)
        lhs = mm.hadamard_mean(kind, s, t, 2 * x - y)
        rhs = 2 * mm.hadamard_mean(kind, s, t, x) - mm.hadamard_mean(kind, s, t, y)
        np.testing.assert_allclose(lhs, rhs, atol=1e-13)

    def test_zero_eigenvalue_extension(self):
        s = PsdMatrix.from_array(np.diag([1.0, 0.0]))
        t = PsdMatrix.from_array(np.diag([2.0, 3.0]))
        out = mm.hadamard_mean(A, s, t, np.ones((2, 2)))
        np.testing.assert_allclose(out, [[1.5, 2.0], [1.0, 1.5]])
        out = mm.hadamard_mean(L, s, t, np.ones((2, 2)))
        assert out[1, 0] == 0.0 and out[1, 1] == 0.0

    def test_extension_missing_raises(self):
        s = PsdMatrix.from_array(np.diag([1.0, 0.0]))
        with pytest.raises(MeanDomainError):
            mm.hadamard_mean(MeanKind(Family.POWER_DIFF, 2.5), s, s, np.eye(2))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            mm.hadamard_mean(A, np.eye(2), np.eye(3), np.eye(2))

    def test_spec_dispatch(self):
        s, t, x = _instance(3, 4)
        quad = mm.MatrixMeanSpec(L, "quadrature")(s, t, x)
        had = mm.MatrixMeanSpec(L)(s, t, x)
        assert np.linalg.norm(quad - had) < 1e-10
        with pytest.raises(ValueError):
            mm.MatrixMeanSpec(G, "quadrature")
        with pytest.raises(ValueError):
            mm.MatrixMeanSpec(H, "explicit")


class TestOperatorMeans:
    def test_geometric_oracle(self):
        np.testing.assert_allclose(mm.op_geom(0.5, S2, T2), GEO_2, rtol=1e-14)
        np.testing.assert_allclose(mm.op_geom(1 / 3, S2, T2), GEO13_2, rtol=1e-14)

    def test_log_oracle(self):
        np.testing.assert_allclose(mm.op_log(S2, T2), LOG_2, rtol=1e-13)
        np.testing.assert_allclose(mm.op_log_closed(S2, T2), LOG_2, rtol=1e-13)

    def test_power_oracle(self):
        np.testing.assert_allclose(mm.op_power_mean(1 / 3, S2, T2), POW13_2, rtol=1e-13)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10**6), n=st.integers(1, 6))
    def test_geometric_solves_riccati(self, seed, n):
        rng = np.random.default_rng(seed)
        s, t = random_psd(n, rng), random_psd(n, rng)
        g = mm.op_geom(0.5, s, t)
        np.testing.assert_allclose(g @ np.linalg.inv(s.matrix) @ g, t.matrix, atol=1e-10)
        np.testing.assert_allclose(g, mm.op_geom(0.5, t, s), atol=1e-11)

    def test_weight_endpoints(self):
        s, t, _ = _instance(4, 5)
        np.testing.assert_allclose(mm.op_geom(0, s, t), s.matrix, atol=1e-14)
        np.testing.assert_allclose(mm.op_geom(1, s, t), t.matrix, atol=1e-12)
        np.testing.assert_allclose(mm.op_arith(0.25, s.matrix, t.matrix), 0.75 * s.matrix + 0.25 * t.matrix)

    def test_commuting_pair_reduces_to_scalars(self):
        s, t = np.diag([1.0, 2.0, 7.0]), np.diag([3.0, 0.5, 7.0])
        np.testing.assert_allclose(np.diag(mm.op_log(s, t)), L([1, 2, 7.0], [3, 0.5, 7.0]), rtol=1e-13)
        np.testing.assert_allclose(np.diag(mm.op_power_mean(1.0, s, t)), [2.0, 1.25, 7.0], rtol=1e-14)

    def test_power_mean_at_zero_rejected(self):
        with pytest.raises(MeanDomainError):
            mm.op_power_mean(0.0, S2, T2)

    def test_singular_s_rejected(self):
        with pytest.raises(SingularMatrixError):
            mm.op_geom(0.5, np.diag([1.0, 0.0]), np.eye(2))

    def test_weight_domain(self):
        with pytest.raises(MeanDomainError):
            mm.op_geom(1.5, S2, T2)

    def test_classical_operator_order(self):
        for seed in range(10):
            s, t, _ = _instance(5, seed)
            geo, logm, ari = mm.op_geom(0.5, s, t), mm.op_log(s, t), mm.op_arith(0.5, s, t)
            assert loewner_leq(geo, logm) and loewner_leq(logm, ari)


class TestOperatorChain:
    @pytest.mark.parametrize("seed", range(10))
    def test_default_parameters(self, seed):
        s, t, _ = _instance(2 + seed % 7, seed)
        v = mm.operator_chain_check(s, t)
        assert v.holds, v.to_dict()
        assert len(v.links) == 5
        assert v.worst >= -1e-9

    def test_boundary_parameters(self):
        s, t, _ = _instance(4, 99)
        assert mm.operator_chain_check(s, t, 1.0, 0.0, 1 / 3).holds
        assert mm.operator_chain_check(s, t, 2 / 3, 2 / 3, 3.0).holds

    def test_normalization_invariance(self):
        s, t, _ = _instance(3, 7)
        a = mm.operator_chain_check(PsdMatrix.from_array(1e4 * s.matrix), PsdMatrix.from_array(1e4 * t.matrix))
        assert a.holds and a.scale > 1e3

    @pytest.mark.parametrize("tp,sp,p", [(0.5, 0.5, 1.0), (0.8, 0.9, 1.0), (0.8, 0.5, 0.2)])
    def test_parameter_domain(self, tp, sp, p):
        s, t, _ = _instance(2, 0)
        with pytest.raises(MeanDomainError):
            mm.operator_chain_check(s, t, tp, sp, p)

    def test_middle_term_nearly_symmetric(self):
        s, t, _ = _instance(6, 13)
        v = mm.operator_chain_check(s, t)
        assert v.middle_asymmetry < 1e-10
