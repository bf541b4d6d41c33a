import numpy as np
import pytest

from canonham import (
    BreakdownAtOrder,
    InsufficientMoments,
    MomentSequence,
    NotPositiveDefinite,
    build_delta,
    build_gamma,
    levinson_solve_ones,
    sum_delta_inverse,
    sum_inverse,
)
from conftest import (
    measure_pd_moments,
    moments_1pcos,
    moments_1psin,
    random_pd_moments,
)


def dense_toeplitz(gamma, n):
    """Independent construction of Gamma_n straight from the definition."""
    M = np.empty((n + 1, n + 1), dtype=complex)
    for j in range(n + 1):
        for k in range(n + 1):
            d = k - j
            M[j, k] = gamma[d] if d >= 0 else np.conj(gamma[-d])
    return M


def oracle_sum_inverse(gamma, n):
    M = dense_toeplitz(gamma, n)
    return float(np.real(np.sum(np.linalg.solve(M, np.ones(n + 1)))))


class TestGammaMatrix:
    def test_one_plus_cos_order1(self):
        G = build_gamma(moments_1pcos(3), 1)
        assert np.allclose(G.to_dense(), [[1.0, 0.5], [0.5, 1.0]])

    def test_order0(self):
        G = build_gamma(moments_1pcos(3), 0)
        assert G.to_dense() == pytest.approx(np.array([[1.0]]))

    def test_one_plus_sin_hermitian_fill(self):
        G = build_gamma(moments_1psin(3), 1)
        assert np.allclose(G.to_dense(), [[1.0, -0.5j], [0.5j, 1.0]])

    def test_insufficient_moments(self):
        with pytest.raises(InsufficientMoments):
            build_gamma(moments_1pcos(3), 7)


class TestDeltaMatrix:
    def test_displayed_structure(self):
        D = build_delta(moments_1psin(3), 2).to_dense()
        assert np.all(np.diag(D) == 0)
        g1 = -0.5j
        assert D[0, 1] == pytest.approx(g1)
        assert D[1, 2] == pytest.approx(g1)
        assert D[1, 0] == pytest.approx(-np.conj(g1))
        assert D[2, 0] == pytest.approx(0.0)


class TestSumInverse:
    def test_order0_reciprocal(self):
        assert sum_inverse(build_gamma(moments_1pcos(2), 0)) == pytest.approx(1.0)

    def test_one_plus_cos_order1(self):
        # hand value 4/3, confirmed by the dense oracle
        m = moments_1pcos(2)
        assert oracle_sum_inverse(m.gamma, 1) == pytest.approx(4.0 / 3.0)
        assert sum_inverse(build_gamma(m, 1)) == pytest.approx(4.0 / 3.0, rel=1e-14)

    def test_identity_moments(self):
        m = MomentSequence(np.pi, np.array([1.0, 0, 0, 0, 0], dtype=complex))
        for n in range(5):
            assert sum_inverse(build_gamma(m, n)) == pytest.approx(n + 1.0)

    def test_not_positive_definite_reports_order(self):
        m = MomentSequence(np.pi, np.array([1.0, 1.2, 0.1], dtype=complex))
        with pytest.raises(NotPositiveDefinite) as exc:
            sum_inverse(build_gamma(m, 2))
        assert exc.value.max_order == 0

    def test_monotone_in_order(self, rng):
        m = random_pd_moments(rng, 40)
        sums = [sum_inverse(build_gamma(m, n)) for n in range(41)]
        assert np.all(np.diff(sums) > 0)


class TestSumDeltaInverse:
    def test_order0_zero(self):
        m = moments_1psin(2)
        assert sum_delta_inverse(build_delta(m, 0), build_gamma(m, 0)) == 0.0

    def test_even_measure_vanishes(self):
        m = moments_1pcos(12)
        for n in range(11):
            val = sum_delta_inverse(build_delta(m, n), build_gamma(m, n))
            assert abs(val) < 1e-12

    def test_one_plus_sin_order1(self):
        m = moments_1psin(2)
        val = sum_delta_inverse(build_delta(m, 1), build_gamma(m, 1))
        assert val == pytest.approx(-4.0 / 3.0, rel=1e-13)

    def test_order_mismatch(self):
        m = moments_1psin(3)
        with pytest.raises(ValueError):
            sum_delta_inverse(build_delta(m, 1), build_gamma(m, 2))


class TestLevinson:
    def test_identity_moments_all_ones(self):
        m = MomentSequence(np.pi, np.array([1.0, 0, 0, 0], dtype=complex))
        res = levinson_solve_ones(m, 3)
        for k, x in enumerate(res.solutions):
            assert np.allclose(x, np.ones(k + 1))
        assert np.allclose(res.alphas, 0.0)

    def test_one_plus_cos_sums(self):
        res = levinson_solve_ones(moments_1pcos(2), 2)
        assert np.allclose(res.sums, [1.0, 4.0 / 3.0, 2.0], rtol=1e-14)

    def test_matches_dense_oracle(self, rng):
        for _ in range(8):
            order = int(rng.integers(3, 60))
            m = random_pd_moments(rng, order)
            res = levinson_solve_ones(m, order)
            for n in (0, order // 2, order):
                x = np.linalg.solve(
                    dense_toeplitz(m.gamma, n), np.ones(n + 1, dtype=complex)
                )
                assert np.allclose(res.solutions[n], x, rtol=1e-9, atol=1e-12)
                assert res.sums[n] == pytest.approx(
                    float(np.real(np.sum(x))), rel=1e-10
                )

    def test_measure_generated_moments_agree(self, rng):
        # inputs built from actual measures, not from reflection data
        for _ in range(5):
            m = measure_pd_moments(rng, 30)
            res = levinson_solve_ones(m, 30)
            assert res.sums[-1] == pytest.approx(
                oracle_sum_inverse(m.gamma, 30), rel=1e-10
            )

    def test_fast_vs_dense_high_order(self, rng):
        m = random_pd_moments(rng, 200)
        res = levinson_solve_ones(m, 200, want_solutions=False)
        for n in (50, 120, 200):
            dense = sum_inverse(build_gamma(m, n))
            assert res.sums[n] == pytest.approx(dense, rel=1e-10)

    def test_breakdown_with_partial(self):
        gamma = np.array([1.0, 0.999999, 0.2, 0.1], dtype=complex)
        m = MomentSequence(np.pi, gamma)
        with pytest.raises(BreakdownAtOrder) as exc:
            levinson_solve_ones(m, 3)
        assert exc.value.order >= 1
        partial = exc.value.partial
        assert partial.reached == exc.value.order - 1
        assert len(partial.sums) == partial.reached + 1

    def test_scaling_moments_scales_sums_exactly(self, rng):
        m = random_pd_moments(rng, 30)
        res1 = levinson_solve_ones(m, 30, want_solutions=False)
        res2 = levinson_solve_ones(m.scaled(2.0), 30, want_solutions=False)
        assert np.array_equal(res2.sums, res1.sums / 2.0)
        assert np.array_equal(res2.delta_sums, res1.delta_sums)
