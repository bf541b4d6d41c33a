import warnings

import numpy as np
import pytest

from canonham import (
    BreakdownAtOrder,
    LengthMismatch,
    MeasureSpec,
    MomentSequence,
    PartialResultWarning,
    StepHamiltonian,
    assemble,
    g_via_opuc,
    h_via_opuc,
    periodize,
    recover_g,
    recover_h,
    recover_hamiltonian,
    trig_moments,
)
from conftest import (
    moments_1mcos,
    moments_1msin,
    moments_1pcos,
    moments_1psin,
    random_pd_moments,
)


def h_formula_1pcos(n):
    n = np.asarray(n)
    return ((-1.0) ** n * (2 * n + 3) + 1) ** 2 / (8.0 * (n + 1) * (n + 2))


# the seven Hamiltonian matrices of (1+sin x)dx, as printed fractions
SIN_H11 = [1, 5 / 3, 4 / 3, 4 / 5, 13 / 15, 25 / 21, 8 / 7]
SIN_G = [0, -4 / 3, -5 / 3, -1, -2 / 3, -22 / 21, -9 / 7]
SIN_H22 = [1, 5 / 3, 17 / 6, 5 / 2, 5 / 3, 37 / 21, 65 / 28]


class TestRecoverH:
    def test_one_plus_cos_first_steps(self):
        h = recover_h(moments_1pcos(6), 5)
        assert np.allclose(h, [1, 1 / 3, 2 / 3, 2 / 5, 3 / 5, 3 / 7], rtol=1e-13)

    def test_one_plus_cos_closed_form(self):
        h = recover_h(moments_1pcos(30), 30)
        assert np.allclose(h, h_formula_1pcos(np.arange(31)), rtol=1e-11)

    def test_one_minus_cos(self):
        h = recover_h(moments_1mcos(25), 25)
        n = np.arange(26)
        assert np.allclose(h, (n + 1) * (n + 2) / 2, rtol=1e-11)

    def test_constant_density(self):
        h1 = 2.5
        m = trig_moments(periodize(MeasureSpec(lebesgue_scale=1.0 / h1), np.pi), 10)
        assert np.allclose(recover_h(m, 10), h1, rtol=1e-13)

    def test_methods_agree(self, rng):
        m = random_pd_moments(rng, 35)
        assert np.allclose(
            recover_h(m, 35), recover_h(m, 35, method="dense"), rtol=1e-10
        )


class TestRecoverG:
    def test_even_measures_zero(self):
        for m in (moments_1pcos(20), moments_1mcos(20)):
            assert np.max(np.abs(recover_g(m, 20))) < 1e-10

    def test_one_plus_sin(self):
        assert np.allclose(recover_g(moments_1psin(8), 6), SIN_G, rtol=1e-12)

    def test_one_minus_sin_sign_flip(self):
        g = recover_g(moments_1msin(8), 6)
        assert np.allclose(g, -np.asarray(SIN_G), rtol=1e-12)

    def test_methods_agree(self, rng):
        m = random_pd_moments(rng, 35)
        assert np.allclose(
            recover_g(m, 35), recover_g(m, 35, method="dense"),
            rtol=1e-9, atol=1e-11,
        )


class TestAssemble:
    def test_one_plus_sin_matrices(self):
        m = moments_1psin(8)
        H = assemble(recover_h(m, 6), recover_g(m, 6), np.pi)
        assert H.step_length == pytest.approx(0.5)
        assert np.allclose(H.h11, SIN_H11, rtol=1e-12)
        assert np.allclose(H.g, SIN_G, rtol=1e-12)
        assert np.allclose(H.h22, SIN_H22, rtol=1e-12)

    def test_free_system(self):
        H = assemble(np.ones(4), np.zeros(4), np.pi)
        assert np.allclose(H.h11, 1.0) and np.allclose(H.h22, 1.0)
        assert H.is_diagonal()

    def test_one_minus_cos_diagonal_steps(self):
        m = moments_1mcos(10)
        H = recover_hamiltonian(m, 10)
        n = np.arange(11)
        assert np.allclose(H.h11, (n + 1) * (n + 2) / 2, rtol=1e-11)
        assert np.allclose(H.h22, 2.0 / ((n + 1) * (n + 2)), rtol=1e-11)
        assert np.max(np.abs(H.g)) < 1e-10

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            assemble(np.ones(3), np.zeros(2), np.pi)

    def test_det_normalization_invariant(self, rng):
        m = random_pd_moments(rng, 20)
        H = recover_hamiltonian(m, 20)
        det = H.h11 * H.h22 - H.g**2
        assert np.allclose(det, 1.0, rtol=1e-14)
        assert np.all(H.h11 > 0)

    def test_value_at_and_integral(self):
        H = StepHamiltonian(step_length=0.5, h11=np.array([1.0, 2.0]),
                            g=np.zeros(2))
        assert H.value_at(0.0)[0] == 1.0
        assert H.value_at(0.75)[0] == 2.0
        assert H.integral_h11(0.25, 1.0) == pytest.approx(0.25 * 1 + 0.5 * 2)
        with pytest.raises(IndexError):
            H.value_at(1.0)


class TestScalingLaw:
    def test_h_scales_g_fixed(self, rng):
        m = random_pd_moments(rng, 25)
        c = 2.0
        h1, g1 = recover_h(m, 25), recover_g(m, 25)
        h2, g2 = recover_h(m.scaled(c), 25), recover_g(m.scaled(c), 25)
        assert np.array_equal(h2, h1 / c)
        assert np.array_equal(g2, g1)


class TestPartialResults:
    def breakdown_moments(self):
        # order-2 matrix loses positivity: |gamma_1| close to gamma_0 and a
        # wild gamma_2 make the second reflection coefficient leave the disk
        return MomentSequence(np.pi, np.array([1.0, 0.9, -0.8], dtype=complex))

    def test_default_raises_with_partial(self):
        m = self.breakdown_moments()
        with pytest.raises(BreakdownAtOrder) as exc:
            recover_h(m, 2)
        assert exc.value.order == 2
        assert np.allclose(exc.value.partial[:1], [1.0])

    def test_allow_partial_warns(self):
        m = self.breakdown_moments()
        with pytest.warns(PartialResultWarning):
            h = recover_h(m, 2, allow_partial=True)
        assert len(h) == 2  # orders 0..1 survived
        with pytest.warns(PartialResultWarning):
            g = recover_g(m, 2, allow_partial=True)
        assert len(g) == 2

    def test_dense_path_partial(self):
        m = self.breakdown_moments()
        with pytest.warns(PartialResultWarning):
            h = recover_h(m, 2, method="dense", allow_partial=True)
        assert np.allclose(h, recover_h(m, 1))


class TestRouteAgreement:
    def test_sampled_random_sequences(self, rng):
        for _ in range(10):
            order = int(rng.integers(5, 60))
            m = random_pd_moments(rng, order)
            h_t = recover_h(m, order)
            g_t = recover_g(m, order)
            assert np.allclose(h_via_opuc(m, order), h_t, rtol=1e-8)
            assert np.allclose(g_via_opuc(m, order), g_t, rtol=1e-8, atol=1e-10)


class TestSerialization:
    def test_json_round_trip(self):
        H = StepHamiltonian(step_length=0.5, h11=np.array([1.0, 2.0]),
                            g=np.array([0.0, -1.5]))
        again = StepHamiltonian.from_json(H.to_json())
        assert again.step_length == H.step_length
        assert np.array_equal(again.h11, H.h11)
        assert np.array_equal(again.g, H.g)

    def test_csv_rows(self):
        H = StepHamiltonian(step_length=0.5, h11=np.array([4.0]), g=np.array([1.0]))
        rows = H.csv_rows()
        assert rows == [(0.0, 0.5, 4.0, 1.0, 0.5)]
