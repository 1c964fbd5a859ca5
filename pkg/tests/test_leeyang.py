from __future__ import annotations

import cmath
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fock_preserve.fock import GaussianForm, fock_inner
from fock_preserve.leeyang import (
    MAX_SITES,
    Gaussian,
    HypothesisError,
    Interval,
    SpinModel,
    TwoAtom,
    ej_convolve,
    fugacity_zeros,
    functional_representer,
    gls_compose,
    has_ly_property,
    ising_partition,
    ising_transform_series,
    measure_from_json,
    measure_to_json,
    moment,
    transform,
    transform_zeros,
)
from fock_preserve.poly import MPoly

w = MPoly.var(1, 0)


def exp_series(c: float, degree: int) -> MPoly:
    return MPoly(1, {(k,): c ** k / math.factorial(k) for k in range(degree + 1)}, max_degree=degree)


class TestMeasures:
    def test_validation(self):
        with pytest.raises(ValueError):
            Interval(1.0, 1.0)
        with pytest.raises(ValueError):
            Gaussian(0.0)

    @pytest.mark.parametrize("mu", [TwoAtom(1.0, -1.0), Interval(-0.5, 2.0), Gaussian(3.0)])
    def test_json(self, mu):
        assert measure_from_json(measure_to_json(mu)) == mu

    def test_moments(self):
        assert moment(TwoAtom(1.0, -1.0), 2) == 1.0
        assert moment(Interval(0.0, 1.0), 2) == pytest.approx(1 / 3)
        assert moment(Gaussian(2.0), 2) == pytest.approx(math.sqrt(math.pi) / 2)


class TestTransforms:
    def test_two_atom_cosh(self):
        t = transform(TwoAtom(1.0, -1.0), 4)
        assert t.truncation.allclose(1 + w * w / 2 + w ** 4 / 24)

    def test_interval_sinhc(self):
        t = transform(Interval(-1.0, 1.0), 8)
        assert t(0.0) == pytest.approx(2.0)
        expected = MPoly(1, {(2 * k,): 2 / math.factorial(2 * k + 1) for k in range(5)})
        assert t.truncation.allclose(expected)

    def test_interval_direct_integration(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            a, b = sorted(rng.uniform(-2, 2, 2))
            mu = Interval(a, b)
            t = transform(mu, 4)
            for s in rng.normal(size=3) + 1j * rng.normal(size=3):
                exact = (cmath.exp(b * s) - cmath.exp(a * s)) / s
                assert t(s) == pytest.approx(exact, rel=1e-12)
                assert complex(t.direct(s)) == pytest.approx(exact, rel=1e-12)

    def test_gaussian(self):
        t = transform(Gaussian(1.0), 4)
        s = 0.3 + 0.8j
        assert t(s) == pytest.approx(math.sqrt(2 * math.pi) * cmath.exp(s * s / 2), rel=1e-12)
        assert complex(t.direct(s)) == pytest.approx(t(s), rel=1e-10)

    @settings(max_examples=50)
    @given(st.floats(-2, 2), st.floats(-2, 2), st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False))
    def test_two_atom_closed_form(self, a, b, s):
        t = transform(TwoAtom(a, b), 2)
        exact = (cmath.exp(a * s) + cmath.exp(b * s)) / 2
        assert abs(t(s) - exact) <= 1e-12 * max(1.0, abs(exact))

    @pytest.mark.parametrize("mu", [TwoAtom(0.5, -1.5), Interval(-1.0, 0.5), Gaussian(2.0)])
    def test_truncation_matches_moments(self, mu):
        t = transform(mu, 10)
        for k in range(11):
            assert t.truncation[(k,)] == pytest.approx(moment(mu, k) / math.factorial(k), rel=1e-12, abs=1e-15)

    def test_two_atom_zeros_on_shifted_axis(self):
        for a, b in [(1.0, -1.0), (2.0, 0.0), (0.3, -0.9)]:
            for root in transform_zeros(TwoAtom(a, b), 5):
                assert abs(root.real) <= 1e-8
                assert abs(cmath.cosh((a - b) / 2 * root)) <= 1e-8


class TestLeeYangProperty:
    @pytest.mark.parametrize("mu, holds", [
        (TwoAtom(1.0, -1.0), True), (TwoAtom(2.0, 0.0), True), (TwoAtom(-2.0, 0.0), False),
        (Interval(-1.0, 2.0), True), (Interval(-2.0, 1.0), False), (Gaussian(1.0), True),
    ])
    def test_classes(self, mu, holds):
        report = has_ly_property(mu)
        assert report.holds == holds
        assert report.nonvanishing


class TestIsing:
    def test_single_site(self):
        assert ising_partition(SpinModel(np.zeros((1, 1)))).allclose(MPoly(1, {(0,): 0.5, (2,): 0.5}))
        zeros = fugacity_zeros(SpinModel(np.zeros((1, 1))))
        assert sorted(zeros.roots, key=lambda r: r.imag) == pytest.approx([-1j, 1j])

    def test_two_independent_sites_factor(self):
        u1, u2 = MPoly.var(2, 0), MPoly.var(2, 1)
        expected = ((1 + u1 * u1) / 2) * ((1 + u2 * u2) / 2)
        assert ising_partition(SpinModel(np.zeros((2, 2)))).allclose(expected)

    def test_two_sites_quadratic_oracle(self):
        j = 1.0
        zeros = fugacity_zeros(SpinModel(np.array([[0, j], [j, 0]])))
        # e^{2j} v^2 + 2 e^{-2j} v + e^{2j} in v = u^2
        disc = 4 * math.exp(-4 * j) - 4 * math.exp(4 * j)
        assert disc < 0 and len(zeros.roots) == 4
        assert zeros.max_deviation <= 1e-8

    def test_three_sites(self):
        J = 0.5 * (np.ones((3, 3)) - np.eye(3))
        assert fugacity_zeros(SpinModel(J)).max_deviation <= 1e-8

    def test_mass_equals_enumeration(self):
        rng = np.random.default_rng(5)
        J = np.triu(rng.uniform(0, 1, (4, 4)), 1)
        J = J + J.T
        p = ising_partition(SpinModel(J))
        total = sum(math.exp(float(np.array(s) @ J @ np.array(s))) for s in itertools.product([-1, 1], repeat=4))
        assert all(c.real > 0 for _, c in p.items())
        assert sum(c for _, c in p.items()) == pytest.approx(total / 16, rel=1e-13)

    def test_normalization_keeps_zeros(self):
        J = np.array([[0, 3.0], [3.0, 0]])
        a = ising_partition(SpinModel(J))
        b = ising_partition(SpinModel(J), normalize=True)
        ratio = a[(0, 0)] / b[(0, 0)]
        assert a.allclose(b.scale(ratio))

    def test_directions(self):
        J = np.array([[0, 0.4], [0.4, 0]])
        zeros = fugacity_zeros(SpinModel(J), (1, 2))
        assert zeros.max_deviation <= 1e-8 and len(zeros.roots) == 6
        rows = zeros.csv_rows()
        assert len(rows) == 6 and len(rows[0]) == 3
        with pytest.raises(ValueError):
            fugacity_zeros(SpinModel(J), (1, 0))

    def test_model_validation(self):
        with pytest.raises(ValueError):
            SpinModel(np.array([[0, 1.0], [0.5, 0]]))
        with pytest.raises(ValueError):
            SpinModel(np.array([[0, -1.0], [-1.0, 0]]))
        with pytest.raises(ValueError):
            ising_partition(SpinModel(np.zeros((2, 2)), sites=(Interval(-1, 1), TwoAtom(1, -1))))
        with pytest.raises(ValueError):
            ising_partition(SpinModel(np.zeros((MAX_SITES + 1, MAX_SITES + 1))))

    def test_model_json(self):
        m = SpinModel(np.array([[0, 0.3], [0.3, 0]]))
        back = SpinModel.from_json(m.to_json())
        assert np.array_equal(back.J, m.J) and back.sites == m.sites


class TestConvolution:
    def test_zero_coupling_is_identity(self):
        mu0 = MPoly(2, {(0, 0): 1.0, (2, 0): 0.5, (0, 2): 0.5, (2, 2): 0.25}, max_degree=4)
        assert ej_convolve(np.zeros((2, 2)), mu0, 4).allclose(mu0)

    def test_matches_ising_series(self):
        j = 0.6
        J = np.array([[0, j], [j, 0]])
        cosh = transform(TwoAtom(1.0, -1.0), 40).truncation
        w1, w2 = MPoly.var(2, 0), MPoly.var(2, 1)
        product = MPoly(2, {})
        for (k1,), c1 in cosh.items():
            for (k2,), c2 in cosh.items():
                if k1 + k2 <= 40:
                    product = product + (c1 * c2) * w1 ** k1 * w2 ** k2
        product = product.truncate(40)
        convolved = ej_convolve(J, product, 6)
        direct = ising_transform_series(SpinModel(J), 6)
        assert convolved.allclose(direct, rtol=1e-9)

    def test_gaussian_composition_closed_form(self):
        a, b = 0.2, 1.0
        mu0 = transform(Gaussian(b), 120).truncation
        out = ej_convolve(np.array([[a]]), mu0, 8)
        # exp(a D^2) exp(w^2 / 2b) = (1 - 2a/b)^(-1/2) exp(w^2 / (2 (b - 2a)))
        pref = math.sqrt(2 * math.pi / b) / math.sqrt(1 - 2 * a / b)
        for k in range(5):
            exact = pref * (1 / (2 * (b - 2 * a))) ** k / math.factorial(k)
            assert out[(2 * k,)] == pytest.approx(exact, rel=1e-9)


class TestGLS:
    def test_unit_multiplier_reproduces_transform(self):
        phi = transform(TwoAtom(1.0, -1.0), 12).truncation
        res = gls_compose(phi, 2.0, MPoly.constant(1, 1.0), 1e-9, 1.0, 12, trials=100)
        assert res.psi_hat.allclose(phi, rtol=1e-12)
        assert not res.verdict.refuted

    def test_linear_factor_gives_exponential(self):
        phi = transform(TwoAtom(1.0, -1.0), 20).truncation
        res = gls_compose(phi, 3.0, 1 + w, 1.0, 1.0, 10, trials=100)
        assert res.psi_hat.allclose(exp_series(1.0, 10), rtol=1e-12)

    def test_gaussian_multiplier(self):
        b = 2.0
        phi = transform(Gaussian(b), 60).truncation
        g = GaussianForm.exp_half_square(0.5)
        res = gls_compose(phi, 6.0, g, 1.0, 1.0, 8, trials=100)
        # int exp(wx + x^2/4 - x^2) dx = sqrt(4 pi / 3) exp(w^2 / 3)
        pref = math.sqrt(4 * math.pi / 3)
        for k in range(5):
            assert res.psi_hat[(2 * k,)] == pytest.approx(pref * (1 / 3) ** k / math.factorial(k), rel=1e-9)
        assert math.isfinite(res.bound)

    def test_hypotheses_named(self):
        phi = transform(TwoAtom(1.0, -1.0), 12).truncation
        with pytest.raises(HypothesisError, match=r"alpha \+ gamma <= beta"):
            gls_compose(phi, 1.0, 1 + w, 1.0, 1.0, 6)
        with pytest.raises(HypothesisError, match=r"M_alpha\(g\) < inf"):
            gls_compose(phi, 5.0, GaussianForm.exp_half_square(2.0), 1.0, 1.0, 6)

    def test_representer_reproduces_functional(self):
        phi = transform(Interval(-1.0, 0.5), 10).truncation
        beta = 1.7
        k = functional_representer(phi, beta)
        for e in range(8):
            value = fock_inner(w ** e, k, beta)
            assert value == pytest.approx(math.factorial(e) * phi[(e,)], rel=1e-12)
