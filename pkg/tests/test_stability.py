from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fock_preserve.poly import MPoly, poly_eval
from fock_preserve.stability import (
    Region,
    Verdict,
    check,
    is_stable_multi,
    is_stable_uni,
    lp_approximant,
    ly_check,
    root_clusters,
    univariate_roots,
    validated_radius,
)

z = MPoly.var(1, 0)
z1, z2 = MPoly.var(2, 0), MPoly.var(2, 1)


def from_roots(roots) -> MPoly:
    out = MPoly.constant(1, 1.0)
    for r in roots:
        out = out * (z - r)
    return out


def assert_witness_valid(p: MPoly, verdict: Verdict, region: Region = Region.UPPER, tol: float = 1e-9):
    assert verdict.outcome == "certified_no"
    w = verdict.witness
    if region is Region.RIGHT:
        assert all(c.real > tol for c in w)
    else:
        assert all(c.imag > tol for c in w)
    assert abs(poly_eval(p, w)) <= 1e-8 * (1 + p.coeff_norm1()) * max(1.0, max(abs(c) for c in w)) ** p.degree()


class TestRoots:
    def test_examples(self):
        assert sorted(univariate_roots(z * z + 1), key=lambda r: r.imag) == pytest.approx([-1j, 1j])
        got = sorted(r.real for r in univariate_roots(z * z - 2 * z - 1))
        assert got == pytest.approx([1 - math.sqrt(2), 1 + math.sqrt(2)])
        assert univariate_roots((1 + z) ** 3) == pytest.approx([-1, -1, -1])

    def test_zero_and_constant(self):
        with pytest.raises(ValueError, match="identically zero"):
            univariate_roots(MPoly(1, {}))
        assert univariate_roots(MPoly.constant(1, 3.0)) == []

    def test_clusters_group_multiple_roots(self):
        clusters = root_clusters([1, 3, 3, 1])
        assert len(clusters) == 1
        center, mult = clusters[0]
        assert mult == 3 and abs(center + 1) < 1e-10

    def test_zero_at_origin(self):
        clusters = dict((round(c.real, 8), m) for c, m in root_clusters([0, 0, 1, 1]))
        assert clusters == {0.0: 2, -1.0: 1}


class TestUnivariate:
    def test_examples(self):
        assert is_stable_uni(z + 1j).outcome == "certified_yes"
        v = is_stable_uni(z - 1j)
        assert v.outcome == "certified_no" and v.witness[0] == pytest.approx(1j)
        assert is_stable_uni(1 + 2 * z + 2 * z * z, Region.REAL).outcome == "certified_no"

    def test_real_region_rejects_complex_coefficients(self):
        with pytest.raises(ValueError):
            is_stable_uni(z + 1j, Region.REAL)

    def test_high_multiplicity_real_root(self):
        assert is_stable_uni((1 + z / 30) ** 30, Region.REAL).outcome == "certified_yes"

    def test_right_half_plane(self):
        assert is_stable_uni(z + 1, Region.RIGHT).outcome == "certified_yes"
        assert_witness_valid(z - 1, is_stable_uni(z - 1, Region.RIGHT), Region.RIGHT)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.integers(-20, 20), min_size=1, max_size=8, unique=True), st.floats(0.1, 10.0))
    def test_line_reduction_consistency(self, grid, v):
        # separated roots keep the composed coefficients well conditioned
        p = from_roots([g / 4 for g in grid])
        assert is_stable_uni(p, Region.REAL).outcome == "certified_yes"
        rng = np.random.default_rng(len(grid))
        for a in rng.normal(0.0, 3.0, 100):
            q = MPoly(1, {})
            for k, c in p.items():
                q = q + c * (a + v * z) ** k[0]
            assert is_stable_uni(q, Region.UPPER).outcome == "certified_yes"


class TestMultivariate:
    def test_examples(self):
        p = z1 * z2 + 1
        v = is_stable_multi(p)
        assert_witness_valid(p, v)
        assert v.witness == pytest.approx((1j, 1j))
        assert is_stable_multi(z1 + z2, trials=1000).outcome == "probably_yes"
        assert is_stable_multi(z1 * z2 - 1, trials=1000).outcome == "probably_yes"

    def test_grid_oracle_for_product_minus_one(self):
        # z1 z2 = 1 forces z2 = 1/z1 into the lower half-plane
        t = np.linspace(-3, 3, 1000)
        g = (t[:, None] + 1j * np.logspace(-3, 1, 1000)[None, :]).ravel()
        assert np.all((1.0 / g).imag < 0)

    def test_deterministic(self):
        p = (z1 + z2 + 2j) * (z1 - 0.3 * z2)
        assert is_stable_multi(p, trials=500, seed=5) == is_stable_multi(p, trials=500, seed=5)

    def test_first_failure_is_lowest_trial(self):
        p = z1 * z2 * z2 + 3
        a = is_stable_multi(p, trials=2000, seed=11)
        b = is_stable_multi(p, trials=20, seed=11)
        assert a == b

    def test_right_region(self):
        assert is_stable_multi(z1 + z2 + 1, Region.RIGHT, trials=500).outcome == "probably_yes"
        p = z1 * z2 - 1
        assert_witness_valid(p, is_stable_multi(p, Region.RIGHT, trials=500), Region.RIGHT)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            is_stable_multi(MPoly(2, {}))

    def test_products_of_stable_factors_are_never_refuted(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            factors = []
            for _ in range(2):
                c = complex(rng.normal(), abs(rng.normal()))
                w = rng.uniform(0.1, 3.0, 2)
                factors.append(w[0] * z1 + w[1] * z2 + c)
            p, q = factors
            assert is_stable_multi(p, trials=200, seed=3).outcome == "probably_yes"
            assert is_stable_multi(p * q, trials=200, seed=3).outcome != "certified_no"

    def test_measure_zero_directions_are_missed(self):
        # zeros of z1 - 2 z2 in H^2 lie only on lines with direction (2, 1); random lines miss them
        assert is_stable_multi(z1 - 2 * z2, trials=500).outcome == "probably_yes"

    def test_check_dispatch(self):
        assert check(z + 1j).method == "companion-roots"
        assert check(z1 + z2, trials=50).method == "line-restriction"

    def test_verdict_json_round_trip(self):
        v = is_stable_multi(z1 * z2 + 1)
        assert Verdict.from_json(v.to_json()) == v


class TestApproximants:
    def test_exponential(self):
        f = MPoly(1, {(j,): 1 / math.factorial(j) for j in range(10)}, max_degree=9)
        assert lp_approximant(f, 2).allclose(1 + z + z * z / 4)

    def test_two_variable_product(self):
        f = MPoly(2, {(i, j): 1 / (math.factorial(i) * math.factorial(j)) for i in range(4) for j in range(4)})
        assert lp_approximant(f, 1).allclose((1 + z1) * (1 + z2))

    def test_converges_to_polynomial(self):
        f = 1 + 2 * z - z ** 3
        assert lp_approximant(f, 10 ** 6).allclose(f, rtol=1e-5)

    @pytest.mark.parametrize("c", [-2.5, 0.7, 3.0])
    def test_scaled_exponential_is_real_rooted(self, c):
        f = MPoly(1, {(j,): c ** j / math.factorial(j) for j in range(30)}, max_degree=29)
        for k in (1, 5, 12, 29):
            approx = lp_approximant(f, k)
            assert approx.allclose((1 + c * z / k) ** k)
            assert is_stable_uni(approx, Region.REAL).outcome == "certified_yes"


class TestLeeYangCheck:
    def test_cosh_truncation_within_validated_disc(self):
        cosh = MPoly(1, {(2 * k,): 1 / math.factorial(2 * k) for k in range(5)}, max_degree=8)
        v = ly_check(cosh, radius=2.0)
        assert not v.refuted and "outside validated radius" in v.note
        assert 0 < validated_radius(cosh) < math.inf

    def test_examples(self):
        v = ly_check(z - 1)
        assert v.outcome == "certified_no" and v.witness[0].real > 0
        assert not ly_check(1 + z).refuted

    def test_exact_polynomial_has_infinite_radius(self):
        assert validated_radius(1 + z) == math.inf
