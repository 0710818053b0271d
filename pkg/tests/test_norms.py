import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from hardymult.arith import DirichletPoly, restrict
from hardymult.bohr import bohr_lift
from hardymult.norms import (
    INF,
    as_exponent,
    hp_norm,
    norm_h2,
    norm_hinf,
    norm_hp_even,
    norm_hp_qmc,
    norm_vertical_line,
)
from hardymult.torus import Config, SamplePlan, integrate_torus

from conftest import dirichlet_polys

D1 = DirichletPoly({1: 1, 2: 1})
H4 = 6 ** 0.25


class TestExponent:
    def test_parsing(self):
        assert as_exponent("inf") == INF
        assert as_exponent("3/2") == Fraction(3, 2)
        assert as_exponent(4) == 4
        assert as_exponent(math.inf) == INF

    def test_rejects_below_one(self):
        with pytest.raises(ValueError):
            as_exponent(Fraction(1, 2))


class TestH2:
    def test_two_unit_coefficients(self):
        assert norm_h2(D1) == math.sqrt(2)

    def test_zero(self):
        assert norm_h2(DirichletPoly()) == 0

    def test_three_four_five(self):
        assert norm_h2(DirichletPoly({5: 3, 7: -4j})) == 5


class TestEven:
    def test_p4_closed_form(self):
        assert abs(norm_hp_even(D1, 4) - H4) <= 1e-15

    def test_homogeneous(self):
        D = DirichletPoly({1: 1, 2: 0.5, 3: -1j})
        for p in (2, 4, 6, 8):
            assert math.isclose(norm_hp_even(D * (2 - 1j), p), abs(2 - 1j) * norm_hp_even(D, p), rel_tol=1e-13)

    def test_three_terms_vs_sampling(self):
        D = DirichletPoly({1: 1, 2: 1, 3: 1})
        F = bohr_lift(D)
        est = integrate_torus(lambda w: np.abs(F.values(w)) ** 4, SamplePlan(2, 2**17))
        exact = norm_hp_even(D, 4)
        qmc = est.value ** 0.25
        assert abs(qmc - exact) <= 3 * qmc / (4 * est.value) * est.stderr

    @pytest.mark.parametrize("p", [1, 3, Fraction(5, 2), 10, "inf"])
    def test_rejects_other_p(self, p):
        with pytest.raises(ValueError):
            norm_hp_even(D1, p)


class TestSampling:
    def test_p1_four_over_pi(self):
        est = norm_hp_qmc(D1, 1, SamplePlan(1, 2**16))
        assert abs(est.value - 4 / math.pi) <= 3 * est.stderr

    def test_p2_parseval(self):
        est = norm_hp_qmc(D1, 2, SamplePlan(1, 2**16))
        assert abs(est.value - math.sqrt(2)) <= 3 * est.stderr

    def test_p4(self):
        est = norm_hp_qmc(D1, 4, SamplePlan(1, 2**16))
        assert abs(est.value - H4) <= 3 * est.stderr

    def test_zero_polynomial_is_finite(self):
        est = norm_hp_qmc(DirichletPoly({1: 1, 2: -1}), Fraction(3, 2), SamplePlan(1, 1000))
        assert np.isfinite(est.value) and est.value > 0

    def test_rejects_infinity(self):
        with pytest.raises(ValueError):
            norm_hp_qmc(D1, "inf")


class TestSup:
    def test_triangle_equality(self):
        assert abs(norm_hinf(D1) - 2) <= 1e-12

    def test_product(self):
        assert abs(norm_hinf(DirichletPoly({1: 1, 2: 1, 3: 1, 6: 1})) - 4) <= 1e-12

    def test_constant(self):
        assert norm_hinf(DirichletPoly({1: -3})) == 3

    def test_budget_guard(self):
        with pytest.raises(ValueError):
            norm_hinf(DirichletPoly({1: 1, 23: 1}))

    def test_reports_tolerance(self):
        res = hp_norm(D1, "inf")
        assert res.method == "grid" and res.tol > 0


class TestVerticalLine:
    def test_constant_exact(self):
        assert norm_vertical_line(DirichletPoly({1: 2 - 1j}), 3) == abs(2 - 1j)

    def test_p2(self):
        assert abs(norm_vertical_line(D1, 2, 1e4) - math.sqrt(2)) <= 0.02 * math.sqrt(2)

    def test_p4(self):
        assert abs(norm_vertical_line(D1, 4, 1e4) - H4) <= 0.02 * H4

    def test_approaches_sampling_value(self):
        qmc = norm_hp_qmc(D1, 1, SamplePlan(1, 2**16)).value
        vals = [norm_vertical_line(D1, 1, R) for R in (1e2, 1e3, 1e4)]
        assert abs(vals[-1] - qmc) <= 0.05 * qmc

    def test_validation(self):
        with pytest.raises(ValueError):
            norm_vertical_line(D1, 2, R=0)
        with pytest.raises(ValueError):
            norm_vertical_line(D1, 2, steps=1)


class TestDispatch:
    def test_methods(self):
        assert hp_norm(D1, 2).method == "exact"
        assert hp_norm(D1, 4).method == "exact"
        assert hp_norm(D1, 3).method == "qmc"
        assert hp_norm(D1, "inf").method == "grid"

    def test_json(self):
        assert hp_norm(D1, 4).to_json()["p"] == 4
        assert hp_norm(D1, "inf").to_json()["p"] == "inf"


CFG = Config(samples=2**12, grid=16)


@settings(max_examples=15, deadline=None)
@given(dirichlet_polys(max_n=13, max_terms=5))
def test_monotone_in_p(D):
    if D.is_zero():
        return
    results = [hp_norm(D, p, CFG) for p in (1, 2, 3, 4, "inf")]
    for a, b in zip(results, results[1:]):
        slack = 3 * math.hypot(a.stderr, b.stderr) + b.tol + 1e-12 * a.value
        assert a.value <= b.value + slack


@settings(max_examples=15, deadline=None)
@given(dirichlet_polys(max_n=13, max_terms=5))
def test_restriction_contracts(D):
    full = {p: hp_norm(D, p, CFG) for p in (1, 2, 4, "inf")}
    for N in range(0, 4):
        R = restrict(D, N)
        for p, b in full.items():
            a = hp_norm(R, p, CFG)
            assert a.value <= b.value + 3 * math.hypot(a.stderr, b.stderr) + b.tol + 1e-12


@settings(max_examples=15, deadline=None)
@given(dirichlet_polys(max_n=13, max_terms=5), dirichlet_polys(max_n=13, max_terms=5))
def test_triangle_inequality(D, E):
    for p in (1, 3):
        s, a, b = hp_norm(D + E, p, CFG), hp_norm(D, p, CFG), hp_norm(E, p, CFG)
        assert s.value <= a.value + b.value + 3 * (s.stderr + a.stderr + b.stderr) + 1e-12
