import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardymult.arith import DirichletPoly, evaluate, factorize
from hardymult.bohr import TorusPoly, bohr_lift, bohr_transform, eval_lift, kronecker_point, poly_product

from conftest import dirichlet_polys, torus_polys


def brute_poly_product(F, G):
    n = max(F.nvars, G.nvars)
    out = {}
    for a, c in F:
        for b, d in G:
            key = tuple((a[j] if j < len(a) else 0) + (b[j] if j < len(b) else 0) for j in range(n))
            out[key] = out.get(key, 0) + c * d
    return TorusPoly(out, nvars=n)


class TestLift:
    def test_six_is_z1z2(self):
        assert bohr_lift(DirichletPoly({6: 1})) == TorusPoly({(1, 1): 1})

    def test_powers_of_two(self):
        assert bohr_lift(DirichletPoly({1: 1, 2: 1, 4: 1})) == TorusPoly({(): 1, (1,): 1, (2,): 1})

    def test_zeta_twelve_index_by_index(self):
        F = bohr_lift(DirichletPoly.zeta_partial(12))
        assert F.nvars == 5
        assert len(F) == 12
        for n in range(1, 13):
            assert F[factorize(n).vector] == 1
        # 11 is the fifth prime; the fourth variable (7) only enters through n = 7
        assert F[(0, 0, 0, 0, 1)] == 1
        assert F[(0, 0, 0, 1)] == 1

    def test_nvars_is_prime_budget(self):
        assert bohr_lift(DirichletPoly({1: 1, 10: 1})).nvars == 3
        assert bohr_lift(DirichletPoly({1: 5})).nvars == 0

    @settings(max_examples=500, deadline=None)
    @given(dirichlet_polys(max_n=10**4, max_terms=8))
    def test_transform_inverts_lift(self, D):
        assert bohr_transform(bohr_lift(D)) == D

    @settings(max_examples=200, deadline=None)
    @given(dirichlet_polys(), dirichlet_polys())
    def test_lift_is_multiplicative(self, D, E):
        assert bohr_lift(D * E).terms == (bohr_lift(D) * bohr_lift(E)).terms


class TestTransform:
    def test_monomial(self):
        assert bohr_transform(TorusPoly({(1, 1): 1})) == DirichletPoly({6: 1})

    def test_product_of_binomials(self):
        F = TorusPoly({(): 1, (1,): 1}, nvars=2) * TorusPoly({(): 1, (0, 1): 1})
        assert bohr_transform(F) == DirichletPoly({1: 1, 2: 1}) * DirichletPoly({1: 1, 3: 1})

    def test_random_products_match_dirichlet(self, rng):
        for _ in range(20):
            F = TorusPoly(
                {tuple(rng.integers(0, 3, 3)): complex(*rng.standard_normal(2)) for _ in range(20)}
            )
            G = TorusPoly(
                {tuple(rng.integers(0, 3, 3)): complex(*rng.standard_normal(2)) for _ in range(20)}
            )
            lhs = bohr_transform(F * G)
            rhs = bohr_transform(F) * bohr_transform(G)
            keys = set(lhs.support) | set(rhs.support)
            assert max(abs(lhs[n] - rhs[n]) for n in keys) <= 1e-12


class TestPolyProduct:
    def test_difference_of_squares(self):
        F = TorusPoly({(): 1, (1,): 1})
        G = TorusPoly({(): 1, (1,): -1})
        assert F * G == TorusPoly({(): 1, (2,): -1})

    def test_identity(self):
        F = TorusPoly({(1, 2): 3j, (): 1})
        assert F * TorusPoly.constant(1) == F

    @settings(max_examples=100, deadline=None)
    @given(torus_polys(nvars=3, max_terms=8), torus_polys(nvars=3, max_terms=8))
    def test_sparse_matches_brute_force(self, F, G):
        got, want = poly_product(F, G), brute_poly_product(F, G)
        keys = set(got.terms) | set(want.terms)
        assert all(abs(got[k] - want[k]) <= 1e-12 for k in keys)

    def test_dense_path_matches_brute_force(self, rng):
        F = TorusPoly.from_dense(rng.standard_normal((15, 12)) + 0j)
        G = TorusPoly.from_dense(rng.standard_normal((14, 10)) + 0j)
        assert len(F) * len(G) > 20_000
        got, want = poly_product(F, G), brute_poly_product(F, G)
        keys = set(got.terms) | set(want.terms)
        assert max(abs(got[k] - want[k]) for k in keys) <= 1e-10

    def test_degrees_add(self):
        F = TorusPoly({(2, 1): 1})
        G = TorusPoly({(1, 3): 1, (): 1})
        assert (F * G).degrees() == (3, 4)

    def test_rejects_negative_exponent(self):
        with pytest.raises(ValueError):
            TorusPoly({(-1,): 1})


class TestEval:
    def test_at_one(self):
        assert eval_lift(TorusPoly({(): 1, (1,): 1}), [1]) == 2

    def test_z1z2_at_i(self):
        assert eval_lift(TorusPoly({(1, 1): 1}), [1j, 1j]) == -1

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            eval_lift(TorusPoly({(1, 1): 1}), [1j])

    def test_kronecker_flow_single(self):
        D = DirichletPoly({1: 1, 2: 1})
        z = kronecker_point(1, 1.0)
        assert abs(eval_lift(bohr_lift(D), z) - evaluate(D, 1j)) <= 1e-14

    def test_kronecker_flow_random(self, rng):
        for _ in range(100):
            support = rng.choice(np.arange(1, 200), 6, replace=False)
            D = DirichletPoly(zip(support.tolist(), (rng.standard_normal(6) + 1j * rng.standard_normal(6)).tolist()))
            t = rng.uniform(-100, 100)
            F = bohr_lift(D)
            got = eval_lift(F, kronecker_point(F.nvars, t))
            scale = sum(abs(a) for _, a in D)
            assert abs(got - evaluate(D, 1j * t)) <= 1e-12 * scale

    @settings(max_examples=50, deadline=None)
    @given(torus_polys(nvars=2), st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
    def test_vectorized_matches_scalar(self, F, a, b):
        z = np.exp(1j * np.array([a, b]))
        assert abs(F.values(z[None, :])[0] - F(z)) <= 1e-12 * max(1, F.abs_sum())


class TestTorusPoly:
    def test_json_round_trip(self):
        F = TorusPoly({(0, 2): 1.5, (1,): -2j}, nvars=3)
        obj = F.to_json()
        assert [t["alpha"] for t in obj["terms"]] == [[0, 2], [1]]
        assert TorusPoly.from_json(obj) == F

    def test_rotate_matches_twist(self):
        from hardymult.arith import Character, twist

        D = DirichletPoly({1: 1, 6: 2, 12: -1j})
        omega = (1j, -1)
        assert bohr_lift(D).rotate(omega) == bohr_lift(twist(D, Character(omega)))

    def test_power(self):
        F = TorusPoly({(): 1, (1,): 1})
        assert (F**3).terms == {(): 1, (1,): 3, (2,): 3, (3,): 1}
