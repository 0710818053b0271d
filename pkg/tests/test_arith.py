import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hardymult.arith import (
    MAX_INDEX,
    Character,
    DirichletPoly,
    MultiIndex,
    dirichlet_product,
    evaluate,
    factorize,
    first_primes,
    gpd_index,
    nth_prime,
    prime_index,
    restrict,
    twist,
    unfactorize,
)

from conftest import dirichlet_polys


def brute_product(D, E):
    out = {}
    for j, a in D:
        for k, b in E:
            out[j * k] = out.get(j * k, 0) + a * b
    return DirichletPoly(out)


class TestFactorize:
    def test_one_is_empty(self):
        assert factorize(1).vector == ()

    def test_twelve(self):
        assert factorize(12).vector == (2, 1)

    def test_large_prime_against_sympy(self):
        n = 9007199254740997
        got = factorize(n)
        assert unfactorize(got) == n
        assert dict(got.factors) == sympy.factorint(n)

    @pytest.mark.parametrize("n", [2**62, 3**39, 600851475143, 2 * 3 * 5 * 7 * 11 * 13 * 17 * 19 * 23, 2147483647 * 2])
    def test_matches_sympy(self, n):
        assert dict(factorize(n).factors) == sympy.factorint(n)

    @pytest.mark.parametrize("bad", [0, -1, -12])
    def test_rejects_nonpositive(self, bad):
        with pytest.raises(ValueError):
            factorize(bad)

    def test_rejects_beyond_cap(self):
        with pytest.raises(ValueError):
            factorize(MAX_INDEX + 1)

    def test_rejects_non_integer(self):
        with pytest.raises(TypeError):
            factorize(2.0)

    def test_round_trip_exhaustive(self):
        for n in range(1, 10**6 + 1):
            assert unfactorize(factorize(n)) == n

    def test_multiindex_round_trip(self):
        alpha = (0, 3, 0, 1)
        m = MultiIndex.from_vector(alpha + (0, 0))
        assert m.vector == alpha
        assert unfactorize(alpha) == 3**3 * 7

    def test_gpd(self):
        assert factorize(90).gpd == 5
        assert gpd_index(90) == 3
        assert gpd_index(1) == 0


def test_primes():
    assert first_primes(10) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert nth_prime(100) == sympy.prime(100)
    assert prime_index(sympy.prime(500)) == 500
    with pytest.raises(ValueError):
        prime_index(15)


class TestDirichletPoly:
    def test_canonical_prunes_exact_zeros(self):
        D = DirichletPoly({1: 1, 2: 0, 3: 1e-300})
        assert D.support == (1, 3)

    def test_rejects_bad_index(self):
        with pytest.raises(ValueError):
            DirichletPoly({0: 1})
        with pytest.raises(ValueError):
            DirichletPoly({MAX_INDEX + 1: 1})

    def test_support_bound(self):
        assert DirichletPoly({3: 1, 10: 2}).support_bound == 10
        assert DirichletPoly().support_bound == 0

    def test_json_round_trip(self):
        D = DirichletPoly({1: 0.1 + 0.2j, 6: -3})
        assert DirichletPoly.from_json(D.to_json()) == D
        assert [t["n"] for t in D.to_json()["terms"]] == [1, 6]


class TestProduct:
    def test_distributes(self):
        got = dirichlet_product(DirichletPoly({1: 1, 2: 1}), DirichletPoly({1: 1, 3: 1}))
        assert got == DirichletPoly({1: 1, 2: 1, 3: 1, 6: 1})

    def test_identity(self):
        D = DirichletPoly({1: 2, 5: -1j})
        assert D * DirichletPoly.constant(1) == D

    def test_zeta_square_is_divisor_count(self):
        Z = DirichletPoly.zeta_partial(8)
        got = dirichlet_product(Z, Z)
        assert got == brute_product(Z, Z)
        for n in range(1, 9):
            assert got[n] == int(sympy.divisor_count(n))

    def test_support_bound_multiplies(self):
        D, E = DirichletPoly({1: 1, 7: 2}), DirichletPoly({2: 1, 9: 1})
        assert dirichlet_product(D, E).support_bound == 63

    def test_large_supports_use_vectorized_path(self, rng):
        D = DirichletPoly(zip(range(1, 120), rng.integers(-3, 4, 119).tolist()))
        E = DirichletPoly(zip(range(1, 90), rng.integers(-3, 4, 89).tolist()))
        assert dirichlet_product(D, E) == brute_product(D, E)

    def test_overflow_rejected(self):
        with pytest.raises(ValueError):
            dirichlet_product(DirichletPoly({2**40: 1}), DirichletPoly({2**40: 1}))

    @settings(max_examples=200, deadline=None)
    @given(dirichlet_polys(), dirichlet_polys())
    def test_commutative_and_matches_brute_force(self, D, E):
        assert dirichlet_product(D, E) == dirichlet_product(E, D)
        assert dirichlet_product(D, E) == brute_product(D, E)

    @settings(max_examples=100, deadline=None)
    @given(dirichlet_polys(), dirichlet_polys(), dirichlet_polys())
    def test_bilinear(self, D, E, G):
        assert D * (E + G) == D * E + D * G


class TestRestrict:
    def test_gpd_filter(self):
        D = DirichletPoly({1: 1, 2: 1, 3: 1, 6: 1})
        assert restrict(D, 1) == DirichletPoly({1: 1, 2: 1})

    def test_budget_zero_keeps_constant(self):
        assert restrict(DirichletPoly({1: 4, 2: 1}), 0) == DirichletPoly({1: 4})

    def test_three_smooth_up_to_thirty(self):
        got = restrict(DirichletPoly.zeta_partial(30), 2)
        oracle = [n for n in range(1, 31) if max(sympy.primefactors(n), default=1) <= 3]
        assert list(got.support) == oracle == [1, 2, 3, 4, 6, 8, 9, 12, 16, 18, 24, 27]

    @settings(max_examples=100, deadline=None)
    @given(dirichlet_polys(), dirichlet_polys(), st.integers(0, 6))
    def test_multiplicative_and_idempotent(self, D, E, N):
        assert restrict(D * E, N) - restrict(D, N) * restrict(E, N) == DirichletPoly()
        assert restrict(restrict(D, N), N) == restrict(D, N)


class TestTwist:
    def test_sign_flip(self):
        assert twist(DirichletPoly({2: 1}), Character((-1,))) == DirichletPoly({2: -1})

    def test_trivial_character(self):
        D = DirichletPoly({1: 1, 6: 2j, 12: 3})
        assert twist(D, Character((1, 1))) == D

    def test_multiplicative(self):
        assert twist(DirichletPoly({6: 1}), Character((1j, -1))) == DirichletPoly({6: -1j})

    def test_missing_prime_named(self):
        with pytest.raises(ValueError, match="5"):
            twist(DirichletPoly({10: 1}), Character((1j,)))

    def test_rejects_non_unimodular(self):
        with pytest.raises(ValueError):
            Character((1.1,))

    @settings(max_examples=100, deadline=None)
    @given(dirichlet_polys(max_n=200), st.lists(st.sampled_from([1, -1, 1j, -1j]), min_size=46, max_size=46))
    def test_conjugate_undoes(self, D, values):
        chi = Character(tuple(values))
        assert twist(twist(D, chi), chi.conj()) == D


class TestEvaluate:
    def test_at_zero(self):
        assert evaluate(DirichletPoly({1: 1, 2: 1}), 0) == 2

    def test_phase_alignment(self):
        assert abs(evaluate(DirichletPoly({1: 1, 2: 1}), 1j * math.pi / math.log(2))) < 1e-15

    def test_zeta_two_partial_sum(self):
        got = evaluate(DirichletPoly.zeta_partial(100), 2)
        oracle = math.fsum(1 / n**2 for n in range(1, 101))
        assert abs(got - oracle) <= 1e-14 * oracle

    def test_vectorized(self):
        D = DirichletPoly({1: 1, 3: 2})
        s = np.array([0, 1, 1j])
        assert np.allclose(evaluate(D, s), [evaluate(D, x) for x in s])

    @settings(max_examples=100, deadline=None)
    @given(
        dirichlet_polys(coeffs=st.builds(complex, st.floats(-2, 2), st.floats(-2, 2))),
        dirichlet_polys(coeffs=st.builds(complex, st.floats(-2, 2), st.floats(-2, 2))),
        st.floats(0, 3),
        st.floats(-50, 50),
    )
    def test_multiplicative(self, D, E, sigma, t):
        s = complex(sigma, t)
        lhs = evaluate(D * E, s)
        rhs = evaluate(D, s) * evaluate(E, s)
        scale = sum(abs(a) for _, a in D) * sum(abs(b) for _, b in E)
        assert abs(lhs - rhs) <= 1e-12 * max(scale, 1.0)
