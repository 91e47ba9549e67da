import math
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcmbounds.exact_arith import (
    FactoredInteger,
    LogExpr,
    QuadraticInteger,
    QuadRational,
    Verdict,
    exact_lcm,
    gcd_factored,
    is_multiple_of_rational,
    lcm_factored,
    log_compare,
    quad_product,
)


def fi(n, table=None):
    return FactoredInteger.from_int(n, table)


class TestFactoredInteger:
    def test_roundtrip(self, table_small):
        for n in [1, 2, 360, 9973, 10**6 + 3, 2520]:
            assert fi(n, table_small).value() == n

    def test_key_validation(self):
        with pytest.raises(ValueError):
            FactoredInteger({4: 1})
        with pytest.raises(ValueError):
            FactoredInteger({3: 0})

    def test_lcm_examples(self):
        assert lcm_factored([fi(4), fi(6)]).value() == 12
        assert lcm_factored([fi(2), fi(5), fi(10)]).value() == 10
        # first 10 naturals, against the plain big-integer gcd oracle
        assert lcm_factored([fi(k) for k in range(1, 11)]).value() == exact_lcm(range(1, 11)) == 2520

    def test_gcd_examples(self):
        assert gcd_factored([fi(12), fi(18)]).value() == 6
        assert gcd_factored([fi(7)]).value() == 7
        assert gcd_factored([fi(8), fi(27)]).value() == 1

    def test_empty_errors(self):
        with pytest.raises(ValueError):
            lcm_factored([])
        with pytest.raises(ValueError):
            gcd_factored([])

    @given(st.integers(1, 10**6), st.integers(1, 10**6))
    @settings(max_examples=200, deadline=None)
    def test_lcm_gcd_product_identity(self, x, y):
        a, b = fi(x), fi(y)
        assert lcm_factored([a, b]).value() * gcd_factored([a, b]).value() == x * y

    @given(st.lists(st.integers(1, 100), min_size=1, max_size=5, unique=True))
    @settings(max_examples=150, deadline=None)
    def test_inclusion_exclusion(self, xs):
        # prod(x_i) = lcm(S) * prod over subsets A, |A| >= 2, of gcd(A)^((-1)^|A|)
        total = Fraction(exact_lcm(xs))
        for size in range(2, len(xs) + 1):
            for sub in combinations(xs, size):
                g = math.gcd(*sub) if len(sub) > 1 else sub[0]
                total *= Fraction(g) if size % 2 == 0 else Fraction(1, g)
        assert total == math.prod(xs)


class TestQuadraticRing:
    def test_product_examples(self):
        z = quad_product(1, [QuadraticInteger(1, 1, 1), QuadraticInteger(1, 2, 1)])
        assert (z.re, z.im) == (1, 3)
        z = quad_product(1, [QuadraticInteger(1, a, 1) for a in (1, 2, 3)])
        assert (z.re, z.im) == (0, 10)
        z = quad_product(5, [QuadraticInteger(5, 2, 0)])
        assert (z.re, z.im) == (2, 0)

    def test_mixed_ring_error(self):
        with pytest.raises(ValueError):
            quad_product(1, [QuadraticInteger(2, 1, 1)])
        with pytest.raises(ValueError):
            QuadraticInteger(1, 1, 1) * QuadraticInteger(3, 1, 1)

    @given(
        st.integers(1, 20),
        st.integers(-10**4, 10**4), st.integers(-10**4, 10**4),
        st.integers(-10**4, 10**4), st.integers(-10**4, 10**4),
    )
    @settings(max_examples=200, deadline=None)
    def test_norm_multiplicative(self, c, a, b, a2, b2):
        z, w = QuadraticInteger(c, a, b), QuadraticInteger(c, a2, b2)
        assert (z * w).norm() == z.norm() * w.norm()

    @given(st.lists(st.tuples(st.integers(-50, 50), st.integers(-50, 50)),
                    min_size=2, max_size=6),
           st.randoms(use_true_random=False))
    @settings(max_examples=100, deadline=None)
    def test_product_order_independent(self, parts, rng):
        zs = [QuadraticInteger(3, a, b) for a, b in parts]
        shuffled = list(zs)
        rng.shuffle(shuffled)
        assert quad_product(3, zs) == quad_product(3, shuffled)

    def test_quad_rational_inverse(self):
        z = QuadRational(3, Fraction(2, 5), Fraction(-1, 7))
        w = z * z.inverse()
        assert (w.re, w.im) == (1, 0)
        with pytest.raises(ZeroDivisionError):
            QuadRational(3, 0, 0).inverse()


class TestRationalMultiple:
    def test_examples(self):
        assert is_multiple_of_rational(10, Fraction(5, 4))
        assert not is_multiple_of_rational(10, Fraction(3, 4))
        assert is_multiple_of_rational(0, Fraction(7, 2))

    def test_zero_divisor_error(self):
        with pytest.raises(ValueError):
            is_multiple_of_rational(5, Fraction(0))


class TestLogCompare:
    def test_examples(self):
        v = log_compare(LogExpr.log(2520), LogExpr.log(3, 10), "le", 64)
        assert v.status is Verdict.HOLDS  # 2520 < 3^10 = 59049
        v = log_compare(LogExpr.log(840), LogExpr.log(2, 8), "ge", 64)
        assert v.status is Verdict.HOLDS  # 840 > 256

    def test_exact_tie(self):
        v = log_compare(LogExpr.log(8), LogExpr.log(2, 3), "le", 64)
        assert v.status is Verdict.HOLDS and v.exact and v.margin == 0.0
        v = log_compare(LogExpr.log(8), LogExpr.log(2, 3), "eq", 64)
        assert v.status is Verdict.HOLDS and v.exact
        v = log_compare(LogExpr.log(8), LogExpr.log(2, 3), "lt", 64)
        assert v.status is Verdict.FAILS and v.exact

    def test_non_positive_value_error(self):
        with pytest.raises(ValueError):
            LogExpr.log(0)
        with pytest.raises(ValueError):
            LogExpr.log(Fraction(-2, 3))

    @given(st.integers(1, 10**9), st.integers(1, 10**9))
    @settings(max_examples=200, deadline=None)
    def test_agrees_with_exact_integer_comparison(self, a, b):
        v = log_compare(LogExpr.log(a), LogExpr.log(b), "le")
        if a == b:
            assert v.status is Verdict.HOLDS and v.margin == 0.0
        else:
            assert (v.status is Verdict.HOLDS) == (a < b)

    def test_precision_escalation_never_flips(self):
        lhs = LogExpr.log(2, 10**6) + LogExpr.log(Fraction(10**6 + 1, 10**6))
        rhs = LogExpr.log(2, 10**6) + LogExpr.log(Fraction(10**6 + 2, 10**6 + 1))
        low = log_compare(lhs, rhs, "ge", 64)
        high = log_compare(lhs, rhs, "ge", 512)
        assert low.status is Verdict.HOLDS and high.status is Verdict.HOLDS

    def test_rational_values(self):
        v = log_compare(LogExpr.log(Fraction(1, 2), 2), LogExpr.log(Fraction(1, 4)), "eq")
        assert v.status is Verdict.HOLDS and v.exact
