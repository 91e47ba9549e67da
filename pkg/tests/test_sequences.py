import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcmbounds.exact_arith import exact_lcm
from lcmbounds.sequences import (
    FIBONACCI,
    Arithmetic,
    Explicit,
    Lucas,
    Naturals,
    NotStrongDivisibilityError,
    Polynomial,
    QPower,
    Quadratic,
    QuadraticGeneral,
    champions,
    extract_u,
    generate,
    is_strong_divisibility,
    lcm_via_u,
    lucas_closed_form,
    myerson_divisor,
    parse_spec,
    sylvester,
    u_via_prime_quotient,
)

STRONG_SPECS = [Naturals(), FIBONACCI, Lucas(3, 2), QPower(2), QPower(3)]


class TestSpecsAndGenerate:
    def test_text_roundtrip(self):
        for spec in [
            Naturals(), Arithmetic(1, 4), Quadratic(1), QuadraticGeneral(2, 3, 1),
            Lucas(3, 2), QPower(2), Polynomial((1, 0, 2)), Explicit((4, 5, 6)),
        ]:
            assert parse_spec(spec.text) == spec
        assert parse_spec("fib") == Lucas(1, -1)
        with pytest.raises(ValueError):
            parse_spec("nonsense:1")

    def test_generate_examples(self):
        assert generate(Lucas(1, -1), 6) == [1, 1, 2, 3, 5, 8]
        assert generate(Lucas(3, 2), 4) == [1, 3, 7, 15]
        assert generate(Quadratic(1), 3) == [2, 5, 10]

    def test_zero_based_families(self):
        assert generate(Arithmetic(1, 4), 3) == [1, 5, 9, 13]
        assert generate(QuadraticGeneral(1, 1, 0), 3) == [1, 2, 5, 10]

    def test_lucas_coprimality_required(self):
        with pytest.raises(ValueError):
            Lucas(2, 4)

    def test_lucas_closed_form_matches_recurrence(self):
        for P, Q in [(1, -1), (3, 2), (2, -1), (4, 1), (5, 6)]:
            terms = generate(Lucas(P, Q), 50)
            for n, t in enumerate(terms, start=1):
                assert lucas_closed_form(P, Q, n) == t


class TestSylvester:
    def test_examples(self):
        assert sylvester(4) == [2, 3, 7, 43]
        assert sylvester(5) == [2, 3, 7, 43, 1807]
        assert sylvester(1) == [2]

    def test_cap(self):
        with pytest.raises(ValueError):
            sylvester(9)

    def test_reciprocal_identity(self):
        # sum 1/b_l + 1/(b_1...b_n) = 1, exactly
        for n in range(1, 9):
            bs = sylvester(n)
            total = sum((Fraction(1, b) for b in bs), Fraction(0))
            total += Fraction(1, math.prod(bs))
            assert total == 1


class TestUDecomposition:
    def test_examples(self):
        assert extract_u(list(range(1, 9))).u == (1, 2, 3, 2, 5, 1, 7, 2)
        assert extract_u([1, 1, 2, 3, 5, 8]).u == (1, 1, 2, 3, 5, 4)
        assert extract_u([1, 3, 7, 15], "moebius").u == (1, 3, 7, 5)

    def test_moebius_flags_non_strong_input(self):
        # u_2 = a_2/a_1 = 3/2 is not an integer
        with pytest.raises(NotStrongDivisibilityError):
            extract_u([2, 3, 5, 7], "moebius")

    def test_methods_agree_on_strong_specs(self):
        for spec in STRONG_SPECS:
            terms = [abs(t) for t in generate(spec, 60)]
            assert extract_u(terms, "nowicki").u == extract_u(terms, "moebius").u

    def test_prime_quotient_crosscheck(self):
        terms = [abs(t) for t in generate(FIBONACCI, 40)]
        us = extract_u(terms)
        for m in range(1, 41):
            assert u_via_prime_quotient(terms, m) == us[m - 1]
        # the u_6 = F_6 / lcm(F_2, F_3) = 8/2 example
        assert u_via_prime_quotient(terms, 6) == 4


class TestStrongDivisibility:
    def test_examples(self):
        ok, witness = is_strong_divisibility([2, 4, 8, 16])
        assert not ok and witness == (2, 3)
        assert is_strong_divisibility(generate(FIBONACCI, 20))[0]
        assert is_strong_divisibility([1, 1, 2, 3, 5, 8])[0]

    @given(st.lists(st.integers(1, 20), min_size=1, max_size=6))
    @settings(max_examples=300, deadline=None)
    def test_product_construction_equivalence(self, us):
        # a_n = prod_{d|n} u_d is strongly divisible iff u is coprime at
        # incomparable indices
        n = len(us)
        a = []
        for m in range(1, n + 1):
            prod = 1
            for d in range(1, m + 1):
                if m % d == 0:
                    prod *= us[d - 1]
            a.append(prod)
        ok, _ = is_strong_divisibility(a)
        coprime = all(
            math.gcd(us[i - 1], us[j - 1]) == 1
            for j in range(2, n + 1)
            for i in range(2, j)
            if j % i != 0
        )
        assert ok == coprime


class TestChampions:
    def test_examples(self):
        assert champions(list(range(1, 11)), 2) == [2, 4, 8]
        assert champions(generate(FIBONACCI, 12), 2) == [3, 6, 12]
        assert champions(list(range(1, 11)), 13) == []

    def test_first_index_clause(self):
        assert champions([3, 6, 9], 3) == [1, 3]

    def test_champions_are_u_support(self):
        for spec in STRONG_SPECS:
            terms = [abs(t) for t in generate(spec, 80)]
            us = extract_u(terms)
            for p in (2, 3, 5, 7, 11, 13):
                want = [m for m in range(1, 81) if us[m - 1] % p == 0]
                got = champions(terms, p)
                assert got == want
                # consecutive champions divide each other
                for a, b in zip(got, got[1:]):
                    assert b % a == 0


class TestLcmViaU:
    def test_examples(self):
        assert lcm_via_u([1, 2, 3, 4, 5, 6]) == 60
        assert lcm_via_u([1, 1, 2, 3, 5, 8]) == 120
        assert lcm_via_u([42]) == 42

    def test_matches_direct_lcm(self):
        for spec in STRONG_SPECS:
            terms = [abs(t) for t in generate(spec, 80)]
            assert lcm_via_u(terms) == exact_lcm(terms)


class TestMyerson:
    def test_examples(self):
        nats = list(range(1, 11))
        assert myerson_divisor(nats, sylvester(5), 6) == 60
        q10 = myerson_divisor(nats, sylvester(5), 10)
        assert q10 == 5040  # 10!/(5! 3! 1!), resolved with the brute-force oracle
        assert q10 % exact_lcm(nats) == 0  # lcm(1..10) = 2520 divides it
        fib8 = generate(FIBONACCI, 8)
        q = myerson_divisor(fib8, sylvester(5), 8)
        assert q.denominator == 1 and q % exact_lcm(fib8) == 0
        assert exact_lcm(fib8) == 10920  # = 2^3 * 3 * 5 * 7 * 13

    def test_reciprocal_sum_precondition(self):
        with pytest.raises(ValueError):
            myerson_divisor(list(range(1, 5)), [2, 2, 3], 4)

    def test_integrality_medium_range(self):
        bs = sylvester(5)
        for spec in (Naturals(), FIBONACCI):
            terms = [abs(t) for t in generate(spec, 120)]
            running = 1
            for n in range(1, 121):
                running = running * (terms[n - 1] // math.gcd(running, terms[n - 1]))
                q = myerson_divisor(terms, bs, n)
                assert q.denominator == 1
                assert q % running == 0
