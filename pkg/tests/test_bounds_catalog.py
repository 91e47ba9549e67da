import math
from collections import Counter
from fractions import Fraction

import pytest

from lcmbounds.bounds_catalog import (
    CH5,
    CHEBYSHEV_A,
    M_of,
    bateman_target,
    ch5_c1_interval,
    check,
    list_checks,
    probe,
    scan,
)
from lcmbounds.exact_arith import Verdict


def statuses(reports):
    return Counter(r.status.value for r in reports)


class TestRegistry:
    def test_unknown_id_lists_valid_ones(self, table_small):
        with pytest.raises(KeyError) as err:
            check("no_such_check", {}, table_small)
        assert "hanson_3n" in str(err.value)

    def test_missing_params_rejected(self, table_small):
        with pytest.raises(ValueError):
            list(scan("hanson_3n", {}, table_small))

    def test_listing_is_sorted(self):
        ids = [cd.check_id for cd in list_checks()]
        assert ids == sorted(ids) and len(ids) >= 35


class TestConstants:
    def test_chebyshev_A_value(self):
        got = CHEBYSHEV_A.evaluate(128)
        assert abs(float(got.mid) - 0.92129202) < 1e-8

    def test_ch5_c1_recomputed(self, table_small):
        val = ch5_c1_interval(table_small)
        assert abs(float(val.mid) - float(CH5["c1_printed"])) < 1e-8
        assert check("ch5_c1", {}, table_small).status is Verdict.HOLDS


class TestExactChecks:
    def test_examples(self, table_small):
        rep = check("hanson_3n", {"n": 4}, table_small)
        assert rep.status is Verdict.HOLDS and rep.verdict.exact  # 12 <= 81
        rep = check("nair_2n", {"n": 8}, table_small)
        assert rep.status is Verdict.HOLDS  # 840 >= 256
        assert check("nair_2n", {"n": 3}, table_small).status is Verdict.SKIPPED

    def test_scan_examples(self, table_small):
        reports = list(scan("nair_2n", {"n": range(7, 101)}, table_small))
        assert statuses(reports) == {"HOLDS": 94}
        reports = list(scan("farhi_ap", {"u0": [1, 3], "r": [2, 4], "n": range(0, 51)}, table_small))
        assert statuses(reports) == {"HOLDS": 204}
        reports = list(scan("ap_upper", {"a": [1], "b": [2], "n": range(3, 101)}, table_small))
        assert statuses(reports) == {"HOLDS": 98}

    def test_ap_upper_with_a_above_b(self, table_small):
        # the exponent picks up floor(a/b) when the progression starts high
        reports = list(scan("ap_upper", {"a": [7], "b": [3], "n": range(4, 80)}, table_small))
        assert statuses(reports) == {"HOLDS": 76}
        reports = list(scan("ap_upper_prime", {"a": [2], "b": [5], "n": range(6, 80)}, table_small))
        assert statuses(reports) == {"HOLDS": 74}

    def test_exact_checks_never_inconclusive(self, table_small):
        for cid in ("hanson_3n", "nair_2n", "nair_4n", "thm_2_10", "thm_2_11_divisor",
                    "lemma_54", "lemma_55", "ap_divisor", "myerson"):
            grid = {"n": range(1, 25)}
            if cid.startswith("thm_2"):
                grid = {"c": [1, 3], "m": range(1, 8), "n": range(1, 8)}
            elif cid == "ap_divisor":
                grid = {"u0": [1, 2], "r": [3], "n": range(0, 12)}
            elif cid == "myerson":
                grid = {"spec": ["nat", "fib"], "n": range(1, 12)}
            for rep in scan(cid, grid, table_small):
                assert rep.status is not Verdict.INCONCLUSIVE
                assert rep.verdict.exact


class TestLucasSandwich:
    def test_example_3_2_n4(self, table_small):
        rep = check("lucas_sandwich", {"P": 3, "Q": 2, "n": 4}, table_small)
        # alpha = 2: 2^1 <= 105 <= 2^12
        assert rep.status is Verdict.HOLDS
        assert abs(rep.lhs_log - math.log(105)) < 1e-12

    def test_negative_lower_exponent_asserted_not_skipped(self, table_small):
        for n in (1, 2):
            rep = check("lucas_sandwich", {"P": 3, "Q": 2, "n": n}, table_small)
            assert rep.status is Verdict.HOLDS

    def test_invalid_pairs_skipped(self, table_small):
        rep = check("lucas_sandwich", {"P": 1, "Q": 1, "n": 5}, table_small)  # disc < 0
        assert rep.status is Verdict.SKIPPED


class TestWindows:
    def test_oon_window(self, table_small):
        assert check("oon_2n", {"c": 1, "m": 6, "n": 10}, table_small).status is Verdict.SKIPPED
        assert check("oon_2n", {"c": 1, "m": 5, "n": 10}, table_small).status is Verdict.HOLDS

    def test_lemma_56_window(self, table_small):
        assert check("lemma_56", {"n": 999}, table_small).status is Verdict.SKIPPED
        assert check("lemma_56", {"n": 1000}, table_small).status is Verdict.HOLDS

    def test_bennett_window(self, table_small):
        assert check("bennett_check", {"x": 999}, table_small).status is Verdict.SKIPPED
        assert check("bennett_check", {"x": 1000}, table_small).status is Verdict.HOLDS

    def test_structural_filter_drops_m_gt_n(self, table_small):
        reports = list(scan("thm_2_10", {"c": [1], "m": range(1, 6), "n": range(1, 6)}, table_small))
        assert len(reports) == 15  # triangular count, not 25


class TestScaledDownCriteria:
    def test_chebyshev_psi_small(self, table_small):
        reports = list(scan("chebyshev_psi", {"x": range(1, 501)}, table_small))
        assert statuses(reports) == {"HOLDS": 500}
        assert all(r.verdict.precision_bits >= 64 for r in reports)

    def test_hanson_and_nair_small(self, table_small):
        assert statuses(scan("hanson_3n", {"n": range(1, 301)}, table_small)) == {"HOLDS": 300}
        got = statuses(scan("nair_2n", {"n": range(1, 301)}, table_small))
        assert got == {"HOLDS": 294, "SKIPPED": 6}
        assert statuses(scan("nair_4n", {"n": range(1, 301)}, table_small)) == {"HOLDS": 300}

    def test_quadratic_grid_small(self, table_small):
        grid = {"c": range(1, 4), "m": range(1, 21), "n": range(1, 21)}
        assert statuses(scan("thm_2_10", grid, table_small)) == {"HOLDS": 3 * 210}
        assert statuses(scan("thm_2_11_divisor", grid, table_small)) == {"HOLDS": 3 * 210}

    def test_ap_grid_small(self, table_small):
        grid = {"u0": range(1, 6), "r": range(1, 6), "n": range(0, 31)}
        reports = list(scan("hong_ap", grid, table_small))
        coprime_pairs = sum(1 for u0 in range(1, 6) for r in range(1, 6) if math.gcd(u0, r) == 1)
        got = statuses(reports)
        assert got["HOLDS"] == coprime_pairs * 31
        assert got["SKIPPED"] == (25 - coprime_pairs) * 31
        assert statuses(scan("ap_divisor", grid, table_small))["FAILS"] == 0

    def test_ch5_small(self, table_small):
        assert statuses(scan("lemma_54", {"n": range(1, 61)}, table_small)) == {"HOLDS": 60}
        assert statuses(scan("lemma_55", {"n": range(2, 61)}, table_small)) == {"HOLDS": 59}
        assert statuses(scan("n2plus1_sandwich", {"n": range(2, 61)}, table_small)) == {"HOLDS": 59}


class TestMOf:
    def test_examples(self):
        assert M_of(2) == 1
        assert M_of(3) == Fraction(3, 4)
        assert M_of(1) == 1

    def test_definition_oracle(self):
        for r in range(1, 40):
            coprime = [l for l in range(1, r + 1) if math.gcd(l, r) == 1]
            want = sum((Fraction(1, l) for l in coprime), Fraction(0)) / len(coprime)
            assert M_of(r) == want

    def test_sandwich_small(self, table_small):
        assert statuses(scan("M_sandwich", {"r": range(2, 201)}, table_small)) == {"HOLDS": 199}


class TestProbes:
    def test_pnt(self, table_small):
        series = probe("pnt", [10, 100, 1000, 10000], table_small)
        ratios = dict(series.points)
        assert abs(ratios[10000] - 1.0) < 0.05
        assert series.target == 1.0

    def test_bateman_target_value(self):
        assert bateman_target(1, 3) == Fraction(9, 4)  # (3/phi(3)) (1 + 1/2)

    def test_bateman_series(self, table_small):
        series = probe("bateman", [500, 3000], table_small, a=1, b=3)
        assert series.target == 2.25
        assert abs(series.points[-1][1] - 2.25) < 0.25

    def test_matiyasevich(self, table_small):
        series = probe("matiyasevich", [100, 400], table_small)
        assert abs(series.target - 3 / math.pi**2) < 1e-12
        assert abs(series.points[-1][1] - series.target) < 0.02

    def test_cilleruelo(self, table_small):
        series = probe("cilleruelo_leading", [200, 2000], table_small, c=1)
        assert abs(series.points[-1][1] - 1.0) < 0.05

    def test_unknown_probe(self, table_small):
        with pytest.raises(KeyError):
            probe("zeta", [10], table_small)

    def test_points_sorted_and_positive(self, table_small):
        with pytest.raises(ValueError):
            probe("pnt", [1], table_small)


class TestEveryCheckRuns:
    TINY_GRIDS = {
        "M_sandwich": {"r": [2, 5]},
        "ap_divisor": {"u0": [1], "r": [2], "n": [0, 4]},
        "ap_upper": {"a": [1], "b": [2], "n": [3, 10]},
        "ap_upper_prime": {"a": [1], "b": [3], "n": [4, 10]},
        "bennett_check": {"x": [1000, 1024]},
        "bezout_residual": {"c": [1], "k": [0, 2]},
        "ch5_c1": {},
        "chebyshev_lcm": {"n": [1, 30]},
        "chebyshev_psi": {"x": [1, 30]},
        "chebyshev_theta": {"x": [1, 30]},
        "cor_2_12": {"c": [1], "m": [2], "n": [6]},
        "cor_3_10": {"spec": ["fib"], "n": [4]},
        "cor_3_9": {"spec": ["fib"], "n": [4]},
        "eq_2_2_3": {"c": [1], "m": [2], "n": [4]},
        "farhi_ap": {"u0": [1], "r": [2], "n": [0, 5]},
        "farhi_identity": {"n": [0, 6]},
        "farhi_n2plus1": {"n": [1, 8]},
        "farhi_quad": {"a": [5], "b": [1], "t": [0, 1], "n": [1, 4]},
        "fib_sandwich": {"n": [1, 12]},
        "general_identity": {"spec": ["qpow:2"], "n": [0, 5]},
        "hanson_3n": {"n": [1, 9]},
        "hanson_C": {"n": [1, 9]},
        "hanson_pi": {"x": [2, 100]},
        "hong_ap": {"u0": [3], "r": [4], "n": [0, 5]},
        "hong_poly": {"coeffs": [(1, 0, 2)], "m": [1], "n": [7, 9]},
        "lemma_410": {"a": [1], "b": [4], "n": [0, 9]},
        "lemma_54": {"n": [1, 9]},
        "lemma_55": {"n": [2, 9]},
        "lemma_56": {"n": [1000]},
        "lucas_sandwich": {"P": [3], "Q": [2], "n": [1, 9]},
        "myerson": {"spec": ["nat"], "n": [1, 9]},
        "n2plus1_sandwich": {"n": [2, 9]},
        "nair_2n": {"n": [3, 9]},
        "nair_4n": {"n": [1, 9]},
        "nair_divisor": {"k": [6], "l": [3]},
        "oon_2n": {"c": [1], "m": [2], "n": [4]},
        "theta_prog_upper": {"k": [3], "l": [1], "x": [20, 500]},
        "thm_2_10": {"c": [1], "m": [1], "n": [3]},
        "thm_2_11_divisor": {"c": [1], "m": [1], "n": [3]},
        "thm_2_11_lower": {"c": [1], "m": [2], "n": [4]},
        "thm_2_13": {"c": [1], "m": [2], "n": [27]},
        "thm_2_14": {"c": [1], "m": [27], "n": [27]},
    }

    def test_registry_fully_covered(self):
        assert set(self.TINY_GRIDS) == set(cd.check_id for cd in list_checks())

    def test_every_check_yields_reports_without_fails(self, table_small):
        for cid, grid in self.TINY_GRIDS.items():
            reports = list(scan(cid, grid, table_small))
            assert reports, cid
            assert all(r.status is not Verdict.FAILS for r in reports), cid
            assert all(r.check_id == cid for r in reports)


class TestPrecisionEscalation:
    def test_inconclusive_points_retry_at_higher_precision(self, table_small, monkeypatch):
        from lcmbounds import bounds_catalog as bc
        from lcmbounds.exact_arith import BoundVerdict
        from lcmbounds.report import BoundReport as BR

        calls = []

        def run(table, points, bits):
            for pt in points:
                calls.append(bits)
                status = Verdict.HOLDS if bits >= 512 else Verdict.INCONCLUSIVE
                yield BR("thin", dict(pt), BoundVerdict(status, 0.0, bits))

        monkeypatch.setitem(bc.REGISTRY, "thin",
                            bc.CheckDef("thin", ("n",), "synthetic", "", run))
        reports = list(scan("thin", {"n": [1, 2]}, table_small, bits=128))
        assert [r.status for r in reports] == [Verdict.HOLDS, Verdict.HOLDS]
        assert all(r.verdict.precision_bits == 512 for r in reports)
        assert calls == [128, 256, 512, 128, 256, 512]


class TestDeterminism:
    def test_scan_is_reproducible(self, table_small):
        grid = {"u0": [1, 2, 3], "r": [2, 5], "n": range(0, 21)}
        a = [(r.check_id, tuple(sorted(r.params.items())), r.status.value, r.lhs_log)
             for r in scan("hong_ap", grid, table_small)]
        b = [(r.check_id, tuple(sorted(r.params.items())), r.status.value, r.lhs_log)
             for r in scan("hong_ap", grid, table_small)]
        assert a == b
