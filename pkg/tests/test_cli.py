import json
import re

from lcmbounds.cli import main
from lcmbounds.report import CSV_HEADER, BoundReport


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


SMALL = ("--sieve-limit", "20000", "--workers", "1")


class TestCompute:
    def test_lcm_naturals(self, capsys):
        code, out, _ = run_cli(capsys, *SMALL, "compute", "lcm", "nat", "1", "10")
        assert code == 0
        assert out.splitlines()[0] == "2520"
        assert "(4 digits)" in out

    def test_lcm_quadratic(self, capsys):
        code, out, _ = run_cli(capsys, *SMALL, "compute", "lcm", "quad:1", "1", "10")
        assert code == 0
        assert out.splitlines()[0] == str(
            __import__("math").lcm(*[k * k + 1 for k in range(1, 11)])
        )

    def test_row_fib(self, capsys):
        code, out, _ = run_cli(capsys, *SMALL, "compute", "row", "fib", "4")
        assert code == 0
        assert out.strip() == "1 3 6 3 1"

    def test_M(self, capsys):
        code, out, _ = run_cli(capsys, *SMALL, "compute", "M", "3")
        assert code == 0
        assert out.strip() == "3/4"

    def test_u_decomp(self, capsys):
        code, out, _ = run_cli(capsys, *SMALL, "compute", "u-decomp", "nat", "8")
        assert code == 0
        assert out.strip() == "1 2 3 2 5 1 7 2"

    def test_bezout(self, capsys):
        code, out, _ = run_cli(capsys, *SMALL, "compute", "bezout", "1", "0")
        assert code == 0
        assert "theta[0] = 0 + (-1/2)*sqrt(-1)" in out

    def test_divisor(self, capsys):
        code, out, _ = run_cli(capsys, *SMALL, "compute", "divisor", "1", "1", "3")
        assert code == 0
        assert out.strip() == "5/4"

    def test_malformed_spec_exit_2(self, capsys):
        code, _, err = run_cli(capsys, *SMALL, "compute", "lcm", "bogus:spec", "1", "5")
        assert code == 2
        assert "usage error" in err

    def test_zero_lucas_term_rejected(self, capsys):
        # U(1, 1) hits U_6 = 0; an lcm over it is undefined
        code, _, err = run_cli(capsys, *SMALL, "compute", "lcm", "lucas:1,1", "1", "8")
        assert code == 2
        assert "zero term" in err


class TestVerify:
    def test_verify_ok_exit_0(self, capsys):
        code, _, err = run_cli(capsys, *SMALL, "verify", "hanson_3n", "--n", "1..200")
        assert code == 0
        assert "200 points" in err and "200 HOLDS" in err

    def test_skipped_is_ok(self, capsys):
        code, out, _ = run_cli(capsys, *SMALL, "verify", "nair_2n", "--n", "3")
        assert code == 0
        assert "SKIPPED" in out

    def test_unknown_check_exit_2(self, capsys):
        code, _, err = run_cli(capsys, *SMALL, "verify", "nope")
        assert code == 2
        assert "valid ids" in err

    def test_missing_param_exit_2(self, capsys):
        code, _, err = run_cli(capsys, *SMALL, "verify", "hanson_3n")
        assert code == 2

    def test_csv_header(self, capsys):
        code, out, _ = run_cli(capsys, *SMALL, "--format", "csv",
                               "verify", "nair_2n", "--n", "7..12")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 7
        assert lines[1].startswith("nair_2n,n=7,")

    def test_json_roundtrip(self, capsys):
        code, out, _ = run_cli(capsys, *SMALL, "--format", "json",
                               "verify", "farhi_ap", "--u0", "1,3", "--r", "2", "--n", "0..10")
        assert code == 0
        parsed = json.loads(out)
        assert len(parsed) == 22
        rebuilt = [BoundReport.from_json_dict(d) for d in parsed]
        assert all(r.status.value == "HOLDS" for r in rebuilt)
        assert [r.params["u0"] for r in rebuilt[:11]] == [1] * 11

    def test_worker_merge_deterministic(self, capsys):
        args = ("verify", "thm_2_10", "--c", "1..4", "--m", "1..10", "--n", "1..10")
        code1, out1, _ = run_cli(capsys, *SMALL, "--format", "csv", *args)
        code2, out2, _ = run_cli(capsys, "--sieve-limit", "20000", "--workers", "3",
                                 "--format", "csv", *args)
        assert code1 == code2 == 0
        strip = lambda text: [",".join(line.split(",")[:-1]) for line in text.splitlines()]
        assert strip(out1) == strip(out2)  # identical modulo elapsed_ms

    def test_worker_split_on_single_axis_check(self, capsys):
        # chunking the only axis forces each worker to rebuild its running
        # state from scratch; results must not change
        args = ("verify", "chebyshev_psi", "--x", "1..120")
        _, out1, _ = run_cli(capsys, *SMALL, "--format", "csv", *args)
        _, out2, _ = run_cli(capsys, "--sieve-limit", "20000", "--workers", "4",
                             "--format", "csv", *args)
        strip = lambda text: [",".join(line.split(",")[:-1]) for line in text.splitlines()]
        assert strip(out1) == strip(out2)

    def test_fail_fast_flag_accepted(self, capsys):
        code, _, _ = run_cli(capsys, *SMALL, "verify", "hanson_3n", "--n", "1..5", "--fail-fast")
        assert code == 0

    def test_fails_and_inconclusive_exit_codes(self, capsys, monkeypatch):
        # exercised through temporary registry entries, since every real
        # check in the catalog is a proved statement
        from lcmbounds import bounds_catalog as bc
        from lcmbounds.exact_arith import BoundVerdict, Verdict
        from lcmbounds.report import BoundReport

        def fake_runner(status):
            def run(table, points, bits):
                for pt in points:
                    yield BoundReport("fake", dict(pt), BoundVerdict(status, None, bits))

            return run

        for status, expected in ((Verdict.FAILS, 1), (Verdict.INCONCLUSIVE, 4)):
            monkeypatch.setitem(
                bc.REGISTRY, "fake",
                bc.CheckDef("fake", ("n",), "synthetic", "", fake_runner(status)),
            )
            code, _, _ = run_cli(capsys, *SMALL, "verify", "fake", "--n", "1..3")
            assert code == expected

    def test_plot_writes_figure(self, capsys, tmp_path):
        target = tmp_path / "scan.png"
        code, _, err = run_cli(capsys, *SMALL, "verify", "nair_2n",
                               "--n", "1..40", "--plot", str(target))
        assert code == 0
        assert target.exists() and target.stat().st_size > 0

    def test_polynomial_coefficient_grid(self, capsys):
        code, out, err = run_cli(capsys, *SMALL, "verify", "hong_poly",
                                 "--coeffs", "1,0,2", "--m", "1", "--n", "7..20")
        assert code == 0
        assert "14 HOLDS" in err


class TestProbeCommand:
    def test_probe_rows(self, capsys):
        code, out, _ = run_cli(capsys, *SMALL, "probe", "matiyasevich", "--points", "50,100,200")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "n,ratio,target,abs_error"
        assert len(lines) == 4

    def test_probe_pnt(self, capsys):
        code, out, _ = run_cli(capsys, *SMALL, "probe", "pnt", "--points", "10,100,1000,10000")
        assert code == 0
        last = out.strip().splitlines()[-1].split(",")
        assert abs(float(last[1]) - 1.0) < 0.05

    def test_probe_bateman_target(self, capsys):
        code, out, _ = run_cli(capsys, *SMALL, "probe", "bateman",
                               "--points", "1000,10000", "--a", "1", "--b", "3")
        assert code == 0
        assert ",2.25," in out

    def test_probe_plot(self, capsys, tmp_path):
        target = tmp_path / "probe.png"
        code, _, _ = run_cli(capsys, *SMALL, "probe", "pnt",
                             "--points", "10,100,1000", "--plot", str(target))
        assert code == 0
        assert target.exists() and target.stat().st_size > 0

    def test_unknown_probe_exit_2(self, capsys):
        code, _, err = run_cli(capsys, *SMALL, "probe", "zeta", "--points", "10")
        assert code == 2


class TestEnvOverrides:
    def test_sieve_limit_env(self, capsys, monkeypatch):
        monkeypatch.setenv("LCMBOUNDS_SIEVE_LIMIT", "5000")
        # psi at x > limit must now be rejected as a range error
        code, _, err = run_cli(capsys, "--workers", "1", "verify",
                               "chebyshev_psi", "--x", "6000")
        assert code == 2 and "exceeds sieve limit" in err

    def test_precision_env(self, capsys, monkeypatch):
        monkeypatch.setenv("LCMBOUNDS_PRECISION_BITS", "96")
        code, out, _ = run_cli(capsys, "--sieve-limit", "20000", "--workers", "1",
                               "--format", "json", "verify", "M_sandwich", "--r", "5")
        assert code == 0
        assert json.loads(out)[0]["verdict"]["precision_bits"] == 96


class TestListChecks:
    def test_lists_ids(self, capsys):
        code, out, _ = run_cli(capsys, *SMALL, "list-checks")
        assert code == 0
        for cid in ("hanson_3n", "thm_2_10", "bennett_check", "lucas_sandwich"):
            assert cid in out

    def test_json_listing(self, capsys):
        code, out, _ = run_cli(capsys, *SMALL, "--format", "json", "list-checks")
        assert code == 0
        ids = [row["check_id"] for row in json.loads(out)]
        assert ids == sorted(ids)
