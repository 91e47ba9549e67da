"""Command-line frontend.

    lcmbounds compute lcm nat 1 10          exact lcm of a term range
    lcmbounds verify hanson_3n --n 1..5000  run a catalog check over a grid
    lcmbounds probe matiyasevich --points 100,500,2000
    lcmbounds list-checks

Grids use inclusive ranges (--n 1..5000), comma lists (--c 1,2,5), or single
values. Reports stream as text, csv (fixed header), or json (one array);
--plot additionally renders a figure next to the delimited output. Exit
codes: 0 all HOLDS/SKIPPED, 1 any FAILS, 2 usage error, 3 internal
invariant violation, 4 INCONCLUSIVE at maximum precision.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .bounds_catalog import REGISTRY, M_of, list_checks, probe, scan
from .exact_arith import Verdict, exact_lcm
from .prime_toolkit import DEFAULT_SIEVE_LIMIT, PrimeTable
from .quadratic_lcm import QuadraticLcmInstance, bezout_coefficients, quadratic_divisor
from .report import CSV_HEADER, BoundReport, params_text
from .sequences import extract_u, generate, parse_spec

EXIT_OK = 0
EXIT_FAILS = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3
EXIT_INCONCLUSIVE = 4


@dataclass
class RunConfig:
    sieve_limit: int = DEFAULT_SIEVE_LIMIT
    precision_bits: int = 128
    output_format: str = "text"
    worker_count: int = field(default_factory=lambda: os.cpu_count() or 1)
    seed: int = 0


_TABLE_CACHE: dict[int, PrimeTable] = {}


def get_table(limit: int) -> PrimeTable:
    if limit not in _TABLE_CACHE:
        _TABLE_CACHE[limit] = PrimeTable(limit)
    return _TABLE_CACHE[limit]


# --- grid parsing ---------------------------------------------------------------


def parse_values(text: str, param: str):
    """'1..50' inclusive range, '1,2,5' list, '7' single; specs stay strings."""
    if param in ("spec",):
        return [tok for tok in text.split(",") if tok]
    if param == "coeffs":
        return [tuple(int(c) for c in text.split(","))]
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if ".." in tok:
            lo, _, hi = tok.partition("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(tok))
    if not out:
        raise ValueError(f"empty value list for --{param}")
    return out


def collect_grid(extras: list[str], allowed: tuple) -> dict:
    grid = {}
    i = 0
    while i < len(extras):
        tok = extras[i]
        if not tok.startswith("--"):
            raise ValueError(f"unexpected argument {tok!r}")
        name = tok[2:]
        if name not in allowed:
            raise ValueError(f"unknown parameter --{name}; this check takes {allowed}")
        if i + 1 >= len(extras):
            raise ValueError(f"--{name} needs a value")
        grid[name] = parse_values(extras[i + 1], name)
        i += 2
    return grid


# --- report emission --------------------------------------------------------------


class ReportWriter:
    def __init__(self, fmt: str, out):
        self.fmt = fmt
        self.out = out
        self.first = True
        if fmt == "csv":
            print(CSV_HEADER, file=out)
        elif fmt == "json":
            print("[", file=out, end="")

    def write(self, report: BoundReport):
        if self.fmt == "csv":
            print(report.csv_row(), file=self.out)
        elif self.fmt == "json":
            prefix = "\n  " if self.first else ",\n  "
            print(prefix + json.dumps(report.to_json_dict(), sort_keys=True),
                  file=self.out, end="")
        else:
            v = report.verdict
            margin = "" if v.margin is None else f"  margin={v.margin:.6g}"
            print(
                f"{report.check_id}  {params_text(report.params)}  {v.status.value}{margin}",
                file=self.out,
            )
        self.first = False

    def close(self):
        if self.fmt == "json":
            print("\n]", file=self.out)


# --- parallel scan -----------------------------------------------------------------


def _scan_chunk(check_id: str, grid: dict, limit: int, bits: int) -> list[BoundReport]:
    table = get_table(limit)
    return list(scan(check_id, grid, table, bits))


def run_scan(check_id: str, grid: dict, config: RunConfig):
    """Stream reports; grids split along the outer axis across workers.

    Chunk results merge in canonical parameter order regardless of the
    worker count, so output content is deterministic.
    """
    cd = REGISTRY[check_id]
    outer = cd.params[0] if cd.params else None
    outer_vals = sorted(set(grid.get(outer, []))) if outer else []
    if config.worker_count <= 1 or outer is None or len(outer_vals) < 2:
        table = get_table(config.sieve_limit)
        yield from scan(check_id, grid, table, config.precision_bits)
        return
    workers = min(config.worker_count, len(outer_vals))
    step = math.ceil(len(outer_vals) / (workers * 4))
    chunks = [outer_vals[i : i + step] for i in range(0, len(outer_vals), step)]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        pending = []
        idx = 0
        while idx < len(chunks) or pending:
            while idx < len(chunks) and len(pending) < workers + 2:
                sub = dict(grid)
                sub[outer] = chunks[idx]
                pending.append(ex.submit(_scan_chunk, check_id, sub,
                                         config.sieve_limit, config.precision_bits))
                idx += 1
            done = pending.pop(0)
            yield from done.result()


# --- commands ----------------------------------------------------------------------


def cmd_compute(args, config: RunConfig) -> int:
    sys.set_int_max_str_digits(10**7)
    obj = args.object
    rest = args.args
    try:
        if obj == "lcm":
            spec = parse_spec(rest[0])
            start, end = int(rest[1]), int(rest[2])
            base = spec.index_base
            if start < base or end < start:
                raise ValueError(f"need {base} <= start <= end")
            terms = generate(spec, end)
            chosen = terms[start - base : end - base + 1]
            _print_big(exact_lcm(chosen))
        elif obj == "u-decomp":
            spec = parse_spec(rest[0])
            n = int(rest[1])
            u = extract_u([abs(t) for t in generate(spec, n)], "nowicki")
            print(" ".join(str(v) for v in u))
        elif obj == "row":
            from .identities import a_binomial_row

            spec = parse_spec(rest[0])
            n = int(rest[1])
            print(" ".join(str(v) for v in a_binomial_row(spec, n).coeffs))
        elif obj == "bezout":
            c, k = int(rest[0]), int(rest[1])
            bez = bezout_coefficients(c, k)
            for l, th in enumerate(bez.theta):
                print(f"theta[{l}] = {th.re} + ({th.im})*sqrt(-{c})")
        elif obj == "divisor":
            c, m, n = (int(v) for v in rest[:3])
            print(quadratic_divisor(QuadraticLcmInstance(c, m, n)))
        elif obj == "M":
            print(M_of(int(rest[0])))
        else:
            print(f"unknown object {obj!r}; choose from lcm, u-decomp, row, bezout, divisor, M",
                  file=sys.stderr)
            return EXIT_USAGE
    except (ValueError, IndexError, KeyError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def _print_big(value: int):
    text = str(value)
    print(text)
    print(f"({len(text)} digits)")


def cmd_verify(args, extras, config: RunConfig) -> int:
    check_id = args.check_id
    if check_id not in REGISTRY:
        known = ", ".join(sorted(REGISTRY))
        print(f"unknown check_id {check_id!r}; valid ids: {known}", file=sys.stderr)
        return EXIT_USAGE
    cd = REGISTRY[check_id]
    try:
        grid = collect_grid(extras, cd.params)
        missing = [p for p in cd.params if p not in grid]
        if missing:
            raise ValueError(f"missing required parameters: {missing}")
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    writer = ReportWriter(config.output_format, sys.stdout)
    collected = [] if args.plot else None
    counts = {v: 0 for v in Verdict}
    try:
        for report in run_scan(check_id, grid, config):
            counts[report.status] += 1
            writer.write(report)
            if collected is not None:
                collected.append(report)
            if args.fail_fast and report.status is Verdict.FAILS:
                break
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    finally:
        writer.close()
    if args.plot:
        from .figures import render_scan

        render_scan(collected, args.plot, check_id)
        print(f"figure written to {args.plot}", file=sys.stderr)
    total = sum(counts.values())
    print(
        f"# {check_id}: {total} points, {counts[Verdict.HOLDS]} HOLDS, "
        f"{counts[Verdict.FAILS]} FAILS, {counts[Verdict.INCONCLUSIVE]} INCONCLUSIVE, "
        f"{counts[Verdict.SKIPPED]} SKIPPED",
        file=sys.stderr,
    )
    if counts[Verdict.FAILS]:
        return EXIT_FAILS
    if counts[Verdict.INCONCLUSIVE]:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_probe(args, extras, config: RunConfig) -> int:
    try:
        points = parse_values(args.points, "points")
        params = {}
        i = 0
        while i < len(extras):
            name = extras[i].lstrip("-")
            params[name] = int(extras[i + 1])
            i += 2
        table = get_table(config.sieve_limit)
        series = probe(args.probe_id, points, table, **params)
    except (KeyError, ValueError, IndexError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if config.output_format == "json":
        print(json.dumps(series.to_json_dict(), sort_keys=True, indent=2))
    else:
        print("n,ratio,target,abs_error")
        for n, ratio, target, err in series.rows():
            print(f"{n},{ratio!r},{target!r},{err!r}")
    if args.plot:
        from .figures import render_probe

        render_probe(series, args.plot)
        print(f"figure written to {args.plot}", file=sys.stderr)
    return EXIT_OK


def cmd_list_checks(config: RunConfig) -> int:
    rows = [(cd.check_id, ",".join(cd.params), cd.window, cd.description) for cd in list_checks()]
    if config.output_format == "json":
        print(json.dumps(
            [{"check_id": r[0], "params": r[1].split(",") if r[1] else [],
              "window": r[2], "description": r[3]} for r in rows],
            indent=2))
    else:
        width = max(len(r[0]) for r in rows)
        for cid, params, window, desc in rows:
            print(f"{cid:<{width}}  params: {params or '-'}")
            print(f"{'':<{width}}  window: {window or 'always'}")
            print(f"{'':<{width}}  {desc}")
    return EXIT_OK


# --- entry point --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lcmbounds", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sieve-limit", type=int,
                    default=int(os.environ.get("LCMBOUNDS_SIEVE_LIMIT", DEFAULT_SIEVE_LIMIT)))
    ap.add_argument("--precision-bits", type=int,
                    default=int(os.environ.get("LCMBOUNDS_PRECISION_BITS", 128)))
    ap.add_argument("--format", choices=("text", "json", "csv"), default="text")
    ap.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--seed", type=int, default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p_compute = sub.add_parser("compute", help="print exact objects")
    p_compute.add_argument("object")
    p_compute.add_argument("args", nargs="*")

    p_verify = sub.add_parser("verify", help="run a catalog check over a parameter grid")
    p_verify.add_argument("check_id")
    p_verify.add_argument("--fail-fast", action="store_true")
    p_verify.add_argument("--plot", metavar="FILE")

    p_probe = sub.add_parser("probe", help="asymptotic convergence probes")
    p_probe.add_argument("probe_id")
    p_probe.add_argument("--points", required=True)
    p_probe.add_argument("--plot", metavar="FILE")

    sub.add_parser("list-checks", help="list catalog check ids")
    return ap


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    ap = build_parser()
    args, extras = ap.parse_known_args(argv)
    config = RunConfig(
        sieve_limit=args.sieve_limit,
        precision_bits=args.precision_bits,
        output_format=args.format,
        worker_count=args.workers,
        seed=args.seed,
    )
    if args.command == "compute":
        if extras:
            print(f"usage error: unexpected arguments {extras}", file=sys.stderr)
            return EXIT_USAGE
        return cmd_compute(args, config)
    if args.command == "verify":
        return cmd_verify(args, extras, config)
    if args.command == "probe":
        return cmd_probe(args, extras, config)
    if args.command == "list-checks":
        return cmd_list_checks(config)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
