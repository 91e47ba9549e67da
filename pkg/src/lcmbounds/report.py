"""Report records shared by the check catalog, identity verifiers, and CLI."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact_arith import BoundVerdict, Verdict

CSV_HEADER = "check_id,params,lhs_log,rhs_log,verdict,elapsed_ms"


def params_text(params: dict) -> str:
    return ";".join(f"{k}={params[k]}" for k in sorted(params))


@dataclass
class BoundReport:
    """One bound or identity check: what was asked, both sides, the verdict."""

    check_id: str
    params: dict
    verdict: BoundVerdict
    lhs_log: float | None = None
    rhs_log: float | None = None
    elapsed: float = 0.0  # seconds

    @property
    def status(self) -> Verdict:
        return self.verdict.status

    def csv_row(self) -> str:
        def fmt(x):
            return "" if x is None else repr(float(x))

        return ",".join(
            [
                self.check_id,
                params_text(self.params),
                fmt(self.lhs_log),
                fmt(self.rhs_log),
                self.verdict.status.value,
                repr(round(self.elapsed * 1000.0, 3)),
            ]
        )

    def to_json_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "lhs_log": self.lhs_log,
            "rhs_log": self.rhs_log,
            "verdict": {
                "status": self.verdict.status.value,
                "margin": self.verdict.margin,
                "precision_bits": self.verdict.precision_bits,
                "exact": self.verdict.exact,
            },
            "elapsed_ms": round(self.elapsed * 1000.0, 3),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "BoundReport":
        v = d["verdict"]
        params = {
            k: tuple(x) if isinstance(x, list) else x for k, x in d["params"].items()
        }
        return cls(
            check_id=d["check_id"],
            params=params,
            verdict=BoundVerdict(
                Verdict(v["status"]), v["margin"], v["precision_bits"], v["exact"]
            ),
            lhs_log=d["lhs_log"],
            rhs_log=d["rhs_log"],
            elapsed=d["elapsed_ms"] / 1000.0,
        )


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, tuple):
        return list(v)
    return v


@dataclass
class ProbeSeries:
    """Ratios of a slowly converging quantity against its limiting constant."""

    probe_id: str
    params: dict
    points: list  # (n, ratio) pairs, strictly increasing in n
    target: float

    def __post_init__(self):
        ns = [n for n, _ in self.points]
        if ns != sorted(set(ns)):
            raise ValueError("probe points must be strictly increasing in n")

    def rows(self):
        for n, ratio in self.points:
            yield n, ratio, self.target, abs(ratio - self.target)

    def to_json_dict(self) -> dict:
        return {
            "probe_id": self.probe_id,
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "target": self.target,
            "points": [
                {"n": n, "ratio": r, "abs_error": abs(r - self.target)}
                for n, r in self.points
            ],
        }
