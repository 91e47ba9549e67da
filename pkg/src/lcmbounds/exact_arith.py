"""Exact arithmetic kernels: factored integers, the quadratic ring Z[sqrt(-c)],
and a certified log-domain comparator.

Everything in this module is an immutable value. Integers are factored once
(by the caller, usually against a prime table) and lcm/gcd then reduce to
exponent max/min, so lcm-over-range computations never materialise
astronomically large integers unless asked to. Verdicts about inequalities
between huge quantities are produced in the log domain with interval
arithmetic at directed rounding; a verdict is only ever HOLDS or FAILS when
the certified interval evaluation separates the two sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Union

from mpmath import iv, mp
from mpmath.libmp import from_int, round_ceiling, round_floor


class Verdict(str, Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    INCONCLUSIVE = "INCONCLUSIVE"
    SKIPPED = "SKIPPED"

    def __str__(self) -> str:  # plain token in reports
        return self.value


@dataclass(frozen=True)
class BoundVerdict:
    """Outcome of one comparison.

    margin is the log-domain difference RHS - LHS where applicable (midpoint
    of the certified enclosure, or exactly 0.0 for detected ties). exact is
    True when the comparison was settled in exact integer/rational arithmetic
    rather than by interval evaluation; exact comparisons are never
    INCONCLUSIVE.
    """

    status: Verdict
    margin: float | None
    precision_bits: int
    exact: bool = False

    def __bool__(self) -> bool:
        return self.status is Verdict.HOLDS


DEFAULT_PRECISION_BITS = 128
MAX_PRECISION_BITS = 1024

# Trial-division ceiling used when factoring without a sieve at hand.
_SMALL_FACTOR_LIMIT = 1 << 20


class _IvPrec:
    """Temporarily set the shared interval context precision."""

    def __init__(self, bits: int):
        self.bits = bits

    def __enter__(self):
        self._saved = iv.prec
        iv.prec = self.bits
        return iv

    def __exit__(self, *exc):
        iv.prec = self._saved
        return False


def iv_from_int(n: int):
    """Smallest interval at the current precision containing the integer n."""
    lo = from_int(n, iv.prec, round_floor)
    hi = from_int(n, iv.prec, round_ceiling)
    return iv.make_mpf((lo, hi))


def iv_from_rational(q) -> "iv.mpf":
    """Containing interval for an int or Fraction."""
    if isinstance(q, int):
        return iv_from_int(q)
    q = Fraction(q)
    return iv_from_int(q.numerator) / iv_from_int(q.denominator)


def iv_log(v):
    """Certified log of a positive int, Fraction, or interval."""
    if isinstance(v, (int, Fraction)):
        if v <= 0:
            raise ValueError("log of non-positive value")
        v = iv_from_rational(v)
    return iv.log(v)


def iv_mid_float(x) -> float:
    return float(mp.mpf(x.mid))


def compare_intervals(lhs, rhs, relation: str, bits: int) -> BoundVerdict:
    """Compare two interval enclosures; HOLDS/FAILS only when they separate."""
    diff = rhs - lhs  # margin convention: RHS - LHS
    margin = iv_mid_float(diff)
    if relation in ("le", "lt"):
        if lhs.b < rhs.a:
            return BoundVerdict(Verdict.HOLDS, margin, bits)
        if lhs.a > rhs.b or (relation == "lt" and lhs.a >= rhs.b):
            return BoundVerdict(Verdict.FAILS, margin, bits)
    elif relation in ("ge", "gt"):
        if lhs.a > rhs.b:
            return BoundVerdict(Verdict.HOLDS, margin, bits)
        if lhs.b < rhs.a or (relation == "gt" and lhs.b <= rhs.a):
            return BoundVerdict(Verdict.FAILS, margin, bits)
    elif relation == "eq":
        if lhs.b < rhs.a or lhs.a > rhs.b:
            return BoundVerdict(Verdict.FAILS, margin, bits)
    else:
        raise ValueError(f"unknown relation {relation!r}")
    return BoundVerdict(Verdict.INCONCLUSIVE, margin, bits)


# ---------------------------------------------------------------------------
# Factored integers
# ---------------------------------------------------------------------------


def _factor_by_trial(n: int) -> dict[int, int]:
    """Factor n by unbounded trial division (intended for modest n)."""
    if n <= 0:
        raise ValueError("can only factor positive integers")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 5
    while d * d <= n:
        for p in (d, d + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        d += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class FactoredInteger:
    """A positive integer held as its prime -> exponent map.

    The unit 1 is the empty map. Instances are immutable; lcm and gcd are
    exponent max/min, so they stay cheap even when the expanded values would
    have hundreds of thousands of digits.
    """

    __slots__ = ("_factors",)

    def __init__(self, factors: Mapping[int, int] = (), *, _trusted: bool = False):
        items = dict(factors)
        if not _trusted:
            for p, e in items.items():
                if e < 1:
                    raise ValueError(f"exponent {e} for prime {p} must be >= 1")
                if p < 2 or not _is_probable_prime(p):
                    raise ValueError(f"key {p} is not prime")
        object.__setattr__(self, "_factors", items)

    def __setattr__(self, *a):  # pragma: no cover - guard rail
        raise AttributeError("FactoredInteger is immutable")

    @property
    def factors(self) -> dict[int, int]:
        return dict(self._factors)

    @classmethod
    def one(cls) -> "FactoredInteger":
        return cls({}, _trusted=True)

    @classmethod
    def from_int(cls, n: int, table=None) -> "FactoredInteger":
        """Factor n. A PrimeTable widens the reachable range to limit**2."""
        if n < 1:
            raise ValueError("FactoredInteger represents positive integers")
        if n == 1:
            return cls.one()
        if table is not None:
            return cls(table.factor(n), _trusted=True)
        if n > _SMALL_FACTOR_LIMIT**2:
            raise ValueError(
                "refusing unbounded trial division on a large integer; "
                "pass a PrimeTable"
            )
        return cls(_factor_by_trial(n), _trusted=True)

    def value(self) -> int:
        out = 1
        for p, e in self._factors.items():
            out *= p**e
        return out

    def valuation(self, p: int) -> int:
        return self._factors.get(p, 0)

    def primes(self):
        return sorted(self._factors)

    def mul(self, other: "FactoredInteger") -> "FactoredInteger":
        out = dict(self._factors)
        for p, e in other._factors.items():
            out[p] = out.get(p, 0) + e
        return FactoredInteger(out, _trusted=True)

    def log_expr(self) -> "LogExpr":
        return LogExpr((Fraction(e), p) for p, e in self._factors.items())

    def log_interval(self, bits: int = DEFAULT_PRECISION_BITS):
        with _IvPrec(bits):
            total = iv.mpf(0)
            for p, e in self._factors.items():
                total += e * iv_log(p)
            return total

    def __eq__(self, other) -> bool:
        return isinstance(other, FactoredInteger) and self._factors == other._factors

    def __hash__(self) -> int:
        return hash(frozenset(self._factors.items()))

    def __repr__(self) -> str:
        body = " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in sorted(self._factors.items()))
        return f"FactoredInteger({body or '1'})"


def lcm_factored(xs: Iterable[FactoredInteger]) -> FactoredInteger:
    """Componentwise exponent maximum. Errors on an empty list."""
    xs = list(xs)
    if not xs:
        raise ValueError("lcm of an empty list is undefined")
    out: dict[int, int] = {}
    for x in xs:
        for p, e in x._factors.items():
            if e > out.get(p, 0):
                out[p] = e
    return FactoredInteger(out, _trusted=True)


def gcd_factored(xs: Iterable[FactoredInteger]) -> FactoredInteger:
    """Componentwise exponent minimum. Errors on an empty list."""
    xs = list(xs)
    if not xs:
        raise ValueError("gcd of an empty list is undefined")
    out = dict(xs[0]._factors)
    for x in xs[1:]:
        nxt = {}
        for p, e in out.items():
            e2 = x._factors.get(p, 0)
            if e2:
                nxt[p] = min(e, e2)
        out = nxt
    return FactoredInteger(out, _trusted=True)


# ---------------------------------------------------------------------------
# Z[sqrt(-c)] and Q(sqrt(-c))
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadraticInteger:
    """An element re + im*sqrt(-c) of Z[sqrt(-c)] with c >= 1."""

    c: int
    re: int
    im: int

    def __post_init__(self):
        if self.c < 1:
            raise ValueError("ring parameter c must be a positive integer")

    def _check_ring(self, other: "QuadraticInteger"):
        if self.c != other.c:
            raise ValueError(f"mixed ring parameters {self.c} and {other.c}")

    def __add__(self, other: "QuadraticInteger") -> "QuadraticInteger":
        self._check_ring(other)
        return QuadraticInteger(self.c, self.re + other.re, self.im + other.im)

    def __mul__(self, other: "QuadraticInteger") -> "QuadraticInteger":
        self._check_ring(other)
        return QuadraticInteger(
            self.c,
            self.re * other.re - self.c * self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def conjugate(self) -> "QuadraticInteger":
        return QuadraticInteger(self.c, self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.c * self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0


def quad_product(c: int, zs: Iterable[QuadraticInteger]) -> QuadraticInteger:
    """Exact product in Z[sqrt(-c)]; all inputs must share the parameter c."""
    acc = QuadraticInteger(c, 1, 0)
    for z in zs:
        if z.c != c:
            raise ValueError(f"mixed ring parameters {c} and {z.c}")
        acc = acc * z
    return acc


class QuadRational:
    """An element of Q(sqrt(-c)) as an exact pair (re, im) of Fractions.

    Inversion goes through the conjugate over the norm re^2 + c*im^2, so no
    rounding can enter downstream Bezout-coefficient checks.
    """

    __slots__ = ("c", "re", "im")

    def __init__(self, c: int, re=0, im=0):
        if c < 1:
            raise ValueError("ring parameter c must be a positive integer")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("QuadRational is immutable")

    def _coerce(self, other) -> "QuadRational":
        if isinstance(other, QuadRational):
            if other.c != self.c:
                raise ValueError("mixed ring parameters")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadRational(self.c, other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return QuadRational(self.c, self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return QuadRational(self.c, self.re - o.re, self.im - o.im)

    def __neg__(self):
        return QuadRational(self.c, -self.re, -self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        return QuadRational(
            self.c,
            self.re * o.re - self.c * self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadRational":
        nrm = self.re * self.re + self.c * self.im * self.im
        if nrm == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt(-c))")
        return QuadRational(self.c, self.re / nrm, -self.im / nrm)

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * o.inverse()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QuadRational)
            and self.c == other.c
            and self.re == other.re
            and self.im == other.im
        )

    def __hash__(self):
        return hash((self.c, self.re, self.im))

    def __repr__(self):
        return f"QuadRational(c={self.c}, {self.re} + {self.im}*sqrt(-{self.c}))"


def is_multiple_of_rational(N: int, q: Fraction) -> bool:
    """True iff N/q is an integer, i.e. q.numerator divides N*q.denominator."""
    q = Fraction(q)
    if q == 0:
        raise ValueError("divisibility by the rational 0 is undefined")
    return (N * q.denominator) % q.numerator == 0


# ---------------------------------------------------------------------------
# Log-domain expressions and the directed comparator
# ---------------------------------------------------------------------------

_RatLike = Union[int, Fraction]


class LogExpr:
    """A formal finite sum of terms k*log(v), k rational, v positive rational.

    Canonicalisation rewrites values through their prime factorisations where
    trial division finds them, which makes exact ties (like log 8 vs 3 log 2)
    detectable without any floating evaluation: distinct prime logarithms are
    linearly independent over Q.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple] = ()):
        merged: dict = {}
        for k, v in terms:
            k = Fraction(k)
            if isinstance(v, Rational) and not isinstance(v, int):
                v = Fraction(v)
                if v.denominator == 1:
                    v = v.numerator
            if isinstance(v, int):
                if v <= 0:
                    raise ValueError("log of non-positive value")
                if v == 1:
                    continue
            elif isinstance(v, Fraction):
                if v <= 0:
                    raise ValueError("log of non-positive value")
            else:
                raise TypeError(f"unsupported log argument {v!r}")
            merged[v] = merged.get(v, Fraction(0)) + k
        object.__setattr__(
            self, "terms", {v: k for v, k in merged.items() if k != 0}
        )

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("LogExpr is immutable")

    @classmethod
    def log(cls, v: _RatLike, k: _RatLike = 1) -> "LogExpr":
        return cls([(Fraction(k), v)])

    @classmethod
    def zero(cls) -> "LogExpr":
        return cls()

    def __add__(self, other: "LogExpr") -> "LogExpr":
        return LogExpr(
            [(k, v) for v, k in self.terms.items()]
            + [(k, v) for v, k in other.terms.items()]
        )

    def __sub__(self, other: "LogExpr") -> "LogExpr":
        return self + (-1) * other

    def __mul__(self, scalar: _RatLike) -> "LogExpr":
        s = Fraction(scalar)
        return LogExpr([(k * s, v) for v, k in self.terms.items()])

    __rmul__ = __mul__

    def canonical(self) -> "LogExpr":
        """Split values into prime power content found by trial division."""
        out: list[tuple] = []
        for v, k in self.terms.items():
            if isinstance(v, Fraction):
                out.extend(_split_value(v.numerator, k))
                out.extend(_split_value(v.denominator, -k))
            else:
                out.extend(_split_value(v, k))
        return LogExpr(out)

    def is_zero(self) -> bool:
        return not self.canonical().terms

    def evaluate(self, bits: int = DEFAULT_PRECISION_BITS):
        """Certified interval enclosure of the expression's value."""
        with _IvPrec(bits):
            total = iv.mpf(0)
            for v, k in self.terms.items():
                total += iv_from_rational(k) * iv_log(v)
            return total

    def __repr__(self):
        body = " + ".join(f"{k}*log({v})" for v, k in sorted(self.terms.items(), key=str))
        return f"LogExpr({body or '0'})"


def _split_value(v: int, k: Fraction) -> list[tuple]:
    """Peel small prime factors off v; keep any large cofactor opaque."""
    if v == 1:
        return []
    out = []
    for p in (2, 3, 5):
        e = 0
        while v % p == 0:
            v //= p
            e += 1
        if e:
            out.append((k * e, p))
    d = 7
    while d * d <= v and d <= _SMALL_FACTOR_LIMIT:
        if v % d == 0:
            e = 0
            while v % d == 0:
                v //= d
                e += 1
            out.append((k * e, d))
        d += 2
    if v > 1:
        out.append((k, v))
    return out


def log_compare(
    lhs: LogExpr,
    rhs: LogExpr,
    relation: str = "le",
    precision_bits: int = DEFAULT_PRECISION_BITS,
    max_bits: int | None = None,
) -> BoundVerdict:
    """Certified comparison of two log-domain expressions.

    Exact ties are resolved symbolically (margin exactly 0); otherwise the
    difference is evaluated in interval arithmetic, doubling the working
    precision up to max_bits before conceding INCONCLUSIVE. Raising the
    precision can therefore never flip HOLDS to FAILS or back: a separated
    enclosure stays separated when it tightens.
    """
    if max_bits is None:
        max_bits = max(MAX_PRECISION_BITS, precision_bits)
    diff = (lhs - rhs).canonical()
    if not diff.terms:
        status = Verdict.HOLDS if relation in ("le", "ge", "eq") else Verdict.FAILS
        return BoundVerdict(status, 0.0, precision_bits, exact=True)
    bits = precision_bits
    while True:
        d = diff.evaluate(bits)  # lhs - rhs
        margin = -iv_mid_float(d)  # rhs - lhs
        if relation in ("le", "lt"):
            if d.b < 0:
                return BoundVerdict(Verdict.HOLDS, margin, bits)
            if d.a > 0:
                return BoundVerdict(Verdict.FAILS, margin, bits)
        elif relation in ("ge", "gt"):
            if d.a > 0:
                return BoundVerdict(Verdict.HOLDS, margin, bits)
            if d.b < 0:
                return BoundVerdict(Verdict.FAILS, margin, bits)
        elif relation == "eq":
            # a symbolic tie was already excluded; any separation refutes
            if d.b < 0 or d.a > 0:
                return BoundVerdict(Verdict.FAILS, margin, bits)
        else:
            raise ValueError(f"unknown relation {relation!r}")
        if bits >= max_bits:
            return BoundVerdict(Verdict.INCONCLUSIVE, margin, bits)
        bits = min(2 * bits, max_bits)


# ---------------------------------------------------------------------------
# Primality (used to validate FactoredInteger keys)
# ---------------------------------------------------------------------------

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_probable_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24 with the fixed witness set."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def exact_lcm(values: Iterable[int]) -> int:
    """Plain big-integer lcm of absolute values; errors on empty or zero."""
    out = 1
    seen = False
    for v in values:
        seen = True
        v = abs(v)
        if v == 0:
            raise ValueError("lcm over a zero term is undefined")
        out = out * (v // math.gcd(out, v))
    if not seen:
        raise ValueError("lcm of an empty list is undefined")
    return out
