"""Sequence families and the strong-divisibility machinery.

A sequence (a_n) is strongly divisible when gcd(a_n, a_m) = a_gcd(n, m).
Every such sequence factors as a_n = prod_{d | n} u_d for a unique positive
integer sequence u, and lcm(a_1..a_n) = u_1 * ... * u_n. Two independent
routes recover u: Moebius inversion (u_n = prod a_{n/d}^mu(d)) and the
quotient of consecutive running lcms; they must agree on strong-divisibility
input and the second is the default because its intermediates stay integral.

Index conventions: strong-divisibility style families (naturals, quadratic,
Lucas, q-powers, polynomial, explicit) are 1-based, matching a_1 as the
first term; arithmetic progressions and the general quadratic family
a*k*(k+t) + b are 0-based, u_0 first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .exact_arith import exact_lcm


# ---------------------------------------------------------------------------
# Sequence specs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Naturals:
    def terms(self, n: int) -> list[int]:
        return list(range(1, n + 1))

    text = "nat"
    index_base = 1


@dataclass(frozen=True)
class Arithmetic:
    u0: int
    r: int
    index_base = 0

    def __post_init__(self):
        if self.u0 < 1 or self.r < 1:
            raise ValueError("arithmetic progression needs positive u0 and r")

    def terms(self, n: int) -> list[int]:
        return [self.u0 + k * self.r for k in range(n + 1)]

    @property
    def text(self):
        return f"ap:{self.u0},{self.r}"


@dataclass(frozen=True)
class Quadratic:
    c: int
    index_base = 1

    def __post_init__(self):
        if self.c < 1:
            raise ValueError("quadratic family needs c >= 1")

    def terms(self, n: int) -> list[int]:
        return [k * k + self.c for k in range(1, n + 1)]

    @property
    def text(self):
        return f"quad:{self.c}"


@dataclass(frozen=True)
class QuadraticGeneral:
    """u_k = a*k*(k + t) + b for k >= 0."""

    a: int
    b: int
    t: int
    index_base = 0

    def __post_init__(self):
        if self.a < 1 or self.b < 1 or self.t < 0:
            raise ValueError("need a, b >= 1 and t >= 0")

    def terms(self, n: int) -> list[int]:
        return [self.a * k * (k + self.t) + self.b for k in range(n + 1)]

    @property
    def text(self):
        return f"quadgen:{self.a},{self.b},{self.t}"


@dataclass(frozen=True)
class Lucas:
    """U_0 = 0, U_1 = 1, U_{n+2} = P*U_{n+1} - Q*U_n.

    Terms keep their sign; lcm/gcd consumers take absolute values, under
    which the sequence is strongly divisible whenever gcd(P, Q) = 1.
    """

    P: int
    Q: int
    index_base = 1

    def __post_init__(self):
        if self.P == 0 or self.Q == 0:
            raise ValueError("Lucas parameters must be non-zero")
        if math.gcd(self.P, self.Q) != 1:
            raise ValueError("Lucas parameters must be coprime")

    def terms(self, n: int) -> list[int]:
        out = []
        u, v = 0, 1  # U_0, U_1
        for _ in range(n):
            out.append(v)
            u, v = v, self.P * v - self.Q * u
        return out

    @property
    def discriminant(self) -> int:
        return self.P * self.P - 4 * self.Q

    @property
    def text(self):
        return f"lucas:{self.P},{self.Q}"


@dataclass(frozen=True)
class QPower:
    """[n]_q = (q^n - 1)/(q - 1) at an integer base q >= 2."""

    q: int
    index_base = 1

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("q must be an integer >= 2")

    def terms(self, n: int) -> list[int]:
        return [(self.q**k - 1) // (self.q - 1) for k in range(1, n + 1)]

    @property
    def text(self):
        return f"qpow:{self.q}"


@dataclass(frozen=True)
class Polynomial:
    """f(k) for k >= 1, f non-constant with non-negative integer coefficients."""

    coeffs: tuple  # ascending degree
    index_base = 1

    def __post_init__(self):
        cs = tuple(int(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", cs)
        if len(cs) < 2 or all(c == 0 for c in cs[1:]):
            raise ValueError("polynomial must be non-constant")
        if any(c < 0 for c in cs):
            raise ValueError("polynomial coefficients must be non-negative")

    def eval(self, k: int) -> int:
        out = 0
        for c in reversed(self.coeffs):
            out = out * k + c
        return out

    def terms(self, n: int) -> list[int]:
        return [self.eval(k) for k in range(1, n + 1)]

    @property
    def text(self):
        return "poly:" + ",".join(str(c) for c in self.coeffs)


@dataclass(frozen=True)
class Explicit:
    values: tuple
    index_base = 1

    def __post_init__(self):
        vs = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vs)
        if not vs or any(v < 1 for v in vs):
            raise ValueError("explicit sequence needs positive terms")

    def terms(self, n: int) -> list[int]:
        if n > len(self.values):
            raise ValueError("explicit sequence too short")
        return list(self.values[:n])

    @property
    def text(self):
        return "explicit:" + ",".join(str(v) for v in self.values)


SequenceSpec = Union[
    Naturals, Arithmetic, Quadratic, QuadraticGeneral, Lucas, QPower, Polynomial, Explicit
]

FIBONACCI = Lucas(1, -1)


def parse_spec(text: str) -> SequenceSpec:
    """Parse the canonical text form, e.g. 'lucas:3,2', 'quad:1', 'nat', 'fib'."""
    text = text.strip()
    if text == "nat":
        return Naturals()
    if text == "fib":
        return FIBONACCI
    if ":" not in text:
        raise ValueError(f"cannot parse sequence spec {text!r}")
    kind, _, body = text.partition(":")
    try:
        args = [int(tok) for tok in body.split(",") if tok != ""]
    except ValueError:
        raise ValueError(f"non-integer parameter in spec {text!r}") from None
    match kind:
        case "ap" if len(args) == 2:
            return Arithmetic(*args)
        case "quad" if len(args) == 1:
            return Quadratic(*args)
        case "quadgen" if len(args) == 3:
            return QuadraticGeneral(*args)
        case "lucas" if len(args) == 2:
            return Lucas(*args)
        case "qpow" if len(args) == 1:
            return QPower(*args)
        case "poly" if len(args) >= 2:
            return Polynomial(tuple(args))
        case "explicit" if args:
            return Explicit(tuple(args))
    raise ValueError(f"cannot parse sequence spec {text!r}")


def generate(spec: SequenceSpec, n: int) -> list[int]:
    """Exact terms: a_1..a_n for 1-based families, u_0..u_n for 0-based ones."""
    if n < 1:
        raise ValueError("n must be >= 1")
    terms = spec.terms(n)
    if not isinstance(spec, Lucas) and any(t <= 0 for t in terms):
        raise ValueError("non-positive term in generated sequence")
    return terms


def lucas_closed_form(P: int, Q: int, n: int) -> int:
    """U_n via ((P + sqrt(D))/2)^n = (A + B sqrt(D))/2^n: U_n = B / 2^(n-1).

    Exact integer arithmetic in Z[sqrt(D)], requires D = P^2 - 4Q > 0.
    """
    disc = P * P - 4 * Q
    if disc <= 0:
        raise ValueError("closed form needs a positive discriminant")
    a, b = 1, 0  # (a + b sqrt(D)) running power of (P + sqrt(D))
    for _ in range(n):
        a, b = P * a + disc * b, a + P * b
    # (P + sqrt(D))^n = a + b sqrt(D), so U_n = 2b / 2^n
    num = b * 2
    den = 1 << n
    if num % den:
        raise AssertionError("closed form did not stay integral")
    return num // den


# ---------------------------------------------------------------------------
# Sylvester's sequence
# ---------------------------------------------------------------------------

SYLVESTER_CAP = 8


def sylvester(count: int) -> list[int]:
    """2, 3, 7, 43, 1807, ...; b_{n+1} = b_1*...*b_n + 1 = b_n^2 - b_n + 1.

    Capped at 8 terms: the terms square at each step, and for Myerson-style
    quotients every b beyond the target n contributes floor(n/b) = 0 anyway.
    """
    if not 1 <= count <= SYLVESTER_CAP:
        raise ValueError(f"count must be in [1, {SYLVESTER_CAP}]")
    out = [2]
    prod = 2
    while len(out) < count:
        nxt = prod + 1
        if nxt != out[-1] * out[-1] - out[-1] + 1:
            raise AssertionError("sylvester recurrences disagree")
        out.append(nxt)
        prod *= nxt
    return out


# ---------------------------------------------------------------------------
# u-decomposition
# ---------------------------------------------------------------------------


class NotStrongDivisibilityError(ValueError):
    """Raised when a u-extraction meets a non-integral intermediate."""


@dataclass(frozen=True)
class UDecomposition:
    u: tuple
    source: str  # "moebius" | "nowicki"

    def __iter__(self):
        return iter(self.u)

    def __len__(self):
        return len(self.u)

    def __getitem__(self, i):
        return self.u[i]


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _moebius(n: int) -> int:
    mu = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            mu = -mu
        d += 1
    if n > 1:
        mu = -mu
    return mu


def extract_u(terms: list[int], method: str = "nowicki") -> UDecomposition:
    """Recover u with a_m = prod_{d | m} u_d, for strong-divisibility input.

    nowicki: u_m = lcm(a_1..a_m) / lcm(a_1..a_{m-1}), integer by construction.
    moebius: u_m = prod_{d | m} a_{m/d}^mu(d); a non-integral intermediate
    signals that the input is not a strong divisibility sequence.
    """
    vals = [abs(t) for t in terms]
    if any(v == 0 for v in vals):
        raise ValueError("zero term in sequence")
    if method == "nowicki":
        us = []
        running = 1
        for v in vals:
            nxt = running * (v // math.gcd(running, v))
            us.append(nxt // running)
            running = nxt
        return UDecomposition(tuple(us), "nowicki")
    if method == "moebius":
        us = []
        for m in range(1, len(vals) + 1):
            num = 1
            den = 1
            for d in _divisors(m):
                mu = _moebius(d)
                if mu == 1:
                    num *= vals[m // d - 1]
                elif mu == -1:
                    den *= vals[m // d - 1]
            u, rem = divmod(num, den)
            if rem:
                raise NotStrongDivisibilityError(
                    f"u_{m} = {num}/{den} is not an integer; "
                    "input is not a strong divisibility sequence"
                )
            us.append(u)
        return UDecomposition(tuple(us), "moebius")
    raise ValueError(f"unknown extraction method {method!r}")


def u_via_prime_quotient(terms: list[int], m: int) -> Fraction:
    """u_m = a_m / lcm(a_{m/q} : q prime factor of m); u_1 = a_1.

    Independent cross-check route for extract_u.
    """
    vals = [abs(t) for t in terms]
    if m == 1:
        return Fraction(vals[0])
    qs = sorted(set(_prime_factors(m)))
    denom = exact_lcm([vals[m // q - 1] for q in qs])
    return Fraction(vals[m - 1], denom)


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_strong_divisibility(terms: list[int]) -> tuple[bool, tuple[int, int] | None]:
    """Test gcd(a_i, a_j) = a_gcd(i, j) for all pairs; 1-based witness on failure.

    Runs both the direct pairwise test and the u-criterion (u exists with
    a_n = prod_{d|n} u_d and u coprime at incomparable indices) and insists
    they agree.
    """
    vals = [abs(t) for t in terms]
    n = len(vals)
    direct_ok, witness = True, None
    for j in range(2, n + 1):
        for i in range(1, j):
            if math.gcd(vals[i - 1], vals[j - 1]) != vals[math.gcd(i, j) - 1]:
                direct_ok, witness = False, (i, j)
                break
        if not direct_ok:
            break

    u_ok = _u_criterion(vals)
    if u_ok != direct_ok:
        raise AssertionError(
            "direct strong-divisibility test and u-criterion disagree"
        )
    return direct_ok, witness


def _u_criterion(vals: list[int]) -> bool:
    """Nowicki u must reproduce the terms and be coprime at incomparable indices."""
    us = extract_u(vals, "nowicki").u
    for m in range(1, len(vals) + 1):
        prod = 1
        for d in _divisors(m):
            prod *= us[d - 1]
        if prod != vals[m - 1]:
            return False
    for j in range(2, len(vals) + 1):
        for i in range(2, j):
            if j % i and i % j and math.gcd(us[i - 1], us[j - 1]) != 1:
                return False
    return True


def champions(terms: list[int], p: int) -> list[int]:
    """Indices where the p-adic valuation strictly exceeds all earlier ones.

    Index 1 is a champion exactly when p divides a_1. For strong divisibility
    sequences these are precisely the indices m with v_p(u_m) > 0, and
    consecutive champions divide each other.
    """
    vals = [abs(t) for t in terms]
    out = []
    best = 0
    for m, v in enumerate(vals, start=1):
        e = 0
        while v % p == 0:
            v //= p
            e += 1
        if (m == 1 and e > 0) or (m > 1 and e > best):
            out.append(m)
        best = max(best, e)
    return out


def lcm_via_u(terms: list[int]) -> int:
    """lcm(a_1..a_n) as the product u_1 * ... * u_n.

    Returns the exact integer. (A factored-form result is not generally
    reachable here: u-terms of Lucas-type sequences have prime factors far
    beyond any sieve.)
    """
    out = 1
    for u in extract_u(terms, "nowicki"):
        out *= u
    return out


def myerson_divisor(terms: list[int], b: list[int], n: int) -> Fraction:
    """Quotient a_1*...*a_n / prod_i (prod_{k <= n/b_i} a_k).

    Requires sum 1/b_i <= 1 (checked exactly); for strong divisibility input
    the quotient is a positive integer divisible by lcm(a_1..a_n).
    """
    if n < 1 or len(terms) < n:
        raise ValueError("need at least n terms")
    recip = sum((Fraction(1, bi) for bi in b), Fraction(0))
    if recip > 1:
        raise ValueError(f"sum of reciprocals {recip} exceeds 1")
    vals = [abs(t) for t in terms]
    num = math.prod(vals[:n])
    den = 1
    for bi in b:
        den *= math.prod(vals[: n // bi])
    return Fraction(num, den)
