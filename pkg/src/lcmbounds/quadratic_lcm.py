"""lcm of the quadratic family k^2 + c over k = m..n, written L(c, m, n), and
the nontrivial rational divisor it carries.

The route: L(c,m,n) * (n-m)! is a Z[sqrt(-c)]-multiple of the product
P = prod_{k=m..n} (k + sqrt(-c)), and an integer N is a multiple of
a + b*sqrt(-c) exactly when (a^2 + c b^2)/gcd(a, b) divides N. Writing
h_c(a + b sqrt(-c)) = gcd(a, b), the whole game is bounding h_c(P): it
always divides c * prod_{l=1..n-m} (l^2 + 4c), which is proved through an
explicit Bezout inverse sigma_k of P_k(X) = (X + sqrt(-c)) ... (X - k + sqrt(-c))
modulo its conjugate. Both the interpolation sum and the closed product
formula for sigma_k's coefficients are implemented and must agree exactly.

Falling powers follow Knuth's convention z^(k falling) = z (z-1) ... (z-k+1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv

from .exact_arith import (
    BoundVerdict,
    DEFAULT_PRECISION_BITS,
    FactoredInteger,
    QuadraticInteger,
    QuadRational,
    Verdict,
    _IvPrec,
    compare_intervals,
    is_multiple_of_rational,
    iv_from_rational,
    iv_mid_float,
    lcm_factored,
    quad_product,
)
from .report import BoundReport

BEZOUT_DEGREE_CAP = 64


@dataclass(frozen=True)
class QuadraticLcmInstance:
    c: int
    m: int
    n: int

    def __post_init__(self):
        if self.c < 1 or self.m < 1 or self.n < self.m:
            raise ValueError("need c >= 1 and 1 <= m <= n")


def L_quadratic(inst: QuadraticLcmInstance, table) -> FactoredInteger:
    """Exact lcm of k^2 + c for k = m..n, in factored form."""
    terms = [
        FactoredInteger.from_int(k * k + inst.c, table)
        for k in range(inst.m, inst.n + 1)
    ]
    return lcm_factored(terms)


def L_quadratic_int(inst: QuadraticLcmInstance) -> int:
    """Exact lcm of k^2 + c for k = m..n as a plain big integer."""
    out = 1
    for k in range(inst.m, inst.n + 1):
        t = k * k + inst.c
        out = out * (t // math.gcd(out, t))
    return out


def h_c(z: QuadraticInteger) -> int:
    """gcd of the two integer coordinates of a non-zero a + b*sqrt(-c)."""
    if z.is_zero():
        raise ValueError("h_c is undefined at zero")
    return math.gcd(abs(z.re), abs(z.im))


def shifted_product(c: int, m: int, n: int) -> QuadraticInteger:
    """prod_{l=m..n} (l + sqrt(-c)) in Z[sqrt(-c)]."""
    return quad_product(c, (QuadraticInteger(c, l, 1) for l in range(m, n + 1)))


def hc_divisor_bound(c: int, m: int, n: int) -> int:
    """c * prod_{l=1..n-m} (l^2 + 4c); the guaranteed multiple of h_c."""
    out = c
    for l in range(1, n - m + 1):
        out *= l * l + 4 * c
    return out


def hc_multiple_check(c: int, m: int, n: int) -> BoundReport:
    """h_c(prod (l + sqrt(-c))) divides c * prod (l^2 + 4c), exactly."""
    inst = QuadraticLcmInstance(c, m, n)
    h = h_c(shifted_product(c, m, n))
    bound = hc_divisor_bound(c, m, n)
    ok = bound % h == 0
    return BoundReport(
        "thm_2_10", {"c": c, "m": m, "n": n},
        BoundVerdict(Verdict.HOLDS if ok else Verdict.FAILS, None, 0, exact=True),
        lhs_log=math.log(h), rhs_log=math.log(bound),
    )


# ---------------------------------------------------------------------------
# Bezout coefficients
# ---------------------------------------------------------------------------


def _falling_elements(c: int, start: Fraction | int, im: Fraction | int, count: int) -> QuadRational:
    """(start + im*sqrt(-c)) (start - 1 + im*sqrt(-c)) ... , count factors."""
    acc = QuadRational(c, 1, 0)
    for i in range(count):
        acc = acc * QuadRational(c, Fraction(start) - i, im)
    return acc


def p_k_at(c: int, k: int, z: QuadRational) -> QuadRational:
    """P_k(z) = prod_{i=0..k} (z - i + sqrt(-c)) evaluated exactly."""
    acc = QuadRational(c, 1, 0)
    for i in range(k + 1):
        acc = acc * (z - i + QuadRational(c, 0, 1))
    return acc


@dataclass(frozen=True)
class BezoutCoefficients:
    """Coefficients theta[l] of sigma_k(X) = sum theta_l * (X - sqrt(-c))^(l falling)."""

    c: int
    k: int
    theta: tuple  # QuadRational entries, length k+1

    def sigma_at_shifted(self, s: int) -> QuadRational:
        """sigma_k(s + sqrt(-c)); the falling powers collapse to s^(l falling)."""
        total = QuadRational(self.c, 0, 0)
        fp = 1
        for l, th in enumerate(self.theta):
            if l > 0:
                fp *= s - (l - 1)
            total = total + th * fp
        return total

    def sigma_at_int(self, x: int) -> QuadRational:
        """sigma_k(x) for integer x; (x - sqrt(-c))^(l falling) in the ring."""
        total = QuadRational(self.c, 0, 0)
        fp = QuadRational(self.c, 1, 0)
        for l, th in enumerate(self.theta):
            if l > 0:
                fp = fp * QuadRational(self.c, x - (l - 1), -1)
            total = total + th * fp
        return total


def bezout_coefficients(c: int, k: int, cap: int = BEZOUT_DEGREE_CAP) -> BezoutCoefficients:
    """Both routes to the theta coefficients, checked against each other.

    Interpolation sum:    theta_l = (1/l!) sum_j (-1)^(l-j) C(l,j) / P_k(j + sqrt(-c))
    Closed form:          theta_l = (-1)^(k+l) C(k+l,l) /
                          (2 sqrt(-c) * (k - 2 sqrt(-c))^(k falling)
                                      * (l + 2 sqrt(-c))^(l falling))
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if k > cap:
        raise ValueError(f"k={k} exceeds the coefficient-height cap {cap}")
    inv_pk = [
        p_k_at(c, k, QuadRational(c, j, 1)).inverse() for j in range(k + 1)
    ]
    theta = []
    for l in range(k + 1):
        total = QuadRational(c, 0, 0)
        for j in range(l + 1):
            total = total + ((-1) ** (l - j) * math.comb(l, j)) * inv_pk[j]
        theta.append(Fraction(1, math.factorial(l)) * total)

    two_root = QuadRational(c, 0, 2)
    k_fall = _falling_elements(c, k, -2, k)  # (k - 2 sqrt(-c))^(k falling)
    for l in range(k + 1):
        l_fall = _falling_elements(c, l, 2, l)
        closed = ((-1) ** (k + l) * math.comb(k + l, l)) * (
            two_root * k_fall * l_fall
        ).inverse()
        if closed != theta[l]:
            raise AssertionError(
                f"Bezout coefficient mismatch at c={c}, k={k}, l={l}"
            )
    return BezoutCoefficients(c, k, tuple(theta))


def bezout_residual_check(c: int, k: int) -> BoundReport:
    """sigma_k(s + sqrt(-c)) * P_k(s + sqrt(-c)) = 1 for s = 0..k, exactly.

    Also clears denominators: with d = c * prod_{l=1..k} (l^2 + 4c), the
    polynomial 2 d sigma_k must have Z[sqrt(-c)] coefficients, and writing
    2 d sigma_k = r + s sqrt(-c) the identity r A - c s B = d holds at
    sampled integer arguments, where P_k = A + B sqrt(-c).
    """
    bez = bezout_coefficients(c, k)
    one = QuadRational(c, 1, 0)
    ok = True
    for s in range(k + 1):
        if bez.sigma_at_shifted(s) * p_k_at(c, k, QuadRational(c, s, 1)) != one:
            ok = False
            break
    d = hc_divisor_bound(c, 0, k)  # c * prod_{l<=k} (l^2 + 4c)
    if ok:
        for th in bez.theta:
            x = 2 * d * th.re
            y = 2 * d * th.im
            if x.denominator != 1 or y.denominator != 1:
                ok = False
                break
    if ok:
        for x in (k + 1, k + 7, 3 * k + 20):
            sig = bez.sigma_at_int(x)
            r = 2 * d * sig.re
            s_ = 2 * d * sig.im
            pk = shifted_product(c, x - k, x)  # P_k(x) in Z[sqrt(-c)]
            if r * pk.re - c * s_ * pk.im != d:
                ok = False
                break
    return BoundReport(
        "bezout_residual", {"c": c, "k": k},
        BoundVerdict(Verdict.HOLDS if ok else Verdict.FAILS, None, 0, exact=True),
    )


# ---------------------------------------------------------------------------
# The rational divisor and the lower bounds
# ---------------------------------------------------------------------------


def quadratic_divisor(inst: QuadraticLcmInstance) -> Fraction:
    """prod_{k=m..n} (k^2+c) / (c * (n-m)! * prod_{k=1..n-m} (k^2+4c)).

    L(c,m,n) is an integer multiple of this rational number.
    """
    num = 1
    for k in range(inst.m, inst.n + 1):
        num *= k * k + inst.c
    return Fraction(num, math.factorial(inst.n - inst.m) * hc_divisor_bound(inst.c, inst.m, inst.n))


def quadratic_divisor_check(c: int, m: int, n: int, L: int | None = None) -> BoundReport:
    inst = QuadraticLcmInstance(c, m, n)
    if L is None:
        L = L_quadratic_int(inst)
    d = quadratic_divisor(inst)
    ok = is_multiple_of_rational(L, d)
    return BoundReport(
        "thm_2_11_divisor", {"c": c, "m": m, "n": n},
        BoundVerdict(Verdict.HOLDS if ok else Verdict.FAILS, None, 0, exact=True),
        lhs_log=float(math.log(L)),
    )


def _lambda1(c: int):
    return iv.exp(-iv_from_rational(Fraction(2 * c, 3)) * iv.pi**2) / c


def _lambda2(c: int):
    expo = -iv_from_rational(Fraction(2 * c, 3)) * iv.pi**2 - iv_from_rational(Fraction(5, 12))
    return iv.exp(expo) / ((2 * iv.pi) ** iv_from_rational(Fraction(3, 2)) * c)


def _lambda3(c: int):
    expo = -iv_from_rational(Fraction(2 * c, 3)) * iv.pi**2 - iv_from_rational(Fraction(5, 12))
    return iv.exp(expo) / (iv.pi ** iv_from_rational(Fraction(3, 2)) * c)


def _log_fact(n: int):
    # interval ln(n!) via lgamma-free exact product; n stays desk-scale here
    return iv.log(iv_from_rational(math.factorial(n)))


def quadratic_lower_bounds(
    inst: QuadraticLcmInstance,
    bits: int = DEFAULT_PRECISION_BITS,
    L: int | None = None,
) -> list[BoundReport]:
    """Every applicable lower bound for L(c,m,n), one report each.

    oon_2n        L >= 2^n                      when m <= ceil(n/2)   (exact)
    eq_2_2_3      L >= m * binomial(n, m)       always                (exact)
    thm_2_11_lower L >= lambda1(c) m^2 n!^2 / (m!^2 (n-m)!^3)
    cor_2_12      L >= lambda2(c) n m / (n-m)^(3/2)
                       * (m^2/(n-m)^3)^(n-m) e^(3(n-m))   when m < n
    thm_2_13      L >= lambda3(c) (n - n^(2/3)/2) (2 e^3)^floor(n^(2/3)/2)
                                                when m <= n - n^(2/3)/2
    thm_2_14      L >= lambda2(c) n e^(3(n-m))  when n - n^(2/3)/2 <= m
    Bounds whose window excludes (c, m, n) are reported SKIPPED.
    """
    c, m, n = inst.c, inst.m, inst.n
    if L is None:
        L = L_quadratic_int(inst)
    reports: list[BoundReport] = []
    log_L_float = float(math.log(L))

    def exact_report(check_id, ok_or_none, rhs_log=None):
        if ok_or_none is None:
            v = BoundVerdict(Verdict.SKIPPED, None, 0, exact=True)
        else:
            v = BoundVerdict(Verdict.HOLDS if ok_or_none else Verdict.FAILS, None, 0, exact=True)
        reports.append(BoundReport(check_id, {"c": c, "m": m, "n": n}, v,
                                   lhs_log=log_L_float, rhs_log=rhs_log))

    exact_report(
        "oon_2n",
        (L >= 2**n) if m <= (n + 1) // 2 else None,
        rhs_log=n * math.log(2.0),
    )
    exact_report("eq_2_2_3", L >= m * math.comb(n, m), float(math.log(m * math.comb(n, m))))

    with _IvPrec(bits):
        log_L = iv.log(iv_from_rational(L))
        half_exact, half_iv = _half_n23(n)

        rhs1 = (
            iv.log(_lambda1(c))
            + 2 * iv.log(iv_from_rational(m))
            + 2 * _log_fact(n)
            - 2 * _log_fact(m)
            - 3 * _log_fact(n - m)
        )
        reports.append(
            BoundReport("thm_2_11_lower", {"c": c, "m": m, "n": n},
                        compare_intervals(log_L, rhs1, "ge", bits),
                        lhs_log=log_L_float, rhs_log=iv_mid_float(rhs1))
        )

        if m < n:
            gap = n - m
            rhs2 = (
                iv.log(_lambda2(c))
                + iv.log(iv_from_rational(n * m))
                - iv_from_rational(Fraction(3, 2)) * iv.log(iv_from_rational(gap))
                + gap * (2 * iv.log(iv_from_rational(m)) - 3 * iv.log(iv_from_rational(gap)))
                + 3 * gap
            )
            reports.append(
                BoundReport("cor_2_12", {"c": c, "m": m, "n": n},
                            compare_intervals(log_L, rhs2, "ge", bits),
                            lhs_log=log_L_float, rhs_log=iv_mid_float(rhs2))
            )
        else:
            reports.append(BoundReport("cor_2_12", {"c": c, "m": m, "n": n},
                                       BoundVerdict(Verdict.SKIPPED, None, bits)))

        # Window edges n - n^(2/3)/2 are decided exactly at perfect cubes,
        # by certified interval separation otherwise.
        if half_exact is not None:
            below = Fraction(m) <= n - half_exact
            above = Fraction(m) >= n - half_exact
            floor_half = math.floor(half_exact)
        else:
            below = bool(iv_from_rational(m) <= iv_from_rational(n) - half_iv)
            above = bool(iv_from_rational(m) >= iv_from_rational(n) - half_iv)
            floor_half = _floor_of_interval(half_iv)

        if below:
            rhs3 = (
                iv.log(_lambda3(c))
                + iv.log(iv_from_rational(n) - half_iv)
                + floor_half * (iv.log(iv.mpf(2)) + 3)
            )
            reports.append(
                BoundReport("thm_2_13", {"c": c, "m": m, "n": n},
                            compare_intervals(log_L, rhs3, "ge", bits),
                            lhs_log=log_L_float, rhs_log=iv_mid_float(rhs3))
            )
        else:
            reports.append(BoundReport("thm_2_13", {"c": c, "m": m, "n": n},
                                       BoundVerdict(Verdict.SKIPPED, None, bits)))

        if above:
            rhs4 = iv.log(_lambda2(c)) + iv.log(iv_from_rational(n)) + 3 * (n - m)
            reports.append(
                BoundReport("thm_2_14", {"c": c, "m": m, "n": n},
                            compare_intervals(log_L, rhs4, "ge", bits),
                            lhs_log=log_L_float, rhs_log=iv_mid_float(rhs4))
            )
        else:
            reports.append(BoundReport("thm_2_14", {"c": c, "m": m, "n": n},
                                       BoundVerdict(Verdict.SKIPPED, None, bits)))
    return reports


def _half_n23(n: int):
    """n^(2/3) / 2 as (exact Fraction or None, certified interval).

    Exact at perfect cubes; elsewhere the value is irrational so a tight
    interval decides window membership against rational m unambiguously.
    """
    r = round(n ** (1 / 3))
    for k in (r - 1, r, r + 1):
        if k >= 1 and k**3 == n:
            exact = Fraction(k * k, 2)
            return exact, iv_from_rational(exact)
    return None, iv_from_rational(n) ** iv_from_rational(Fraction(2, 3)) / 2


def _floor_of_interval(x) -> int:
    """Floor of an interval narrow enough not to straddle an integer."""
    lo = math.floor(float(mp_lower(x)))
    hi = math.floor(float(mp_upper(x)))
    if lo != hi:
        raise ValueError("interval straddles an integer; raise precision")
    return lo


def mp_lower(x):
    return x.a


def mp_upper(x):
    return x.b


def monotone_in_m_check(c: int, n: int) -> bool:
    """L(c, m, n) can only shrink as m grows (fewer terms in the lcm)."""
    prev = None
    for m in range(1, n + 1):
        val = L_quadratic_int(QuadraticLcmInstance(c, m, n))
        if prev is not None and val > prev:
            return False
        prev = val
    return True
