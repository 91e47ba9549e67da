"""Generalized binomial coefficients over strong divisibility sequences and
the exact lcm/gcd identities built on them.

For a strong divisibility sequence a, define the a-factorial [n]! = a_1...a_n
and the a-binomial C_a(n, k) = [n]! / ([k]! [n-k]!). These are integers, and

    lcm{C_a(n, 0), ..., C_a(n, n)} = lcm(a_1, ..., a_{n+1}) / a_{n+1}

specialises to Farhi's binomial-lcm identity at a_n = n and to Guo's
q-binomial identity at a_n = (q^n - 1)/(q - 1). Everything here is verified
by exact big-integer arithmetic; the two sides of each identity are computed
by unrelated routes (coefficient lcm/gcd accumulation versus direct term
lcm), so an implementation slip on one side cannot cancel on the other.

Hanson's quotient C(n) = n! / prod([n/b]!) over the Sylvester sequence b is
also here: it is an integer multiple of lcm(1..n), which is the engine
behind the 3^n upper bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact_arith import BoundVerdict, Verdict, exact_lcm
from .report import BoundReport
from .sequences import (
    Naturals,
    SequenceSpec,
    extract_u,
    generate,
    sylvester,
)

_EXACT = dict(precision_bits=0, exact=True)


def _exact_verdict(ok: bool, margin: float | None = None) -> BoundVerdict:
    return BoundVerdict(Verdict.HOLDS if ok else Verdict.FAILS, margin, **_EXACT)


def _log(n: int) -> float:
    return math.log(n) if n > 0 else float("-inf")


# ---------------------------------------------------------------------------
# a-binomial coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ABinomialRow:
    spec: SequenceSpec
    n: int
    coeffs: tuple

    def __getitem__(self, k):
        return self.coeffs[k]


def _abs_terms(spec: SequenceSpec, n: int) -> list[int]:
    if n < 1:
        return []
    return [abs(t) for t in generate(spec, n)]


def row_entries_half(terms: list[int], n: int) -> list[int]:
    """C_a(n, k) for k = 0..n//2, incremental exact quotients.

    terms must hold a_1..a_n (absolute values). Division is exact precisely
    when the sequence is strongly divisible; a remainder raises.
    """
    out = [1]
    c = 1
    for k in range(1, n // 2 + 1):
        c, rem = divmod(c * terms[n - k], terms[k - 1])
        if rem:
            raise ValueError("a-binomial ratio not integral: sequence is not strong-divisibility")
        out.append(c)
    return out


def a_binomial(spec: SequenceSpec, n: int, k: int) -> int:
    """C_a(n, k), computed two ways (factorial ratio and u-product) and checked.

    The u-product route multiplies u_d over divisors d <= n with
    floor(k/d) + floor((n-k)/d) < floor(n/d).
    """
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    if k in (0, n):
        return 1
    terms = _abs_terms(spec, n)
    num = den = 1
    for j in range(k):
        num *= terms[n - 1 - j]
        den *= terms[j]
    ratio, rem = divmod(num, den)
    if rem:
        raise ValueError("a-binomial ratio not integral: sequence is not strong-divisibility")
    us = extract_u(terms, "nowicki").u
    prod = 1
    for d in range(1, n + 1):
        if k // d + (n - k) // d < n // d:
            prod *= us[d - 1]
    if prod != ratio:
        raise AssertionError("factorial-ratio and u-product a-binomial routes disagree")
    return ratio


def a_binomial_row(spec: SequenceSpec, n: int) -> ABinomialRow:
    terms = _abs_terms(spec, n)
    half = row_entries_half(terms, n)
    coeffs = half + [half[n - k] for k in range(n // 2 + 1, n + 1)]
    return ABinomialRow(spec, n, tuple(coeffs))


def _lcm_accumulate(acc: int, value: int) -> int:
    if value in (0, 1):
        if value == 0:
            raise ValueError("lcm over zero")
        return acc
    if acc % value:
        return acc * (value // math.gcd(acc, value))
    return acc


def row_lcm(terms: list[int], n: int) -> int:
    """lcm of the full a-binomial row n, using symmetry C(n,k) = C(n,n-k)."""
    if n == 0:
        return 1
    entries = row_entries_half(terms, n)
    acc = 1
    for c in sorted(entries, key=lambda v: -v.bit_length()):  # biggest first
        acc = _lcm_accumulate(acc, c)
    return acc


# ---------------------------------------------------------------------------
# Identity checks
# ---------------------------------------------------------------------------


def farhi_identity_check(n: int) -> BoundReport:
    """lcm of binomial row n equals lcm(1, ..., n+1) / (n+1), exactly."""
    terms = list(range(1, n + 2))
    lhs = row_lcm(terms, n)
    rhs, rem = divmod(exact_lcm(terms), n + 1)
    ok = rem == 0 and lhs == rhs
    return BoundReport(
        "farhi_identity", {"n": n}, _exact_verdict(ok, 0.0 if ok else None),
        lhs_log=_log(lhs), rhs_log=_log(rhs),
    )


def general_identity_check(spec: SequenceSpec, n: int) -> BoundReport:
    """lcm of a-binomial row n equals lcm(a_1..a_{n+1}) / a_{n+1}, exactly."""
    terms = _abs_terms(spec, n + 1)
    lhs = row_lcm(terms, n)
    rhs, rem = divmod(exact_lcm(terms), terms[n])
    ok = rem == 0 and lhs == rhs
    return BoundReport(
        "general_identity", {"spec": spec.text, "n": n},
        _exact_verdict(ok, 0.0 if ok else None),
        lhs_log=_log(lhs), rhs_log=_log(rhs),
    )


def corollary_39_check(spec: SequenceSpec, n: int) -> BoundReport:
    """lcm(a_1..a_n) equals lcm{a_k * C_a(n, k) : 1 <= k <= n}, exactly."""
    if n < 1:
        raise ValueError("n must be >= 1")
    terms = _abs_terms(spec, n)
    lhs = exact_lcm(terms)
    half = row_entries_half(terms, n)
    products = [terms[k - 1] * half[min(k, n - k)] for k in range(1, n + 1)]
    rhs = 1
    for v in sorted(products, key=lambda v: -v.bit_length()):
        rhs = _lcm_accumulate(rhs, v)
    ok = lhs == rhs
    return BoundReport(
        "cor_3_9", {"spec": spec.text, "n": n},
        _exact_verdict(ok, 0.0 if ok else None),
        lhs_log=_log(lhs), rhs_log=_log(rhs),
    )


def corollary_310_check(spec: SequenceSpec, n: int) -> BoundReport:
    """lcm(a_1..a_n) equals gcd{C_a(n, k) * lcm(a_1..a_k) : n/2 <= k <= n}.

    k runs over integers from ceil(n/2) to n; the k = n entry alone already
    equals the left side, so the gcd can only shrink down to it.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    terms = _abs_terms(spec, n)
    prefix = [1]
    for t in terms:
        prefix.append(_lcm_accumulate(prefix[-1], t))
    lhs = prefix[n]
    half = row_entries_half(terms, n)
    g = 0
    for k in range(n, (n + 1) // 2 - 1, -1):
        entry = half[min(k, n - k)] * prefix[k]
        if g == 0:
            g = entry
        elif entry % g:
            g = math.gcd(g, entry)
    ok = g == lhs
    return BoundReport(
        "cor_3_10", {"spec": spec.text, "n": n},
        _exact_verdict(ok, 0.0 if ok else None),
        lhs_log=_log(lhs), rhs_log=_log(g),
    )


def identity_grid(spec: SequenceSpec, n_values, checks=("general_identity", "cor_3_9", "cor_3_10")):
    """Run several identity checks over a shared terms/prefix computation.

    Yields BoundReports in (n, check) order. Far cheaper than calling the
    single-shot checks in a loop because terms, row halves, and prefix lcms
    are computed once per n.
    """
    n_values = sorted(set(n_values))
    if not n_values:
        return
    n_max = max(n_values)
    need_cor = "cor_3_9" in checks or "cor_3_10" in checks
    terms = _abs_terms(spec, n_max + 1)
    prefix = [1]
    for t in terms:
        prefix.append(_lcm_accumulate(prefix[-1], t))
    for n in n_values:
        half = row_entries_half(terms, n)
        if "general_identity" in checks or "farhi_identity" in checks:
            acc = 1
            for c in sorted(half, key=lambda v: -v.bit_length()):
                acc = _lcm_accumulate(acc, c)
            rhs, rem = divmod(prefix[n + 1], terms[n])
            ok = rem == 0 and acc == rhs
            cid = "farhi_identity" if isinstance(spec, Naturals) and "farhi_identity" in checks else "general_identity"
            params = {"n": n} if cid == "farhi_identity" else {"spec": spec.text, "n": n}
            yield BoundReport(cid, params, _exact_verdict(ok, 0.0 if ok else None),
                              lhs_log=_log(acc), rhs_log=_log(rhs))
        if n >= 1 and need_cor:
            if "cor_3_9" in checks:
                rhs39 = 1
                prods = [terms[k - 1] * half[min(k, n - k)] for k in range(1, n + 1)]
                for v in sorted(prods, key=lambda v: -v.bit_length()):
                    rhs39 = _lcm_accumulate(rhs39, v)
                ok = rhs39 == prefix[n]
                yield BoundReport("cor_3_9", {"spec": spec.text, "n": n},
                                  _exact_verdict(ok, 0.0 if ok else None),
                                  lhs_log=_log(prefix[n]), rhs_log=_log(rhs39))
            if "cor_3_10" in checks:
                g = 0
                for k in range(n, (n + 1) // 2 - 1, -1):
                    entry = half[min(k, n - k)] * prefix[k]
                    if g == 0:
                        g = entry
                    elif entry % g:
                        g = math.gcd(g, entry)
                ok = g == prefix[n]
                yield BoundReport("cor_3_10", {"spec": spec.text, "n": n},
                                  _exact_verdict(ok, 0.0 if ok else None),
                                  lhs_log=_log(prefix[n]), rhs_log=_log(g))


# ---------------------------------------------------------------------------
# Hanson's quotient and Nair's divisor
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HansonQuotient:
    n: int
    value: Fraction
    lcm_divides: bool
    below_3n: bool

    @property
    def is_integer(self) -> bool:
        return self.value.denominator == 1


def hanson_C(n: int) -> HansonQuotient:
    """C(n) = n! / ([n/2]! [n/3]! [n/7]! [n/43]! ...), Sylvester denominators.

    An integer, a multiple of lcm(1..n), and (the content of the 3^n bound)
    at most 3^n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    bs = [b for b in sylvester(_sylvester_terms_needed(n)) if b <= n]
    den = 1
    for b in bs:
        den *= math.factorial(n // b)
    value = Fraction(math.factorial(n), den)
    if value.denominator != 1:
        raise AssertionError("Hanson quotient must be an integer")
    d_n = exact_lcm(range(1, n + 1))
    return HansonQuotient(
        n, value,
        lcm_divides=value.numerator % d_n == 0,
        below_3n=value.numerator <= 3**n,
    )


def _sylvester_terms_needed(n: int) -> int:
    """Enough Sylvester terms that the next one exceeds n (b_8 > 10^25)."""
    count = 1
    b = 2
    while b <= n and count < 8:
        count += 1
        b = b * b - b + 1
    return count


def nair_divisor_check(k: int, l: int) -> BoundReport:
    """l * binomial(k, l) divides lcm(1..k), exactly."""
    if not 1 <= l <= k:
        raise ValueError("need 1 <= l <= k")
    d_k = exact_lcm(range(1, k + 1))
    value = l * math.comb(k, l)
    ok = d_k % value == 0
    return BoundReport(
        "nair_divisor", {"k": k, "l": l}, _exact_verdict(ok, 0.0 if ok else None),
        lhs_log=_log(value), rhs_log=_log(d_k),
    )
