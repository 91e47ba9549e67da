"""Prime sieve, Chebyshev counting functions, and p-adic valuation tools.

The sieve stores the smallest prime factor of every integer up to its limit,
so factoring below the limit is a table walk and factoring up to limit**2
is trial division with a guaranteed-prime cofactor. The psi function is
always computed from prime powers, never from the lcm integer itself; that
keeps it usable at x = 10**6 where lcm(1..x) has hundreds of thousands of
digits. Real-valued outputs are certified interval enclosures.
"""

from __future__ import annotations

import bisect
import math
import numpy as np

from .exact_arith import (
    DEFAULT_PRECISION_BITS,
    _IvPrec,
    _is_probable_prime,
    iv_log,
)
from mpmath import iv

DEFAULT_SIEVE_LIMIT = 2 * 10**6


class PrimeTable:
    """Immutable smallest-prime-factor sieve up to a limit."""

    __slots__ = ("limit", "_spf", "primes", "_primes_list")

    def __init__(self, limit: int = DEFAULT_SIEVE_LIMIT):
        if limit < 2:
            raise ValueError("sieve limit must be at least 2")
        spf = np.zeros(limit + 1, dtype=np.int64)
        for p in range(2, math.isqrt(limit) + 1):
            if spf[p] == 0:
                view = spf[p * p :: p]
                view[view == 0] = p
        rest = np.flatnonzero(spf == 0)[2:]  # untouched entries >= 2 are prime
        spf[rest] = rest
        object.__setattr__(self, "limit", limit)
        object.__setattr__(self, "_spf", spf)
        object.__setattr__(self, "primes", rest)
        object.__setattr__(self, "_primes_list", rest.tolist())

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("PrimeTable is immutable")

    def smallest_factor(self, n: int) -> int:
        if not 2 <= n <= self.limit:
            raise ValueError(f"{n} outside sieve range [2, {self.limit}]")
        return int(self._spf[n])

    def is_prime(self, n: int) -> bool:
        if n <= self.limit:
            return n >= 2 and int(self._spf[n]) == n
        return _is_probable_prime(n)

    def primes_leq(self, x: float) -> list[int]:
        if x > self.limit:
            raise ValueError(f"{x} exceeds sieve limit {self.limit}")
        idx = bisect.bisect_right(self._primes_list, int(math.floor(x)))
        return self._primes_list[:idx]

    def prime_count(self, x: float) -> int:
        if x > self.limit:
            raise ValueError(f"{x} exceeds sieve limit {self.limit}")
        if x < 2:
            return 0
        return bisect.bisect_right(self._primes_list, int(math.floor(x)))

    def factor(self, n: int) -> dict[int, int]:
        """Prime factorisation for 1 <= n <= limit**2."""
        if n < 1:
            raise ValueError("can only factor positive integers")
        out: dict[int, int] = {}
        if n <= self.limit:
            spf = self._spf
            while n > 1:
                p = int(spf[n])
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out[p] = e
            return out
        if n > self.limit * self.limit:
            raise ValueError(
                f"{n} exceeds limit**2 = {self.limit**2}; cofactor primality "
                "would be unproven (sieve a larger table)"
            )
        m = n
        for p in self._primes_list:
            if p * p > m:
                break
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                out[p] = e
        if m > 1:
            out[m] = out.get(m, 0) + 1  # cofactor <= limit**2 with no factor <= sqrt: prime
        return out

    def valuation(self, n: int, p: int) -> int:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        return e


def chebyshev(table: PrimeTable, which: str, x: float, bits: int = DEFAULT_PRECISION_BITS):
    """theta(x) = sum of log p over p <= x; psi(x) adds every prime power.

    Returns a certified interval. psi is assembled from prime powers
    (floor(log_p x) copies of log p for each p), reproducing
    psi = theta(x) + theta(x^(1/2)) + ... without touching the lcm integer.
    """
    if x > table.limit:
        raise ValueError(f"x={x} exceeds sieve limit {table.limit}")
    if which not in ("theta", "psi"):
        raise ValueError("which must be 'theta' or 'psi'")
    with _IvPrec(bits):
        total = iv.mpf(0)
        if x < 2:
            return total
        for p in table.primes_leq(x):
            if which == "theta":
                total += iv_log(p)
            else:
                nu = 1
                pk = p * p
                while pk <= x:
                    nu += 1
                    pk *= p
                total += nu * iv_log(p)
        return total


def chebyshev_progression(
    table: PrimeTable,
    which: str,
    x: float,
    modulus: int,
    residue: int,
    bits: int = DEFAULT_PRECISION_BITS,
):
    """theta or pi restricted to primes p = residue (mod modulus).

    Argument order matches the usual written form theta(x; 4, 3): modulus
    first, residue class second. pi is an exact integer count; theta is a
    certified interval.
    """
    if x > table.limit:
        raise ValueError(f"x={x} exceeds sieve limit {table.limit}")
    if not (1 <= residue <= modulus):
        raise ValueError("need 1 <= residue <= modulus")
    if which == "pi":
        if x < 2:
            return 0
        ps = np.asarray(table.primes_leq(x))
        return int(np.count_nonzero(ps % modulus == residue % modulus))
    if which != "theta":
        raise ValueError("which must be 'theta' or 'pi'")
    with _IvPrec(bits):
        total = iv.mpf(0)
        if x < 2:
            return total
        for p in table.primes_leq(x):
            if p % modulus == residue % modulus:
                total += iv_log(p)
        return total


def factorial_valuation(p: int, n: int) -> int:
    """Legendre's formula: the exponent of p in n! is sum floor(n/p^j)."""
    if not _is_probable_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 0:
        raise ValueError("n must be non-negative")
    total = 0
    q = p
    while q <= n:
        total += n // q
        q *= p
    return total


def digits_base_p(n: int, p: int) -> list[int]:
    """Little-endian base-p digits of n (the empty list for n = 0)."""
    out = []
    while n:
        n, r = divmod(n, p)
        out.append(r)
    return out


def kummer_borrows(n: int, k: int, p: int) -> int:
    """Number of borrows when subtracting k from n in base p.

    This equals the p-adic valuation of binomial(n, k). The borrow chain is
    gamma_0 = [a_0 < b_0], gamma_i = [a_i - b_i - gamma_{i-1} < 0].
    """
    if not _is_probable_prime(p):
        raise ValueError(f"{p} is not prime")
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    a = digits_base_p(n, p)
    b = digits_base_p(k, p)
    b += [0] * (len(a) - len(b))
    borrows = 0
    carry = 0
    for ai, bi in zip(a, b):
        carry = 1 if ai - bi - carry < 0 else 0
        borrows += carry
    return borrows


def max_binomial_valuation(n: int, p: int) -> tuple[int, int]:
    """Maximum of v_p(binomial(n, k)) over k, with the witness k = p^N - 1.

    With base-p representation n = sum c_i p^i (c_N != 0) the maximum is 0
    when n = p^(N+1) - 1 and N - min{i : c_i != p-1} otherwise.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not _is_probable_prime(p):
        raise ValueError(f"{p} is not prime")
    digits = digits_base_p(n, p)
    big_n = len(digits) - 1
    witness = p**big_n - 1
    if all(d == p - 1 for d in digits):
        value = 0
    else:
        i0 = next(i for i, d in enumerate(digits) if d != p - 1)
        value = big_n - i0
    return value, witness


def psi_float(table: PrimeTable, x: float) -> float:
    """Fast uncertified psi, for probes and prescreens."""
    if x > table.limit:
        raise ValueError(f"x={x} exceeds sieve limit {table.limit}")
    total = 0.0
    for p in table.primes_leq(x):
        nu = 1
        pk = p * p
        while pk <= x:
            nu += 1
            pk *= p
        total += nu * math.log(p)
    return total
