"""Exact rational arithmetic helpers: valuations, factoring, absolute values.

Rationals are plain ``fractions.Fraction`` objects (already reduced, positive
denominator), so the usual invariants gcd(num, den) = 1 and den >= 1 hold by
construction.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DomainError

INF = math.inf

# deterministic Miller-Rabin witnesses, exact for n < 3.3 * 10^24
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

_TRIAL_LIMIT = 10**6


def rat_normalize(num: int, den: int) -> Fraction:
    """Reduced rational num/den with positive denominator.

    Raises DomainError when den = 0.
    """
    if den == 0:
        raise DomainError("zero denominator")
    return Fraction(num, den)


def is_prime(n: int) -> bool:
    """Miller-Rabin primality test, deterministic for n < 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """One nontrivial factor of composite odd n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    # deterministic seed sweep keeps the output reproducible
    for c in range(1, 64):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise DomainError(f"rho failed to split {n}")  # pragma: no cover


def factor_integer(n: int) -> list[int]:
    """Prime factorization of n >= 1 with multiplicity, ascending.

    Trial division up to 10^6 followed by Pollard rho with a fixed
    parameter sweep; output order is deterministic.
    """
    if n < 1:
        raise DomainError("factor_integer requires n >= 1")
    out: list[int] = []
    for p in (2, 3, 5):
        while n % p == 0:
            out.append(p)
            n //= p
    p = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while p * p <= n and p <= _TRIAL_LIMIT:
        while n % p == 0:
            out.append(p)
            n //= p
        p += wheel[i]
        i = (i + 1) % len(wheel)
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out.append(m)
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return sorted(out)


def padic_valuation(x: Fraction | int, p: int) -> int | float:
    """v_p(x) with v_p(0) = +inf; |x|_p = p^(-v_p(x))."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    x = Fraction(x)
    if x == 0:
        return INF
    v = 0
    num = abs(x.numerator)
    while num % p == 0:
        num //= p
        v += 1
    den = x.denominator
    while den % p == 0:
        den //= p
        v -= 1
    return v


def int_valuation(n: int, p: int) -> int:
    """v_p of a nonzero integer, no primality check (hot path)."""
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_abs(x: Fraction | int, p: int) -> Fraction:
    """|x|_p as an exact rational; DomainError for x = 0."""
    v = padic_valuation(x, p)
    if v is INF:
        raise DomainError("|0|_p is zero; excluded from product formula checks")
    if v >= 0:
        return Fraction(1, p**v)
    return Fraction(p ** (-v))


def product_formula_check(x: Fraction) -> Fraction:
    """Exact product of |x|_v over the Archimedean place and all primes.

    Equals 1 for every nonzero rational; primes outside num*den contribute 1
    and are skipped.
    """
    if x == 0:
        raise DomainError("product formula needs x != 0")
    prod = abs(x)
    support = factor_integer(abs(x.numerator) * x.denominator)
    for p in sorted(set(support)):
        prod *= padic_abs(x, p)
    return prod


def log_int(n: int) -> float:
    """Natural log of a positive integer, safe for huge values."""
    if n <= 0:
        raise DomainError("log_int requires n > 0")
    if n.bit_length() <= 1020:
        return math.log(n)
    k = n.bit_length() - 900
    return math.log(n >> k) + k * math.log(2.0)
