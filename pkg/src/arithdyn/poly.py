"""Dense univariate polynomials as coefficient sequences, lowest degree first.

Two flavors share this convention: exact polynomials are tuples of int or
Fraction, floating ones are complex numpy arrays.  Only the operations the
dynamics code needs are provided; no factorization, no sparse forms.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import DomainError


def degree(coeffs) -> int:
    """Index of the last nonzero coefficient, -1 for the zero polynomial."""
    for i in range(len(coeffs) - 1, -1, -1):
        if coeffs[i] != 0:
            return i
    return -1


def trim(coeffs):
    d = degree(coeffs)
    return tuple(coeffs[: d + 1])


def exact_add(a, b):
    n = max(len(a), len(b))
    return tuple(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
    )


def exact_mul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return tuple(out)


def exact_scale(a, s):
    return tuple(ai * s for ai in a)


def exact_eval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def exact_deriv(a):
    return tuple(i * a[i] for i in range(1, len(a)))


def exact_compose(outer, inner):
    """outer(inner(t)), exact Horner composition."""
    acc = (0,)
    for c in reversed(outer):
        acc = exact_add(exact_mul(acc, inner), (c,))
    return acc


def content(coeffs) -> int:
    """gcd of integer coefficients (0 for the zero polynomial)."""
    g = 0
    for c in coeffs:
        g = math.gcd(g, abs(c))
    return g


def clear_denominators(coeffs):
    """Integer coefficient vector proportional to the rational input."""
    fracs = [Fraction(c) for c in coeffs]
    lcm = 1
    for f in fracs:
        lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
    return tuple(int(f * lcm) for f in fracs)


def log2_abs(x) -> float:
    """log2|x| for int, Fraction, float or complex, safe for huge ints."""
    if isinstance(x, Fraction):
        return log2_abs(x.numerator) - log2_abs(x.denominator)
    if isinstance(x, int):
        if x == 0:
            return -math.inf
        n = abs(x)
        if n.bit_length() <= 1020:
            return math.log2(n)
        k = n.bit_length() - 900
        return math.log2(n >> k) + k
    a = abs(x)
    if a == 0:
        return -math.inf
    return math.log2(a)


# --- floating side -----------------------------------------------------------

def as_complex_array(coeffs) -> np.ndarray:
    arr = np.asarray([complex(c) for c in coeffs], dtype=complex)
    if arr.size == 0:
        raise DomainError("empty coefficient list")
    return arr


def polyval(coeffs: np.ndarray, z):
    return np.polynomial.polynomial.polyval(z, coeffs)


def polyder(coeffs: np.ndarray) -> np.ndarray:
    if len(coeffs) <= 1:
        return np.zeros(1, dtype=complex)
    return coeffs[1:] * np.arange(1, len(coeffs))


def poly_from_roots(roots) -> np.ndarray:
    """Monic polynomial with the given complex roots, lowest degree first."""
    out = np.array([1.0 + 0.0j])
    for r in roots:
        out = np.convolve(out, np.array([-r, 1.0], dtype=complex))
    return out
