"""Simultaneous complex root finding (Aberth-Ehrlich).

Coefficients may be exact integers or Fractions with thousands of digits:
everything is carried as mantissa/exponent pairs (value = m * 2^e with the
exponent an int64 array), so evaluation never overflows and the iteration
stays honest for polynomials such as high critical-orbit recursions whose
coefficients dwarf the float range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, NumericError
from .poly import degree as poly_degree
from .poly import log2_abs

_STEP_TOL = 3.0e-14
_MAX_ITER = 400


@dataclass(frozen=True)
class RootSet:
    """All complex roots of a polynomial, with multiplicity, sorted by (re, im).

    residual is the largest normwise relative backward error
    |p(z)| / sum_k |a_k| max(1,|z|)^k over the returned roots.
    """

    roots: np.ndarray
    residual: float
    iterations: int


def _norm_pair(m, e):
    """Renormalize value arrays so mantissa magnitudes sit near 1."""
    mag = np.abs(m)
    zero = mag == 0
    ex = np.frexp(np.where(zero, 1.0, mag))[1]
    m2 = np.ldexp(m.real, -ex) + 1j * np.ldexp(m.imag, -ex)
    return np.where(zero, 0, m2), np.where(zero, 0, e + ex)


def _add_pair(m1, e1, m2, e2):
    ebig = np.maximum(e1, e2)
    d1 = np.clip(e1 - ebig, -1074, 0).astype(np.int64)
    d2 = np.clip(e2 - ebig, -1074, 0).astype(np.int64)
    s = (np.ldexp(m1.real, d1) + 1j * np.ldexp(m1.imag, d1)) + (
        np.ldexp(m2.real, d2) + 1j * np.ldexp(m2.imag, d2)
    )
    return _norm_pair(s, ebig)


def _scaled_coeff(c):
    """(mantissa, exponent) with value = mantissa * 2^exponent."""
    if isinstance(c, Fraction) and c.denominator == 1:
        c = c.numerator
    if isinstance(c, int):
        if c == 0:
            return 0.0 + 0.0j, 0
        k = max(0, abs(c).bit_length() - 53)
        return complex(c >> k if c > 0 else -((-c) >> k)), k
    if isinstance(c, Fraction):
        mn, en = _scaled_coeff(c.numerator)
        md, ed = _scaled_coeff(c.denominator)
        return complex(mn) / complex(md), en - ed
    z = complex(c)
    if z == 0:
        return 0.0 + 0.0j, 0
    ex = math.frexp(abs(z))[1]
    return complex(math.ldexp(z.real, -ex), math.ldexp(z.imag, -ex)), ex


class ScaledPoly:
    """Polynomial with mantissa/exponent coefficients and batched evaluation."""

    def __init__(self, coeffs):
        d = poly_degree(coeffs)
        if d < 0:
            raise DomainError("zero polynomial")
        coeffs = list(coeffs[: d + 1])
        pairs = [_scaled_coeff(c) for c in coeffs]
        self.mant = np.array([p[0] for p in pairs], dtype=complex)
        self.expo = np.array([p[1] for p in pairs], dtype=np.int64)
        self.degree = d
        self.log2 = np.array([log2_abs(c) for c in coeffs])

    def eval_scaled(self, z: np.ndarray):
        """Horner evaluation; returns (mantissa, exponent) arrays."""
        z = np.asarray(z, dtype=complex)
        vm = np.full(z.shape, self.mant[-1])
        ve = np.full(z.shape, self.expo[-1], dtype=np.int64)
        for k in range(self.degree - 1, -1, -1):
            vm, ve = _norm_pair(vm * z, ve)
            cm = np.full(z.shape, self.mant[k])
            ce = np.full(z.shape, self.expo[k], dtype=np.int64)
            vm, ve = _add_pair(vm, ve, cm, ce)
        return vm, ve

    def derivative(self) -> "ScaledPoly":
        out = ScaledPoly.__new__(ScaledPoly)
        out.mant = self.mant[1:] * np.arange(1, self.degree + 1)
        out.expo = self.expo[1:].copy()
        out.degree = self.degree - 1
        out.log2 = self.log2[1:] + np.log2(np.arange(1, self.degree + 1))
        m, e = _norm_pair(out.mant, out.expo)
        out.mant, out.expo = m, e
        return out

    def newton_ratio(self, z: np.ndarray, dp: "ScaledPoly") -> np.ndarray:
        pm, pe = self.eval_scaled(z)
        dm, de = dp.eval_scaled(z)
        sing = np.abs(dm) == 0
        dm = np.where(sing, 1.0, dm)
        shift = np.clip(pe - de, -1074, 1023).astype(np.int64)
        out = pm / dm
        out = np.ldexp(out.real, shift) + 1j * np.ldexp(out.imag, shift)
        return np.where(sing, 0, out)

    def rel_residual(self, z: np.ndarray) -> float:
        """max over z of |p(z)| / sum_k |a_k| max(1,|z|)^k, via log2 space."""
        z = np.asarray(z, dtype=complex)
        pm, pe = self.eval_scaled(z)
        mag = np.abs(pm)
        lp = np.where(mag == 0, -np.inf, np.log2(np.where(mag == 0, 1, mag)) + pe)
        lz = np.log2(np.maximum(np.abs(z), 1.0))
        terms = self.log2[None, :] + np.arange(self.degree + 1)[None, :] * lz[:, None]
        top = terms.max(axis=1)
        lscale = top + np.log2(np.exp2(terms - top[:, None]).sum(axis=1))
        r = lp - lscale
        return float(np.exp2(min(r.max(), 1023.0)))

    def root_bound(self) -> float:
        """Fujiwara-type bound on root magnitudes, computed in log2 space."""
        d = self.degree
        best = -math.inf
        for k in range(1, d + 1):
            lk = self.log2[d - k]
            if lk == -math.inf:
                continue
            best = max(best, (lk - self.log2[d]) / k)
        if best == -math.inf:
            return 1e-3
        return 2.0 * 2.0 ** min(best, 1000.0)


def initial_circle(n: int, radius: float, seed: int) -> np.ndarray:
    """n seeded points on a perturbed circle of the given radius."""
    rng = np.random.default_rng(np.random.Philox(key=seed))
    ang = 2 * np.pi * (np.arange(n) + 0.5) / n + 0.41
    ang = ang + (0.2 * np.pi / n) * rng.standard_normal(n)
    rad = radius * (1.0 + 0.05 * rng.standard_normal(n))
    return rad * np.exp(1j * ang)


def aberth_solve(newton_fn, guesses: np.ndarray, step_tol: float = _STEP_TOL,
                 max_iter: int = _MAX_ITER):
    """Run Aberth-Ehrlich from the given guesses.

    newton_fn maps a point array to p/p' at those points.  Returns
    (roots, iterations, last_max_step).
    """
    z = np.asarray(guesses, dtype=complex).copy()
    mx = math.inf
    for it in range(1, max_iter + 1):
        ratio = newton_fn(z)
        dz = z[:, None] - z[None, :]
        np.fill_diagonal(dz, 1.0)
        inv = 1.0 / dz
        np.fill_diagonal(inv, 0.0)
        denom = 1.0 - ratio * inv.sum(axis=1)
        denom = np.where(np.abs(denom) < 1e-290, 1.0, denom)
        w = ratio / denom
        z = z - w
        mx = float(np.abs(w).max())
        if mx < step_tol * max(1.0, float(np.abs(z).max())):
            return z, it, mx
    return z, max_iter, mx


def _sorted(roots: np.ndarray) -> np.ndarray:
    order = np.lexsort((roots.imag, roots.real))
    return roots[order]


def poly_roots(coeffs, tol: float = 1e-8, seed: int = 0,
               max_iter: int = _MAX_ITER) -> RootSet:
    """All complex roots of the polynomial, with multiplicity.

    Parameters
    ----------
    coeffs : sequence of int, Fraction, float or complex, lowest degree first.
    tol : residual tolerance (normwise relative backward error).
    seed : seed for the perturbed-circle initial guesses.

    Raises NumericError (carrying the best RootSet) if the residual target
    is not met, DomainError for degree < 1.
    """
    sp = ScaledPoly(coeffs)
    if sp.degree < 1:
        raise DomainError("poly_roots needs degree >= 1")
    dp = sp.derivative()
    guesses = initial_circle(sp.degree, sp.root_bound(), seed)
    roots, its, _ = aberth_solve(lambda z: sp.newton_ratio(z, dp), guesses,
                                 max_iter=max_iter)
    res = sp.rel_residual(roots)
    out = RootSet(_sorted(roots), res, its)
    if res > tol:
        raise NumericError(f"root residual {res:.3e} above tol {tol:.3e}", best=out)
    return out
