"""The quadratic family z^2 + c: Mandelbrot Green function, critical-orbit
parameter loci, their equidistribution, and the adelic parameter height.

The parameter Green function is the escape rate of the critical value,
G_M(c) = G_{f_c}(c), which also equals twice the escape rate of 0.  The
critical-orbit locus polynomials p_n(c) - p_k(c) (p_(j+1) = p_j^2 + c) are
never expanded for root finding: they are evaluated through the recurrence
with mantissa/exponent scaling, and solved by Aberth with initial guesses
bootstrapped level by level, which keeps degree 2^11 solves fast and stable.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import poly
from .errors import DomainError, NumericError
from .green import DEPTH_CAP_POLY, GreenValue, green_poly
from .heights import HeightValue
from .rationals import is_prime, padic_valuation
from .roots import _add_pair, _norm_pair, aberth_solve

PERCRIT_CAPACITY = 4096


def mandelbrot_green(c: complex, tol: float = 1e-12,
                     depth_cap: int = DEPTH_CAP_POLY) -> GreenValue:
    """G_M(c): Green function of the Mandelbrot set at c.

    Computed as the escape rate of f_c at the critical value c, with the
    quadratic escape radius sqrt(|c|) + 3; zero (escaped=False) means c is
    in the Mandelbrot set to the depth cap.
    """
    return green_poly([complex(c), 0.0, 1.0], complex(c), tol=tol, depth_cap=depth_cap)


def percrit_poly_exact(n: int, k: int) -> tuple[int, ...]:
    """Exact integer coefficients (in c, lowest first) of f_c^n(0) - f_c^k(0)."""
    _check_nk(n, k)
    pj: tuple = (0,)
    saved = (0,)
    for j in range(n):
        if j == k:
            saved = pj
        pj = poly.exact_add(poly.exact_mul(pj, pj) if pj != (0,) else (0,), (0, 1))
    return poly.trim(poly.exact_add(pj, tuple(-c for c in saved)))


def _check_nk(n: int, k: int):
    if not (0 <= k < n):
        raise DomainError("need 0 <= k < n")
    if 2 ** (n - 1) > PERCRIT_CAPACITY:
        raise DomainError(f"degree 2^{n - 1} above capacity {PERCRIT_CAPACITY}")


def _percrit_eval(c: np.ndarray, n: int, k: int):
    """(mant, exp) pairs for p_n - p_k and its derivative at the points c.

    Runs the critical-orbit recurrence p <- p^2 + c, p' <- 2 p p' + 1 in
    scaled arithmetic so mid-iteration blowup cannot overflow.
    """
    c = np.asarray(c, dtype=complex)
    cm, ce = _norm_pair(c.copy(), np.zeros(c.shape, dtype=np.int64))
    pm = np.zeros(c.shape, dtype=complex)
    pe = np.zeros(c.shape, dtype=np.int64)
    dm = np.zeros(c.shape, dtype=complex)
    de = np.zeros(c.shape, dtype=np.int64)
    one = np.ones(c.shape, dtype=complex)
    zero = np.zeros(c.shape, dtype=np.int64)
    skm = ske = sdm = sde = None
    for j in range(n):
        if j == k and k > 0:
            skm, ske, sdm, sde = pm.copy(), pe.copy(), dm.copy(), de.copy()
        tm, te = _norm_pair(pm * dm, pe + de)
        dm, de = _add_pair(tm, te + 1, one, zero)
        qm, qe = _norm_pair(pm * pm, 2 * pe)
        pm, pe = _add_pair(qm, qe, cm, ce)
    if k > 0:
        pm, pe = _add_pair(pm, pe, -skm, ske)
        dm, de = _add_pair(dm, de, -sdm, sde)
    return pm, pe, dm, de


def _percrit_newton(c: np.ndarray, n: int, k: int) -> np.ndarray:
    pm, pe, dm, de = _percrit_eval(c, n, k)
    sing = np.abs(dm) == 0
    dm = np.where(sing, 1.0, dm)
    shift = np.clip(pe - de, -1074, 1023).astype(np.int64)
    r = pm / dm
    r = np.ldexp(r.real, shift) + 1j * np.ldexp(r.imag, shift)
    return np.where(sing, 0, r)


def percrit_abs_values(c: np.ndarray, n: int, k: int) -> np.ndarray:
    """|p_n(c) - p_k(c)| (underflow-safe), for residual checks."""
    pm, pe, _, _ = _percrit_eval(c, n, k)
    mag = np.abs(pm)
    safe = np.where(mag == 0, 1.0, mag)
    return np.where(mag == 0, 0.0, np.exp2(np.clip(np.log2(safe) + pe, -1000, 1000)))


def percrit_roots(n: int, k: int = 0, seed: int = 7, tol: float = 1e-6,
                  max_iter: int = 400) -> np.ndarray:
    """All 2^(n-1) roots of f_c^n(0) = f_c^k(0), with multiplicity, sorted.

    For k = 0 the solver climbs the level ladder: near every root r of
    p_(n-1) the next polynomial p_n = p_(n-1)^2 + c has the root pair
    r +- i sqrt(r)/p'_(n-1)(r), which seeds Aberth so well that a handful of
    iterations per level suffice even at degree 2048.  Other k use a seeded
    circle of radius 2.5 (all roots satisfy |c| <= 4).
    """
    _check_nk(n, k)
    rng = np.random.default_rng(np.random.Philox(key=seed))
    if k == 0:
        z = np.array([0.0 + 0.0j])
        for lev in range(2, n + 1):
            pm, pe, dm, de = _percrit_eval(z, lev - 1, 0)
            shift = np.clip(de, -1074, 1023).astype(np.int64)
            dp = np.ldexp(dm.real, shift) + 1j * np.ldexp(dm.imag, shift)
            dp = np.where(np.abs(dp) < 1e-30, 1e-30, dp)
            off = 1j * np.sqrt(z.astype(complex)) / dp
            off = np.where(np.abs(off) < 1e-8, 1e-8 * (1 + 0j), off)
            guesses = np.concatenate([z + off, z - off])
            guesses = guesses + 1e-10 * rng.standard_normal(guesses.size)
            z, _, _ = aberth_solve(
                lambda w, lv=lev: _percrit_newton(w, lv, 0), guesses,
                max_iter=max_iter)
    else:
        deg = 2 ** (n - 1)
        ang = 2 * np.pi * (np.arange(deg) + 0.5) / deg
        ang = ang + (0.2 * np.pi / deg) * rng.standard_normal(deg)
        rad = 2.5 * (1 + 0.05 * rng.standard_normal(deg))
        guesses = rad * np.exp(1j * ang)
        z, _, _ = aberth_solve(
            lambda w: _percrit_newton(w, n, k), guesses, max_iter=max_iter)
    res = _percrit_residual(z, n, k)
    if res > tol:
        raise NumericError(f"percrit residual {res:.2e} above {tol:.2e}", best=z)
    return z[np.lexsort((z.imag, z.real))]


def _percrit_residual(z: np.ndarray, n: int, k: int) -> float:
    """Scaled residual max |p(z)| / max(1, |z|)^degree (the polynomials are
    monic with all roots in |c| <= 4, so this is the honest relative size)."""
    vals = percrit_abs_values(z, n, k)
    deg = 2 ** (n - 1)
    scale = np.maximum(1.0, np.abs(z)) ** min(deg, 600)
    return float((vals / scale).max())


def percrit_equidistribution_test(n: int, k: int, probes, seed: int = 7,
                                  tol: float = 1e-6) -> dict:
    """Potential comparison between the critical-orbit locus and G_M.

    For each probe c0 outside the Mandelbrot set the root-average of
    log |c - c0| is compared with G_M(c0); the harmonic measure of M has
    capacity 1, so the two agree in the limit.  Probes must satisfy
    G_M(c0) > 0.1.
    """
    roots = percrit_roots(n, k, seed=seed, tol=tol)
    out = {"n": n, "k": k, "count": int(roots.size), "probes": []}
    worst = 0.0
    for c0 in probes:
        g = mandelbrot_green(complex(c0), tol=1e-13)
        if g.value <= 0.1:
            raise DomainError(f"probe {c0} is too close to M (G_M = {g.value:.3g})")
        mean_log = float(np.mean(np.log(np.abs(roots - complex(c0)))))
        dev = abs(mean_log - g.value)
        worst = max(worst, dev)
        out["probes"].append({
            "probe": [float(np.real(c0)), float(np.imag(c0))],
            "green": g.value,
            "mean_log_dist": mean_log,
            "deviation": dev,
        })
    out["max_deviation"] = worst
    return out


def mandelbrot_padic_green(c: Fraction, p: int) -> Fraction:
    """G_{M_p}(c) as an exact multiple of log p: log+ |c|_p.

    The ultrametric inequality makes the critical orbit p-bounded exactly
    when |c|_p <= 1, and for |c|_p > 1 the top term dominates every iterate,
    so the limit 2^(-n) log+ |f_c^n(c)|_p is already exact at depth 1.
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    v = padic_valuation(c, p)
    if v is math.inf or v >= 0:
        return Fraction(0)
    return Fraction(-v)


def mandelbrot_param_height(c: Fraction, tol: float = 1e-12) -> HeightValue:
    """Adelic parameter height h_M(c) = G_M(c) + sum_p log+ |c|_p.

    The finite-place sum is exactly log(denominator(c)); it is returned
    inside a HeightValue whose error is the Archimedean error alone.
    """
    c = Fraction(c)
    arch = mandelbrot_green(complex(float(c)), tol=tol)
    finite = math.log(c.denominator) if c.denominator > 1 else 0.0
    return HeightValue(arch.value + finite, arch.error, "adelic-sum")


def mandelbrot_param_height_parts(c: Fraction, tol: float = 1e-12) -> dict:
    """h_M(c) split into its Archimedean and exact finite parts."""
    c = Fraction(c)
    arch = mandelbrot_green(complex(float(c)), tol=tol)
    finite = math.log(c.denominator) if c.denominator > 1 else 0.0
    return {
        "arch": arch,
        "finite": finite,
        "value": arch.value + finite,
        "error": arch.error,
    }
