"""Dynamical Green functions at the Archimedean place and at primes.

All three evaluators return a GreenValue carrying a certified error radius.
The Archimedean homogeneous version telescopes sup-norm growth of the lift;
the polynomial version detects escape and then telescopes in the 1/z chart
so nothing overflows; the p-adic version tracks valuations of the gcds
extracted from exact lift iteration, working modulo a large power of p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import poly
from .errors import DomainError, NumericError
from .maps import RationalMapC, RationalMapQ
from .projective import ProjPointC, ProjPointQ
from .rationals import int_valuation, is_prime

_DEPTH_CAP_ARCH = 8192
DEPTH_CAP_POLY = 2048


@dataclass(frozen=True)
class GreenValue:
    """A Green-function evaluation with certified error radius.

    place is math.inf for the Archimedean place or a prime p.  At a prime the
    value is an exact rational multiple of log p, recorded in logp_coeff.
    escaped reports, for the polynomial version, whether the orbit certifiably
    escaped (False means "bounded through the depth cap", value 0).
    """

    value: float
    error: float
    depth: int
    place: float | int = math.inf
    escaped: bool = True
    logp_coeff: Fraction | None = None

    def to_json(self) -> dict:
        out = {
            "value": self.value,
            "error": self.error,
            "depth": self.depth,
            "place": "inf" if self.place == math.inf else int(self.place),
            "escaped": self.escaped,
        }
        if self.logp_coeff is not None:
            out["logp_coeff"] = str(self.logp_coeff)
        return out


def green_arch_pair(f: RationalMapC, x: complex, y: complex,
                    tol: float = 1e-12, depth_cap: int = _DEPTH_CAP_ARCH) -> GreenValue:
    """G_F(x, y) for the stored lift, any nonzero pair, sup-norm telescoping.

    The truncation error after n steps is bounded by
    max(|log c1|, |log c2|) / ((d-1) d^n).
    """
    d = f.degree
    c1, c2 = f.lift_bounds()
    bound = max(abs(math.log(c1)), abs(math.log(c2)))
    if bound == 0:
        n_needed = 1
    else:
        n_needed = max(1, math.ceil(math.log((bound / ((d - 1) * tol)), d)))
    if n_needed > depth_cap:
        raise NumericError(
            f"depth {n_needed} above cap {depth_cap} for tol {tol}", best=None)
    m = max(abs(x), abs(y))
    if m == 0:
        raise DomainError("(0, 0) has no Green value")
    g = math.log(m)
    vx, vy = x / m, y / m
    for k in range(n_needed):
        xp = vx ** np.arange(d + 1)
        yp = vy ** np.arange(d, -1, -1)
        mono = xp * yp
        fx = complex(np.dot(f.P, mono))
        fy = complex(np.dot(f.Q, mono))
        nrm = max(abs(fx), abs(fy))
        g += math.log(nrm) / d ** (k + 1)
        vx, vy = fx / nrm, fy / nrm
    err = bound / ((d - 1) * d**n_needed) + 1e-14 * (1 + abs(g))
    return GreenValue(g, err, n_needed, math.inf)


def green_arch(f: RationalMapC, pt: ProjPointC, tol: float = 1e-12,
               depth_cap: int = _DEPTH_CAP_ARCH) -> GreenValue:
    """G_F at a sup-normalized point of P^1(C)."""
    return green_arch_pair(f, pt.x, pt.y, tol, depth_cap)


def _escape_radius(coeffs: np.ndarray) -> float:
    """Certified escape radius: |w| >= R implies |f(w)| >= 2|w|.

    Uses the generic bound (S + 2)/|lead|; for the quadratic family z^2 + c
    the bound sqrt(|c|) + 3 is also honored (the larger is taken, both are
    certified)."""
    d = len(coeffs) - 1
    lead = abs(coeffs[-1])
    s = float(np.abs(coeffs[:-1]).sum())
    r = max(1.0, (s + 2.0) / lead)
    if d == 2 and coeffs[2] == 1.0 and coeffs[1] == 0.0:
        r = max(r, math.sqrt(abs(coeffs[0])) + 3.0)
    return r


def green_poly(coeffs, z: complex, tol: float = 1e-12,
               depth_cap: int = DEPTH_CAP_POLY) -> GreenValue:
    """Escape-rate Green function of a polynomial at an affine point.

    Returns lim d^(-n) log+ |f^n(z)|.  Orbits still bounded by the escape
    radius at the depth cap give value 0 with escaped=False and the certified
    residual bound as the error.  After escape the tail is telescoped in the
    u = 1/w chart, so huge orbit values never overflow.
    """
    a = poly.as_complex_array(coeffs)
    da = poly.degree(a)
    if da < 2:
        raise DomainError("green_poly needs a polynomial of degree >= 2")
    a = a[: da + 1]
    d = da
    lead = abs(a[-1])
    s = float(np.abs(a[:-1]).sum())
    r_esc = _escape_radius(a)
    w = complex(z)
    for n in range(depth_cap):
        if abs(w) > r_esc:
            break
        w = complex(np.polynomial.polynomial.polyval(w, a))
    else:
        gmax = math.log(r_esc + 1.0) + (abs(math.log(lead)) + math.log(2.0 + s / lead)) / (d - 1)
        # certified bound G <= gmax * d^-cap; underflows to 0.0 for deep caps
        err = gmax * float(d) ** float(-depth_cap)
        return GreenValue(0.0, err, depth_cap, math.inf, escaped=False)

    # u-chart telescope: L tracks log |f^(n+j)(z)|, m(u) = a_d + ... + a_0 u^d
    rev = a[::-1]
    big_l = math.log(abs(w))
    u = 1.0 / w
    j = 0
    log_lead = math.log(lead)
    while True:
        ratio = min(0.99, s * abs(u) / lead)
        step_bound = (-math.log1p(-ratio)) * 2.0 / d ** (n + j + 1)
        if step_bound < tol * 0.5 or abs(u) < 1e-280 or j >= 400:
            break
        mu = complex(np.polynomial.polynomial.polyval(u, rev))
        big_l = d * big_l + math.log(abs(mu))
        u = u**d / mu
        j += 1
    value = big_l / d ** (n + j)
    # remaining increments: the deterministic log|lead| part sums in closed
    # form, the rest is inside step_bound
    value += log_lead / (d ** (n + j) * (d - 1))
    err = step_bound + 1e-14 * (1.0 + abs(value))
    return GreenValue(value, err, n + j, math.inf, escaped=True)


def green_padic(f: RationalMapQ, p: int, x: ProjPointQ, depth: int = 64) -> GreenValue:
    """Local Green function of the canonical lift at the prime p.

    Exact rational multiple of log p: the lift is iterated on the coprime
    pair working modulo a high power of p, dividing out p^v at every step;
    G = -sum_k v_k log(p) / d^k.  The valuations satisfy v_k <= v_p(Res), so
    the truncation error is v_p(Res) log(p) / ((d-1) d^depth).  Good primes
    give exactly 0 at depth 1.
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if depth < 1:
        raise DomainError("depth >= 1 required")
    d = f.degree
    vres = int_valuation(abs(f.resultant()), p)
    if vres == 0:
        return GreenValue(0.0, 0.0, 1, p, logp_coeff=Fraction(0))
    # precision: total loss over the run is at most depth * vres
    prec = depth * vres + vres + 16
    mod = p**prec
    a, b = x.x % mod, x.y % mod
    coeff = Fraction(0)
    avail = prec
    for k in range(1, depth + 1):
        aa, bb = f.apply_raw(a, b)
        aa %= mod
        bb %= mod
        va = _val_capped(aa, p, vres + 1)
        vb = _val_capped(bb, p, vres + 1)
        v = min(va, vb)
        if v > vres:
            raise NumericError(
                f"gcd valuation {v} above certified bound {vres} at step {k}")
        if v:
            pv = p**v
            aa //= pv
            bb //= pv
            avail -= v
            if avail < vres + 2:
                raise NumericError("p-adic precision exhausted")
            coeff -= Fraction(v, d**k)
        a, b = aa, bb
    err = vres * math.log(p) / ((d - 1) * d**depth)
    return GreenValue(float(coeff) * math.log(p), err, depth, p, logp_coeff=coeff)


def _val_capped(r: int, p: int, cap: int) -> int:
    """v_p of a residue, capped (r = 0 counts as >= cap)."""
    if r == 0:
        return cap
    v = 0
    while v < cap and r % p == 0:
        r //= p
        v += 1
    return v
