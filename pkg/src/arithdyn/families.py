"""Higher-degree polynomial families: the critically marked cubics P_{c,a}
and the Per_1(kappa) parameterization f_s with critical points s and 1/s."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .green import DEPTH_CAP_POLY, GreenValue, green_poly


@dataclass(frozen=True)
class CubicParam:
    """Parameters of P_{c,a}(z) = z^3/3 - c z^2/2 + a^3.

    This is the primitive of z(z - c) normalized by P(0) = a^3; the critical
    points are 0 and c.
    """

    c: complex
    a: complex

    def coeffs(self) -> list[complex]:
        return [self.a**3, 0.0, -self.c / 2.0, 1.0 / 3.0]


def cubic_green(param: CubicParam, tol: float = 1e-12,
                depth_cap: int = DEPTH_CAP_POLY):
    """(G at critical point 0, G at critical point c, max of the two)."""
    coeffs = param.coeffs()
    g0 = green_poly(coeffs, 0.0, tol=tol, depth_cap=depth_cap)
    g1 = green_poly(coeffs, param.c, tol=tol, depth_cap=depth_cap)
    return g0, g1, max(g0.value, g1.value)


def branner_hubbard_sweep(samples: int = 10**4, seed: int = 42,
                          lo: float = 1e3, hi: float = 1e6,
                          tol: float = 1e-9) -> dict:
    """Measure sup |G(c, a) - log max(|a|, |c|)| over a seeded annulus sweep.

    Samples have max(|a|, |c|) log-uniform in [lo, hi]; the sup is the
    finite-scale surrogate for the O(1) term of the escape-rate expansion at
    infinity in the (c, a) parameter space.
    """
    rng = np.random.default_rng(np.random.Philox(key=seed))
    mags = np.exp(rng.uniform(math.log(lo), math.log(hi), samples))
    th1 = rng.uniform(0, 2 * np.pi, samples)
    th2 = rng.uniform(0, 2 * np.pi, samples)
    sub = rng.uniform(0, 1, samples)
    which = rng.integers(0, 2, samples)
    worst = 0.0
    worst_at = None
    for m, t1, t2, s, w in zip(mags, th1, th2, sub, which):
        if w == 0:
            c = m * np.exp(1j * t1)
            a = s * m * np.exp(1j * t2)
        else:
            a = m * np.exp(1j * t1)
            c = s * m * np.exp(1j * t2)
        _, _, g = cubic_green(CubicParam(c, a), tol=tol)
        dev = abs(g - math.log(m))
        if dev > worst:
            worst = dev
            worst_at = (complex(c), complex(a))
    return {"samples": samples, "sup_deviation": worst, "worst_at": worst_at}


@dataclass(frozen=True)
class Per1Param:
    """Parameter of f_s(z) = kappa (z - (s + 1/s) z^2 / 2 + z^3 / 3).

    The critical points are exactly s and 1/s.  The reciprocal participant of
    the s <-> 1/s symmetry is cached at construction so that reciprocal()
    swaps the pair without any new floating division; that makes the
    symmetry of the two Green functions a structural identity.
    """

    kappa: complex
    s: complex
    s_inv: complex = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.kappa == 0 or self.s == 0:
            raise DomainError("kappa and s must be nonzero")
        if self.s_inv is None:
            object.__setattr__(self, "s_inv", 1.0 / self.s)

    def reciprocal(self) -> "Per1Param":
        return Per1Param(self.kappa, self.s_inv, self.s)

    def coeffs(self) -> list[complex]:
        k = self.kappa
        return [0.0, k, -k * (self.s + self.s_inv) / 2.0, k / 3.0]


def per1_greens(param: Per1Param, tol: float = 1e-12,
                depth_cap: int = DEPTH_CAP_POLY) -> tuple[GreenValue, GreenValue]:
    """(G+, G-) = Green values of f_s at the critical points s and 1/s.

    G- is literally G+ evaluated at the reciprocal parameter (same map, the
    coefficient s + 1/s is symmetric), so G-(s) == G+(1/s) bit for bit.
    """
    return _gplus(param, tol, depth_cap), _gplus(param.reciprocal(), tol, depth_cap)


def _gplus(param: Per1Param, tol: float, depth_cap: int) -> GreenValue:
    return green_poly(param.coeffs(), param.s, tol=tol, depth_cap=depth_cap)


def per1_asymptotic_constant(kappa: complex) -> float:
    """Leading constant of G+(s) - log|s| as s -> infinity.

    The critical orbit satisfies f_s(s) = -(kappa/6) s^3 + O(s) and then
    f_s(w) = (kappa/3) w^3 (1 + o(1)), so the escape rate telescopes to
    log|s| + log|kappa/6|/3 + log|kappa/3|/6.
    """
    return math.log(abs(kappa / 6.0)) / 3.0 + math.log(abs(kappa / 3.0)) / 6.0
