"""Naive and canonical heights on P^1(Q), preperiodicity testing and search.

The canonical height is computed two independent ways: pulling the naive
height along the exact orbit (global iteration) and summing local Green
functions over the places of Q (adelic sum).  Both carry certified error
radii derived from the explicit resultant-based distortion constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, NumericError, ResourceError
from .green import green_arch_pair, green_padic
from .maps import DIGIT_BUDGET, RationalMapC, RationalMapQ
from .projective import ProjPointQ, proj_point
from .rationals import log_int


@dataclass(frozen=True)
class HeightValue:
    value: float
    error: float
    method: str  # "global-iteration" | "adelic-sum"

    def to_json(self) -> dict:
        return {"value": self.value, "error": self.error, "method": self.method}


@dataclass(frozen=True)
class PreperiodicityCertificate:
    verdict: str  # "preperiodic" | "wandering"
    tail: int
    period: int
    witness: tuple

    @property
    def is_preperiodic(self) -> bool:
        return self.verdict == "preperiodic"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "tail": self.tail,
            "period": self.period,
            "witness": [str(w) for w in self.witness],
        }


def naive_height(x: ProjPointQ) -> float:
    """log max(|a|, |b|) on the coprime integer pair; h(inf) = 0."""
    return log_int(max(abs(x.x), abs(x.y)))


def _is_monomial_map(f: RationalMapQ) -> bool:
    """z -> z^(+-d) up to sign: naive height is exactly multiplicative."""
    d = f.degree
    p_idx = [k for k, c in enumerate(f.P) if c != 0]
    q_idx = [k for k, c in enumerate(f.Q) if c != 0]
    if len(p_idx) != 1 or len(q_idx) != 1:
        return False
    if abs(f.P[p_idx[0]]) != 1 or abs(f.Q[q_idx[0]]) != 1:
        return False
    return (p_idx[0], q_idx[0]) in ((d, 0), (0, d))


def northcott_constant(f: RationalMapQ) -> float:
    """Explicit C with |h(f(x)) - d h(x)| <= C for all rational points.

    Assembled from the certified sup-norm lift bounds at infinity and the
    resultant at the finite places: the content extracted by reduction
    divides Res, so C = max(|log c1|, |log c2|) + log|Res|.  Monomial maps
    get C = 0 (the height is exactly multiplicative on coprime pairs).
    """
    if _is_monomial_map(f):
        return 0.0
    c1, c2 = f.lift_bounds()
    return max(abs(math.log(c1)), abs(math.log(c2))) + log_int(abs(f.resultant()))


def canonical_height_global(f: RationalMapQ, x: ProjPointQ, tol: float = 1e-9,
                            digit_budget: int = DIGIT_BUDGET) -> HeightValue:
    """h_f(x) as d^(-n) h(f^n(x)) with certified error C/((d-1) d^n).

    Falls back to the deepest orbit the digit budget allows; if that depth
    cannot meet tol, raises NumericError carrying the best bracket.
    """
    d = f.degree
    c = northcott_constant(f)
    if c == 0:
        return HeightValue(naive_height(x), 0.0, "global-iteration")
    n_needed = max(0, math.ceil(math.log(c / ((d - 1) * tol), d)))
    bit_budget = int(digit_budget * math.log2(10))
    cur = x
    n_done = 0
    for _ in range(n_needed):
        nxt = f.apply(cur)
        if max(abs(nxt.x).bit_length(), abs(nxt.y).bit_length()) > bit_budget:
            break
        cur = nxt
        n_done += 1
    err = c / ((d - 1) * d**n_done) + 1e-13
    value = naive_height(cur) / d**n_done
    hv = HeightValue(value, err, "global-iteration")
    if n_done < n_needed:
        raise NumericError(
            f"digit budget stopped iteration at depth {n_done} (error {err:.3g})",
            best=hv)
    return hv


def canonical_height_adelic(f: RationalMapQ, x: ProjPointQ, tol: float = 1e-9,
                            padic_depth: int = 64) -> HeightValue:
    """h_f(x) = G_arch(x0, x1) + sum over bad primes of G_p(x0, x1).

    Every place uses the one canonical lift, so no lift corrections appear;
    good primes contribute exactly 0 on coprime pairs and are skipped.
    """
    fc = RationalMapC.from_exact(f)
    m = max(abs(x.x), abs(x.y))
    scale = log_int(m)
    xf = float(Fraction(x.x, m))
    yf = float(Fraction(x.y, m))
    arch = green_arch_pair(fc, xf, yf, tol=tol / 2)
    value = arch.value + scale
    err = arch.error
    for p in f.bad_primes():
        gp = green_padic(f, p, x, depth=padic_depth)
        value += gp.value
        err += gp.error
    return HeightValue(value, err + 1e-13, "adelic-sum")


def wandering_bound(f: RationalMapQ) -> float:
    """Naive-height threshold above which h_f > 0 is guaranteed.

    |h_f - h| <= C/(d-1), so h > C/(d-1) forces h_f > 0; a safety factor of
    two keeps the preperiodicity verdict robust."""
    return 2.0 * northcott_constant(f) / (f.degree - 1) + 1.0


def is_preperiodic(f: RationalMapQ, x: ProjPointQ) -> PreperiodicityCertificate:
    """Exact orbit walk: preperiodic on exact repetition, wandering once the
    naive height exceeds the certified bound.  Always terminates: heights
    below the bound live in a finite set (Northcott)."""
    bound = wandering_bound(f)
    seen: dict[ProjPointQ, int] = {}
    orbit: list[ProjPointQ] = []
    cur = x
    idx = 0
    while True:
        if cur in seen:
            k = seen[cur]
            return PreperiodicityCertificate(
                "preperiodic", k, idx - k, tuple(orbit))
        seen[cur] = idx
        orbit.append(cur)
        if naive_height(cur) > bound:
            return PreperiodicityCertificate(
                "wandering", idx, 0, tuple(orbit))
        cur = f.apply(cur)
        idx += 1


def preperiodic_search(f: RationalMapQ, height_bound: float,
                       max_points: int = 10**6) -> list[ProjPointQ]:
    """All preperiodic rational points with naive height <= height_bound.

    Exhaustive over reduced pairs ordered by max(|a|, |b|) ascending, the
    point at infinity first; raises ResourceError when the enumeration
    exceeds max_points."""
    if height_bound < 0:
        raise DomainError("height bound must be >= 0")
    n = math.floor(math.exp(height_bound) + 1e-12)
    out = []
    count = 0
    for pt in _enumerate_points(n):
        count += 1
        if count > max_points:
            raise ResourceError(f"enumeration exceeded {max_points} points")
        if is_preperiodic(f, pt).is_preperiodic:
            out.append(pt)
    return out


def _enumerate_points(n: int):
    """Reduced points of P^1(Q) with max(|a|, |b|) <= n, by max ascending."""
    yield proj_point(1, 0)
    for m in range(1, n + 1):
        # pairs with max exactly m: b = m with |a| <= m, then |a| = m, b < m
        for a in range(-m, m + 1):
            if math.gcd(abs(a), m) == 1:
                yield proj_point(a, m)
        for b in range(1, m):
            if math.gcd(m, b) == 1:
                yield proj_point(m, b)
                yield proj_point(-m, b)
