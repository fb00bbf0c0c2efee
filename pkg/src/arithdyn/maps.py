"""Rational self-maps of P^1 as homogeneous lifts, exact and floating.

A degree-d map f = P/Q is stored through the coefficient vectors of the
homogeneous pair P(x, y), Q(x, y); index k holds the coefficient of
x^k y^(d-k), so P(t, 1) is the usual affine numerator, lowest degree first.
Exact maps keep the canonical lift: integer coefficients, content 1, first
nonzero coefficient of Q positive.  That single lift is reused everywhere
(resultants, bad primes, local Green functions) so the adelic height
decomposition needs no per-place lift correction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import poly
from .errors import DomainError, InvalidMapError, ResourceError
from .projective import INFC, ProjPointC, ProjPointQ, normalize_c, proj_point
from .rationals import factor_integer, log_int
from .roots import aberth_solve, poly_roots

# exact orbits stop once a coordinate exceeds this many decimal digits
DIGIT_BUDGET = 10**6

PERIODIC_CAPACITY = 4097


def _sylvester(pc, qc, d):
    """Sylvester matrix of the formal degree-d pair (high degree first)."""
    top = [pc[d - i] if d - i < len(pc) else 0 for i in range(d + 1)]
    bot = [qc[d - i] if d - i < len(qc) else 0 for i in range(d + 1)]
    n = 2 * d
    rows = []
    for i in range(d):
        rows.append([0] * i + list(top) + [0] * (n - d - 1 - i))
    for i in range(d):
        rows.append([0] * i + list(bot) + [0] * (n - d - 1 - i))
    return rows


def _det_bareiss(m):
    """Exact integer determinant (fraction-free Gaussian elimination)."""
    a = [row[:] for row in m]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _solve_fraction(m, rhs):
    """Exact solve of m x = rhs over Q (small dense systems)."""
    n = len(m)
    a = [[Fraction(v) for v in row] + [Fraction(rhs[i])] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise InvalidMapError("singular Sylvester system")
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [v / pv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [vr - f * vc for vr, vc in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def _conv_int(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


@dataclass(frozen=True)
class RationalMapQ:
    """Exact rational map of degree >= 2 in canonical-lift form."""

    P: tuple[int, ...]
    Q: tuple[int, ...]
    degree: int

    # --- construction ------------------------------------------------------

    @staticmethod
    def from_coeffs(p_coeffs, q_coeffs, degree: int | None = None) -> "RationalMapQ":
        """Build from rational coefficient vectors for P(t,1) and Q(t,1)."""
        fp = [Fraction(c) for c in p_coeffs]
        fq = [Fraction(c) for c in q_coeffs]
        if degree is None:
            degree = max(poly.degree(fp), poly.degree(fq))
        if degree < 2:
            raise DomainError("rational maps here must have degree >= 2")
        if len(fp) > degree + 1 or len(fq) > degree + 1:
            raise DomainError("coefficient vector longer than degree + 1")
        lcm = 1
        for f in fp + fq:
            lcm = lcm * f.denominator // math.gcd(lcm, f.denominator)
        pc = [int(f * lcm) for f in fp] + [0] * (degree + 1 - len(fp))
        qc = [int(f * lcm) for f in fq] + [0] * (degree + 1 - len(fq))
        g = math.gcd(poly.content(pc), poly.content(qc))
        if g == 0:
            raise InvalidMapError("zero map")
        pc = [c // g for c in pc]
        qc = [c // g for c in qc]
        lead = next((c for c in qc if c != 0), None)
        if lead is None:
            raise InvalidMapError("Q must be nonzero")
        if lead < 0:
            pc = [-c for c in pc]
            qc = [-c for c in qc]
        m = RationalMapQ(tuple(pc), tuple(qc), degree)
        if m.resultant() == 0:
            raise InvalidMapError("P and Q share a factor (zero resultant)")
        return m

    @staticmethod
    def power_map(d: int) -> "RationalMapQ":
        """z -> z^d."""
        return RationalMapQ.from_coeffs((0,) * d + (1,), (1,), d)

    @staticmethod
    def quadratic(c: Fraction | int) -> "RationalMapQ":
        """z -> z^2 + c."""
        return RationalMapQ.from_coeffs((Fraction(c), 0, 1), (1,), 2)

    @staticmethod
    def polynomial(coeffs) -> "RationalMapQ":
        """Polynomial map from affine coefficients, lowest degree first."""
        d = poly.degree([Fraction(c) for c in coeffs])
        return RationalMapQ.from_coeffs(tuple(coeffs), (1,), d)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "P": [str(c) for c in self.P],
            "Q": [str(c) for c in self.Q],
        }

    @staticmethod
    def from_json(data) -> "RationalMapQ":
        return RationalMapQ.from_coeffs(
            [int(c) for c in data["P"]],
            [int(c) for c in data["Q"]],
            int(data["degree"]),
        )

    # --- exact dynamics ----------------------------------------------------

    def apply_raw(self, x: int, y: int) -> tuple[int, int]:
        """Unreduced image of an integer pair under the canonical lift."""
        d = self.degree
        ypow = [1] * (d + 1)
        for i in range(1, d + 1):
            ypow[i] = ypow[i - 1] * y
        px = qx = 0
        for k in range(d, -1, -1):
            px = px * x + self.P[k] * ypow[d - k]
            qx = qx * x + self.Q[k] * ypow[d - k]
        return px, qx

    def apply(self, pt: ProjPointQ) -> ProjPointQ:
        a, b = self.apply_raw(pt.x, pt.y)
        return proj_point(a, b)

    def iterate_orbit(self, pt: ProjPointQ, n: int,
                      digit_budget: int = DIGIT_BUDGET) -> list[ProjPointQ]:
        """Exact orbit segment [pt, f(pt), ..., f^n(pt)].

        Raises ResourceError when a coordinate would exceed the digit budget,
        reporting the largest naive height reached.
        """
        bit_budget = int(digit_budget * math.log2(10))
        orbit = [pt]
        cur = pt
        for _ in range(n):
            cur = self.apply(cur)
            if max(abs(cur.x).bit_length(), abs(cur.y).bit_length()) > bit_budget:
                h = log_int(max(abs(cur.x), abs(cur.y)))
                raise ResourceError(
                    f"digit budget exceeded (naive height {h:.4g})", attained=h)
            orbit.append(cur)
        return orbit

    # --- resultant machinery -----------------------------------------------

    @lru_cache(maxsize=None)
    def resultant(self) -> int:
        """Sylvester resultant of the formal degree-d dehomogenized pair."""
        return _det_bareiss(_sylvester(self.P, self.Q, self.degree))

    def bad_primes(self) -> list[int]:
        """Primes dividing the resultant.  At every other prime the map has
        good reduction and the local Green function vanishes on coprime
        integer pairs."""
        r = abs(self.resultant())
        if r == 0:
            raise InvalidMapError("zero resultant")
        if r == 1:
            return []
        return sorted(set(factor_integer(r)))

    @lru_cache(maxsize=None)
    def cofactor_norms(self) -> tuple:
        """Coefficient 1-norms of the Bezout cofactor pairs for the two
        identities A P + B Q = Res y^(2d-1) and its x-swapped analogue.

        Solving S^T w = (0, ..., 0, Res) yields u, v with u p + v q = Res for
        the dehomogenized pair; homogenizing preserves the coefficients.
        """
        d = self.degree
        res = self.resultant()
        norms = []
        for pc, qc in ((self.P, self.Q), (self.P[::-1], self.Q[::-1])):
            s = _sylvester(pc, qc, d)
            st = [list(r) for r in zip(*s)]
            rhs = [0] * (2 * d - 1) + [res]
            sol = _solve_fraction(st, rhs)
            norms.append(sum(abs(v) for v in sol))
        return tuple(norms)

    def lift_bounds(self) -> tuple[float, float]:
        """Certified (c1, c2) with c1 <= |F(v)| / |v|^d <= c2 in sup norm.

        c2 is the larger coefficient 1-norm of the two components; c1 comes
        from |Res| <= 2 max(cofactor norms) |F(v)| on the unit sup sphere.
        Rounded outward so the bounds remain certified as floats.
        """
        res = abs(self.resultant())
        n1, n2 = self.cofactor_norms()
        c1 = Fraction(res) / (2 * max(n1, n2))
        c2 = max(sum(abs(c) for c in self.P), sum(abs(c) for c in self.Q))
        lo = math.nextafter(float(c1), 0.0)
        hi = math.nextafter(float(c2), math.inf)
        return lo, hi

    # --- iterated lifts ----------------------------------------------------

    def lift_iterate(self, n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Coefficient vectors of the n-fold composed lift (degree d^n),
        content-reduced after every composition step."""
        pn: list[int] = [0, 1]
        qn: list[int] = [1, 0]
        deg = 1
        for _ in range(n):
            newdeg = deg * self.degree
            pnew = [0] * (newdeg + 1)
            qnew = [0] * (newdeg + 1)
            ppow = [[1]]
            qpow = [[1]]
            for _k in range(self.degree):
                ppow.append(_conv_int(ppow[-1], pn))
                qpow.append(_conv_int(qpow[-1], qn))
            for k in range(self.degree + 1):
                if self.P[k] == 0 and self.Q[k] == 0:
                    continue
                term = _conv_int(ppow[k], qpow[self.degree - k])
                if self.P[k] != 0:
                    ck = self.P[k]
                    for i, t in enumerate(term):
                        pnew[i] += ck * t
                if self.Q[k] != 0:
                    ck = self.Q[k]
                    for i, t in enumerate(term):
                        qnew[i] += ck * t
            g = math.gcd(poly.content(pnew), poly.content(qnew))
            if g > 1:
                pnew = [c // g for c in pnew]
                qnew = [c // g for c in qnew]
            pn, qn = pnew, qnew
            deg = newdeg
        return tuple(pn), tuple(qn)


# --- floating maps ----------------------------------------------------------

@dataclass(frozen=True)
class RationalMapC:
    """Floating-point rational map; remembers the exact map when built from
    one so downstream code can use certified constants and exact lifts."""

    P: np.ndarray
    Q: np.ndarray
    degree: int
    exact: RationalMapQ | None = field(default=None, compare=False)

    @staticmethod
    def from_exact(m: RationalMapQ) -> "RationalMapC":
        return RationalMapC(
            np.array([float(c) for c in m.P], dtype=complex),
            np.array([float(c) for c in m.Q], dtype=complex),
            m.degree,
            exact=m,
        )

    @staticmethod
    def from_coeffs(p_coeffs, q_coeffs, degree: int | None = None) -> "RationalMapC":
        pc = poly.as_complex_array(p_coeffs)
        qc = poly.as_complex_array(q_coeffs)
        if degree is None:
            degree = max(poly.degree(pc), poly.degree(qc))
        if degree < 2:
            raise DomainError("degree >= 2 required")
        pc = np.concatenate([pc, np.zeros(degree + 1 - len(pc), dtype=complex)])
        qc = np.concatenate([qc, np.zeros(degree + 1 - len(qc), dtype=complex)])
        return RationalMapC(pc, qc, degree)

    @staticmethod
    def polynomial(coeffs) -> "RationalMapC":
        pc = poly.as_complex_array(coeffs)
        d = poly.degree(pc)
        q = np.zeros(d + 1, dtype=complex)
        q[0] = 1.0
        pc = np.concatenate([pc, np.zeros(d + 1 - len(pc), dtype=complex)])
        return RationalMapC(pc, q, d)

    def apply_point(self, pt: ProjPointC) -> ProjPointC:
        d = self.degree
        xpow = pt.x ** np.arange(d + 1)
        ypow = pt.y ** np.arange(d, -1, -1)
        mono = xpow * ypow
        return normalize_c(complex(np.dot(self.P, mono)), complex(np.dot(self.Q, mono)))

    def apply_affine(self, z: complex) -> complex:
        """f(z) with INFC for poles and for the image of infinity."""
        if not np.isfinite(abs(z)):
            pt = ProjPointC(1.0 + 0j, 0j)
        else:
            pt = normalize_c(complex(z), 1.0 + 0j)
        img = self.apply_point(pt)
        return INFC if img.y == 0 else img.x / img.y

    @lru_cache(maxsize=None)
    def lift_bounds(self) -> tuple[float, float]:
        """(c1, c2) for the stored lift.  Exact-certified when the exact map
        is attached; otherwise a float Sylvester solve whose identity residual
        inflates the cofactor norms, plus a safety factor."""
        if self.exact is not None:
            return self.exact.lift_bounds()
        d = self.degree
        c2 = max(float(np.abs(self.P).sum()), float(np.abs(self.Q).sum()))
        norms = []
        res = None
        for pc, qc in ((self.P, self.Q), (self.P[::-1], self.Q[::-1])):
            m = np.zeros((2 * d, 2 * d), dtype=complex)
            for i in range(d):
                m[i, i:i + d + 1] = pc[::-1]
                m[d + i, i:i + d + 1] = qc[::-1]
            det = np.linalg.det(m)
            if res is None:
                res = det
            if det == 0:
                raise InvalidMapError("numerically zero resultant")
            rhs = np.zeros(2 * d, dtype=complex)
            rhs[-1] = det
            sol = np.linalg.solve(m.T, rhs)
            resid = float(np.abs(m.T @ sol - rhs).max())
            norms.append(float(np.abs(sol).sum()) + 2.0 * resid + 1e-12)
        c1 = 0.5 * abs(res) / (2.0 * max(norms))
        return c1, c2

    def deriv_chart(self, w: complex, in_inv: bool, out_inv: bool) -> complex:
        """Derivative of chart_out o f o chart_in^(-1) at w, charts id or 1/z.

        In the inverted input chart, f(1/w) = P(1, w)/Q(1, w) by homogeneity,
        so both charts reduce to plain polynomial evaluations.
        """
        p = self.P[::-1] if in_inv else self.P
        q = self.Q[::-1] if in_inv else self.Q
        pv = poly.polyval(p, w)
        qv = poly.polyval(q, w)
        dp = poly.polyval(poly.polyder(p), w)
        dq = poly.polyval(poly.polyder(q), w)
        if out_inv:
            return (dq * pv - qv * dp) / (pv * pv)
        return (dp * qv - pv * dq) / (qv * qv)

    def __hash__(self):
        return hash((self.P.tobytes(), self.Q.tobytes(), self.degree))

    def __eq__(self, other):
        return (isinstance(other, RationalMapC)
                and self.degree == other.degree
                and np.array_equal(self.P, other.P)
                and np.array_equal(self.Q, other.Q))


def critical_points(f: RationalMapC, tol: float = 1e-7, seed: int = 0) -> list[ProjPointC]:
    """Critical points with multiplicity (2d - 2 in total).

    Roots of the homogeneous Wronskian P_x Q_y - P_y Q_x; degree drop of the
    dehomogenized Wronskian accounts for critical points at infinity.
    """
    d = f.degree
    k = np.arange(d + 1)
    px = (f.P * k)[1:]
    py = (f.P * (d - k))[:-1]
    qx = (f.Q * k)[1:]
    qy = (f.Q * (d - k))[:-1]
    w = np.convolve(px, qy) - np.convolve(py, qx)
    target = 2 * d - 2
    dw = poly.degree(w)
    if dw < 0:
        raise DomainError("identically zero Wronskian (not a rational map)")
    finite = list(poly_roots(w[: dw + 1], tol=tol, seed=seed).roots) if dw >= 1 else []
    out = [normalize_c(r, 1.0 + 0j) for r in finite]
    out.extend(ProjPointC(1.0 + 0j, 0j) for _ in range(target - len(out)))
    return out


@dataclass(frozen=True)
class PeriodicPoint:
    location: ProjPointC
    period: int
    multiplier: complex
    classification: str  # attracting | repelling | neutral


NEUTRAL_BAND = 1e-8


def _classify(mult: complex) -> str:
    m = abs(mult)
    if abs(m - 1.0) < NEUTRAL_BAND:
        return "neutral"
    return "repelling" if m > 1.0 else "attracting"


def cycle_multiplier(f: RationalMapC, cycle) -> complex:
    """Multiplier of a cycle of affine points (INFC allowed).

    Product of chart derivatives with the 1/z chart used where |z| > 1; the
    chart transitions telescope around the cycle, so the value is the honest
    chart-independent multiplier.
    """
    lam = 1.0 + 0.0j
    n = len(cycle)
    for i in range(n):
        z = cycle[i]
        znext = cycle[(i + 1) % n]
        z_fin = np.isfinite(abs(z))
        next_fin = np.isfinite(abs(znext))
        in_inv = (not z_fin) or abs(z) > 1.0
        out_inv = (not next_fin) or abs(znext) > 1.0
        w = (1.0 / z if z_fin else 0.0 + 0.0j) if in_inv else z
        lam *= f.deriv_chart(complex(w), in_inv, out_inv)
    return lam


def _lift_orbit_newton(f: RationalMapC, t: np.ndarray, n: int):
    """Forward-iterated evaluation of Phi(t) = t Q_n(t,1) - P_n(t,1).

    Expanding the iterated lift is numerically hopeless (its coefficients
    cancel by hundreds of bits near the Julia set), so the pair and its
    t-derivative are pushed through the dynamics with a common sup-norm
    rescaling per step, which Newton ratios and the scale-free residual
    never see.  Returns (psi, dpsi, x, y) after n steps.
    """
    d = f.degree
    k = np.arange(d + 1)
    px_c = (f.P * k)[1:]
    py_c = (f.P * (d - k))[:-1]
    qx_c = (f.Q * k)[1:]
    qy_c = (f.Q * (d - k))[:-1]

    def hom(coeffs, x, y, deg):
        acc = np.zeros_like(x)
        for kk in range(deg, -1, -1):
            acc = acc * x + coeffs[kk] * y ** (deg - kk)
        return acc

    x = t.astype(complex).copy()
    y = np.ones_like(x)
    dx = np.ones_like(x)
    dy = np.zeros_like(x)
    for _ in range(n):
        fx = hom(f.P, x, y, d)
        fy = hom(f.Q, x, y, d)
        pxv = hom(px_c, x, y, d - 1)
        pyv = hom(py_c, x, y, d - 1)
        qxv = hom(qx_c, x, y, d - 1)
        qyv = hom(qy_c, x, y, d - 1)
        ndx = pxv * dx + pyv * dy
        ndy = qxv * dx + qyv * dy
        s = np.maximum(np.abs(fx), np.abs(fy))
        s = np.where(s == 0, 1.0, s)
        x, y = fx / s, fy / s
        dx, dy = ndx / s, ndy / s
    psi = t * y - x
    dpsi = y + t * dy - dx
    return psi, dpsi, x, y


def periodic_residual(f: RationalMapC, t: np.ndarray, n: int) -> float:
    """max sup-chordal distance between f^n(t) and t over the points."""
    _, _, x, y = _lift_orbit_newton(f, np.asarray(t, dtype=complex), n)
    t = np.asarray(t, dtype=complex)
    num = np.abs(x - t * y)
    den = np.maximum(np.abs(x), np.abs(y)) * np.maximum(np.abs(t), 1.0)
    return float((num / den).max())


def periodic_points(f: RationalMapC, n: int, tol: float = 1e-8,
                    seed: int = 0, radius: float = 3.0,
                    max_iter: int = 600) -> list[PeriodicPoint]:
    """All fixed points of f^n: d^n + 1 with multiplicity.

    The finite ones are the roots of Phi_n = x Q_n - y P_n evaluated through
    the iterated lift; infinity is included when it is fixed by f^n.  Each
    point is tagged with its exact period, the multiplier of f^period, and
    the multiplier trichotomy class.  The residual certificate is the
    sup-chordal distance between f^n(t) and t, at most tol.
    """
    d = f.degree
    count = d**n + 1
    if count > PERIODIC_CAPACITY:
        raise ResourceError(f"d^n + 1 = {count} exceeds capacity {PERIODIC_CAPACITY}")
    # infinity contributes to Fix(f^n) exactly when its orbit returns
    pt = ProjPointC(1.0 + 0j, 0j)
    n_inf = 0
    cur = pt
    for _ in range(n):
        cur = f.apply_point(cur)
    if cur.y == 0:
        n_inf = 1
    n_finite = count - n_inf
    rng = np.random.default_rng(np.random.Philox(key=seed))
    ang = 2 * np.pi * (np.arange(n_finite) + 0.5) / n_finite + 0.37
    ang = ang + (0.2 * np.pi / n_finite) * rng.standard_normal(n_finite)
    rad = radius * (1.0 + 0.05 * rng.standard_normal(n_finite))
    guesses = rad * np.exp(1j * ang)

    def newton(z):
        psi, dpsi, _, _ = _lift_orbit_newton(f, z, n)
        sing = np.abs(dpsi) == 0
        dpsi = np.where(sing, 1.0, dpsi)
        return np.where(sing, 0, psi / dpsi)

    roots, _, _ = aberth_solve(newton, guesses, max_iter=max_iter)
    res = periodic_residual(f, roots, n)
    if res > tol:
        raise NumericError(f"periodic-point residual {res:.2e} above {tol:.2e}",
                           best=roots)
    order = np.lexsort((roots.imag, roots.real))
    pts: list[complex] = list(roots[order]) + [INFC] * n_inf

    out = []
    for z in pts:
        orbit = [z]
        cur = z
        period = n
        for step in range(1, n + 1):
            cur = f.apply_affine(cur)
            if n % step == 0 and _chordal_aff(cur, z) < 1e-6:
                period = step
                break
            orbit.append(cur)
        cycle = orbit[:period]
        lam = cycle_multiplier(f, cycle)
        loc = ProjPointC(1.0 + 0j, 0j) if not np.isfinite(abs(z)) else normalize_c(z, 1.0 + 0j)
        out.append(PeriodicPoint(loc, period, lam, _classify(lam)))
    return out


def _chordal_aff(z, w) -> float:
    zf = np.isfinite(abs(z))
    wf = np.isfinite(abs(w))
    if not zf and not wf:
        return 0.0
    if not zf:
        return 1.0 / math.sqrt(1.0 + abs(w) ** 2)
    if not wf:
        return 1.0 / math.sqrt(1.0 + abs(z) ** 2)
    return abs(z - w) / math.sqrt((1.0 + abs(z) ** 2) * (1.0 + abs(w) ** 2))
