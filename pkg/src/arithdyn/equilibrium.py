"""Equilibrium-measure samples: backward orbits, periodic points, potentials.

Clouds are weighted finite samples of the measure.  Backward sampling picks
one of the d preimages uniformly at every step, which weights each branch by
d^(-depth), exactly the atom weights of the normalized pullback; the full
tree realizes those atoms without sampling error.  All randomness comes from
a counter-based Philox generator keyed by the seed, so identical seeds give
bit-identical clouds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import poly
from .errors import DomainError, NumericError
from .maps import RationalMapC, critical_points, periodic_points
from .projective import chordal, chordal_array

_FULL_TREE_CAP = 1 << 17
_ATOM_CLEARANCE = 1e-6


@dataclass(frozen=True)
class PointCloud:
    """Weighted finite sample of a measure on the sphere.

    points holds affine chart coordinates; atoms at infinity are allowed
    (complex inf) and flagged through is_inf.  Weights are positive and sum
    to 1 within 1e-12.
    """

    points: np.ndarray
    weights: np.ndarray
    provenance: str  # backward | periodic | parameter

    def __post_init__(self):
        if self.points.size < 1:
            raise DomainError("empty cloud")
        if self.weights.shape != self.points.shape:
            raise DomainError("weights shape mismatch")
        s = float(self.weights.sum())
        if abs(s - 1.0) > 1e-12 or (self.weights <= 0).any():
            raise DomainError("weights must be positive and sum to 1")

    @property
    def size(self) -> int:
        return int(self.points.size)

    @property
    def is_inf(self) -> np.ndarray:
        return ~np.isfinite(self.points)

    def finite_points(self) -> np.ndarray:
        return self.points[np.isfinite(self.points)]


def uniform_cloud(points: np.ndarray, provenance: str) -> PointCloud:
    pts = np.asarray(points, dtype=complex)
    w = np.full(pts.shape, 1.0 / pts.size)
    return PointCloud(pts, w, provenance)


def _preimage_batch(f: RationalMapC, targets: np.ndarray) -> np.ndarray:
    """(n, d) array of preimages for each affine target (inf allowed).

    Solves v P(w) - u Q(w) = 0 for [u : v] the target; degree drop means
    preimages at infinity.  Rows are sorted by (re, im) with infinities last,
    so the output is deterministic.
    """
    d = f.degree
    n = len(targets)
    out = np.empty((n, d), dtype=complex)
    finite = np.isfinite(targets)
    # companion-matrix batch for the full-degree generic case
    coeffs = np.empty((n, d + 1), dtype=complex)
    coeffs[finite] = f.P[None, :] - targets[finite, None] * f.Q[None, :]
    coeffs[~finite] = -np.broadcast_to(f.Q, (int((~finite).sum()), d + 1))
    generic = np.abs(coeffs[:, d]) > 1e-13 * np.abs(coeffs).max(axis=1)
    if generic.any():
        sub = coeffs[generic]
        m = np.zeros((len(sub), d, d), dtype=complex)
        m[:, 1:, :-1] = np.eye(d - 1)
        m[:, :, -1] = -sub[:, :-1] / sub[:, d, None]
        ev = np.linalg.eigvals(m)
        order = np.lexsort((ev.imag, ev.real), axis=-1)
        out[generic] = np.take_along_axis(ev, order, axis=1)
    if (~generic).any():
        for i in np.where(~generic)[0]:
            c = coeffs[i]
            dc = poly.degree(c)
            roots = []
            if dc >= 1:
                roots = sorted(np.roots(c[: dc + 1][::-1]), key=lambda z: (z.real, z.imag))
            row = list(roots) + [complex("inf")] * (d - len(roots))
            out[i] = row
    return out


def backward_cloud(f: RationalMapC, z0: complex, depth: int,
                   width: int | None = None, seed: int = 0) -> PointCloud:
    """Backward-orbit sample of the equilibrium measure started at z0.

    width = None (or d^depth) builds the full preimage tree, the exact atoms
    of the depth-fold normalized pullback of the point mass at z0; otherwise
    width independent random branches are tracked, one uniform preimage
    choice per step.  Exceptional starting points are detected by stagnation
    of the first preimage set and rejected.
    """
    d = f.degree
    if depth < 1:
        raise DomainError("depth >= 1")
    first = _preimage_batch(f, np.array([complex(z0)]))[0]
    finite_first = first[np.isfinite(first)]
    if len(finite_first) and np.isfinite(complex(z0)):
        if all(chordal(complex(w), complex(z0)) < 1e-9 for w in first):
            raise DomainError(f"z0 = {z0} looks exceptional (stagnant preimages)")
    elif not len(finite_first):
        # all preimages at infinity: totally invariant infinity
        raise DomainError(f"z0 = {z0} looks exceptional (preimages all at infinity)")

    full = d**depth
    if width is None or width == full:
        if full > _FULL_TREE_CAP:
            raise DomainError(f"full tree size {full} above cap {_FULL_TREE_CAP}")
        pts = np.array([complex(z0)])
        for _ in range(depth):
            pre = _preimage_batch(f, pts)
            pts = pre.reshape(-1)
        return uniform_cloud(pts, "backward")

    rng = np.random.default_rng(np.random.Philox(key=seed))
    choices = rng.integers(0, d, size=(depth, width))
    pts = np.full(width, complex(z0))
    for step in range(depth):
        pre = _preimage_batch(f, pts)
        pts = pre[np.arange(width), choices[step]]
    return uniform_cloud(pts, "backward")


def periodic_cloud(f: RationalMapC, n: int, tol: float = 1e-8,
                   seed: int = 0) -> PointCloud:
    """Uniform cloud on the repelling periodic points of period dividing n."""
    pps = periodic_points(f, n, tol=tol, seed=seed)
    rep = [p for p in pps if p.classification == "repelling"]
    if not rep:
        raise NumericError(f"no repelling points found for period {n}")
    pts = []
    for p in rep:
        pts.append(complex("inf") if p.location.y == 0 else p.location.x / p.location.y)
    # collapse numerically repeated roots so each point appears once
    arr = np.array(pts, dtype=complex)
    arr = arr[np.lexsort((arr.imag, arr.real))]
    keep = [arr[0]]
    for z in arr[1:]:
        if chordal(complex(z), complex(keep[-1])) > 1e-8:
            keep.append(z)
    return uniform_cloud(np.array(keep), "periodic")


def potential(cloud: PointCloud, w: complex) -> float:
    """Weighted mean of log |w - z| over the atoms.

    Needs every atom finite and the probe at spherical distance > 1e-6 from
    each atom."""
    if cloud.is_inf.any():
        raise DomainError("cloud has atoms at infinity; potential undefined in this chart")
    dist = chordal_array(np.full(cloud.size, complex(w)), cloud.points)
    if float(dist.min()) <= _ATOM_CLEARANCE:
        raise DomainError("probe too close to an atom")
    return float(np.sum(cloud.weights * np.log(np.abs(complex(w) - cloud.points))))


def compare_clouds(a: PointCloud, b: PointCloud, probes) -> float:
    """Max over probes of the potential difference between the clouds."""
    return max(abs(potential(a, w) - potential(b, w)) for w in probes)


def probe_ring(radius: float = 3.0, count: int = 20) -> np.ndarray:
    """Deterministic probe points on |w| = radius."""
    return radius * np.exp(2j * np.pi * np.arange(count) / count)


def spherical_derivative(f: RationalMapC, z: np.ndarray) -> np.ndarray:
    """|f'(z)| (1 + |z|^2) / (1 + |f(z)|^2), the chart-free derivative norm."""
    num = poly.polyval(f.P, z)
    den = poly.polyval(f.Q, z)
    dnum = poly.polyval(poly.polyder(f.P), z)
    dden = poly.polyval(poly.polyder(f.Q), z)
    fz = num / den
    fprime = (dnum * den - num * dden) / (den * den)
    return np.abs(fprime) * (1.0 + np.abs(z) ** 2) / (1.0 + np.abs(fz) ** 2)


def lyapunov(f: RationalMapC, cloud: PointCloud, n_burn: int = 16,
             n_avg: int = 128, seed: int = 0):
    """Birkhoff average of log |df| (spherical) along orbits from cloud atoms.

    Orbits passing within 1e-12 (spherical) of a critical point are dropped
    and replaced by a fresh atom; the count of replacements is reported.
    Returns (estimate, standard_error, n_resampled).
    """
    crit = critical_points(f)
    crit_aff = np.array(
        [complex("inf") if c.y == 0 else c.x / c.y for c in crit], dtype=complex)
    starts = cloud.finite_points()
    if starts.size == 0:
        raise DomainError("cloud has no finite atoms")
    rng = np.random.default_rng(np.random.Philox(key=seed))

    def too_close(z: np.ndarray) -> np.ndarray:
        bad = np.zeros(z.shape, dtype=bool)
        for ca in crit_aff:
            if np.isfinite(ca):
                bad |= chordal_array(z, np.full(z.shape, ca)) < 1e-12
            else:
                bad |= 1.0 / np.sqrt(1.0 + np.abs(z) ** 2) < 1e-12
        return bad

    z = starts.copy()
    sums = np.zeros(z.shape)
    counts = np.zeros(z.shape, dtype=np.int64)
    resampled = 0
    for step in range(n_burn + n_avg):
        bad = too_close(z)
        if bad.any():
            # orbit fell on a critical point: restart it from a fresh atom
            # and discard its partial average
            resampled += int(bad.sum())
            z[bad] = starts[rng.integers(0, starts.size, size=int(bad.sum()))]
            sums[bad] = 0.0
            counts[bad] = 0
        g = spherical_derivative(f, z)
        if step >= n_burn:
            sums += np.log(g)
            counts += 1
        num = poly.polyval(f.P, z)
        den = poly.polyval(f.Q, z)
        z = num / den
    keep = counts > 0
    per_orbit = sums[keep] / counts[keep]
    est = float(per_orbit.mean())
    stderr = float(per_orbit.std(ddof=1) / math.sqrt(per_orbit.size))
    return est, stderr, resampled


# --- statistics helpers -------------------------------------------------------

def star_discrepancy_angles(points: np.ndarray) -> float:
    """Star discrepancy of the angular law of unit-circle points vs uniform."""
    ang = np.sort(np.angle(points) / (2 * np.pi) % 1.0)
    n = len(ang)
    i = np.arange(1, n + 1)
    return float(max((i / n - ang).max(), (ang - (i - 1) / n).max()))


def ks_distance_arcsine(points: np.ndarray) -> float:
    """Kolmogorov distance of real points in [-2, 2] to the arcsine law."""
    x = np.sort(points.real)
    cdf = 0.5 + np.arcsin(np.clip(x / 2.0, -1, 1)) / np.pi
    n = len(x)
    i = np.arange(1, n + 1)
    return float(max((i / n - cdf).max(), (cdf - (i - 1) / n).max()))


def min_covering_radius(cloud: PointCloud, n_probes: int = 4000) -> float:
    """Max over sphere probes of the spherical distance to the nearest atom.

    Probes are a deterministic Fibonacci sphere mapped to the plane by
    stereographic projection (plus the pole itself)."""
    i = np.arange(n_probes)
    golden = (1 + math.sqrt(5)) / 2
    zq = 1 - 2 * (i + 0.5) / n_probes  # height on the unit sphere
    theta = 2 * np.pi * i / golden
    rad = np.sqrt(np.maximum(0.0, 1 - zq**2))
    # stereographic from the north pole: (x, y, z) -> (x + iy)/(1 - z)
    denom = np.maximum(1.0 - zq, 1e-12)
    probes = (rad * np.cos(theta) + 1j * rad * np.sin(theta)) / denom
    pts = cloud.points
    fin = np.isfinite(pts)
    worst = 0.0
    for w in probes:
        dmin = math.inf
        if fin.any():
            dmin = float(chordal_array(np.full(int(fin.sum()), w), pts[fin]).min())
        if (~fin).any():
            dmin = min(dmin, 1.0 / math.sqrt(1.0 + abs(w) ** 2))
        worst = max(worst, dmin)
    # the pole itself (north pole = infinity in this chart)
    dinf = 1.0 if not (~fin).any() else 0.0
    if fin.any():
        dinf = min(dinf, float((1.0 / np.sqrt(1.0 + np.abs(pts[fin]) ** 2)).min()))
    return max(worst, dinf)


@dataclass(frozen=True)
class MeasureStats:
    """Summary statistics attached to a cloud by the CLI."""

    potentials: dict
    discrepancy: float | None
    lyapunov_estimate: tuple | None

    def to_json(self) -> dict:
        out = {"potentials": {str(k): v for k, v in self.potentials.items()}}
        if self.discrepancy is not None:
            out["discrepancy"] = self.discrepancy
        if self.lyapunov_estimate is not None:
            e, s, r = self.lyapunov_estimate
            out["lyapunov"] = {"estimate": e, "stderr": s, "resampled": r}
        return out


# --- export -------------------------------------------------------------------

def cloud_to_csv(cloud: PointCloud) -> str:
    lines = ["re,im,weight"]
    for z, w in zip(cloud.points, cloud.weights):
        re = "inf" if not np.isfinite(z) else repr(float(z.real))
        im = "inf" if not np.isfinite(z) else repr(float(z.imag))
        lines.append(f"{re},{im},{w!r}")
    return "\n".join(lines) + "\n"


def cloud_from_csv(text: str) -> PointCloud:
    rows = text.strip().split("\n")[1:]
    pts, ws = [], []
    for row in rows:
        re, im, w = row.split(",")
        if re == "inf":
            pts.append(complex("inf"))
        else:
            pts.append(complex(float(re), float(im)))
        ws.append(float(w))
    return PointCloud(np.array(pts, dtype=complex), np.array(ws), "backward")


def cloud_to_binary(cloud: PointCloud) -> bytes:
    """Little-endian f64 triples (re, im, weight)."""
    arr = np.empty((cloud.size, 3), dtype="<f8")
    arr[:, 0] = cloud.points.real
    arr[:, 1] = cloud.points.imag
    arr[:, 2] = cloud.weights
    return arr.tobytes()
