"""Parameter-plane grids: escape-rate values per pixel, boundary flagging,
box-counting dimension, and PGM/CSV export.

Pixels are evaluated with vectorized escape iteration; a pixel that never
leaves the certified escape radius by the depth cap keeps the value 0 and is
reported as interior/undecided, never as exterior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .families import CubicParam, Per1Param

_BIG = 1e100


@dataclass(frozen=True)
class LocusGrid:
    """Per-pixel Green values over a parameter box.

    values[i, j] is the pixel at x = xs[j], y = ys[i] (row-major, y down the
    first axis); 0 means interior or undecided at the depth cap.
    """

    family: str
    box: tuple[float, float, float, float]  # x0, x1, y0, y1
    resolution: int
    depth: int
    values: np.ndarray
    params: dict

    @property
    def pixel_size(self) -> float:
        x0, x1, y0, y1 = self.box
        return max(x1 - x0, y1 - y0) / self.resolution

    def interior_fraction(self) -> float:
        return float((self.values == 0).mean())

    def zero_area(self) -> float:
        x0, x1, y0, y1 = self.box
        pix = (x1 - x0) * (y1 - y0) / self.resolution**2
        return float((self.values == 0).sum() * pix)


def _pixel_centers(box, resolution):
    x0, x1, y0, y1 = box
    xs = x0 + (x1 - x0) * (np.arange(resolution) + 0.5) / resolution
    ys = y0 + (y1 - y0) * (np.arange(resolution) + 0.5) / resolution
    return xs[None, :] + 1j * ys[:, None]


def _escape_rates(orbit_start, step, degree: int, radius, depth: int,
                  lead: float = 1.0) -> np.ndarray:
    """Vectorized escape rate lim d^-n log|z_n| for an array of orbits.

    step(z, alive_mask) advances the orbit in place per pixel; radius may be
    per-pixel.  Values freeze once |z| > 1e100: past that the telescope tail
    is the closed-form leading-coefficient term log(lead)/(d-1) plus
    corrections below double precision.
    """
    tail = math.log(lead) / (degree - 1)

    def freeze(zv, nv):
        return (np.log(np.abs(zv)) + tail) / degree ** nv.astype(float)

    z = orbit_start.copy()
    g = np.zeros(z.shape)
    n = np.zeros(z.shape, dtype=np.int64)
    alive = np.ones(z.shape, dtype=bool)
    for _ in range(depth):
        if not alive.any():
            break
        frozen = alive & (np.abs(z) > _BIG)
        if frozen.any():
            g[frozen] = freeze(z[frozen], n[frozen])
            alive &= ~frozen
        z = step(z, alive)
        n[alive] += 1
    # pixels beyond the radius but not yet past 1e100: finish them by
    # iterating the survivors a bit longer
    pending = alive & (np.abs(z) > radius)
    guard = 0
    while pending.any() and guard < 64:
        frozen = pending & (np.abs(z) > _BIG)
        if frozen.any():
            g[frozen] = freeze(z[frozen], n[frozen])
            pending &= ~frozen
            alive &= ~frozen
        z = step(z, pending)
        n[pending] += 1
        guard += 1
    return g


def quadratic_locus(box, resolution: int, depth: int = 500) -> LocusGrid:
    """G_M over a box: escape rate of the critical value c under z^2 + c."""
    c = _pixel_centers(box, resolution)
    radius = np.sqrt(np.abs(c)) + 3.0

    def step(z, mask):
        z = z.copy()
        z[mask] = z[mask] ** 2 + c[mask]
        return z

    g = _escape_rates(c.copy(), step, 2, radius, depth)
    return LocusGrid("quadratic", tuple(box), resolution, depth, g, {})


def cubic_slice_locus(box, resolution: int, a: complex, depth: int = 500) -> LocusGrid:
    """max(G(0), G(c)) for P_{c,a} over a box of c at fixed a."""
    c = _pixel_centers(box, resolution)
    a3 = complex(a) ** 3
    s = abs(a3) + np.abs(c) / 2.0
    radius = np.maximum(1.0, (s + 2.0) * 3.0)

    def make_step(cc):
        def step(z, mask):
            z = z.copy()
            zm = z[mask]
            z[mask] = zm**3 / 3.0 - cc[mask] * zm**2 / 2.0 + a3
            return z
        return step

    g0 = _escape_rates(np.zeros_like(c), make_step(c), 3, radius, depth, lead=1 / 3)
    g1 = _escape_rates(c.copy(), make_step(c), 3, radius, depth, lead=1 / 3)
    g = np.maximum(g0, g1)
    return LocusGrid("cubic-slice", tuple(box), resolution, depth, g,
                     {"a": [float(np.real(a)), float(np.imag(a))]})


def per1_locus(box, resolution: int, kappa: complex, depth: int = 500,
               channel: str = "max") -> LocusGrid:
    """Green values of the two marked critical orbits of f_s over an s-box.

    channel picks max(G+, G-), min(G+, G-), or one of them ("plus"/"minus").
    """
    if channel not in ("max", "min", "plus", "minus"):
        raise DomainError("channel must be max | min | plus | minus")
    s = _pixel_centers(box, resolution)
    bad = s == 0
    s = np.where(bad, 1e-30, s)
    kappa = complex(kappa)
    b2 = -kappa * (s + 1.0 / s) / 2.0
    coeff_sum = abs(kappa) + np.abs(b2)
    radius = np.maximum(1.0, (coeff_sum + 2.0) * 3.0 / abs(kappa))

    def step(z, mask):
        z = z.copy()
        zm = z[mask]
        z[mask] = kappa * zm + b2[mask] * zm**2 + (kappa / 3.0) * zm**3
        return z

    lead = abs(kappa) / 3.0
    gp = _escape_rates(s.copy(), step, 3, radius, depth, lead=lead)
    gm = _escape_rates(1.0 / s, step, 3, radius, depth, lead=lead)
    if channel == "max":
        g = np.maximum(gp, gm)
    elif channel == "min":
        g = np.minimum(gp, gm)
    elif channel == "plus":
        g = gp
    else:
        g = gm
    g = np.where(bad, 0.0, g)
    return LocusGrid(f"per1({channel})", tuple(box), resolution, depth, g,
                     {"kappa": [kappa.real, kappa.imag], "channel": channel})


def locus_grid(family: str, box, resolution: int, depth: int = 500,
               **params) -> LocusGrid:
    """Dispatch on the family mini-language: quadratic | cubic-slice | per1."""
    x0, x1, y0, y1 = box
    if resolution < 2 or x1 <= x0 or y1 <= y0:
        raise DomainError("degenerate box or resolution")
    if family == "quadratic":
        return quadratic_locus(box, resolution, depth)
    if family == "cubic-slice":
        return cubic_slice_locus(box, resolution, complex(params["a"]), depth)
    if family == "per1":
        return per1_locus(box, resolution, complex(params["kappa"]), depth,
                          params.get("channel", "max"))
    raise DomainError(f"unknown family {family!r}")


# --- boundary flagging and box dimension -------------------------------------

def boundary_mask(grid: LocusGrid, kappa: float = 1.0) -> np.ndarray:
    """Pixels flagged as boundary: a thin positive ribbon G <= kappa * pixel
    (which picks up filaments whose interior is invisible at pixel scale)
    plus interior pixels adjacent to escaping ones."""
    g = grid.values
    ribbon = (g > 0) & (g <= kappa * grid.pixel_size)
    zero = g == 0
    pos = g > 0
    adj = np.zeros_like(zero)
    adj[1:, :] |= zero[1:, :] & pos[:-1, :]
    adj[:-1, :] |= zero[:-1, :] & pos[1:, :]
    adj[:, 1:] |= zero[:, 1:] & pos[:, :-1]
    adj[:, :-1] |= zero[:, :-1] & pos[:, 1:]
    return ribbon | adj


def boundary_box_dimension(grid: LocusGrid, scales=(4, 8, 16, 32, 64),
                           kappa: float = 1.0, min_resolution: int = 1024) -> dict:
    """Box-counting dimension estimate of the flagged boundary set.

    Least-squares slope of log(box count) against log(1/box size) over the
    given scales (in pixels).  Report-only diagnostics; raises DomainError
    when the grid is too coarse or the boundary set too thin.
    """
    if grid.resolution < min_resolution:
        raise DomainError(f"grid must be at least {min_resolution}^2")
    mask = boundary_mask(grid, kappa)
    if int(mask.sum()) < 64:
        raise DomainError("too few boundary pixels for a dimension estimate")
    res = grid.resolution
    xs, ys, counts = [], [], []
    for s in scales:
        r = res // s * s
        occ = mask[:r, :r].reshape(r // s, s, r // s, s).any(axis=(1, 3)).sum()
        if occ == 0:
            raise DomainError("empty boundary at scale")
        xs.append(math.log(1.0 / (s * grid.pixel_size)))
        ys.append(math.log(occ))
        counts.append(int(occ))
    slope, intercept = np.polyfit(np.array(xs), np.array(ys), 1)
    return {
        "dimension": float(slope),
        "intercept": float(intercept),
        "scales": list(scales),
        "counts": counts,
        "boundary_pixels": int(mask.sum()),
    }


# --- export -------------------------------------------------------------------

def grid_to_pgm(grid: LocusGrid, gmax: float | None = None) -> bytes:
    """16-bit binary PGM, value = clamped scaled Green (0 = interior)."""
    g = grid.values
    if gmax is None:
        gmax = float(g.max()) or 1.0
    pix = np.clip(g / gmax, 0.0, 1.0)
    pix = np.round(pix * 65535).astype(">u2")
    header = f"P5\n{grid.resolution} {grid.resolution}\n65535\n".encode()
    return header + pix.tobytes()


def grid_to_csv(grid: LocusGrid) -> str:
    lines = ["re,im,green"]
    x0, x1, y0, y1 = grid.box
    res = grid.resolution
    for i in range(res):
        y = y0 + (y1 - y0) * (i + 0.5) / res
        for j in range(res):
            x = x0 + (x1 - x0) * (j + 0.5) / res
            lines.append(f"{x!r},{y!r},{grid.values[i, j]!r}")
    return "\n".join(lines) + "\n"


def synthetic_grid(values: np.ndarray, box, family: str = "synthetic",
                   depth: int = 0) -> LocusGrid:
    """Wrap a precomputed value array (used for closed-form sanity cases)."""
    res = values.shape[0]
    return LocusGrid(family, tuple(box), res, depth, values, {})
