"""Points of the projective line over Q and over C."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class ProjPointQ:
    """Point of P^1(Q) as a coprime integer pair [x : y].

    Normalized so gcd(|x|, |y|) = 1 and y > 0, or y = 0 and x = 1 (infinity).
    Use proj_point / from_rational instead of the raw constructor.
    """

    x: int
    y: int

    def to_affine(self) -> Fraction | None:
        """Affine value x/y, or None for the point at infinity."""
        if self.y == 0:
            return None
        return Fraction(self.x, self.y)

    @property
    def is_infinity(self) -> bool:
        return self.y == 0

    def to_json(self) -> list[str]:
        return [str(self.x), str(self.y)]

    def __str__(self) -> str:
        return "inf" if self.y == 0 else f"{self.x}/{self.y}"


def proj_point(x: int, y: int) -> ProjPointQ:
    """Normalized projective point from an integer pair."""
    if x == 0 and y == 0:
        raise DomainError("(0, 0) is not a projective point")
    g = math.gcd(abs(x), abs(y))
    x, y = x // g, y // g
    if y < 0 or (y == 0 and x < 0):
        x, y = -x, -y
    return ProjPointQ(x, y)


def from_rational(z: Fraction | int | None) -> ProjPointQ:
    """Affine rational to projective; None means infinity."""
    if z is None:
        return ProjPointQ(1, 0)
    z = Fraction(z)
    return ProjPointQ(z.numerator, z.denominator)


def point_from_json(data) -> ProjPointQ:
    return proj_point(int(data[0]), int(data[1]))


INFC = complex("inf")


@dataclass(frozen=True)
class ProjPointC:
    """Point of P^1(C), sup-norm normalized: max(|x|, |y|) = 1."""

    x: complex
    y: complex

    def to_affine(self) -> complex:
        """Affine value; INFC (complex inf) when the point is at infinity."""
        if self.y == 0:
            return INFC
        return self.x / self.y

    @property
    def is_infinity(self) -> bool:
        return self.y == 0


def normalize_c(x: complex, y: complex) -> ProjPointC:
    m = max(abs(x), abs(y))
    if m == 0 or not math.isfinite(m):
        raise DomainError("invalid homogeneous pair")
    return ProjPointC(x / m, y / m)


def from_affine_c(z: complex) -> ProjPointC:
    if z == INFC or (isinstance(z, complex) and not math.isfinite(abs(z))):
        return ProjPointC(1.0 + 0.0j, 0.0 + 0.0j)
    return normalize_c(complex(z), 1.0 + 0.0j)


def chordal(z, w) -> float:
    """Chordal (spherical) distance between affine points; inf allowed."""
    z_inf = not math.isfinite(abs(complex(z)))
    w_inf = not math.isfinite(abs(complex(w)))
    if z_inf and w_inf:
        return 0.0
    if z_inf:
        return 1.0 / math.sqrt(1.0 + abs(w) ** 2)
    if w_inf:
        return 1.0 / math.sqrt(1.0 + abs(z) ** 2)
    return abs(z - w) / math.sqrt((1.0 + abs(z) ** 2) * (1.0 + abs(w) ** 2))


def chordal_array(z: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Vectorized chordal distance for finite complex arrays."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return np.abs(z - w) / np.sqrt((1.0 + np.abs(z) ** 2) * (1.0 + np.abs(w) ** 2))


def chordal_points(p: ProjPointC, q: ProjPointC) -> float:
    """Chordal distance from homogeneous pairs (no affine overflow)."""
    num = abs(p.x * q.y - q.x * p.y)
    den = math.sqrt((abs(p.x) ** 2 + abs(p.y) ** 2) * (abs(q.x) ** 2 + abs(q.y) ** 2))
    return num / den
