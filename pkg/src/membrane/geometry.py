"""Geometric functionals of the image domain, computed through the map."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull

from . import maps
from .errors import DerivativeZeroOnSamples, InvalidPoint, NonconvergedDiameter
from .maps import MapSpec
from .quad import DEFAULT, QuadConfig, boundary_parametrization, integrate_base

CONVEXITY_RADII = (1.0 - 1e-4, 1.0 - 1e-2)
MAX_DIAMETER_SAMPLES = 2 ** 16


@dataclass(frozen=True)
class BoundaryTrace:
    parameters: np.ndarray   # in [0, 1): angle / 2 pi, or arclength / perimeter
    points: np.ndarray

    def __post_init__(self):
        if len(self.parameters) < 64:
            raise ValueError("a boundary trace needs at least 64 samples")
        if np.any(np.diff(self.parameters) <= 0):
            raise ValueError("trace parameters must be increasing")

    @property
    def count(self):
        return len(self.parameters)

    @property
    def samples(self):
        return list(zip(self.parameters.tolist(), self.points.tolist()))


def boundary_trace(spec: MapSpec, count: int) -> BoundaryTrace:
    s = np.arange(count) / count
    return BoundaryTrace(s, maps.evaluate(spec, boundary_parametrization(spec.base, s)))


def area(spec: MapSpec, cfg: QuadConfig = DEFAULT) -> float:
    """|Omega| as the integral of the Jacobian |psi'|^2 over the base domain."""
    return integrate_base(spec, lambda z: np.abs(maps.deriv(spec, z)) ** 2, cfg,
                          exponent_of_jacobian=2.0)


def shoelace_area(points) -> float:
    z = np.asarray(points, dtype=complex)
    return 0.5 * float(np.sum((np.conj(z) * np.roll(z, -1)).imag))


def hull_diameter(points) -> float:
    """Largest pairwise distance, by rotating calipers over the convex hull."""
    pts = np.column_stack([np.real(points), np.imag(points)])
    if len(pts) < 3:
        return float(np.max(np.abs(points[:, None] - points[None, :]))) if len(pts) else 0.0
    hull = pts[ConvexHull(pts).vertices]          # counter-clockwise
    h = len(hull)
    if h <= 3:
        return float(max(np.hypot(*(hull[i] - hull[j])) for i in range(h) for j in range(i)))

    def cross_area(i, j, k):
        a, b, c = hull[i], hull[j], hull[k]
        return abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))

    best = 0.0
    j = 1
    for i in range(h):
        i1 = (i + 1) % h
        while cross_area(i, i1, (j + 1) % h) > cross_area(i, i1, j):
            j = (j + 1) % h
        best = max(best, np.hypot(*(hull[i] - hull[j])), np.hypot(*(hull[i1] - hull[j])))
    return float(best)


def diameter(spec: MapSpec, n_samples: int = 64, rel_tol: float = 1e-6) -> float:
    """Diameter of psi(base): hull of boundary samples, doubled until it settles.

    Extreme points of the closure lie on the boundary, so interior points are never
    needed. Sample sets are nested, so successive estimates are nondecreasing.
    """
    if n_samples < 64:
        raise ValueError("n_samples must be at least 64")
    prev = hull_diameter(boundary_trace(spec, n_samples).points)
    n = n_samples
    while n < MAX_DIAMETER_SAMPLES:
        n *= 2
        cur = hull_diameter(boundary_trace(spec, n).points)
        if abs(cur - prev) <= rel_tol * cur:
            return cur
        prev = cur
    raise NonconvergedDiameter(f"diameter of {spec.describe()} still moving at {n} samples")


def convexity_margin(spec: MapSpec, grid_n: int = 2048) -> float:
    """Smallest boundary turning rate of the image on curves just inside the boundary.

    Disc base: inf of Re(1 + z psi''/psi') on |z| = 1 - 1e-4 and 1 - 1e-2. Rectangle
    base: inf of Im(tau psi''/psi') along the inset rectangles, tau the unit
    counter-clockwise tangent (corners turn by +pi/2 and never spoil convexity).
    A positive value means the image is convex.
    """
    s = np.arange(grid_n) / grid_n
    base = spec.base
    worst = np.inf
    for r in CONVEXITY_RADII:
        if base.is_disc:
            z = r * np.exp(2j * np.pi * s)
            tau = None
        else:
            inset = (1.0 - r) * min(base.a, base.b)
            a, b = base.a - 2 * inset, base.b - 2 * inset
            t = s * 2 * (a + b)
            z = inset * (1 + 1j) + boundary_parametrization(maps.BaseDomain.rectangle(a, b), s)
            tau = np.select([t < a, t < a + b, t < 2 * a + b], [1.0 + 0j, 1j, -1.0 + 0j], -1j)
        d1 = maps.deriv(spec, z)
        if np.any(np.abs(d1) == 0):
            raise DerivativeZeroOnSamples(f"psi' vanishes on the convexity samples of {spec.describe()}")
        ratio = maps.deriv2(spec, z) / d1
        vals = (1.0 + z * ratio).real if tau is None else (tau * ratio).imag
        worst = min(worst, float(np.min(vals)))
    return worst


def conformal_radius(spec: MapSpec, z) -> float:
    """|psi'(z)| (1 - |z|^2), the conformal radius of Omega at psi(z)."""
    if not spec.base.is_disc:
        raise InvalidPoint("the conformal radius is defined for disc-based maps")
    z = complex(z)
    if not abs(z) < 1:
        raise InvalidPoint(f"{z} is not inside the unit disc")
    return abs(maps.deriv(spec, z)) * (1.0 - abs(z) ** 2)
