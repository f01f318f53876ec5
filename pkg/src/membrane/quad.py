"""Adaptive cubature on the unit disc and on rectangles, and L^alpha norms of psi'.

Integrands are vectorized callables taking an array of complex points and
returning real values.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from . import maps
from .errors import NonconvergedIntegral, NonintegrableExponent
from .maps import Family, MapSpec
from .rules import composite_nodes, gauss_jacobi_left, gauss_legendre

RTOL_ENV = "MEMBRANE_QUAD_RTOL"


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_levels: int = 14
    panel_order: int = 16

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_levels < 1 or self.panel_order < 2:
            raise ValueError("max_levels >= 1 and panel_order >= 2 required")

    @classmethod
    def from_env(cls, **overrides):
        """Default config, with ``rel_tol`` taken from $MEMBRANE_QUAD_RTOL when set."""
        raw = os.environ.get(RTOL_ENV)
        if raw is not None and "rel_tol" not in overrides:
            overrides["rel_tol"] = float(raw)
        return cls(**overrides)

    def accept(self, new, old):
        return abs(new - old) <= max(self.abs_tol, self.rel_tol * abs(new))


DEFAULT = QuadConfig()


def _refine(step, cfg, what):
    """Evaluate step(level) for level = 1, 2, ... until two successive values agree."""
    prev = step(1)
    for level in range(2, cfg.max_levels + 1):
        cur = step(level)
        if cfg.accept(cur, prev):
            return cur
        prev_prev, prev = prev, cur
    raise NonconvergedIntegral(
        f"{what}: no convergence within {cfg.max_levels} refinement levels "
        f"(last estimates {prev_prev!r}, {prev!r})",
        (prev_prev, prev),
    )


# -- disc ---------------------------------------------------------------------------

def _polar_rule(level, order):
    """Tensor rule on the disc: dyadic radial panels toward r = 1, uniform angles."""
    rb = np.concatenate(([0.0], 1.0 - 2.0 ** -np.arange(1, level + 1), [1.0]))
    r, wr = composite_nodes(rb, order)
    n_theta = 2 ** ((level + 1) // 2 + 1)
    t, wt = composite_nodes(np.linspace(0.0, 2 * np.pi, n_theta + 1), order)
    z = (r[:, None] * np.exp(1j * t)[None, :]).ravel()
    w = ((r * wr)[:, None] * wt[None, :]).ravel()
    return z, w


def _half_wedge_rmax(phi, width):
    """Exit distance from the apex 1 along direction -exp(i phi), upper half-wedge.

    The half-wedge is {|z| < 1, 0 < arg z < width}; phi ranges over (-pi/2, 0).
    """
    arc = 2.0 * np.cos(phi)
    if width >= np.pi:
        return arc
    line = np.sin(width) / np.sin(width - phi)
    return np.where(phi <= 0.5 * width - 0.5 * np.pi, arc, line)


def _wedge_rule(apex_angle, width, upper, exponent, level, order):
    """Local polar rule around the boundary point exp(i apex_angle).

    Radial weights carry x^(1 - exponent) exactly (Gauss-Jacobi), so integrands
    behaving like |z - apex|^(-exponent) * smooth are integrated to high order.
    Returned weights are to be multiplied by f(z) * x^exponent, see caller.
    """
    kink = 0.5 * width - 0.5 * np.pi
    pieces = [(-0.5 * np.pi, kink), (kink, 0.0)] if width < np.pi else [(-0.5 * np.pi, 0.0)]
    n_phi = 2 ** (level - 1)
    xr, wx = gauss_jacobi_left(order + 4 * (level - 1), 1.0 - exponent)
    zs, ws, xs = [], [], []
    for lo, hi in pieces:
        breaks = np.linspace(lo, hi, n_phi + 1)
        phi, wphi = composite_nodes(breaks, order)
        if lo == -0.5 * np.pi:
            # rmax^(2 - exponent) vanishes algebraically at the tangent direction
            # phi = -pi/2; absorb that power into a Gauss-Jacobi first panel.
            power = 2.0 - exponent
            h = breaks[1] - breaks[0]
            xj, wj = gauss_jacobi_left(order, power)
            t = h * xj
            phi[:order] = lo + t
            wphi[:order] = h ** (power + 1.0) * wj / t ** power
        rmax = _half_wedge_rmax(phi, width)
        rho = rmax[:, None] * xr[None, :]
        direction = np.exp(1j * phi) if upper else np.exp(-1j * phi)
        z = 1.0 - rho * direction[:, None]
        # rho drho = rmax^2 x dx; the x^(1-exponent) part lives in wx
        w = (wphi * rmax ** 2)[:, None] * wx[None, :]
        zs.append(z.ravel())
        ws.append(w.ravel())
        xs.append(np.broadcast_to(xr, rho.shape).ravel())
    rot = np.exp(1j * apex_angle)
    return rot * np.concatenate(zs), np.concatenate(ws), np.concatenate(xs)


def _singular_disc_sum(f, angles, exponents, level, order):
    order_idx = np.argsort(angles)
    angles = np.asarray(angles, dtype=float)[order_idx]
    exponents = np.asarray(exponents, dtype=float)[order_idx]
    k = len(angles)
    total = 0.0
    for i in range(k):
        if k == 1:
            up = down = np.pi
        else:
            up = 0.5 * ((angles[(i + 1) % k] - angles[i]) % (2 * np.pi))
            down = 0.5 * ((angles[i] - angles[i - 1]) % (2 * np.pi))
        for width, upper in ((up, True), (down, False)):
            z, w, x = _wedge_rule(angles[i], width, upper, exponents[i], level, order)
            vals = np.asarray(f(z), dtype=float) * x ** exponents[i]
            total += float(np.sum(vals * w))
    return total


def integrate_disc(f, cfg: QuadConfig = DEFAULT, *, singular_points=None, singular_exponents=0.0):
    """Integral of f over the unit disc.

    Without ``singular_points`` a polar tensor rule is refined dyadically toward
    r = 1. With them, the disc is cut into wedges, one per boundary point p, and
    f is assumed to behave like |z - p|^(-exponent) near p (negative exponents
    describe zeros).
    """
    if singular_points is None or len(singular_points) == 0:
        def step(level):
            z, w = _polar_rule(level, cfg.panel_order)
            return float(np.sum(np.asarray(f(z), dtype=float) * w))
        return _refine(step, cfg, "disc integral")

    pts = np.asarray(singular_points, dtype=complex).ravel()
    angles = np.angle(pts)
    exps = np.broadcast_to(np.asarray(singular_exponents, dtype=float), angles.shape)
    if np.any(exps >= 2.0):
        raise NonintegrableExponent("a boundary singularity |z - p|^-s is integrable only for s < 2")
    return _refine(lambda lv: _singular_disc_sum(f, angles, exps, lv, cfg.panel_order),
                   cfg, "disc integral")


# -- rectangle ------------------------------------------------------------------------

def integrate_rect(f, a, b, cfg: QuadConfig = DEFAULT):
    """Integral of f(u + i v) over (0, a) x (0, b) by refined tensor Gauss panels."""
    if not (a > 0 and b > 0):
        raise ValueError("rectangle sides must be positive")

    def step(level):
        n = 2 ** (level - 1)
        u, wu = composite_nodes(np.linspace(0.0, a, n + 1), cfg.panel_order)
        v, wv = composite_nodes(np.linspace(0.0, b, n + 1), cfg.panel_order)
        z = (u[:, None] + 1j * v[None, :]).ravel()
        w = (wu[:, None] * wv[None, :]).ravel()
        return float(np.sum(np.asarray(f(z), dtype=float) * w))

    return _refine(step, cfg, "rectangle integral")


def integrate_base(spec: MapSpec, f, cfg: QuadConfig = DEFAULT, *, exponent_of_jacobian=0.0):
    """Integrate f over the base domain of ``spec``.

    ``exponent_of_jacobian`` is the power s for which f is comparable to |psi'|^s
    near the boundary; it selects the singular wedge rule at SC prevertices and at
    boundary zeros of psi'.
    """
    base = spec.base
    if not base.is_disc:
        return integrate_rect(f, base.a, base.b, cfg)
    s = float(exponent_of_jacobian)
    if spec.family is Family.SCHWARZ_CHRISTOFFEL and s != 0.0:
        # |psi'|^s = |1 - z^m|^(-2 s / m) and |1 - z^m| ~ m |z - z_k|
        return integrate_disc(f, cfg, singular_points=spec.prevertices(),
                              singular_exponents=2.0 * s / spec.m)
    crit = spec.boundary_critical_points()
    if len(crit) and s != 0.0:
        return integrate_disc(f, cfg, singular_points=crit, singular_exponents=-s)
    return integrate_disc(f, cfg)


# -- norms of psi' ----------------------------------------------------------------------

def _abs_deriv_pow(spec, alpha):
    def f(z):
        d = np.abs(maps.deriv(spec, z))
        with np.errstate(divide="ignore"):
            return np.exp(alpha * np.log(d))
    return f


def lalpha_norm(spec: MapSpec, alpha, cfg: QuadConfig = DEFAULT):
    """||psi'||_alpha over the base domain; alpha may be math.inf (sup norm)."""
    alpha = float(alpha)
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if spec.family is Family.SCHWARZ_CHRISTOFFEL and alpha >= spec.m:
        raise NonintegrableExponent(
            f"|psi'|^alpha is not integrable for the regular {spec.m}-gon when alpha >= {spec.m}"
        )
    if math.isinf(alpha):
        return sup_abs_deriv(spec)
    integral = integrate_base(spec, _abs_deriv_pow(spec, alpha), cfg, exponent_of_jacobian=alpha)
    return integral ** (1.0 / alpha)


def boundary_parametrization(base, s):
    """Points on the base boundary for parameters s in [0, 1), counter-clockwise."""
    s = np.asarray(s, dtype=float) % 1.0
    if base.is_disc:
        return np.exp(2j * np.pi * s)
    a, b = base.a, base.b
    per = 2.0 * (a + b)
    t = s * per
    z = np.empty(t.shape, dtype=complex)
    e1 = t < a
    e2 = (t >= a) & (t < a + b)
    e3 = (t >= a + b) & (t < 2 * a + b)
    e4 = t >= 2 * a + b
    z[e1] = t[e1]
    z[e2] = a + 1j * (t[e2] - a)
    z[e3] = (a - (t[e3] - a - b)) + 1j * b
    z[e4] = 1j * (b - (t[e4] - 2 * a - b))
    return z


def sup_abs_deriv(spec: MapSpec, samples=4096, tol=1e-10):
    """max |psi'| over the closed base domain.

    psi' is analytic, so the maximum sits on the boundary: sample it densely, then
    golden-section search the bracket around the best sample.
    """
    if not spec.bounded_derivative:
        raise NonintegrableExponent(f"psi' is unbounded for {spec.describe()}")
    base = spec.base
    s = np.arange(samples) / samples
    vals = np.abs(maps.deriv(spec, boundary_parametrization(base, s)))
    i = int(np.argmax(vals))
    best = float(vals[i])

    def g(t):
        return float(abs(maps.deriv(spec, complex(boundary_parametrization(base, t)))))

    lo, hi = (i - 1) / samples, (i + 1) / samples
    scale = 2 * np.pi if base.is_disc else 2 * (base.a + base.b)
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = hi - inv_phi * (hi - lo), lo + inv_phi * (hi - lo)
    gc, gd = g(c), g(d)
    while (hi - lo) * scale > tol:
        if gc >= gd:
            hi, d, gd = d, c, gc
            c = hi - inv_phi * (hi - lo)
            gc = g(c)
        else:
            lo, c, gc = c, d, gd
            d = lo + inv_phi * (hi - lo)
            gd = g(d)
    return max(best, gc, gd)
