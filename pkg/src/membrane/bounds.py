"""Lower and upper bounds for the first nontrivial Neumann eigenvalue lambda_1.

Disc-based maps use the L^alpha estimate (finite alpha) or the sup-norm estimate;
rectangle-based maps use the rectangle variants. The Polya and Payne-Weinberger
bounds are provided for comparison.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import bisect

from . import geometry
from .constants import b22_rect_exact, poincare_constant_convex, rect_constant_printed
from .errors import AlphaOutOfRange, InvalidMap, UnboundedDerivative
from .maps import Family, MapSpec
from .quad import DEFAULT, QuadConfig, lalpha_norm
from .special import j1_prime_zero

ALPHA_EDGE = 1e-3
DEFAULT_ALPHA_CAP = 64.0


@dataclass
class BoundReport:
    domain_name: str
    alpha_used: float
    norm_alpha: float
    lower_A: float | None
    lower_B: float | None
    lower_C: float | None
    upper_polya: float
    lower_pw: float | None
    area: float
    diameter: float
    is_conformal_uniform: bool
    convexity_margin: float
    oracle_lambda1: float | None = None

    def lower_bounds(self):
        return {k: v for k, v in (("lower_A", self.lower_A), ("lower_B", self.lower_B),
                                  ("lower_C", self.lower_C), ("lower_pw", self.lower_pw))
                if v is not None}

    def check(self, mesh_tolerance):
        """Invariant: every lower bound sits below the oracle (within tolerance)."""
        lows = self.lower_bounds()
        if any(v <= 0 for v in lows.values()) or not self.upper_polya > 0:
            return False
        if self.oracle_lambda1 is None:
            return True
        return all(v <= self.oracle_lambda1 * (1 + mesh_tolerance) for v in lows.values())

    def to_dict(self):
        return asdict(self)


def _alpha_constant(alpha):
    """((2a - 2)/(a - 2))^((2a - 2)/a)."""
    return ((2.0 * alpha - 2.0) / (alpha - 2.0)) ** ((2.0 * alpha - 2.0) / alpha)


def _require_disc(spec, what):
    if not spec.base.is_disc:
        raise InvalidMap(f"{what} needs a unit-disc base, {spec.describe()} has a rectangle")


def lower_bound_A(spec: MapSpec, alpha, cfg: QuadConfig = DEFAULT, *, norm=None):
    """pi^(2/a)/4 * ((2a-2)/(a-2))^(-(2a-2)/a) * ||psi'||_a^(-2), valid for a > 2."""
    _require_disc(spec, "the L^alpha bound")
    alpha = float(alpha)
    if not 2 < alpha < math.inf:
        raise AlphaOutOfRange(f"alpha must be finite and exceed 2, got {alpha}")
    if norm is None:
        norm = lalpha_norm(spec, alpha, cfg)
    return math.pi ** (2.0 / alpha) / 4.0 / _alpha_constant(alpha) / norm ** 2


def lower_bound_B(spec: MapSpec, cfg: QuadConfig = DEFAULT):
    """(j'_11 / ||psi'||_inf)^2."""
    _require_disc(spec, "the sup-norm bound")
    if not spec.bounded_derivative:
        raise UnboundedDerivative(f"psi' is unbounded for {spec.describe()}")
    return (j1_prime_zero() / lalpha_norm(spec, math.inf, cfg)) ** 2


def lower_bound_C(spec: MapSpec, alpha, cfg: QuadConfig = DEFAULT, *, with_printed=False):
    """Bound for maps defined on the rectangle (0,a) x (0,b).

    alpha = inf gives (pi / max(a,b))^2 / ||psi'||_inf^2. For finite alpha the
    rectangle's Poincare constant comes from the convex-domain estimate with
    d = sqrt(a^2 + b^2), |Q| = ab and target exponent r = 2 alpha / (alpha - 2).
    ``with_printed`` also returns the bound built from the published closed-form
    rectangle constant (None for alpha = inf, where both agree).
    """
    base = spec.base
    if base.is_disc:
        raise InvalidMap(f"the rectangle bound needs a rectangle base, not {spec.describe()}")
    alpha = float(alpha)
    if math.isinf(alpha):
        norm = lalpha_norm(spec, math.inf, cfg)
        bound = 1.0 / (b22_rect_exact(base.a, base.b) * norm) ** 2
        return (bound, None) if with_printed else bound
    if not alpha > 2:
        raise AlphaOutOfRange(f"alpha must exceed 2, got {alpha}")
    norm = lalpha_norm(spec, alpha, cfg)
    r = 2.0 * alpha / (alpha - 2.0)
    const = poincare_constant_convex(math.hypot(base.a, base.b), base.a * base.b, 2.0, r)
    bound = 1.0 / (const * norm) ** 2
    if with_printed:
        printed = 1.0 / (rect_constant_printed(base.a, base.b, alpha) * norm ** 2)
        return bound, printed
    return bound


def polya_upper(area):
    if not area > 0:
        raise ValueError(f"area must be positive, got {area}")
    return 4.0 * math.pi / area


def payne_weinberger_lower(diameter):
    """pi^2 / d^2; only meaningful for convex domains, which the caller must ensure."""
    if not diameter > 0:
        raise ValueError(f"diameter must be positive, got {diameter}")
    return math.pi ** 2 / diameter ** 2


def golden_section_max(g, lo, hi, tol):
    """Maximize a unimodal g on [lo, hi]; returns every probe as (x, g(x)) pairs."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = hi - inv_phi * (hi - lo), lo + inv_phi * (hi - lo)
    gc, gd = g(c), g(d)
    probes = [(c, gc), (d, gd)]
    while hi - lo > tol:
        if gc >= gd:
            hi, d, gd = d, c, gc
            c = hi - inv_phi * (hi - lo)
            gc = g(c)
            probes.append((c, gc))
        else:
            lo, c, gc = c, d, gd
            d = lo + inv_phi * (hi - lo)
            gd = g(d)
            probes.append((d, gd))
    return probes


def optimize_alpha(spec: MapSpec, alpha_max=None, cfg: QuadConfig = DEFAULT, *, tol=1e-4, scan=32):
    """Best L^alpha lower bound over alpha in (2, alpha_max).

    A coarse scan picks the bracket (guarding against several local maxima), then
    golden-section search refines it. The returned pair is the best probe seen.
    """
    _require_disc(spec, "alpha optimisation")
    if alpha_max is None:
        alpha_max = spec.m if spec.family is Family.SCHWARZ_CHRISTOFFEL else DEFAULT_ALPHA_CAP
    if spec.family is Family.SCHWARZ_CHRISTOFFEL:
        alpha_max = min(alpha_max, spec.m)
    if not alpha_max > 2 + 2 * ALPHA_EDGE:
        raise AlphaOutOfRange(f"alpha_max must exceed 2, got {alpha_max}")
    lo, hi = 2.0 + ALPHA_EDGE, alpha_max - ALPHA_EDGE

    def g(a):
        return lower_bound_A(spec, a, cfg)

    grid = np.linspace(lo, hi, scan)
    values = [g(a) for a in grid]
    i = int(np.argmax(values))
    probes = list(zip(grid.tolist(), values))
    probes += golden_section_max(g, grid[max(i - 1, 0)], grid[min(i + 1, scan - 1)], tol)
    best = max(probes, key=lambda p: p[1])
    return float(best[0]), float(best[1])


def quasidisc_alpha_sup(K):
    """Supremum 2K^2/(K^2 - 1) of the exponents alpha with psi' in L^alpha for a K-quasidisc."""
    if not K >= 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if K == 1:
        return math.inf
    return 2.0 * K * K / (K * K - 1.0)


def classify_conformal_uniform(spec: MapSpec, diameter_mode="computed", cfg: QuadConfig = DEFAULT):
    """Test ||psi'||_inf < (j'_11 / pi) d.

    ``diameter_mode`` is "computed" or a number used as a lower bound for d.
    Returns (uniform, margin) with margin = (j'_11/pi) d - ||psi'||_inf.
    """
    _require_disc(spec, "the conformal-uniform test")
    if not spec.bounded_derivative:
        raise UnboundedDerivative(f"psi' is unbounded for {spec.describe()}")
    if isinstance(diameter_mode, str):
        if diameter_mode != "computed":
            raise ValueError(f"unknown diameter mode {diameter_mode!r}")
        d = geometry.diameter(spec)
    else:
        d = float(diameter_mode)
        if not d > 0:
            raise ValueError("a diameter lower bound must be positive")
    margin = j1_prime_zero() / math.pi * d - lalpha_norm(spec, math.inf, cfg)
    return margin > 0, margin


def exp_family_criterion(alpha):
    """f(alpha) = 1 - (pi/j'_11) alpha - exp(-2 alpha); e^(alpha z) is conformal uniform where f >= 0."""
    return 1.0 - math.pi / j1_prime_zero() * alpha - math.exp(-2.0 * alpha)


def exp_family_alpha_window():
    """Zeros (0, alpha_1) of the exponential-family criterion."""
    # f(0) = 0 with f'(0) = 2 - pi/j'_11 > 0, and f(1) < 0
    alpha1 = bisect(exp_family_criterion, 1e-3, 1.0, xtol=1e-13, rtol=4 * np.finfo(float).eps)
    return 0.0, alpha1
