"""Conformal maps from a base domain (unit disc or rectangle) onto a target domain.

All evaluators accept scalars or numpy arrays of complex points and return the
same shape.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidMap, InvalidPoint, NonconvergedIntegral, PrevertexSingularity
from .rules import gauss_jacobi_left, gauss_legendre

# Points this far outside the closed base domain are still accepted (rounding).
_CLOSURE_SLACK = 1e-12
_SC_ABS_TOL = 1e-10
_SC_MAX_LEVELS = 48  # 1 - 2**-k stays representable


class BaseKind(str, enum.Enum):
    UNIT_DISC = "UnitDisc"
    RECTANGLE = "Rectangle"


class Family(str, enum.Enum):
    POLYNOMIAL = "Polynomial"
    POWER_SHIFT = "PowerShift"
    EXPONENTIAL = "Exponential"
    SCHWARZ_CHRISTOFFEL = "SchwarzChristoffelRegular"
    EXP_STRIP = "ExpStrip"


@dataclass(frozen=True)
class BaseDomain:
    kind: BaseKind = BaseKind.UNIT_DISC
    a: float | None = None
    b: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", BaseKind(self.kind))
        if self.kind is BaseKind.UNIT_DISC:
            if self.a is not None or self.b is not None:
                raise InvalidMap("UnitDisc takes no parameters")
        else:
            if self.a is None or self.b is None or not (self.a > 0 and self.b > 0):
                raise InvalidMap(f"Rectangle requires a > 0 and b > 0, got a={self.a}, b={self.b}")
            if not (math.isfinite(self.a) and math.isfinite(self.b)):
                raise InvalidMap("Rectangle sides must be finite")
            object.__setattr__(self, "a", float(self.a))
            object.__setattr__(self, "b", float(self.b))

    @classmethod
    def disc(cls):
        return cls(BaseKind.UNIT_DISC)

    @classmethod
    def rectangle(cls, a, b):
        return cls(BaseKind.RECTANGLE, a, b)

    @property
    def is_disc(self):
        return self.kind is BaseKind.UNIT_DISC

    @property
    def area(self):
        return math.pi if self.is_disc else self.a * self.b

    def contains(self, z, slack=_CLOSURE_SLACK):
        z = np.asarray(z, dtype=complex)
        if self.is_disc:
            return np.abs(z) <= 1.0 + slack
        return ((z.real >= -slack) & (z.real <= self.a + slack)
                & (z.imag >= -slack) & (z.imag <= self.b + slack))


@dataclass(frozen=True)
class MapSpec:
    """Declarative conformal map psi: base -> Omega.

    Polynomial coefficients are listed in ascending degree, so ``(1, 2, 1)`` is
    the cardioid map (z + 1)**2.
    """

    family: Family
    coeffs: tuple = ()
    n: int | None = None
    alpha_param: float | None = None
    m: int | None = None
    base: BaseDomain = field(default_factory=BaseDomain.disc)

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        fam = self.family
        if fam is Family.EXP_STRIP:
            if self.base.is_disc:
                raise InvalidMap("ExpStrip requires a Rectangle base")
        elif not self.base.is_disc:
            raise InvalidMap(f"{fam.value} requires a UnitDisc base")

        if fam is Family.POLYNOMIAL:
            coeffs = tuple(complex(c) for c in self.coeffs)
            while len(coeffs) > 1 and coeffs[-1] == 0:
                coeffs = coeffs[:-1]
            if len(coeffs) < 2:
                raise InvalidMap("Polynomial map must have degree >= 1")
            if not all(math.isfinite(c.real) and math.isfinite(c.imag) for c in coeffs):
                raise InvalidMap("Polynomial coefficients must be finite")
            object.__setattr__(self, "coeffs", coeffs)
            crit = _poly_critical_points(coeffs)
            inside = [c for c in crit if abs(c) < 1.0 - 1e-9]
            if inside:
                raise InvalidMap(f"derivative vanishes inside the unit disc at {inside[0]:.6g}")
        elif fam is Family.POWER_SHIFT:
            if self.n is None or int(self.n) != self.n or self.n < 1:
                raise InvalidMap(f"PowerShift requires a positive integer n, got {self.n!r}")
            object.__setattr__(self, "n", int(self.n))
        elif fam is Family.EXPONENTIAL:
            a = self.alpha_param
            if a is None or not (0 < a <= math.pi):
                # injectivity on the disc fails once alpha exceeds pi
                raise InvalidMap(f"Exponential requires 0 < alpha_param <= pi, got {a!r}")
            object.__setattr__(self, "alpha_param", float(a))
        elif fam is Family.SCHWARZ_CHRISTOFFEL:
            if self.m is None or int(self.m) != self.m or self.m < 3:
                raise InvalidMap(f"SchwarzChristoffelRegular requires integer m >= 3, got {self.m!r}")
            object.__setattr__(self, "m", int(self.m))

    # convenience constructors -------------------------------------------------
    @classmethod
    def polynomial(cls, coeffs):
        return cls(Family.POLYNOMIAL, coeffs=tuple(coeffs))

    @classmethod
    def identity(cls):
        return cls.polynomial((0, 1))

    @classmethod
    def scaled_disc(cls, a):
        return cls.polynomial((0, a))

    @classmethod
    def cardioid(cls):
        return cls.polynomial((1, 2, 1))

    @classmethod
    def power_shift(cls, n):
        return cls(Family.POWER_SHIFT, n=n)

    @classmethod
    def exponential(cls, alpha):
        return cls(Family.EXPONENTIAL, alpha_param=alpha)

    @classmethod
    def schwarz_christoffel(cls, m):
        return cls(Family.SCHWARZ_CHRISTOFFEL, m=m)

    @classmethod
    def exp_strip(cls, a=1.0, b=2 * math.pi):
        return cls(Family.EXP_STRIP, base=BaseDomain.rectangle(a, b))

    # descriptors ---------------------------------------------------------------
    @property
    def bounded_derivative(self):
        return self.family is not Family.SCHWARZ_CHRISTOFFEL

    def prevertices(self):
        if self.family is not Family.SCHWARZ_CHRISTOFFEL:
            return np.empty(0, dtype=complex)
        return np.exp(2j * np.pi * np.arange(self.m) / self.m)

    def boundary_critical_points(self):
        """Zeros of psi' lying on the boundary circle (disc maps only)."""
        if self.family is Family.POLYNOMIAL:
            crit = _poly_critical_points(self.coeffs)
            return np.array([c for c in crit if abs(abs(c) - 1.0) <= 1e-9], dtype=complex)
        if self.family is Family.POWER_SHIFT and self.n == 1:
            return np.array([-1.0 + 0j])
        return np.empty(0, dtype=complex)

    def rotated(self, theta):
        """The map exp(i theta) * psi; only defined for Polynomial maps."""
        if self.family is not Family.POLYNOMIAL:
            raise InvalidMap("rotation is only expressible for Polynomial maps")
        rot = complex(math.cos(theta), math.sin(theta))
        return MapSpec.polynomial(tuple(rot * c for c in self.coeffs))

    def describe(self):
        fam = self.family
        if fam is Family.POLYNOMIAL:
            return "Polynomial(" + ", ".join(f"{c:g}" for c in self.coeffs) + ")"
        if fam is Family.POWER_SHIFT:
            return f"PowerShift(n={self.n})"
        if fam is Family.EXPONENTIAL:
            return f"Exponential(alpha={self.alpha_param:g})"
        if fam is Family.SCHWARZ_CHRISTOFFEL:
            return f"SchwarzChristoffelRegular(m={self.m})"
        return f"ExpStrip(a={self.base.a:g}, b={self.base.b:g})"


def _poly_critical_points(coeffs):
    d = np.polynomial.polynomial.polyder(np.asarray(coeffs, dtype=complex))
    if len(d) <= 1:
        return []
    return list(np.polynomial.polynomial.polyroots(d))


def _check_points(spec, z):
    z = np.asarray(z, dtype=complex)
    ok = spec.base.contains(z)
    if not np.all(ok):
        bad = z[~ok].ravel()[0] if z.ndim else z
        raise InvalidPoint(f"point {complex(bad)} lies outside the closed base domain of {spec.describe()}")
    return z


def _wrap(z_in, out):
    if np.ndim(z_in) == 0:
        return complex(out)
    return out


def evaluate(spec: MapSpec, z):
    """psi(z). Schwarz-Christoffel maps are integrated along the segment [0, z]."""
    zz = _check_points(spec, z)
    fam = spec.family
    if fam is Family.POLYNOMIAL:
        out = np.polynomial.polynomial.polyval(zz, np.asarray(spec.coeffs))
    elif fam is Family.POWER_SHIFT:
        out = (zz + spec.n) ** 2
    elif fam is Family.EXPONENTIAL:
        out = np.exp(spec.alpha_param * zz)
    elif fam is Family.EXP_STRIP:
        out = np.exp(zz)
    else:
        out = _sc_eval(spec.m, zz)
    return _wrap(z, np.asarray(out, dtype=complex))


def deriv(spec: MapSpec, z):
    zz = _check_points(spec, z)
    fam = spec.family
    if fam is Family.POLYNOMIAL:
        d = np.polynomial.polynomial.polyder(np.asarray(spec.coeffs))
        out = np.polynomial.polynomial.polyval(zz, d)
    elif fam is Family.POWER_SHIFT:
        out = 2.0 * (zz + spec.n)
    elif fam is Family.EXPONENTIAL:
        out = spec.alpha_param * np.exp(spec.alpha_param * zz)
    elif fam is Family.EXP_STRIP:
        out = np.exp(zz)
    else:
        out = _sc_deriv(spec.m, zz)
    return _wrap(z, np.asarray(out, dtype=complex))


def deriv2(spec: MapSpec, z):
    zz = _check_points(spec, z)
    fam = spec.family
    if fam is Family.POLYNOMIAL:
        d = np.polynomial.polynomial.polyder(np.asarray(spec.coeffs), 2)
        out = np.polynomial.polynomial.polyval(zz, d) if len(d) else np.zeros_like(zz)
        out = out + 0.0 * zz
    elif fam is Family.POWER_SHIFT:
        out = np.full(zz.shape, 2.0 + 0j)
    elif fam is Family.EXPONENTIAL:
        a = spec.alpha_param
        out = a * a * np.exp(a * zz)
    elif fam is Family.EXP_STRIP:
        out = np.exp(zz)
    else:
        m = spec.m
        one_minus = _sc_one_minus(m, zz)
        # log-derivative of (1 - z^m)^(-2/m) is 2 z^(m-1) / (1 - z^m)
        out = _sc_deriv(m, zz) * 2.0 * zz ** (m - 1) / one_minus
    return _wrap(z, np.asarray(out, dtype=complex))


# Schwarz-Christoffel regular m-gon ------------------------------------------------

def _sc_one_minus(m, z):
    one_minus = 1.0 - z ** m
    if np.any(np.abs(one_minus) <= 1e-15):
        raise PrevertexSingularity(f"psi' of the regular {m}-gon map is singular at a prevertex")
    return one_minus


def _sc_deriv(m, z):
    # prod_k (1 - z/z_k)^(-2/m) with principal factors equals the principal power
    # of (1 - z^m): both are analytic in the disc, agree at 0, and Re(1 - z^m) > 0.
    return _sc_one_minus(m, z) ** (-2.0 / m)


def _sc_singular_distance(m, s):
    """Distance from [0, 1] to the nearest zero of 1 - t^m s, for s = z^m."""
    s = np.asarray(s, dtype=complex)
    out = np.full(s.shape, np.inf)
    nz = np.abs(s) > 0
    if not np.any(nz):
        return out
    sv = s[nz]
    mod = np.abs(sv) ** (-1.0 / m)
    base_arg = -np.angle(sv) / m
    ks = np.arange(m)
    roots = mod[:, None] * np.exp(1j * (base_arg[:, None] + 2 * np.pi * ks[None, :] / m))
    re = np.clip(roots.real, 0.0, 1.0)
    out[nz] = np.min(np.abs(roots - re), axis=1)
    return out


def _sc_integrand(m, s, u):
    """(1 - t^m s)^(-2/m) at t = 1 - u, written so it stays accurate as u -> 0."""
    one_minus_tm = -np.expm1(m * np.log1p(-u))
    return ((1.0 - s)[:, None] + s[:, None] * one_minus_tm[None, :]) ** (-2.0 / m)


def _sc_eval(m, z, order=16):
    """psi(z) = z * int_0^1 (1 - (t z)^m)^(-2/m) dt with dyadic grading toward t = 1.

    The integral is taken in u = 1 - t over panels [2^-(k+1), 2^-k]; grading stops
    once the innermost panel is a quarter of the distance to the nearest
    singularity, or at an exact prevertex hit, where a Gauss-Jacobi panel absorbs
    the (1 - t)^(-2/m) factor.
    """
    flat = z.ravel()
    out = np.zeros(flat.shape, dtype=complex)
    s = flat ** m
    dist = _sc_singular_distance(m, s)
    with np.errstate(divide="ignore"):
        levels = np.ceil(np.log2(4.0 / np.maximum(dist, 1e-300)))
    levels = np.clip(levels, 1, _SC_MAX_LEVELS).astype(int)
    exact_hit = dist < 2.0 ** (-_SC_MAX_LEVELS + 2)
    rules = (gauss_legendre(order), gauss_legendre(order // 2))
    xj, wj = gauss_jacobi_left(order, -2.0 / m)
    for lv in np.unique(levels):
        sel = np.nonzero(levels == lv)[0]
        ss = s[sel]
        hit = exact_hit[sel]
        edges = 2.0 ** -np.arange(lv + 1, dtype=float)   # 1, 1/2, ..., 2^-lv
        estimates = []
        for nodes, wts in rules:
            acc = np.zeros(sel.size, dtype=complex)
            for hi, lo in zip(edges[:-1], edges[1:]):
                u = lo + (hi - lo) * nodes
                acc += (hi - lo) * (_sc_integrand(m, ss, u) @ wts)
            h = edges[-1]
            if np.any(~hit):
                u = h * nodes
                acc[~hit] += h * (_sc_integrand(m, ss[~hit], u) @ wts)
            if np.any(hit):
                u = h * xj
                reg = _sc_integrand(m, ss[hit], u) * u[None, :] ** (2.0 / m)
                acc[hit] += h ** (1.0 - 2.0 / m) * (reg @ wj)
            estimates.append(acc)
        total, coarse = estimates
        err = np.abs(total - coarse)
        if np.any(err > _SC_ABS_TOL):
            bad = int(np.argmax(err))
            raise NonconvergedIntegral(
                f"Schwarz-Christoffel path integral to z={complex(flat[sel][bad]):.6g} missed tolerance",
                (complex(coarse[bad]), complex(total[bad])),
            )
        out[sel] = flat[sel] * total
    return out.reshape(z.shape)
