"""Poincare-Sobolev constants for convex planar domains, the disc and rectangles."""
import math
from dataclasses import dataclass

from .errors import ExponentOutOfRange
from .special import j1_prime_zero


@dataclass(frozen=True)
class PoincareConstant:
    r: float
    q: float
    value: float
    kind: str  # "exact" or "upper-estimate"

    def __post_init__(self):
        if not self.value > 0:
            raise ValueError("a Poincare constant is positive")
        if self.kind not in ("exact", "upper-estimate"):
            raise ValueError(f"unknown kind {self.kind!r}")


def poincare_constant_convex(d, area, p, q):
    """Upper estimate of the (q, p) Poincare constant of a planar convex domain.

    ``p`` is the gradient exponent and ``q`` the target Lebesgue exponent:

        (d^2 / (2|D|)) * ((1 - 1/p + 1/q) / (1/2 - 1/p + 1/q))^(1 - 1/p + 1/q)
            * pi^(1/2) * |D|^(1/2 - 1/p + 1/q)

    which is the Riesz-potential estimate with n = 2 and omega_2 = pi.
    """
    if not (d > 0 and area > 0):
        raise ValueError(f"diameter and area must be positive, got d={d}, area={area}")
    if not (1 <= p < math.inf and 1 <= q < math.inf):
        raise ExponentOutOfRange(f"exponents must satisfy 1 <= p, q < inf, got p={p}, q={q}")
    delta = 1.0 / p - 1.0 / q
    mu = 0.5
    if delta >= mu:
        raise ExponentOutOfRange(f"1/p - 1/q = {delta:g} must stay below 1/2")
    outer = 1.0 - delta
    ratio = outer / (mu - delta)
    return (d * d / (2.0 * area)) * ratio ** outer * math.sqrt(math.pi) * area ** (mu - delta)


def br2_disc_upper(r):
    """2 pi^((2-r)/(2r)) ((r+2)/2)^((r+2)/(2r)), an upper estimate of B_{r,2} for the unit disc."""
    if not r >= 1:
        raise ValueError(f"r must be >= 1, got {r}")
    return 2.0 * math.pi ** ((2.0 - r) / (2.0 * r)) * ((r + 2.0) / 2.0) ** ((r + 2.0) / (2.0 * r))


def b22_rect_exact(a, b):
    """Exact (2,2) constant of the rectangle (0,a)x(0,b): 1/sqrt(lambda_1) = max(a,b)/pi."""
    if not (a > 0 and b > 0):
        raise ValueError(f"rectangle sides must be positive, got a={a}, b={b}")
    return max(a, b) / math.pi


def b22_disc_exact():
    return 1.0 / j1_prime_zero()


def rect_constant_printed(a, b, alpha):
    """Closed-form rectangle factor multiplying ||psi'||_alpha^2 in the published rectangle-based bound.

    It disagrees with the convex-domain constant specialised to the rectangle, so it
    is only reported next to the derived value; see
    :func:`membrane.bounds.lower_bound_C`.
    """
    r = 2.0 * alpha / (alpha - 2.0)
    geom = ((a * a + b * b) / (a * b) ** ((r - 1.0) / r)) ** 2
    return geom * ((2.0 * alpha - 2.0) / (alpha - 2.0)) ** ((2.0 * alpha - 2.0) / alpha)
