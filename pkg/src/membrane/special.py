"""Bessel functions J0, J1 of real argument and the first zero of J1'."""
import decimal
import math
from functools import lru_cache

SERIES_CUTOFF = 20.0
_DIGITS = 45


def _series(order, x):
    # Ascending series in extended precision: at x = 20 the largest term is ~1e7,
    # so double precision would lose nine digits to cancellation.
    with decimal.localcontext() as ctx:
        ctx.prec = _DIGITS
        half = decimal.Decimal(x) / 2
        q = -(half * half)
        term = half if order == 1 else decimal.Decimal(1)
        total = term
        tiny = decimal.Decimal(10) ** (-_DIGITS + 5)
        k = 0
        while True:
            k += 1
            term = term * q / (k * (k + order))
            total += term
            if abs(term) < tiny and k > 2:
                break
        return float(total)


def _asymptotic(order, x):
    # Hankel expansion, truncated at its smallest term.
    mu = 4.0 * order * order
    p, q = 0.0, 0.0
    a = 1.0
    prev = math.inf
    for k in range(0, 80):
        if k:
            a *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(a) >= prev:
            break
        prev = abs(a)
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            p += sign * a
        else:
            q += sign * a
    w = x - (0.5 * order + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(w) - q * math.sin(w))


def bessel_j(order, x):
    """J_order(x) for order in {0, 1} and x >= 0."""
    if order not in (0, 1):
        raise ValueError(f"only orders 0 and 1 are supported, got {order}")
    x = float(x)
    if not x >= 0:
        raise ValueError(f"x must be nonnegative, got {x}")
    if x <= SERIES_CUTOFF:
        return _series(order, x)
    return _asymptotic(order, x)


def bessel_j1_prime(x):
    """J1'(x) = J0(x) - J1(x)/x, with the limit 1/2 at the origin."""
    if x == 0:
        return 0.5
    return bessel_j(0, x) - bessel_j(1, x) / x


@lru_cache(maxsize=1)
def j1_prime_zero():
    """First positive zero of J1' (about 1.84118), by Newton iteration from 1.8.

    Uses J1'' (x) = -J1'(x)/x - (1 - 1/x^2) J1(x) from Bessel's equation.
    """
    x = 1.8
    for _ in range(50):
        j1 = bessel_j(1, x)
        d1 = bessel_j(0, x) - j1 / x
        d2 = -d1 / x - (1.0 - 1.0 / (x * x)) * j1
        step = d1 / d2
        x -= step
        if abs(step) < 1e-15:
            break
    if not 1.0 < x < 3.0:
        raise ArithmeticError(f"Newton iteration for j'_11 left (1, 3): {x}")
    return x
