"""Cached Gauss rules mapped to the unit interval."""
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi


@lru_cache(maxsize=None)
def gauss_legendre(n):
    """Nodes and weights of the n-point Gauss-Legendre rule on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    x, w = 0.5 * (x + 1.0), 0.5 * w
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


@lru_cache(maxsize=None)
def gauss_jacobi_left(n, power):
    """Rule for int_0^1 x**power f(x) dx, power > -1.

    Weights already include the x**power factor, so callers evaluate the smooth
    part only.
    """
    # roots_jacobi integrates (1-t)^a (1+t)^b on [-1, 1]; x = (1+t)/2.
    t, w = roots_jacobi(n, 0.0, power)
    x = 0.5 * (t + 1.0)
    w = w * 0.5 ** (power + 1.0)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


@lru_cache(maxsize=None)
def gauss_jacobi_right(n, power):
    """Rule for int_0^1 (1-x)**power f(x) dx."""
    x, w = gauss_jacobi_left(n, power)
    x = (1.0 - x)[::-1].copy()
    w = w[::-1].copy()
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def composite_nodes(breaks, n):
    """Gauss-Legendre nodes/weights on every panel of a sorted breakpoint array."""
    breaks = np.asarray(breaks, dtype=float)
    x, w = gauss_legendre(n)
    h = np.diff(breaks)
    nodes = breaks[:-1, None] + h[:, None] * x[None, :]
    weights = h[:, None] * w[None, :]
    return nodes.ravel(), weights.ravel()

