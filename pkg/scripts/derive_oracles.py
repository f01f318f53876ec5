"""Reference values computed independently of the package, frozen to tests/data/oracles.json.

Everything here uses mpmath (arbitrary precision quadrature, root finding,
Bessel functions) or sympy (exact polar integrals), never ``membrane`` itself.
Rerun with ``python3 scripts/derive_oracles.py`` and commit the JSON.
"""
import json
import math
import pathlib

import mpmath as mp
import numpy as np
import sympy as sp

mp.mp.dps = 40
OUT = pathlib.Path(__file__).resolve().parents[1] / "tests" / "data" / "oracles.json"


def bessel_series(order, x, terms=80):
    """Ascending series at 40 digits, kept separate from mpmath.besselj."""
    x = mp.mpf(x)
    half = x / 2
    return mp.fsum((-1) ** k * half ** (2 * k + order) / (mp.factorial(k) * mp.factorial(k + order))
                   for k in range(terms))


def bisect(f, lo, hi, tol):
    flo = f(lo)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo + hi) / 2


def polar_integral(expr_in_xy):
    """Exact integral over the unit disc of a polynomial in x, y."""
    r, t = sp.symbols("r t", positive=True)
    x, y = sp.symbols("x y", real=True)
    e = sp.expand(expr_in_xy.subs({x: r * sp.cos(t), y: r * sp.sin(t)}) * r)
    return sp.integrate(sp.integrate(e, (t, 0, 2 * sp.pi)), (r, 0, 1))


def main():
    out = {}

    # j'_{1,1} and the first zero of J0, bisection on the 40-digit series
    def j1p(x):
        return bessel_series(0, x) - bessel_series(1, x) / x
    jp = bisect(j1p, mp.mpf("1.5"), mp.mpf("2.2"), mp.mpf("1e-16"))
    out["j1_prime_zero"] = float(jp)
    out["j1_prime_zero_mpmath"] = float(mp.besseljzero(1, 1, derivative=True))
    out["j0_first_zero"] = float(bisect(lambda x: bessel_series(0, x), mp.mpf(2), mp.mpf(3), mp.mpf("1e-16")))
    out["disc_lambda1"] = float(jp ** 2)
    out["b22_disc_exact"] = float(1 / jp)
    out["bessel_samples"] = [[o, x, float(mp.besselj(o, x))]
                             for o in (0, 1) for x in (0.0, 0.5, 1.0, 2.5, 7.3, 11.9, 12.0, 12.1,
                                                       15.0, 19.99, 20.0, 20.01, 25.0, 40.0)]

    # Schwarz-Christoffel square: vertex distance and area
    vtx = mp.quad(lambda t: (1 - t ** 4) ** mp.mpf(-0.5), [0, 1])
    beta = mp.gamma(0.25) * mp.gamma(0.5) / (4 * mp.gamma(0.75))
    assert abs(vtx - beta) < mp.mpf("1e-20")
    out["sc4_vertex"] = float(vtx)
    out["sc4_area"] = float(2 * vtx ** 2)      # square with half-diagonal |psi(1)|
    # m = 3: vertex distance int_0^1 (1 - t^3)^(-2/3) dt = B(1/3, 1/3)/3, triangle area
    v3 = mp.quad(lambda t: (1 - t ** 3) ** (mp.mpf(-2) / 3), [0, 1])
    side3 = v3 * mp.sqrt(3)
    out["sc3_vertex"] = float(v3)
    out["sc3_area"] = float(mp.sqrt(3) / 4 * side3 ** 2)
    out["equilateral_lambda1"] = float(16 * mp.pi ** 2 / (9 * side3 ** 2))
    out["square_lambda1"] = float(mp.pi ** 2 / (2 * vtx ** 2))

    # Monte Carlo estimate of the SC square Jacobian integral (10^7 samples)
    rng = np.random.default_rng(20240601)
    n, vals = 10 ** 7, []
    for _ in range(10):
        u = rng.uniform(-1, 1, size=(n // 10, 2))
        z = u[:, 0] + 1j * u[:, 1]
        inside = np.abs(z) < 1
        vals.append(np.where(inside, 4.0 / np.abs(z ** 4 - 1), 0.0))
    v = np.concatenate(vals)
    out["sc4_area_monte_carlo"] = [float(v.mean()), float(v.std() / math.sqrt(len(v)))]

    # SC m = 4 norms at alpha = 3 by 2-D mpmath quadrature (polar, split at the prevertex angle)
    def sc_norm_alpha(alpha):
        f = lambda r, t: r * abs(1 - (r * mp.expj(t)) ** 4) ** (-alpha / 2)   # noqa: E731
        quarter = mp.quad(f, [0, 1], [0, mp.pi / 4, mp.pi / 2])
        return (4 * quarter) ** (1 / mp.mpf(alpha))
    out["sc4_norm_alpha3"] = float(sc_norm_alpha(3))

    # cardioid psi = (w+1)^2 on the unit disc, exact polar integrals
    x, y = sp.symbols("x y", real=True)
    jac = 4 * ((x + 1) ** 2 + y ** 2)                      # |psi'|^2
    out["cardioid_area"] = float(polar_integral(jac))
    out["cardioid_area_exact"] = "6*pi"
    out["cardioid_norm4_pow4"] = float(polar_integral(jac ** 2))
    out["cardioid_norm4_pow4_exact"] = str(sp.nsimplify(polar_integral(jac ** 2) / sp.pi)) + "*pi"
    # energy of f = x^2 - y^2 on the cardioid: |grad f|^2 = 4|w|^2, w = (z+1)^2
    energy = polar_integral(4 * ((x + 1) ** 2 + y ** 2) ** 2 * jac)
    out["cardioid_energy_x2_minus_y2"] = float(energy)
    out["cardioid_energy_x2_minus_y2_exact"] = str(sp.simplify(energy))
    out["cardioid_lower_B"] = float(jp ** 2 / 16)
    out["cardioid_polya"] = 2.0 / 3.0

    # exp strip on (0,1) x (0, 2 pi)
    out["exp_strip_area"] = float(mp.pi * (mp.e ** 2 - 1))
    out["split_ring_lower_C"] = float(1 / (4 * mp.e ** 2))

    # bounds
    out["identity_lower_A_alpha4"] = float(1 / (4 * mp.mpf(3) ** mp.mpf(1.5)))
    out["power_shift6_lower_B"] = float((jp / 14) ** 2)
    out["uniform_threshold_identity"] = float(jp / mp.pi * 2)
    out["uniform_threshold_psi2"] = float(jp / mp.pi * 8)

    def f_exp(a):
        return 1 - mp.pi / jp * a - mp.exp(-2 * a)
    out["exp_family_f_0p1"] = float(f_exp(mp.mpf("0.1")))
    out["exp_family_f_0p5"] = float(f_exp(mp.mpf("0.5")))
    out["exp_family_alpha1"] = float(bisect(f_exp, mp.mpf("0.15"), mp.mpf("0.17"), mp.mpf("1e-20")))

    # Poincare constants: a second implementation written from the general-n formula
    def convex_constant(d, area, p, q, n=2):
        d, area, p, q = map(mp.mpf, (d, area, p, q))
        delta = 1 / p - 1 / q
        omega = mp.pi ** (mp.mpf(n) / 2) / mp.gamma(mp.mpf(n) / 2 + 1)
        return (d ** n / (n * area) * ((1 - delta) / (mp.mpf(1) / n - delta)) ** (1 - delta)
                * omega ** (1 - mp.mpf(1) / n) * area ** (mp.mpf(1) / n - delta))
    out["convex_disc_r2"] = float(convex_constant(2, mp.pi, 2, 2))
    out["convex_square_r2"] = float(convex_constant(mp.sqrt(2), 1, 2, 2))
    out["br2_r1"] = float(2 * mp.sqrt(mp.pi) * mp.mpf(1.5) ** 1.5)
    out["br2_r4"] = float(2 * mp.pi ** mp.mpf(-0.25) * mp.mpf(3) ** mp.mpf(0.75))
    out["convex_disc_table"] = {str(r): float(convex_constant(2, mp.pi, 2, r)) for r in (2, 3, 4, 10)}

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
