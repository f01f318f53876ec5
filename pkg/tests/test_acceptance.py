"""Acceptance criteria 1-12, one PASS/FAIL line each (also summarised at the end of the run).

Reference values come from tests/data/oracles.json, produced by
scripts/derive_oracles.py without importing the package.
"""
import json
import math
import time

import numpy as np
import pytest

from membrane import bounds, cli, geometry, maps, oracle
from membrane.constants import b22_rect_exact, br2_disc_upper, poincare_constant_convex
from membrane.maps import MapSpec
from membrane.quad import lalpha_norm, sup_abs_deriv
from membrane.special import j1_prime_zero

pytestmark = pytest.mark.slow


def test_criterion_01_bessel_zero(criterion, oracles):
    j1_prime_zero.cache_clear()
    t0 = time.perf_counter()
    value = j1_prime_zero()
    elapsed = time.perf_counter() - t0
    ok = (round(value, 5) == 1.84118 and abs(value - oracles["j1_prime_zero"]) < 1e-12
          and elapsed < 1e-3)
    criterion(1, ok, f"j'_11 = {value:.12f}, |err| = {abs(value - oracles['j1_prime_zero']):.1e}, "
                     f"{elapsed * 1e3:.3f} ms")


def test_criterion_02_disc_oracle(criterion, oracles):
    t0 = time.perf_counter()
    exact = oracles["disc_lambda1"]
    one = lambda z: np.ones(np.shape(z))     # noqa: E731
    errs = []
    for n in (16, 32, 64, 128):
        lam = oracle.first_nontrivial(oracle.solve_neumann(maps.BaseDomain.disc(), one, n))
        errs.append(abs(lam - exact))
    elapsed = time.perf_counter() - t0
    orders = [math.log2(a / b) for a, b in zip(errs, errs[1:])]
    rel = errs[-1] / exact
    ok = rel <= 0.02 and min(orders) >= 1.8 and elapsed < 30
    criterion(2, ok, f"rel err at N=128 {rel:.2e}, orders {', '.join(f'{o:.2f}' for o in orders)}, "
                     f"{elapsed:.1f} s")


def test_criterion_03_cardioid(criterion, oracles):
    t0 = time.perf_counter()
    spec = MapSpec.cardioid()
    bound = bounds.lower_bound_B(spec)
    lam = oracle.first_nontrivial(oracle.solve_map(spec, 128))
    upper = bounds.polya_upper(6 * math.pi)
    elapsed = time.perf_counter() - t0
    ok = (abs(bound - oracles["j1_prime_zero"] ** 2 / 16) < 1e-10 and bound <= lam <= upper
          and elapsed < 60)
    criterion(3, ok, f"lower_B {bound:.10f} <= oracle {lam:.5f} <= {upper:.5f}, {elapsed:.1f} s")


def test_criterion_04_split_ring(criterion, oracles):
    t0 = time.perf_counter()
    spec = MapSpec.exp_strip()
    bound = bounds.lower_bound_C(spec, math.inf)
    lam = oracle.first_nontrivial(oracle.solve_map(spec, 128))
    elapsed = time.perf_counter() - t0
    ok = abs(bound - 1 / (4 * math.e ** 2)) < 1e-10 and lam >= bound and elapsed < 60
    criterion(4, ok, f"lower_C {bound:.10f} (1/(4e^2) = {1 / (4 * math.e ** 2):.10f}), "
                     f"oracle {lam:.5f}, {elapsed:.1f} s")


def test_criterion_05_scaled_disc(criterion):
    parts, ok = [], True
    for a in (0.5, 1.0, 2.0):
        spec = MapSpec.scaled_disc(a)
        bound = bounds.lower_bound_B(spec)
        lam = oracle.first_nontrivial(oracle.solve_map(spec, 128))
        rel = abs(bound - lam) / lam
        ok &= rel <= 0.02
        parts.append(f"a={a:g}: {rel:.1e}")
    criterion(5, ok, "relative gaps " + ", ".join(parts))


def test_criterion_06_square_sandwich(criterion):
    t0 = time.perf_counter()
    spec = MapSpec.schwarz_christoffel(4)
    a_star, bound = bounds.optimize_alpha(spec)
    lam = oracle.first_nontrivial(oracle.solve_map(spec, 128))
    upper = bounds.polya_upper(geometry.area(spec))
    elapsed = time.perf_counter() - t0
    tol = 0.05
    ok = 2 < a_star < 4 and bound <= lam * (1 + tol) and lam <= upper * (1 + tol) and elapsed < 120
    criterion(6, ok, f"alpha* {a_star:.4f}, {bound:.5f} <= oracle {lam:.5f} <= {upper:.5f}, "
                     f"{elapsed:.1f} s")


def test_criterion_07_power_shift(criterion):
    flags, convex = {}, {}
    for n in range(1, 11):
        spec = MapSpec.power_shift(n)
        flags[n], _ = bounds.classify_conformal_uniform(spec, 4.0 * n)
        convex[n] = geometry.convexity_margin(spec)
    ok = all(flags[n] == (n >= 6) for n in flags) and all(convex[n] > 0 for n in range(4, 11))
    uniform = [n for n, f in flags.items() if f]
    criterion(7, ok, f"uniform for n = {uniform}, min convexity margin (n>=4) "
                     f"{min(convex[n] for n in range(4, 11)):.3e}")


def test_criterion_08_pw_dominance(criterion):
    candidates = ([MapSpec.identity(), MapSpec.cardioid()]
                  + [MapSpec.scaled_disc(a) for a in (0.5, 2.0, 3.0)]
                  + [MapSpec.power_shift(n) for n in range(1, 11)]
                  + [MapSpec.exponential(a) for a in (0.05, 0.1, 0.15, 0.5, 1.0)]
                  + [MapSpec.polynomial([0, 1, 0.2]), MapSpec.polynomial([0, 1, 0.1j, 0.05])])
    checked, ok = [], True
    for spec in candidates:
        uniform, _ = bounds.classify_conformal_uniform(spec, "computed")
        if not uniform:
            continue
        b = bounds.lower_bound_B(spec)
        pw = bounds.payne_weinberger_lower(geometry.diameter(spec))
        ok &= b > pw
        checked.append(spec.describe())
    ok &= len(checked) > 0
    criterion(8, ok, f"lower_B > pi^2/d^2 on all {len(checked)} uniform domains")


def test_criterion_09_energy_isometry(criterion, oracles):
    lhs, rhs = oracle.energy_isometry_check(MapSpec.cardioid(), lambda x, y: x ** 2 - y ** 2,
                                            lambda x, y: (2 * x, -2 * y))
    rel = abs(lhs - rhs) / rhs
    ok = rel < 1e-6 and abs(rhs - oracles["cardioid_energy_x2_minus_y2"]) / rhs < 1e-10
    criterion(9, ok, f"lhs {lhs:.10f}, rhs {rhs:.10f}, rel gap {rel:.1e}")


def test_criterion_10_exp_window(criterion, oracles):
    _, a1 = bounds.exp_family_alpha_window()
    f = bounds.exp_family_criterion
    ok = (abs(f(a1)) < 1e-10 and f(0.1) > 0 > f(0.2)
          and abs(a1 - oracles["exp_family_alpha1"]) < 1e-10)
    criterion(10, ok, f"alpha_1 = {a1:.12f}, f(alpha_1) = {f(a1):.1e}, "
                      f"f(0.1) = {f(0.1):.4f}, f(0.2) = {f(0.2):.4f}")


def test_criterion_11_constants(criterion):
    gaps = {r: abs(poincare_constant_convex(2, math.pi, 2, r) - br2_disc_upper(r))
            for r in (2, 3, 4, 10)}
    rect = b22_rect_exact(1, 2 * math.pi)
    ok = max(gaps.values()) < 1e-12 and abs(rect - 2) < 1e-12
    criterion(11, ok, f"max gap {max(gaps.values()):.1e}, b22_rect_exact(1, 2pi) = {rect!r}")


def test_criterion_12_properties(criterion, tmp_path):
    specs = [MapSpec.cardioid(), MapSpec.power_shift(3), MapSpec.exponential(1.5),
             MapSpec.schwarz_christoffel(10), MapSpec.exp_strip()]
    monotone = True
    for spec in specs:
        area = spec.base.area
        vals = [lalpha_norm(spec, a) * area ** (-1 / a) for a in (2.5, 3, 4, 8)]
        monotone &= all(x <= y * (1 + 1e-10) for x, y in zip(vals, vals[1:]))

    modulus = True
    rng = np.random.default_rng(7)
    for spec in [MapSpec.cardioid(), MapSpec.power_shift(6), MapSpec.exponential(2.0),
                 MapSpec.polynomial([0, 1, 0.3 + 0.2j]), MapSpec.exp_strip()]:
        base = spec.base
        if base.is_disc:
            r, t = np.sqrt(rng.uniform(0, 1, 4000)), rng.uniform(0, 2 * math.pi, 4000)
            z = r * np.exp(1j * t)
        else:
            z = rng.uniform(0, base.a, 4000) + 1j * rng.uniform(0, base.b, 4000)
        modulus &= float(np.max(np.abs(maps.deriv(spec, z)))) <= sup_abs_deriv(spec)

    shoelace = True
    for spec in [MapSpec.cardioid(), MapSpec.power_shift(8), MapSpec.exponential(2.5), MapSpec.exp_strip()]:
        trace = geometry.boundary_trace(spec, 2 ** 15)
        shoelace &= abs(geometry.shoelace_area(trace.points) / geometry.area(spec) - 1) < 1e-5

    spec_file = tmp_path / "spec.json"
    spec_file.write_text(json.dumps([
        {"name": "cardioid", "map": {"family": "Cardioid"}, "runs": {"alphas": [3, 4], "optimize": True}},
        {"name": "square", "map": {"family": "SchwarzChristoffelRegular", "m": 4}, "runs": {"optimize": True}},
        {"name": "ring", "map": {"family": "ExpStrip"}, "runs": {"alphas": [4]}},
    ]))
    outs = []
    for i, jobs in enumerate(("1", "3", "1")):
        out = tmp_path / f"r{i}.json"
        assert cli.main(["bound", str(spec_file), "-o", str(out), "-j", jobs]) == 0
        outs.append(out.read_bytes())
    deterministic = len(set(outs)) == 1

    ok = monotone and modulus and shoelace and deterministic
    criterion(12, ok, f"alpha-monotone {monotone}, max-modulus {modulus}, "
                      f"area vs shoelace {shoelace}, deterministic reports {deterministic}")
