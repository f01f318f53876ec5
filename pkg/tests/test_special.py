import json
import math
import pathlib
import threading

import numpy as np
import pytest
from pytest import approx

from membrane import special
from membrane.special import bessel_j, bessel_j1_prime, j1_prime_zero

ORACLES = json.loads((pathlib.Path(__file__).parent / "data" / "oracles.json").read_text())


def test_values_at_zero():
    assert bessel_j(1, 0) == 0
    assert bessel_j(0, 0) == 1


def test_first_zero_of_j0(oracles):
    assert abs(bessel_j(0, oracles["j0_first_zero"])) < 1e-12
    assert abs(bessel_j(0, 2.404825557695773)) < 1e-12


@pytest.mark.parametrize("order,x,expected", ORACLES["bessel_samples"])
def test_against_reference(order, x, expected):
    assert abs(bessel_j(order, x) - expected) < 1e-13


def test_bounded_by_one():
    xs = np.linspace(0, 60, 601)
    assert all(abs(bessel_j(o, x)) <= 1 for o in (0, 1) for x in xs)


def test_seam_agreement():
    x = special.SERIES_CUTOFF
    for order in (0, 1):
        assert abs(special._series(order, x) - special._asymptotic(order, x)) < 1e-12


def test_derivative_matches_finite_differences():
    h = 1e-5
    for x in np.linspace(0.1, 20, 50):
        fd = (bessel_j(1, x + h) - bessel_j(1, x - h)) / (2 * h)
        assert bessel_j1_prime(x) == approx(fd, abs=1e-7)


def test_j1_prime_zero(oracles):
    z = j1_prime_zero()
    assert 1.84 < z < 1.85
    assert round(z, 5) == 1.84118
    assert abs(z - oracles["j1_prime_zero"]) < 1e-12
    assert abs(bessel_j1_prime(z)) < 1e-12


def test_zero_is_cached_and_race_free():
    results = []
    threads = [threading.Thread(target=lambda: results.append(j1_prime_zero())) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(set(results)) == 1


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        bessel_j(2, 1.0)
    with pytest.raises(ValueError):
        bessel_j(0, -1.0)
    with pytest.raises(ValueError):
        bessel_j(0, math.nan)
