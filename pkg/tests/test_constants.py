import math

import pytest
from hypothesis import given, strategies as st
from pytest import approx

from membrane.constants import (
    PoincareConstant,
    b22_disc_exact,
    b22_rect_exact,
    br2_disc_upper,
    poincare_constant_convex,
    rect_constant_printed,
)
from membrane.errors import ExponentOutOfRange


def test_convex_examples(oracles):
    assert poincare_constant_convex(2, math.pi, 2, 2) == approx(4.0, rel=1e-14)
    assert poincare_constant_convex(math.sqrt(2), 1, 2, 2) == approx(2 * math.sqrt(math.pi), rel=1e-14)
    assert poincare_constant_convex(math.sqrt(2), 1, 2, 2) == approx(oracles["convex_square_r2"], rel=1e-14)
    assert poincare_constant_convex(2, math.pi, 2, 4) == br2_disc_upper(4)


@pytest.mark.parametrize("r", [2, 3, 4, 10])
def test_specialization_identity(r, oracles):
    assert poincare_constant_convex(2, math.pi, 2, r) == approx(br2_disc_upper(r), rel=1e-12)
    assert br2_disc_upper(r) == approx(oracles["convex_disc_table"][str(r)], rel=1e-12)


def test_br2_values(oracles):
    assert br2_disc_upper(2) == approx(4.0, rel=1e-15)
    assert br2_disc_upper(1) == approx(oracles["br2_r1"], rel=1e-13)
    assert br2_disc_upper(4) == approx(oracles["br2_r4"], rel=1e-13)
    alpha = 4.0
    closed = 2 * math.pi ** (-1 / alpha) * ((2 * alpha - 2) / (alpha - 2)) ** ((alpha - 1) / alpha)
    assert br2_disc_upper(2 * alpha / (alpha - 2)) == approx(closed, rel=1e-14)


def test_exponent_out_of_range():
    with pytest.raises(ExponentOutOfRange):
        poincare_constant_convex(2, math.pi, 2, math.inf)
    with pytest.raises(ExponentOutOfRange):
        poincare_constant_convex(2, math.pi, 1, 2)      # delta = 1/2
    with pytest.raises(ValueError):
        poincare_constant_convex(0, 1, 2, 2)


def test_rectangle_and_disc_exact(oracles):
    assert b22_rect_exact(1, 2 * math.pi) == approx(2.0, rel=1e-15)
    assert b22_rect_exact(1, 1) == approx(1 / math.pi)
    assert b22_rect_exact(3, 2) == approx(3 / math.pi)
    assert b22_disc_exact() == approx(oracles["b22_disc_exact"], rel=1e-13)
    assert b22_disc_exact() <= br2_disc_upper(2)


@given(st.floats(1.0, 50.0))
def test_br2_continuous(r):
    eps = 1e-7
    assert br2_disc_upper(r + eps) == approx(br2_disc_upper(r), rel=1e-5)


@given(st.floats(0.1, 10), st.floats(0.1, 10))
def test_exact_below_estimate(a, b):
    est = poincare_constant_convex(math.hypot(a, b), a * b, 2, 2)
    assert b22_rect_exact(a, b) <= est


def test_printed_constant_is_positive_and_differs():
    derived = poincare_constant_convex(math.hypot(1, 2 * math.pi), 2 * math.pi, 2, 4)
    printed = rect_constant_printed(1, 2 * math.pi, 4)
    assert printed > 0 and derived > 0
    assert printed != approx(derived ** 2, rel=1e-3)


def test_poincare_constant_record():
    c = PoincareConstant(2, 2, 4.0, "upper-estimate")
    assert c.value == 4.0
    with pytest.raises(ValueError):
        PoincareConstant(2, 2, -1.0, "exact")
    with pytest.raises(ValueError):
        PoincareConstant(2, 2, 1.0, "guess")
