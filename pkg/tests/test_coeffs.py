"""Exact coefficient arithmetic: canonical forms, inversion, derivations."""

import math
from fractions import Fraction

import pytest

from qpskit.coeffs import (AlgebraContext, CoeffError, DEFAULT_CONTEXT,
                           scalar_sqrt)

ctx = DEFAULT_CONTEXT
w = ctx.gen("omega")
m = ctx.gen("m")
p1, p2, p3 = ctx.gen("P1"), ctx.gen("P2"), ctx.gen("P3")
hbar = ctx.gen("hbar")
i = ctx.imag_unit()

SAMPLE = [0.37, -0.82, 0.55, 1.3, 0.0, 1.0, 1.0, 0.0]   # P1,P2,P3,m,t,hbar,...


def num(c, vals=SAMPLE):
    om = math.sqrt(vals[0]**2 + vals[1]**2 + vals[2]**2 + vals[3]**2)
    return c.evaluate(vals, om)


def test_omega_square_reduces():
    assert w * w == p1 * p1 + p2 * p2 + p3 * p3 + m * m


def test_canonical_equality_and_hash():
    a = (p1 * p2 + m) / (p1 - m)
    b = ((p1 * p2 + m) * (p1 + m)) / ((p1 - m) * (p1 + m))
    assert a == b
    assert hash(a) == hash(b)
    assert a - b == 0


def test_inversion_total_and_involutive():
    for x in [w, w + m, m, p1 + i * m, 2 * w - 3 * p2, (w + m) * (w + m)]:
        inv = x.inv()
        assert x * inv == ctx.scalar(1)
        assert inv.inv() == x
    with pytest.raises(CoeffError):
        ctx.zero_coeff().inv()


def test_elimination_of_omega_denominator():
    # 1/(omega+m) = (omega-m)/P^2 after rationalization
    lhs = (w + m).inv()
    rhs = (w - m) / (p1 * p1 + p2 * p2 + p3 * p3)
    assert lhs == rhs


def finite_difference(c, axis, vals, h=1e-6):
    up = list(vals)
    dn = list(vals)
    up[axis - 1] += h
    dn[axis - 1] -= h
    return (num(c, up) - num(c, dn)) / (2 * h)


@pytest.mark.parametrize("expr,axis", [
    (w, 1), (w, 2), ((w + m).inv(), 1), ((w + m).inv(), 3),
    (p1 * w / (m + w), 2), (w.inv(), 1), ((p2 + w) * (p2 + w), 2),
])
def test_derivative_against_finite_differences(expr, axis):
    exact = num(expr.diff(axis))
    approx = finite_difference(expr, axis, SAMPLE)
    assert exact == pytest.approx(approx, rel=1e-7, abs=1e-8)


def test_derivative_closed_forms():
    # d omega / dP1 = P1/omega
    assert w.diff(1) == p1 / w
    # d (1/(omega+m)) / dP1 = -P1/(omega*(omega+m)^2)
    assert (w + m).inv().diff(1) == -p1 * (w * (w + m) * (w + m)).inv()
    assert not m.diff(1)


def test_derivative_linearity_product_quotient():
    a = p1 * w + m
    b = (w + m).inv() * p2
    assert (a + b).diff(1) == a.diff(1) + b.diff(1)
    assert (a * b).diff(1) == a.diff(1) * b + a * b.diff(1)
    q = a / b
    assert q.diff(1) == (a.diff(1) * b - a * b.diff(1)) / (b * b)


def test_time_derivative():
    t = ctx.gen("t")
    assert (t * p1 + m).dt() == p1
    assert not w.dt()


def test_conjugation():
    x = p1 + i * hbar * w
    assert x.conjugate() == p1 - i * hbar * w
    assert x.conjugate().conjugate() == x
    assert (x * x.conjugate()).is_real()


def test_scalar_sqrt():
    assert scalar_sqrt(w * w) == w
    assert scalar_sqrt(ctx.scalar(Fraction(9, 4)) * m * m) == ctx.scalar(Fraction(3, 2)) * m
    assert scalar_sqrt(p1 * p2) is None
    assert scalar_sqrt(ctx.scalar(4) * w * w) == ctx.scalar(2) * w


def test_mass_factor_context():
    ctx2 = AlgebraContext.get(2)
    w2 = ctx2.gen("omega")
    expected = (ctx2.gen("P1")**2 + ctx2.gen("P2")**2 + ctx2.gen("P3")**2
                + ctx2.scalar(4) * ctx2.gen("m")**2)
    assert w2 * w2 == expected
    with pytest.raises(CoeffError):
        _ = w + w2            # contexts must not mix


def test_numeric_evaluation_matches_python():
    x = (p1 * p1 - m * w) / (w + m)
    om = math.sqrt(SAMPLE[0]**2 + SAMPLE[1]**2 + SAMPLE[2]**2 + SAMPLE[3]**2)
    direct = (SAMPLE[0]**2 - SAMPLE[3] * om) / (om + SAMPLE[3])
    assert num(x) == pytest.approx(direct, rel=1e-13)
