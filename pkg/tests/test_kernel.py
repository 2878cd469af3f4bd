from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from nfgeom.dsl import Session
from nfgeom.kernel import KernelError, PoleError, Tower
from nfgeom.parser import parse_expr

from strategies import EXP, POINT, RAD, T2, polys, rationals


@given(rationals(), rationals(), rationals())
def test_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a - a).is_zero()


@given(rationals())
def test_inverse(a):
    if a.is_zero():
        with pytest.raises((KernelError, ZeroDivisionError)):
            a.inverse()
    else:
        assert (a * a.inverse() - 1).is_zero()


@given(rationals(), rationals(), st.sampled_from(T2.coords))
def test_leibniz(a, b, v):
    assert (a * b).diff(v) == a.diff(v) * b + a * b.diff(v)


@given(rationals(), st.sampled_from(T2.coords), st.sampled_from(T2.coords))
def test_mixed_partials_commute(a, u, v):
    assert a.diff(u).diff(v) == a.diff(v).diff(u)


def test_atom_relations():
    base = 1 + T2.y(1) ** 2 + T2.x(1) ** 2
    assert RAD * RAD == base
    # d sqrt(u) = du / (2 sqrt(u))
    assert RAD.diff("y1") * 2 * RAD == base.diff("y1")
    assert EXP.diff("y2") == -EXP
    assert EXP * EXP.inverse() == T2.const(1)


@given(rationals(), rationals())
def test_evaluate_is_a_homomorphism(a, b):
    with mpmath.workdps(40):
        va, vb = a.evaluate(POINT, 40), b.evaluate(POINT, 40)
        assert abs((a * b).evaluate(POINT, 40) - va * vb) <= mpmath.mpf(10) ** -30 * (1 + abs(va * vb))
        assert abs((a + b).evaluate(POINT, 40) - (va + vb)) <= mpmath.mpf(10) ** -30 * (1 + abs(va) + abs(vb))


def test_evaluate_known_values():
    T = Tower(4)
    n11 = T.y(2) / (3 * T.x(2))
    pt = {"x1": 1, "x2": 2, "x3": 1, "x4": 1, "y1": 1, "y2": 1, "y3": 1, "y4": 1}
    with mpmath.workdps(40):
        assert abs(n11.evaluate(pt, 40) - mpmath.mpf(1) / 6) < mpmath.mpf(10) ** -35
    with pytest.raises(PoleError):
        (1 / T.y(1)).evaluate({**pt, "y1": 0})


def test_constants_are_reduced():
    c = T2.const(Fraction(6, 4))
    assert c.is_constant() and c.constant_value() == Fraction(3, 2)
    assert T2.const(0).is_zero()


@given(rationals())
def test_render_parses_back(a):
    s = Session()
    s.tower = T2
    assert s.scalar(parse_expr(a.render())) == a


def test_nested_radical_tower():
    T = Tower(1)
    r = T.radical(1 + T.y(1) ** 2, 2)
    q = T.radical(r + 2, 3)
    assert q ** 3 == r + 2
    assert (q ** 3).diff("y1") == r.diff("y1")
