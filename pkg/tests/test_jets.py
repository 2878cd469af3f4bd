from fractions import Fraction

import gmpy2
import mpmath
from hypothesis import given, strategies as st

from nfgeom.finsler import FinslerSpace, Geometry
from nfgeom.jets import Jet, jet_lift, to_mpf
from nfgeom.kernel import Tower
from nfgeom.oracle import NumericGeometry, cross_check, numeric_nullspace

from strategies import POINT, T2, rationals

TOL = mpmath.mpf(10) ** -35


def close(a, b):
    a, b = to_mpf(a) if not isinstance(a, mpmath.mpf) else a, b
    return abs(a - b) <= TOL * (1 + abs(b))


@given(rationals())
def test_jet_coefficients_are_taylor_coefficients(f):
    j = jet_lift(f, POINT, 2)
    with mpmath.workdps(50):
        assert close(j.value, f.evaluate(POINT, 50))
        for v, name in enumerate(T2.coords):
            e = [0] * 4
            e[v] = 1
            assert close(j.coeff(e), f.diff(name).evaluate(POINT, 50))
            e[v] = 2
            assert close(j.coeff(e), f.diff(name).diff(name).evaluate(POINT, 50) / 2)


@given(rationals(), rationals())
def test_jet_product_rule(f, g):
    with gmpy2.context(gmpy2.get_context(), precision=200):
        a, b = jet_lift(f, POINT, 2), jet_lift(g, POINT, 2)
        for v in range(4):
            lhs = (a * b).deriv(v)
            rhs = a.deriv(v) * b + a * b.deriv(v)
            with mpmath.workdps(50):
                assert close(lhs.value, to_mpf(rhs.value))


@given(st.integers(-3, 3), st.integers(1, 4))
def test_rational_power_and_exp(k, d):
    with gmpy2.context(gmpy2.get_context(), precision=200):
        x = Jet.variable(1, 3, 0, 0, Fraction(7, 5))
        r = Fraction(k, d)
        p = x.rational_power(r)
        with mpmath.workdps(50):
            x0 = mpmath.mpf(7) / 5
            assert close(p.value, x0 ** (mpmath.mpf(k) / d))
            assert close(p.coeff((1, 0)), (mpmath.mpf(k) / d) * x0 ** (mpmath.mpf(k) / d - 1))
            e = x.exp()
            assert close(e.coeff((3, 0)), mpmath.exp(x0) / 6)


def test_inverse_series():
    with gmpy2.context(gmpy2.get_context(), precision=200):
        x = Jet.variable(1, 4, 0, 0, 2)
        inv = x.inverse()
        for k in range(5):
            with mpmath.workdps(50):
                assert close(inv.coeff((k, 0)), mpmath.mpf(-1) ** k / mpmath.mpf(2) ** (k + 1))


def _sphere():
    T = Tower(2)
    return FinslerSpace(T, T.y(1) ** 2 * (1 + T.x(2) ** 2) + T.y(2) ** 2 * (2 + T.x(1) ** 2), [])


def test_numeric_geometry_matches_symbolic():
    space = _sphere()
    rep = cross_check(Geometry(space), ["g", "N", "RG", "RC"], count=4, seed=3)
    assert rep.passed, rep.render()


def test_numeric_geometry_known_value():
    # Example 1 N at x=(1,2,1,1), y=(1,1,1,1): N^1_1 = 1/6, N^2_2 = 1/3
    T = Tower(4)
    y, x = T.y, T.x
    space = FinslerSpace(T, T.radical(x(2) ** 2 * y(1) ** 4 + y(2) ** 4 + y(3) ** 4 + y(4) ** 4, 2), [])
    pt = {"x1": 1, "x2": 2, "x3": 1, "x4": 1, "y1": 1, "y2": 1, "y3": 1, "y4": 1}
    N = NumericGeometry(space, pt).tensor("N")
    with mpmath.workdps(50):
        assert close(N[(1, 1)], mpmath.mpf(1) / 6)
        assert close(N[(2, 2)], mpmath.mpf(1) / 3)


@given(st.lists(st.integers(-5, 5), min_size=9, max_size=9), st.integers(1, 9))
def test_nullspace_invariant_under_row_scaling(xs, c):
    A = [xs[0:3], xs[3:6], [a + b for a, b in zip(xs[0:3], xs[3:6])]]
    d0, basis = numeric_nullspace(A, n=3)
    d1, _ = numeric_nullspace([[c * a for a in A[0]], A[1], [-c * a for a in A[2]]], n=3)
    assert d0 == d1 >= 1
    with mpmath.workdps(50):
        for v in basis:
            assert all(abs(mpmath.fsum(a * b for a, b in zip(row, v))) < TOL for row in A)
