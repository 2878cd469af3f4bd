"""Hypothesis strategies shared by the property tests."""
from fractions import Fraction

from hypothesis import strategies as st

from nfgeom.kernel import Tower

T2 = Tower(2)
# one radical and one exponential atom, declared once so every draw shares the tower
RAD = T2.radical(1 + T2.y(1) ** 2 + T2.x(1) ** 2, 2)
EXP = T2.exp(T2.x(2) - T2.y(2))

PIECES = [T2.x(1), T2.x(2), T2.y(1), T2.y(2), RAD, EXP]
POINT = {"x1": Fraction(1, 3), "x2": Fraction(-2, 5), "y1": Fraction(3, 2), "y2": Fraction(5, 7)}


@st.composite
def monomials(draw):
    c = draw(st.integers(-4, 4).filter(bool))
    e = T2.const(Fraction(c, draw(st.integers(1, 3))))
    for p in draw(st.lists(st.sampled_from(PIECES), max_size=3)):
        e = e * p
    return e


@st.composite
def polys(draw):
    terms = draw(st.lists(monomials(), min_size=1, max_size=3))
    out = T2.const(0)
    for t in terms:
        out = out + t
    return out


@st.composite
def rationals(draw):
    """Quotients of polynomial expressions; the denominator never vanishes."""
    num = draw(polys())
    if draw(st.booleans()):
        den = 1 + T2.y(1) ** 2 + draw(st.sampled_from([T2.const(0), T2.x(2) ** 2, T2.y(2) ** 2]))
        return num / den
    return num


def random_system(seed: int):
    """Small polynomial system, n <= 3 unknowns, rows sometimes dependent on a
    polynomial multiple of the first so that splitting has work to do."""
    import random

    from nfgeom.nullity import LinearSystem

    rng = random.Random(seed)
    T = Tower(2)
    pieces = [T.const(1), T.y(1), T.y(2), T.x(1), T.y(1) - T.y(2), T.x(1) * T.y(2), T.y(1) ** 2]

    def poly():
        e = T.const(0)
        for _ in range(rng.randint(0, 2)):
            e = e + rng.randint(-3, 3) * rng.choice(pieces)
        return e

    n, m = rng.randint(1, 3), rng.randint(1, 3)
    rows = [[poly() for _ in range(n)] for _ in range(m)]
    if m > 1 and rng.random() < 0.5:
        c = poly()
        rows[-1] = [a + c * b for a, b in zip(rows[-1], rows[0])]
    return LinearSystem(n, [tuple(r) for r in rows], T)
