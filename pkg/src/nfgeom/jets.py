"""Truncated Taylor jets in the 2n coordinates (x1..xn, y1..yn).

A jet of order (kx, ky) keeps every monomial whose x-degree is at most kx and
whose y-degree is at most ky. Coefficients are gmpy2 ``mpfr`` values held in a
numpy object array; products go through a cached index table.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Mapping

import gmpy2
import mpmath
from mpmath.libmp import from_man_exp
import numpy as np

from .kernel import Expression, KernelError, PoleError, Tower


def _parts(n: int, k: int) -> list[tuple[int, ...]]:
    out = []
    for d in range(k + 1):
        for combo in itertools.combinations_with_replacement(range(n), d):
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


class JetSpace:
    """Monomial basis and product table for one (n, kx, ky)."""

    def __init__(self, n: int, kx: int, ky: int):
        self.n, self.kx, self.ky = n, kx, ky
        xs, ys = _parts(n, kx), _parts(n, ky)
        mons = [a + b for a in xs for b in ys]
        mons.sort(key=lambda m: (sum(m), m))
        self.monoms = mons
        self.index = {m: i for i, m in enumerate(mons)}
        self._table = None

    def __len__(self):
        return len(self.monoms)

    def fits(self, m) -> bool:
        n = self.n
        return sum(m[:n]) <= self.kx and sum(m[n:]) <= self.ky

    @property
    def table(self):
        if self._table is None:
            I, J, K = [], [], []
            idx = self.index
            for a, ma in enumerate(self.monoms):
                for b, mb in enumerate(self.monoms):
                    m = tuple(u + v for u, v in zip(ma, mb))
                    c = idx.get(m)
                    if c is not None:
                        I.append(a)
                        J.append(b)
                        K.append(c)
            order = np.argsort(np.array(K), kind="stable")
            I = np.array(I)[order]
            J = np.array(J)[order]
            K = np.array(K)[order]
            starts = np.flatnonzero(np.r_[True, K[1:] != K[:-1]])
            self._table = (I, J, starts)
        return self._table


@lru_cache(maxsize=None)
def jet_space(n: int, kx: int, ky: int) -> JetSpace:
    return JetSpace(n, kx, ky)


@lru_cache(maxsize=None)
def _trim_map(n, kx, ky, kx2, ky2):
    src, dst = jet_space(n, kx, ky), jet_space(n, kx2, ky2)
    return np.array([src.index[m] for m in dst.monoms])


@lru_cache(maxsize=None)
def _deriv_map(n, kx, ky, v):
    src = jet_space(n, kx, ky)
    kx2, ky2 = (kx - 1, ky) if v < n else (kx, ky - 1)
    dst = jet_space(n, kx2, ky2)
    pos, mult = [], []
    for m in dst.monoms:
        up = list(m)
        up[v] += 1
        pos.append(src.index[tuple(up)])
        mult.append(up[v])
    return kx2, ky2, np.array(pos), np.array([gmpy2.mpz(k) for k in mult], dtype=object)


def mpfr(v):
    if isinstance(v, Fraction):
        return gmpy2.mpfr(v.numerator) / v.denominator
    if isinstance(v, mpmath.mpf):
        man, exp = v.man_exp
        return gmpy2.mul_2exp(gmpy2.mpfr(int(man)), int(exp))
    return gmpy2.mpfr(v)


def to_mpf(v) -> mpmath.mpf:
    if not isinstance(v, type(gmpy2.mpfr(0))):
        v = gmpy2.mpfr(v)
    # exact: q is a power of two, so no rounding at the ambient precision
    p, q = v.as_integer_ratio()
    return mpmath.mp.make_mpf(from_man_exp(int(p), 1 - int(q).bit_length()))


class Jet:
    __slots__ = ("space", "c")

    def __init__(self, space: JetSpace, coeffs):
        self.space = space
        self.c = coeffs

    # -- constructors ---------------------------------------------------------
    @classmethod
    def const(cls, n, kx, ky, value) -> "Jet":
        sp = jet_space(n, kx, ky)
        c = np.array([gmpy2.mpfr(0)] * len(sp), dtype=object)
        c[0] = mpfr(value)
        return cls(sp, c)

    @classmethod
    def variable(cls, n, kx, ky, v: int, value) -> "Jet":
        j = cls.const(n, kx, ky, value)
        e = [0] * (2 * n)
        e[v] = 1
        idx = j.space.index.get(tuple(e))
        if idx is not None:
            j.c[idx] = gmpy2.mpfr(1)
        return j

    # -- structure ------------------------------------------------------------
    @property
    def order(self) -> tuple[int, int]:
        return self.space.kx, self.space.ky

    @property
    def value(self):
        return self.c[0]

    def coeff(self, mono) -> object:
        i = self.space.index.get(tuple(mono))
        return gmpy2.mpfr(0) if i is None else self.c[i]

    def trim(self, kx: int, ky: int) -> "Jet":
        sp = self.space
        kx, ky = min(kx, sp.kx), min(ky, sp.ky)
        if (kx, ky) == (sp.kx, sp.ky):
            return self
        return Jet(jet_space(sp.n, kx, ky), self.c[_trim_map(sp.n, sp.kx, sp.ky, kx, ky)])

    def _align(self, other: "Jet"):
        kx = min(self.space.kx, other.space.kx)
        ky = min(self.space.ky, other.space.ky)
        return self.trim(kx, ky), other.trim(kx, ky)

    # -- arithmetic -----------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Jet):
            return other
        sp = self.space
        return Jet.const(sp.n, sp.kx, sp.ky, other)

    def __add__(self, other):
        a, b = self._align(self._lift(other))
        return Jet(a.space, a.c + b.c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.space, -self.c)

    def __sub__(self, other):
        a, b = self._align(self._lift(other))
        return Jet(a.space, a.c - b.c)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.space, self.c * mpfr(other))
        a, b = self._align(other)
        I, J, starts = a.space.table
        return Jet(a.space, np.add.reduceat(a.c[I] * b.c[J], starts))

    __rmul__ = __mul__

    def _series(self, coeffs) -> "Jet":
        """sum_k coeffs[k] * u^k with u the nilpotent part."""
        u = Jet(self.space, self.c.copy())
        u.c[0] = gmpy2.mpfr(0)
        out = Jet.const(self.space.n, self.space.kx, self.space.ky, coeffs[0])
        p = None
        for k in range(1, len(coeffs)):
            p = u if p is None else p * u
            if coeffs[k]:
                out = out + p * coeffs[k]
        return out

    def _depth(self) -> int:
        return self.space.kx + self.space.ky

    def inverse(self) -> "Jet":
        a = self.value
        if a == 0:
            raise PoleError("jet inverse of a vanishing value")
        inv = 1 / a
        return self._series([inv * (-inv) ** k for k in range(self._depth() + 1)])

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.space, self.c / mpfr(other))
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if isinstance(k, int):
            if k < 0:
                return self.inverse() ** (-k)
            out = Jet.const(self.space.n, self.space.kx, self.space.ky, 1)
            base = self
            while k:
                if k & 1:
                    out = out * base
                k >>= 1
                if k:
                    base = base * base
            return out
        return self.rational_power(Fraction(k))

    def rational_power(self, r: Fraction) -> "Jet":
        """Real branch of self^r; negative values allowed for odd denominators."""
        a = self.value
        if a == 0:
            raise PoleError("rational power of a vanishing value")
        if a < 0:
            if r.denominator % 2 == 0:
                raise KernelError("negative base for an even root")
            mag = gmpy2.exp(gmpy2.log(-a) * r.numerator / r.denominator)
            lead = mag if r.numerator % 2 == 0 else -mag
        else:
            lead = gmpy2.exp(gmpy2.log(a) * r.numerator / r.denominator)
        coeffs = [lead]
        binom = gmpy2.mpfr(1)
        rr = gmpy2.mpfr(r.numerator) / r.denominator
        for k in range(1, self._depth() + 1):
            binom = binom * (rr - (k - 1)) / k
            coeffs.append(lead * binom / a ** k)
        return self._series(coeffs)

    def exp(self) -> "Jet":
        e = gmpy2.exp(self.value)
        return self._series([e / factorial(k) for k in range(self._depth() + 1)])

    def deriv(self, v: int) -> "Jet":
        """Partial derivative in coordinate v (0..2n-1); lowers that order by one."""
        sp = self.space
        if (v < sp.n and sp.kx == 0) or (v >= sp.n and sp.ky == 0):
            raise KernelError("jet order exhausted")
        kx2, ky2, pos, mult = _deriv_map(sp.n, sp.kx, sp.ky, v)
        return Jet(jet_space(sp.n, kx2, ky2), self.c[pos] * mult)


# -- lifting expressions -------------------------------------------------------------------
class JetLifter:
    """Lift tower expressions to jets at a point; atom jets are cached."""

    def __init__(self, tower: Tower, point: Mapping, order: tuple[int, int]):
        self.tower = tower
        n = tower.dim
        self.n = n
        self.order = order
        kx, ky = order
        self.gens: list[Jet] = []
        for i, name in enumerate(tower.coords):
            v = point.get(name, 0)
            self.gens.append(Jet.variable(n, kx, ky, i, v))
        self._atoms_done = 0
        self._pows: dict = {}

    def _ensure_atoms(self):
        t = self.tower
        while self._atoms_done < len(t.atoms):
            atom = t.atoms[self._atoms_done]
            if atom.kind == "radical":
                base = self._poly(atom.base)
                j = base.rational_power(Fraction(1, atom.degree))
            else:
                j = self._lift(atom.arg).exp()
            self.gens.append(j)
            self._atoms_done += 1

    def _pow(self, i: int, e: int) -> Jet:
        key = (i, e)
        if key not in self._pows:
            self._pows[key] = self.gens[i] if e == 1 else self._pow(i, e - 1) * self.gens[i]
        return self._pows[key]

    def poly(self, p) -> Jet:
        self._ensure_atoms()
        return self._poly(p)

    def _poly(self, p) -> Jet:
        p = self.tower.lift(p)
        kx, ky = self.order
        out = Jet.const(self.n, kx, ky, 0)
        for mon, c in p.iterterms():
            term = None
            for i, e in enumerate(mon):
                if e:
                    f = self._pow(i, e)
                    term = f if term is None else term * f
            coef = gmpy2.mpfr(int(c.numerator)) / int(c.denominator)
            out = out + (Jet.const(self.n, kx, ky, coef) if term is None else term * coef)
        return out

    def lift(self, f: Expression) -> Jet:
        self._ensure_atoms()
        return self._lift(f)

    def _lift(self, f: Expression) -> Jet:
        num = self._poly(f.num)
        if not f.den.is_ground or f.den.LC != 1:
            num = num / self._poly(f.den)
        for i, k in f.shift:
            num = num * (self._pow(i, k) if k > 0 else self._pow(i, -k).inverse())
        return num


def jet_lift(f: Expression, point: Mapping, order: tuple[int, int] | int,
             digits: int = 50) -> Jet:
    """Taylor jet of f at point; ``order`` is (kx, ky) or a single K for both."""
    if isinstance(order, int):
        order = (order, order)
    with gmpy2.context(gmpy2.get_context(), precision=_bits(digits)):
        return JetLifter(f.tower, point, order).lift(f)


def _bits(digits: int) -> int:
    return int(digits * 3.33) + 32
