"""Exact scalar arithmetic over Q(x, y) extended by a tower of radical and
exponential atoms.

An :class:`Expression` is a single fraction ``num * E / den`` where

* ``num`` is a polynomial in the coordinates and the atoms, with every radical
  atom reduced below its degree,
* ``den`` is a polynomial free of radical atoms (exponential atoms may occur),
* ``E`` is a Laurent monomial in the exponential atoms (``shift``).

The polynomial layer is sympy's sparse ``PolyElement`` over QQ; everything
above it (atom tower, normal form, differentiation, inversion in radical
extensions) lives here.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from numbers import Rational
from typing import Iterable, Mapping

import mpmath
from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyRing


class KernelError(ArithmeticError):
    """Raised on ill-formed atoms, unknown variables or invalid evaluation."""


class PoleError(KernelError):
    pass


def _q(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


class Atom:
    """A radical ``base^(1/degree)`` or an exponential ``exp(arg)``."""

    def __init__(self, tower: "Tower", name: str, kind: str, *, base=None,
                 degree: int = 0, arg: "Expression | None" = None,
                 content: Fraction = Fraction(1)):
        self.tower = tower
        self.name = name
        self.kind = kind
        self.degree = degree
        self._base = base
        self.arg = arg
        # arg = content * primitive part; lets integer multiples share the atom
        self.content = content
        self.index = len(tower.coords) + len(tower.atoms)
        self._dcache: dict[int, Expression] = {}
        self._base_lift: tuple = (None, None)

    @property
    def base(self):
        ring = self.tower.ring
        if self._base_lift[0] is not ring:
            self._base_lift = (ring, self._base.set_ring(ring))
        return self._base_lift[1]

    def base_expr(self) -> "Expression":
        return Expression(self.tower, self.base)

    def as_expr(self) -> "Expression":
        return Expression(self.tower, self.tower.ring.gens[self.index])

    def derivative(self, i: int) -> "Expression":
        """d(atom)/d(coordinate i)."""
        if i not in self._dcache:
            me = self.as_expr()
            if self.kind == "radical":
                db = self.tower.dpoly(self.base, i)
                d = me * db / (self.degree * self.base_expr()) if db else db
            else:
                d = me * self.arg.diff(i)
            self._dcache[i] = d
        return self._dcache[i]

    def render(self) -> str:
        if self.kind == "radical":
            return f"({self.tower.render_poly(self.base)})^(1/{self.degree})"
        return f"exp({self.arg.render()})"

    def __repr__(self) -> str:
        return f"Atom({self.name}={self.render()})"


class Tower:
    """Coordinates ``x1..xn, y1..yn`` plus an append-only list of atoms.

    Variable order (and hence the polynomial ring) is fixed: coordinates first,
    atoms in declaration order.
    """

    def __init__(self, dim: int):
        if dim < 1:
            raise KernelError("dimension must be positive")
        self.dim = dim
        self.coords = tuple([f"x{i}" for i in range(1, dim + 1)]
                            + [f"y{i}" for i in range(1, dim + 1)])
        self.atoms: list[Atom] = []
        self._keys: dict = {}
        self.ring = PolyRing(self.coords, QQ, grlex)

    # -- variables ---------------------------------------------------------
    def coord_index(self, v) -> int:
        if isinstance(v, int):
            if 0 <= v < len(self.coords):
                return v
        elif v in self.coords:
            return self.coords.index(v)
        raise KernelError(f"unknown variable {v!r}")

    def x(self, i: int) -> "Expression":
        return self.var(f"x{i}")

    def y(self, i: int) -> "Expression":
        return self.var(f"y{i}")

    def var(self, name) -> "Expression":
        return Expression(self, self.ring.gens[self.coord_index(name)])

    def const(self, c) -> "Expression":
        return Expression.constant(self, c)

    def lift(self, p):
        return p if p.ring is self.ring else p.set_ring(self.ring)

    @property
    def radicals(self) -> list[Atom]:
        return [a for a in self.atoms if a.kind == "radical"]

    def exp_indices(self) -> list[int]:
        return [a.index for a in self.atoms if a.kind == "exp"]

    def _append(self, atom: Atom, key) -> Atom:
        self.atoms.append(atom)
        self._keys[key] = atom
        self.ring = PolyRing(self.coords + tuple(a.name for a in self.atoms), QQ, grlex)
        return atom

    # -- atom declaration --------------------------------------------------
    def radical(self, base: "Expression", degree: int) -> "Expression":
        """Return ``base^(1/degree)``, declaring an atom if needed."""
        base = self.coerce(base)
        if degree < 2:
            raise KernelError("radical degree must be >= 2")
        if base.is_zero():
            raise KernelError("radical base is identically zero")
        # base = Nb * E^s / Db  ->  root = (Nb * E^(s+m t) * Db^(m-1))^(1/m) / (Db * E^t)
        m = degree
        t = {i: (-k + m - 1) // m for i, k in base.shift if k < 0}
        poly = self.lift(base.num) * self.lift(base.den) ** (m - 1)
        mono = [0] * self.ring.ngens
        for i, k in base.shift:
            mono[i] = k + m * t.get(i, 0)
        poly = poly.mul_monom(tuple(mono))
        key = ("radical", m, self.render_poly(poly))
        atom = self._keys.get(key)
        if atom is None:
            atom = self._append(Atom(self, f"_r{len(self.atoms)}", "radical",
                                     base=poly, degree=m), key)
        root = atom.as_expr()
        den = Expression(self, self.lift(base.den), shift=tuple((i, -k) for i, k in t.items() if k))
        return root / den

    def exp(self, arg: "Expression") -> "Expression":
        """Return ``exp(arg)``; integer multiples of a known argument reuse its atom."""
        arg = self.coerce(arg)
        if arg.is_zero():
            return self.const(1)
        content, prim = arg.primitive()
        key = ("exp", prim.render())
        atom = self._keys.get(key)
        if atom is not None:
            c0 = atom.content
            k = content / c0
            if k.denominator == 1:
                return atom.as_expr() ** int(k)
            key = ("exp", arg.render())
            atom = self._keys.get(key)
            if atom is not None:
                return atom.as_expr()
            c_new, power = content, 1
        elif content.denominator == 1:
            c_new, power = Fraction(1 if content > 0 else -1), abs(int(content))
        else:
            c_new, power = content, 1
        new_arg = prim * c_new
        atom = self._append(Atom(self, f"_e{len(self.atoms)}", "exp", arg=new_arg,
                                 content=c_new), key)
        return atom.as_expr() ** power

    # -- polynomial helpers -----------------------------------------------
    def reduce(self, p):
        """Reduce radical powers with ``atom^m -> base`` (highest atom first)."""
        for atom in reversed(self.atoms):
            if atom.kind != "radical" or not p:
                continue
            i, m = atom.index, atom.degree
            if max(mon[i] for mon in p.itermonoms()) < m:
                continue
            ring = p.ring
            groups: dict[int, dict] = {}
            for mon, c in p.iterterms():
                q, r = divmod(mon[i], m)
                nm = mon[:i] + (r,) + mon[i + 1:]
                g = groups.setdefault(q, {})
                g[nm] = g.get(nm, 0) + c
            out = ring.zero
            base = atom.base
            for q, terms in groups.items():
                out += ring.from_dict(terms) * base ** q
            p = out
        return p

    def dpoly(self, p, i: int) -> "Expression":
        """Total derivative of a tower polynomial with respect to coordinate ``i``."""
        p = self.lift(p)
        gens = self.ring.gens
        out = Expression(self, p.diff(gens[i]))
        for atom in self.atoms:
            if p.degree(atom.index) > 0:
                d = atom.derivative(i)
                if not d.is_zero():
                    out = out + Expression(self, p.diff(gens[atom.index])) * d
        return out

    def invert_poly(self, p) -> "Expression":
        """Inverse of a nonzero reduced tower polynomial."""
        rads = [a for a in self.radicals if p.degree(a.index) > 0]
        if not rads:
            return Expression(self, self.ring.one, p)
        atom = rads[-1]
        i, m = atom.index, atom.degree
        parts: list[dict] = [dict() for _ in range(m)]
        for mon, c in p.iterterms():
            parts[mon[i]][mon[:i] + (0,) + mon[i + 1:]] = c
        cs = [Expression(self, self.ring.from_dict(d)) if d else self.const(0) for d in parts]
        base = atom.base_expr()
        r = atom.as_expr()
        if m == 2:
            c0, c1 = cs
            return (c0 - c1 * r) / (c0 * c0 - c1 * c1 * base)
        # multiplication-by-p matrix in basis 1, r, .., r^(m-1)
        M = [[self.const(0) for _ in range(m)] for _ in range(m)]
        for j in range(m):
            for k, ck in enumerate(cs):
                if ck.is_zero():
                    continue
                e = k + j
                if e < m:
                    M[e][j] = M[e][j] + ck
                else:
                    M[e - m][j] = M[e - m][j] + ck * base
        rhs = [self.const(1)] + [self.const(0)] * (m - 1)
        d = solve_dense(M, rhs)
        out = self.const(0)
        for k, dk in enumerate(d):
            out = out + dk * r ** k
        return out

    def point_values(self, point: Mapping) -> list:
        """Numeric values of coordinates then atoms, in ring order."""
        vals = []
        for name in self.coords:
            v = point.get(name, 0)
            if isinstance(v, Fraction):
                v = mpmath.mpf(v.numerator) / v.denominator
            vals.append(mpmath.mpf(v))
        for atom in self.atoms:
            if atom.kind == "radical":
                b = _eval_poly(atom.base, vals)
                m = atom.degree
                if b < 0:
                    if m % 2 == 0:
                        raise KernelError(f"negative base for even radical {atom.render()}")
                    vals.append(-mpmath.root(-b, m))
                else:
                    vals.append(mpmath.root(b, m))
            else:
                num, den = atom.arg._lifted()
                d = _eval_poly(den, vals)
                if d == 0:
                    raise PoleError("pole in exponential argument")
                a = _eval_poly(num, vals) / d
                for i, k in atom.arg.shift:
                    a *= vals[i] ** k
                vals.append(mpmath.exp(a))
        return vals

    def render_poly(self, p) -> str:
        p = self.lift(p)
        if not p:
            return "0"
        names = self.coords
        parts = []
        for mon, c in p.terms():
            c = _q(c)
            factors = []
            for idx, e in enumerate(mon):
                if not e:
                    continue
                if idx < len(names):
                    factors.append(names[idx] if e == 1 else f"{names[idx]}^{e}")
                else:
                    a = self.atoms[idx - len(names)]
                    s = a.render()
                    factors.append(s if e == 1 else f"({s})^{e}")
            mag = abs(c)
            if not factors:
                body = _fmt_q(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = _fmt_q(mag) + "*" + "*".join(factors)
            parts.append(("-" if c < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def coerce(self, v) -> "Expression":
        if isinstance(v, Expression):
            return v
        if isinstance(v, (int, Rational)):
            return Expression.constant(self, v)
        raise TypeError(f"cannot coerce {type(v).__name__} to Expression")


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"({q.numerator}/{q.denominator})"


def solve_dense(M: list[list["Expression"]], rhs: list["Expression"]) -> list["Expression"]:
    """Solve a square nonsingular system over the expression field."""
    n = len(M)
    A = [row[:] + [rhs[i]] for i, row in enumerate(M)]
    for c in range(n):
        piv = next((r for r in range(c, n) if not A[r][c].is_zero()), None)
        if piv is None:
            raise KernelError("singular system")
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [a * inv for a in A[c]]
        for r in range(n):
            if r != c and not A[r][c].is_zero():
                f = A[r][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return [A[i][n] for i in range(n)]


class Expression:
    """Immutable normal-form element of the tower field."""

    __slots__ = ("tower", "num", "den", "shift", "_str", "_hash")

    def __init__(self, tower: Tower, num, den=None, shift: Iterable = (), *, _normal=False):
        self.tower = tower
        self._str = None
        self._hash = None
        if _normal:
            self.num, self.den, self.shift = num, den, tuple(shift)
            return
        ring = tower.ring
        num = tower.lift(num)
        den = ring.one if den is None else tower.lift(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        self.num, self.den, self.shift = _normalize(tower, num, den, dict(shift))

    @classmethod
    def constant(cls, tower: Tower, c) -> "Expression":
        c = Fraction(c)
        return cls(tower, tower.ring.ground_new(QQ(c.numerator, c.denominator)),
                   tower.ring.one, (), _normal=True) if c else cls(tower, tower.ring.zero, tower.ring.one, (), _normal=True)

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return self.num.is_ground and self.den.is_ground and not self.shift

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise KernelError("expression is not constant")
        return _q(self.num.LC) / _q(self.den.LC) if self.num else Fraction(0)

    def is_polynomial(self) -> bool:
        return self.den.is_ground and not any(k < 0 for _, k in self.shift)

    def term_count(self) -> int:
        return len(self.num)

    # -- arithmetic ---------------------------------------------------------
    def _lifted(self):
        t = self.tower
        return t.lift(self.num), t.lift(self.den)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.num:
            return other
        if not other.num:
            return self
        t = self.tower
        n1, d1 = self._lifted()
        n2, d2 = other._lifted()
        s1, s2 = dict(self.shift), dict(other.shift)
        base = {i: min(s1.get(i, 0), s2.get(i, 0)) for i in set(s1) | set(s2)}
        n1 = _mul_shift(n1, {i: s1.get(i, 0) - k for i, k in base.items()})
        n2 = _mul_shift(n2, {i: s2.get(i, 0) - k for i, k in base.items()})
        if d1 == d2:
            num, den = n1 + n2, d1
        elif d1.is_ground:
            num, den = n1 * d2 + n2 * d1, d2 * d1
        elif d2.is_ground:
            num, den = n1 * d2 + n2 * d1, d1 * d2
        else:
            g, c1, c2 = d1.cofactors(d2)
            num, den = n1 * c2 + n2 * c1, c1 * d2
        if not num:
            return Expression.constant(t, 0)
        return Expression(t, num, den, base.items())

    __radd__ = __add__

    def __neg__(self):
        return Expression(self.tower, -self.tower.lift(self.num), self.tower.lift(self.den),
                          self.shift, _normal=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return Expression.constant(self.tower, 0)
        n1, d1 = self._lifted()
        n2, d2 = other._lifted()
        shift = dict(self.shift)
        for i, k in other.shift:
            shift[i] = shift.get(i, 0) + k
        # cross-cancel before multiplying
        if not d2.is_ground:
            g, n1, d2 = n1.cofactors(d2)
        if not d1.is_ground:
            g, n2, d1 = n2.cofactors(d1)
        return Expression(self.tower, n1 * n2, d1 * d2, shift.items())

    __rmul__ = __mul__

    def inverse(self) -> "Expression":
        if not self.num:
            raise ZeroDivisionError("division by an identically zero expression")
        t = self.tower
        num, den = self._lifted()
        neg = tuple((i, -k) for i, k in self.shift)
        if any(num.degree(a.index) > 0 for a in t.radicals):
            return t.invert_poly(num) * Expression(t, den, None, neg)
        return Expression(t, den, num, neg)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise KernelError("only integer powers are supported; use Tower.radical")
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return Expression.constant(self.tower, 1)
        num, den = self._lifted()
        shift = tuple((i, e * k) for i, e in self.shift)
        return Expression(self.tower, num ** k, den ** k, shift)

    def _coerce(self, other):
        if isinstance(other, Expression):
            if other.tower is not self.tower:
                raise KernelError("expressions from different towers")
            return other
        if isinstance(other, (int, Rational)):
            return Expression.constant(self.tower, other)
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, Expression) else other
        if other is NotImplemented:
            return False
        return (self - other).is_zero()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.render())
        return self._hash

    # -- calculus ------------------------------------------------------------
    def diff(self, v) -> "Expression":
        t = self.tower
        i = t.coord_index(v)
        if not self.num:
            return self
        num, den = self._lifted()
        dn = t.dpoly(num, i)
        E = Expression(t, t.ring.one, None, self.shift)
        if den.is_ground:
            out = dn * E / Expression(t, den)
        else:
            D = Expression(t, den)
            dd = t.dpoly(den, i)
            out = (dn * D - Expression(t, num) * dd) * E / (D * D)
        if self.shift:
            log_d = Expression.constant(t, 0)
            for idx, k in self.shift:
                atom = t.atoms[idx - len(t.coords)]
                log_d = log_d + atom.arg.diff(i) * k
            out = out + self * log_d
        return out

    def reduce_mod(self, p) -> "Expression":
        """Remainder of the numerator modulo ``p`` (grlex); used on ``p = 0`` loci."""
        num, den = self._lifted()
        r = num.rem(self.tower.lift(p))
        return Expression(self.tower, r, den, self.shift)

    def subs_zero(self, index: int) -> "Expression":
        """Set a single generator to zero (numerator only)."""
        num, den = self._lifted()
        r = num.ring.from_dict({m: c for m, c in num.iterterms() if m[index] == 0})
        return Expression(self.tower, r, den, self.shift)

    def primitive(self) -> tuple[Fraction, "Expression"]:
        """Split ``self = content * prim`` with prim having coprime integer
        numerator coefficients and positive leading coefficient."""
        num, den = self._lifted()
        coeffs = [_q(c) for c in num.coeffs()]
        g = 0
        l = 1
        for c in coeffs:
            g = gcd(g, c.numerator)
            l = lcm(l, c.denominator)
        content = Fraction(g, l)
        if _q(num.LC) < 0:
            content = -content
        return content, self * (1 / content)

    # -- evaluation -----------------------------------------------------------
    def evaluate(self, point: Mapping, precision: int = 30):
        """High-precision real value at a coordinate assignment."""
        with mpmath.workdps(precision + 10):
            vals = self.tower.point_values(point)
            num, den = self._lifted()
            d = _eval_poly(den, vals)
            if d == 0:
                raise PoleError(f"pole of {self.render()} at point")
            v = _eval_poly(num, vals) / d
            for i, k in self.shift:
                v *= vals[i] ** k
            return +v

    # -- serialization --------------------------------------------------------
    def render(self) -> str:
        if self._str is None:
            t = self.tower
            num, den = self._lifted()
            if not num:
                self._str = "0"
                return "0"
            s = t.render_poly(num)
            simple = len(num) == 1
            factors = []
            for i, k in self.shift:
                a = t.atoms[i - len(t.coords)].render()
                factors.append(a if k == 1 else f"{a}^({k})")
            if factors:
                if s == "1":
                    s = "*".join(factors)
                elif s == "-1":
                    s = "-" + "*".join(factors)
                else:
                    s = (s if simple else f"({s})") + "*" + "*".join(factors)
            if not den.is_ground or den.LC != 1:
                s = f"({s})/({t.render_poly(den)})"
            self._str = s
        return self._str

    __str__ = render

    def __repr__(self):
        return f"Expression({self.render()})"


def _mul_shift(p, shift: Mapping[int, int]):
    if not any(shift.values()):
        return p
    mono = [0] * p.ring.ngens
    for i, k in shift.items():
        mono[i] = k
    return p.mul_monom(tuple(mono))


def _normalize(t: Tower, num, den, shift: dict):
    ring = t.ring
    if not num:
        return ring.zero, ring.one, ()
    num = t.reduce(num)
    if not num:
        return ring.zero, ring.one, ()
    if not den.is_ground:
        g, num, den = num.cofactors(den)
    eidx = t.exp_indices()
    if eidx:
        for poly_is_num, p in ((True, num), (False, den)):
            lo = {i: min(m[i] for m in p.itermonoms()) for i in eidx}
            lo = {i: k for i, k in lo.items() if k}
            if lo:
                p = ring.from_dict({tuple(e - lo.get(j, 0) for j, e in enumerate(m)): c
                                    for m, c in p.iterterms()})
                for i, k in lo.items():
                    shift[i] = shift.get(i, 0) + (k if poly_is_num else -k)
                if poly_is_num:
                    num = p
                else:
                    den = p
    lc = den.LC
    if lc != 1:
        num = num.quo_ground(lc)
        den = den.quo_ground(lc)
    return num, den, tuple(sorted((i, k) for i, k in shift.items() if k))


def _eval_poly(p, vals):
    total = mpmath.mpf(0)
    for mon, c in p.iterterms():
        term = mpmath.mpf(int(c.numerator)) / int(c.denominator)
        for idx, e in enumerate(mon):
            if e:
                term *= vals[idx] ** e
        total += term
    return total
