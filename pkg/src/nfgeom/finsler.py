"""Geometric objects derived from F^2: metric, spray, Barthel connection,
Berwald and Cartan connections, their curvatures, and horizontal brackets.

Conventions (pinned against the three reference metrics):

* ``RG^i_{jk} = delta_k N^i_j - delta_j N^i_k``
* ``RB^i_{hjk} = dot-d_h RG^i_{jk}``
* ``[h_i, h_j] = RG^m_{ij} dot-d_m``
* ``RC^h_{ijk} = delta_k G^h_ij - delta_j G^h_ik + G^m_ij G^h_mk - G^m_ik G^h_mj
  + C^h_im RG^m_jk`` where G here is the Cartan Gamma*.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations
from typing import Sequence

from .kernel import Expression, Tower
from .tensor import DOWN, UP, Tensor, delta

log = logging.getLogger(__name__)


class GeometryError(ArithmeticError):
    """Mathematically invalid input: inhomogeneous F^2 or degenerate metric."""


@dataclass
class FinslerSpace:
    """A chart of a Finsler space given by F^2 (never F itself)."""

    tower: Tower
    F2: Expression
    assumptions: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.tower.dim

    def y(self, i: int) -> Expression:
        return self.tower.y(i)


@dataclass(frozen=True)
class HorizontalField:
    """Components with respect to the horizontal basis h_1..h_n."""

    comps: tuple[Expression, ...]

    def render(self, prefix: str = "h") -> str:
        parts = [_term(c, f"{prefix}{i}") for i, c in enumerate(self.comps, 1)
                 if not c.is_zero()]
        return " + ".join(parts) if parts else "0"

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)


def _term(c: Expression, basis: str) -> str:
    if c.is_constant() and c.constant_value() == 1:
        return basis
    return f"({c.render()})*{basis}"


@dataclass(frozen=True)
class VerticalField:
    """Components with respect to dot-d_1..dot-d_n."""

    comps: tuple[Expression, ...]

    def render(self) -> str:
        parts = [_term(c, f"dy{i}") for i, c in enumerate(self.comps, 1)
                 if not c.is_zero()]
        return " + ".join(parts) if parts else "0"

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)


def determinant(M: Sequence[Sequence[Expression]]) -> Expression:
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = None
    for c in range(n):
        if M[0][c].is_zero():
            continue
        minor = [row[:c] + row[c + 1:] for row in M[1:]]
        term = M[0][c] * determinant(minor)
        if c % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else M[0][0] * 0


class Geometry:
    """Lazily computed, cached pipeline for one space (g -> g^-1 -> G -> N -> ...)."""

    def __init__(self, space: FinslerSpace):
        self.space = space
        self.tower = space.tower
        self.n = space.dim
        self._zero = self.tower.const(0)

    def _r(self):
        return range(1, self.n + 1)

    def _new(self, name: str, sig: tuple[int, ...], letters: str) -> Tensor:
        return Tensor(name, sig, self.n, letters=letters)

    # -- validation ---------------------------------------------------------
    def euler_y(self, f: Expression) -> Expression:
        out = self._zero
        for k in self._r():
            out = out + self.space.y(k) * f.diff(f"y{k}")
        return out

    def validate(self) -> dict:
        F2 = self.space.F2
        if not (self.euler_y(F2) - 2 * F2).is_zero():
            raise GeometryError("F2 is not homogeneous of degree 2 in y")
        if self.det_g.is_zero():
            raise GeometryError("metric is degenerate (det g vanishes identically)")
        return {
            "homogeneous": True,
            "nondegenerate": True,
            "atoms": [a.render() for a in self.tower.atoms],
            "assumptions": [str(a) for a in self.space.assumptions],
        }

    # -- metric ---------------------------------------------------------------
    @cached_property
    def dF2(self) -> list[Expression]:
        return [self.space.F2.diff(f"y{i}") for i in self._r()]

    @cached_property
    def g(self) -> Tensor:
        g = self._new("g", (DOWN, DOWN), "ij")
        for i in self._r():
            for j in range(i, self.n + 1):
                v = self.dF2[i - 1].diff(f"y{j}") / 2
                g[(i, j)] = v
                g[(j, i)] = v
        return g

    def _gmat(self) -> list[list[Expression]]:
        return [[self.g.get((i, j), self.tower) for j in self._r()] for i in self._r()]

    @cached_property
    def det_g(self) -> Expression:
        return determinant(self._gmat())

    @cached_property
    def ginv(self) -> Tensor:
        det = self.det_g
        if det.is_zero():
            raise GeometryError("metric is degenerate (det g vanishes identically)")
        M = self._gmat()
        n = self.n
        inv = self._new("ginv", (UP, UP), "ij")
        inv_det = 1 / det
        for i in range(n):
            for j in range(i, n):
                minor = [row[:i] + row[i + 1:] for k, row in enumerate(M) if k != j]
                cof = determinant(minor) if n > 1 else self.tower.const(1)
                if (i + j) % 2:
                    cof = -cof
                v = cof * inv_det
                inv[(i + 1, j + 1)] = v
                inv[(j + 1, i + 1)] = v
        return inv

    # -- spray and connections ---------------------------------------------------
    @cached_property
    def G(self) -> Tensor:
        F2 = self.space.F2
        rhs = []
        for l in self._r():
            s = -F2.diff(f"x{l}")
            dl = self.dF2[l - 1]
            for k in self._r():
                s = s + self.space.y(k) * dl.diff(f"x{k}")
            rhs.append(s)
        G = self._new("G", (UP,), "i")
        for i in self._r():
            acc = self._zero
            for l in self._r():
                gil = self.ginv[(i, l)]
                if gil is not None and not rhs[l - 1].is_zero():
                    acc = acc + gil * rhs[l - 1]
            G[(i,)] = acc / 4
        return G

    @cached_property
    def N(self) -> Tensor:
        N = self._new("N", (UP, DOWN), "ij")
        for (i,), Gi in self.G.components.items():
            for j in self._r():
                N[(i, j)] = Gi.diff(f"y{j}")
        return N

    def delta(self, f: Expression, k: int) -> Expression:
        return delta(f, k, self.N)

    @cached_property
    def GB(self) -> Tensor:
        GB = self._new("GB", (UP, DOWN, DOWN), "ijk")
        for (i, j), v in self.N.components.items():
            for k in self._r():
                GB[(i, j, k)] = v.diff(f"y{k}")
        return GB

    @cached_property
    def PB(self) -> Tensor:
        PB = self._new("PB", (UP, DOWN, DOWN, DOWN), "hijk")
        for (i, h, j), v in self.GB.components.items():
            for k in self._r():
                PB[(i, h, j, k)] = v.diff(f"y{k}")
        return PB

    @cached_property
    def RG(self) -> Tensor:
        RG = self._new("RG", (UP, DOWN, DOWN), "ijk")
        for i in self._r():
            for j in self._r():
                for k in range(j + 1, self.n + 1):
                    v = self.delta(self.N.get((i, j), self.tower), k) \
                        - self.delta(self.N.get((i, k), self.tower), j)
                    RG[(i, j, k)] = v
                    RG[(i, k, j)] = -v
        return RG

    @cached_property
    def RB(self) -> Tensor:
        RB = self._new("RB", (UP, DOWN, DOWN, DOWN), "ihjk")
        for (i, j, k), v in self.RG.components.items():
            for h in self._r():
                RB[(i, h, j, k)] = v.diff(f"y{h}")
        return RB

    @cached_property
    def dg(self) -> dict[tuple[int, int, int], Expression]:
        """delta_c g_ab, keyed (a, b, c)."""
        out = {}
        for a in self._r():
            for b in range(a, self.n + 1):
                gab = self.g.get((a, b), self.tower)
                for c in self._r():
                    v = self.delta(gab, c)
                    out[(a, b, c)] = out[(b, a, c)] = v
        return out

    @cached_property
    def Gamma(self) -> Tensor:
        Gm = self._new("Gamma", (UP, DOWN, DOWN), "ijk")
        dg = self.dg
        for j in self._r():
            for k in range(j, self.n + 1):
                low = {h: dg[(h, k, j)] + dg[(j, h, k)] - dg[(j, k, h)] for h in self._r()}
                for i in self._r():
                    acc = self._zero
                    for h in self._r():
                        gih = self.ginv[(i, h)]
                        if gih is not None and not low[h].is_zero():
                            acc = acc + gih * low[h]
                    v = acc / 2
                    Gm[(i, j, k)] = v
                    Gm[(i, k, j)] = v
        return Gm

    @cached_property
    def C_low(self) -> Tensor:
        C = self._new("Clow", (DOWN, DOWN, DOWN), "hjk")
        for (j, k), v in self.g.components.items():
            for h in self._r():
                C[(h, j, k)] = v.diff(f"y{h}") / 2
        return C

    @cached_property
    def C(self) -> Tensor:
        C = self._new("C", (UP, DOWN, DOWN), "ijk")
        for j in self._r():
            for k in range(j, self.n + 1):
                for i in self._r():
                    acc = self._zero
                    for h in self._r():
                        gih, c = self.ginv[(i, h)], self.C_low[(h, j, k)]
                        if gih is not None and c is not None:
                            acc = acc + gih * c
                    C[(i, j, k)] = acc
                    C[(i, k, j)] = acc
        return C

    @cached_property
    def RC(self) -> Tensor:
        RC = self._new("RC", (UP, DOWN, DOWN, DOWN), "hijk")
        T, n = self.tower, self.n
        Gm, C, RG = self.Gamma, self.C, self.RG
        dGamma: dict = {}

        def dG(h, i, k, j):
            key = (h, i, k, j)
            if key not in dGamma:
                dGamma[key] = self.delta(Gm.get((h, i, k), T), j)
            return dGamma[key]

        for h in self._r():
            for i in self._r():
                for j in self._r():
                    for k in range(j + 1, n + 1):
                        # R^h_ijk = d_k G^h_ij - d_j G^h_ik + G^m_ij G^h_mk - G^m_ik G^h_mj + C^h_im R^m_jk
                        v = dG(h, i, j, k) - dG(h, i, k, j)
                        for m in self._r():
                            a, b = Gm[(m, i, j)], Gm[(h, m, k)]
                            if a is not None and b is not None:
                                v = v + a * b
                            a, b = Gm[(m, i, k)], Gm[(h, m, j)]
                            if a is not None and b is not None:
                                v = v - a * b
                            a, b = C[(h, i, m)], RG[(m, j, k)]
                            if a is not None and b is not None:
                                v = v + a * b
                        RC[(h, i, j, k)] = v
                        RC[(h, i, k, j)] = -v
        return RC

    def tensor(self, name: str) -> Tensor:
        attr = {"g": "g", "ginv": "ginv", "G": "G", "N": "N", "GB": "GB", "PB": "PB",
                "RG": "RG", "RB": "RB", "Gamma": "Gamma", "C": "C", "RC": "RC"}.get(name)
        if attr is None:
            raise KeyError(name)
        return getattr(self, attr)

    # -- brackets ------------------------------------------------------------------
    def horizontal_bracket(self, X: HorizontalField, Y: HorizontalField
                           ) -> tuple[HorizontalField, VerticalField]:
        """[X, Y] = H^i h_i + V^m dot-d_m for horizontal X, Y."""
        n = self.n
        if len(X.comps) != n or len(Y.comps) != n:
            raise GeometryError("field dimension mismatch")
        H = []
        for i in range(n):
            acc = self._zero
            for j in range(n):
                if not X.comps[j].is_zero():
                    acc = acc + X.comps[j] * self.delta(Y.comps[i], j + 1)
                if not Y.comps[j].is_zero():
                    acc = acc - Y.comps[j] * self.delta(X.comps[i], j + 1)
            H.append(acc)
        V = []
        for m in self._r():
            acc = self._zero
            for i in range(n):
                for j in range(n):
                    r = self.RG[(m, i + 1, j + 1)]
                    if r is not None and not X.comps[i].is_zero() and not Y.comps[j].is_zero():
                        acc = acc + X.comps[i] * Y.comps[j] * r
            V.append(acc)
        return HorizontalField(tuple(H)), VerticalField(tuple(V))


BUILTIN_TENSORS = ("g", "ginv", "G", "N", "GB", "PB", "RG", "RB", "Gamma", "C", "RC")


def symmetric_in(t: Tensor, slots: Sequence[int], sign: int = 1) -> bool:
    """Every permutation of ``slots`` (0-based) multiplies t by sign^parity."""
    from .tensor import check_symmetry
    base = list(range(t.rank))
    for p in permutations(slots):
        perm = base[:]
        for s, q in zip(slots, p):
            perm[s] = q
        parity = _parity([slots.index(q) for q in p])
        if not check_symmetry(t, perm, sign ** parity):
            return False
    return True


def _parity(p: Sequence[int]) -> int:
    p = list(p)
    swaps = 0
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            swaps += 1
    return swaps % 2
