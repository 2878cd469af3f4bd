"""Numeric verification path.

The pipeline is replayed in jet arithmetic starting from F^2 alone, so the
only thing shared with the symbolic engine is the lifted F^2. Orders used
(x-order, y-order):

    F2 (2,5) -> g (2,3) -> ginv (1,3) -> G (1,3) -> N (1,2) -> GB (1,1) -> PB (1,0)
    N -> RG (0,1) -> RB (0,0)
    g -> delta g (1,2) -> Gamma (1,2) -> delta Gamma (0,1) -> RC (0,0)
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import gmpy2
import mpmath

from .finsler import FinslerSpace, Geometry, GeometryError
from .jets import Jet, JetLifter, _bits, mpfr, to_mpf
from .kernel import Expression, KernelError, PoleError, Tower
from .nullity import NONZERO, ZERO, Assumption, LinearSystem
from .tensor import LinearForm, Tensor

log = logging.getLogger(__name__)

PIPELINE = ("g", "ginv", "G", "N", "GB", "PB", "RG", "RB", "Gamma", "C", "RC")
COND_LIMIT = 1e30


class NumericGeometry:
    """Pipeline tensors at one point as {index tuple: mpfr}."""

    def __init__(self, space: FinslerSpace, point: Mapping, digits: int = 50):
        self.space = space
        self.n = space.dim
        self.point = dict(point)
        self.digits = digits
        self._cache: dict = {}
        self._ctx = gmpy2.get_context().copy()
        self._ctx.precision = _bits(digits)

    # helpers; variables are 0..n-1 for x and n..2n-1 for y
    def _dx(self, j: Jet, k: int) -> Jet:
        return j.deriv(k - 1)

    def _dy(self, j: Jet, k: int) -> Jet:
        return j.deriv(self.n + k - 1)

    def _r(self):
        return range(1, self.n + 1)

    def _get(self, name):
        if name not in self._cache:
            with gmpy2.context(self._ctx):
                self._cache[name] = getattr(self, "_make_" + name)()
        return self._cache[name]

    def _delta(self, f: Jet, k: int) -> Jet:
        N = self._get("N_jet")
        out = self._dx(f, k)
        for m in self._r():
            out = out - N[(m, k)] * self._dy(f, m)
        return out

    # -- stages ----------------------------------------------------------------
    def _make_F2(self):
        lifter = JetLifter(self.space.tower, self.point, (2, 5))
        return lifter.lift(self.space.F2)

    def _make_y(self):
        return {k: Jet.variable(self.n, 2, 5, self.n + k - 1, self.point.get(f"y{k}", 0))
                for k in self._r()}

    def _make_g_jet(self):
        F2 = self._get("F2")
        d = {i: self._dy(F2, i) for i in self._r()}
        g = {}
        for i in self._r():
            for j in range(i, self.n + 1):
                g[(i, j)] = g[(j, i)] = self._dy(d[i], j) * gmpy2.mpfr("0.5")
        return g

    def _make_ginv_jet(self):
        g = self._get("g_jet")
        return _jet_inverse([[g[(i, j)].trim(1, 3) for j in self._r()] for i in self._r()])

    def _make_G_jet(self):
        F2, y = self._get("F2"), self._get("y")
        ginv = self._get("ginv_jet")
        rhs = []
        for l in self._r():
            dl = self._dy(F2, l)
            s = -self._dx(F2, l)
            for k in self._r():
                s = s + y[k] * self._dx(dl, k)
            rhs.append(s.trim(1, 3))
        G = {}
        for i in self._r():
            acc = None
            for l in self._r():
                t = ginv[i - 1][l - 1] * rhs[l - 1]
                acc = t if acc is None else acc + t
            G[(i,)] = acc * gmpy2.mpfr("0.25")
        return G

    def _make_N_jet(self):
        G = self._get("G_jet")
        return {(i, j): self._dy(G[(i,)], j) for i in self._r() for j in self._r()}

    def _make_GB_jet(self):
        N = self._get("N_jet")
        return {(i, j, k): self._dy(v, k) for (i, j), v in N.items() for k in self._r()}

    def _make_RG_jet(self):
        N = self._get("N_jet")
        RG = {}
        for i in self._r():
            for j in self._r():
                for k in self._r():
                    if j == k:
                        continue
                    RG[(i, j, k)] = self._delta(N[(i, j)], k) - self._delta(N[(i, k)], j)
        return RG

    def _make_Gamma_jet(self):
        g, ginv = self._get("g_jet"), self._get("ginv_jet")
        dg = {}
        for a in self._r():
            for b in range(a, self.n + 1):
                for c in self._r():
                    dg[(a, b, c)] = dg[(b, a, c)] = self._delta(g[(a, b)].trim(2, 3), c)
        Gm = {}
        for j in self._r():
            for k in range(j, self.n + 1):
                low = {h: dg[(h, k, j)] + dg[(j, h, k)] - dg[(j, k, h)] for h in self._r()}
                for i in self._r():
                    acc = None
                    for h in self._r():
                        t = ginv[i - 1][h - 1] * low[h]
                        acc = t if acc is None else acc + t
                    Gm[(i, j, k)] = Gm[(i, k, j)] = acc * gmpy2.mpfr("0.5")
        return Gm

    def _make_C_jet(self):
        g, ginv = self._get("g_jet"), self._get("ginv_jet")
        low = {(h, j, k): self._dy(g[(j, k)], h).trim(1, 1) * gmpy2.mpfr("0.5")
               for h in self._r() for j in self._r() for k in self._r()}
        C = {}
        for i in self._r():
            for j in self._r():
                for k in range(j, self.n + 1):
                    acc = None
                    for h in self._r():
                        t = ginv[i - 1][h - 1].trim(1, 1) * low[(h, j, k)]
                        acc = t if acc is None else acc + t
                    C[(i, j, k)] = C[(i, k, j)] = acc
        return C

    # -- value tables ---------------------------------------------------------------
    def _make_g(self):
        return _values(self._get("g_jet"))

    def _make_ginv(self):
        inv = self._get("ginv_jet")
        return {(i + 1, j + 1): inv[i][j].value for i in range(self.n) for j in range(self.n)}

    def _make_G(self):
        return _values(self._get("G_jet"))

    def _make_N(self):
        return _values(self._get("N_jet"))

    def _make_GB(self):
        return _values(self._get("GB_jet"))

    def _make_PB(self):
        GB = self._get("GB_jet")
        return {(i, h, j, k): self._dy(v, k).value for (i, h, j), v in GB.items() for k in self._r()}

    def _make_RG(self):
        return _values(self._get("RG_jet"))

    def _make_RB(self):
        RG = self._get("RG_jet")
        return {(i, h, j, k): self._dy(v, h).value for (i, j, k), v in RG.items() for h in self._r()}

    def _make_Gamma(self):
        return _values(self._get("Gamma_jet"))

    def _make_C(self):
        return _values(self._get("C_jet"))

    def _make_RC(self):
        Gm, C, RG = self._get("Gamma_jet"), self._get("C"), self._get("RG")
        G0 = _values(Gm)
        dG = {}
        for key, v in Gm.items():
            for c in self._r():
                dG[key + (c,)] = self._delta(v, c).value
        RC = {}
        for h in self._r():
            for i in self._r():
                for j in self._r():
                    for k in self._r():
                        if j == k:
                            continue
                        v = dG[(h, i, j, k)] - dG[(h, i, k, j)]
                        for m in self._r():
                            v += G0[(m, i, j)] * G0[(h, m, k)]
                            v -= G0[(m, i, k)] * G0[(h, m, j)]
                            v += C[(h, i, m)] * RG[(m, j, k)]
                        RC[(h, i, j, k)] = v
        return RC

    def tensor(self, name: str) -> dict:
        if name not in PIPELINE:
            raise KeyError(name)
        return self._get(name)


def _values(d: dict) -> dict:
    return {k: v.value for k, v in d.items()}


def _jet_inverse(M: list[list[Jet]]) -> list[list[Jet]]:
    """Gauss-Jordan on jets, pivoting on the constant terms."""
    n = len(M)
    A = [row[:] for row in M]
    sp = A[0][0]
    nn, kx, ky = sp.space.n, sp.space.kx, sp.space.ky
    inv = [[Jet.const(nn, kx, ky, 1 if i == j else 0) for j in range(n)] for i in range(n)]
    scale = max(abs(A[i][j].value) for i in range(n) for j in range(n))
    if scale == 0:
        raise GeometryError("metric vanishes at point")
    smallest = None
    for c in range(n):
        p = max(range(c, n), key=lambda r: abs(A[r][c].value))
        piv = A[p][c].value
        if piv == 0:
            raise GeometryError("metric is singular at point")
        smallest = abs(piv) if smallest is None else min(smallest, abs(piv))
        A[c], A[p] = A[p], A[c]
        inv[c], inv[p] = inv[p], inv[c]
        pinv = A[c][c].inverse()
        A[c] = [a * pinv for a in A[c]]
        inv[c] = [a * pinv for a in inv[c]]
        for r in range(n):
            if r == c:
                continue
            f = A[r][c]
            if f.value == 0 and all(x == 0 for x in f.c):
                continue
            A[r] = [a - f * b for a, b in zip(A[r], A[c])]
            inv[r] = [a - f * b for a, b in zip(inv[r], inv[c])]
    if scale / smallest > COND_LIMIT:
        raise GeometryError("metric is numerically degenerate at point")
    return inv


def numeric_tensor(space: FinslerSpace, which: str, point: Mapping, digits: int = 50) -> dict:
    return NumericGeometry(space, point, digits).tensor(which)


# -- points ---------------------------------------------------------------------
def _rand_q(rng: random.Random, lo: int = -3, hi: int = 3, den: int = 7) -> Fraction:
    d = rng.randint(1, den)
    return Fraction(rng.randint(lo * d, hi * d), d)


def point_ok(space: FinslerSpace, point: Mapping, guards: Iterable[Expression] = ()) -> bool:
    """Assumptions hold, atoms are real, F^2 and every guard are finite and nonzero."""
    tiny = mpmath.mpf(10) ** -20
    try:
        for a in space.assumptions:
            v = a.expr.evaluate(point, 30)
            if a.relation == NONZERO and abs(v) < tiny:
                return False
            if a.relation == ZERO and abs(v) > tiny:
                return False
        for e in (space.F2, *guards):
            if abs(e.evaluate(point, 30)) < tiny:
                return False
    except (KernelError, ZeroDivisionError):
        return False
    return True


def sample_points(space: FinslerSpace, count: int, seed: int = 0,
                  zero: Sequence[Expression] = (), guards: Iterable[Expression] = (),
                  max_tries: int = 2000) -> list[dict]:
    """Seeded rational points in [-3, 3]; with ``zero`` the points lie on that stratum."""
    rng = random.Random(seed)
    t = space.tower
    guards = list(guards)
    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > max_tries:
            raise GeometryError(f"could not find {count} valid points (seed {seed})")
        p = {c: _rand_q(rng) for c in t.coords}
        if zero:
            p = _project(t, p, zero)
            if p is None:
                continue
        if point_ok(space, p, guards):
            out.append(p)
    return out


def _project(t: Tower, p: dict, zero: Sequence[Expression]) -> dict | None:
    """Move p onto {z = 0 for z in zero}: exactly when each equation can be
    solved for a fresh coordinate, otherwise by Newton iteration."""
    q = _project_exact(t, p, zero)
    return q if q is not None else _project_newton(t, p, zero)


def _project_newton(t: Tower, p: dict, zero: Sequence[Expression], digits: int = 60
                    ) -> dict | None:
    live = [c for c in t.coords if any(not z.diff(c).is_zero() for z in zero)]
    if len(live) < len(zero):
        return None
    used = live[:len(zero)]
    base = dict(p)

    def at(vs):
        q = dict(base)
        q.update(zip(used, vs))
        return q

    def f(*vs):
        q = at(vs)
        out = [z.evaluate(q, digits) for z in zero]
        return out if len(out) > 1 else out[0]

    start = [mpmath.mpf(p[c].numerator) / p[c].denominator for c in used]
    with mpmath.workdps(digits):
        try:
            root = mpmath.findroot(f, start if len(start) > 1 else start[0])
        except (ArithmeticError, ValueError, TypeError):   # singular Jacobian, poles
            return None
        vs = list(root) if len(used) > 1 else [root]
        if any(not isinstance(v, mpmath.mpf) for v in vs):
            return None
        q = at(vs)
        try:
            if max(abs(z.evaluate(q, digits)) for z in zero) > mpmath.mpf(10) ** (15 - digits):
                return None
        except (KernelError, ZeroDivisionError):
            return None
    return q


def _project_exact(t: Tower, p: dict, zero: Sequence[Expression]) -> dict | None:
    p = dict(p)
    used = set()
    for z in zero:
        if not z.is_polynomial():
            return None
        poly = t.lift(z.num)
        for v, name in enumerate(t.coords):
            if name in used or poly.degree(v) == 0:
                continue
            sol = _solve_for(t, poly, v, p)
            if sol is not None:
                p[name] = sol
                used.add(name)
                break
        else:
            return None
    return p


def _solve_for(t: Tower, poly, v: int, p: dict):
    """Solve poly = a*v^k + rest for v, a and rest free of v."""
    if any(poly.degree(a.index) for a in t.atoms):
        return None
    k = poly.degree(v)
    ring = poly.ring
    head = ring.zero
    rest = ring.zero
    for mon, c in poly.terms():
        if mon[v] == k:
            head += ring({tuple(e if i != v else 0 for i, e in enumerate(mon)): c})
        elif mon[v] == 0:
            rest += ring({mon: c})
        else:
            return None
    vals = {name: p[name] for name in t.coords}
    a = _peval(t, head, vals)
    if a == 0:
        return None
    r = -_peval(t, rest, vals) / a
    if k == 1:
        return r
    if r < 0 and k % 2 == 0:
        return None
    with mpmath.workdps(60):
        q = mpmath.mpf(r.numerator) / r.denominator if isinstance(r, Fraction) else mpmath.mpf(r)
        root = mpmath.root(abs(q), k)
        root = -root if q < 0 else root
        return root


def _peval(t: Tower, poly, vals: dict):
    xs = [vals[c] for c in t.coords]
    exact = all(isinstance(v, Fraction) for v in xs)
    if not exact:
        xs = [mpmath.mpf(v.numerator) / v.denominator if isinstance(v, Fraction) else v for v in xs]
    total = Fraction(0) if exact else mpmath.mpf(0)
    for mon, c in poly.terms():
        term = Fraction(int(c.numerator), int(c.denominator))
        if not exact:
            term = mpmath.mpf(term.numerator) / term.denominator
        for v, e in zip(xs, mon):
            if e:
                term *= v ** e
        total += term
    return total


# -- cross check ---------------------------------------------------------------------
@dataclass
class Deviation:
    tensor: str
    index: tuple
    point: int
    symbolic: str
    numeric: str
    deviation: float


@dataclass
class CheckReport:
    tensors: list[str]
    seed: int | None
    points: int
    rel_tol: float
    max_deviation: dict = field(default_factory=dict)
    worst: dict = field(default_factory=dict)
    failures: list[Deviation] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)
    sampled: list[dict] = field(default_factory=list, repr=False)
    numeric: list[NumericGeometry] = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return not self.failures and not self.errors

    def to_json(self) -> dict:
        return {
            "tensors": list(self.tensors),
            "seed": self.seed,
            "points": self.points,
            "rel_tol": self.rel_tol,
            "max_deviation": {k: float(v) for k, v in sorted(self.max_deviation.items())},
            "worst": {k: list(v) for k, v in sorted(self.worst.items())},
            "failures": [vars(f) | {"index": list(f.index)} for f in self.failures[:20]],
            "errors": list(self.errors),
            "passed": self.passed,
        }

    def render(self) -> str:
        head = "PASS" if self.passed else "FAIL"
        lines = [f"numeric check {head}: {self.points} points, seed {self.seed}, tol {self.rel_tol:g}"]
        for k in self.tensors:
            if k in self.max_deviation:
                lines.append(f"  {k}: max rel deviation {float(self.max_deviation[k]):.3e}")
        for f in self.failures[:10]:
            idx = ",".join(map(str, f.index))
            lines.append(f"  mismatch {f.tensor}[{idx}] at point {f.point}: "
                         f"symbolic {f.symbolic} numeric {f.numeric}")
        for e in self.errors:
            lines.append(f"  error: {e}")
        return "\n".join(lines)


def cross_check(geom: Geometry, tensors: Sequence[Tensor | str], points: Sequence[Mapping] | None = None,
                *, count: int = 20, seed: int = 0, rel_tol: float = 1e-9,
                digits: int = 50, keep: bool = False) -> CheckReport:
    """Compare symbolic components against the jet pipeline at each point.

    With ``keep`` the report holds the points and their NumericGeometry so
    callers can reuse the numeric tables.
    """
    space = geom.space
    if points is None:
        points = sample_points(space, count, seed, guards=[geom.det_g])
        used_seed = seed
    else:
        used_seed = None
    ts = [geom.tensor(t) if isinstance(t, str) else t for t in tensors]
    rep = CheckReport([t.name for t in ts], used_seed, len(points), rel_tol)
    for t in ts:
        if t.name not in PIPELINE:
            rep.errors.append(f"{t.name} has no numeric counterpart")
    ts = [t for t in ts if t.name in PIPELINE]
    for pi, p in enumerate(points):
        ng = NumericGeometry(space, p, digits)
        if keep:
            rep.sampled.append(dict(p))
            rep.numeric.append(ng)
        for t in ts:
            try:
                num = ng.tensor(t.name)
            except (GeometryError, KernelError, ZeroDivisionError) as e:
                rep.errors.append(f"{t.name} at point {pi}: {e}")
                continue
            _compare(rep, t, num, p, pi, digits)
    return rep


def _compare(rep: CheckReport, t: Tensor, num: dict, p, pi: int, digits: int):
    keys = sorted(set(num) | set(t.components))
    sym = {}
    for k in keys:
        e = t[k]
        sym[k] = mpmath.mpf(0) if e is None else e.evaluate(p, digits)
    with mpmath.workdps(digits):
        nvals = {k: to_mpf(num[k]) if k in num else mpmath.mpf(0) for k in keys}
        scale = max([abs(v) for v in sym.values()] + [abs(v) for v in nvals.values()] + [mpmath.mpf(0)])
        # below the absolute floor a value is rounding residue of an exact zero
        floor = max(scale * mpmath.mpf(10) ** -20, mpmath.mpf(10) ** (10 - digits))
        for k in keys:
            a, b = sym[k], nvals[k]
            dev = abs(a - b) / max(abs(a), abs(b), floor)
            if dev > rep.max_deviation.get(t.name, -1):
                rep.max_deviation[t.name] = dev
                rep.worst[t.name] = (pi,) + tuple(k)
            if dev > rep.rel_tol:
                rep.failures.append(Deviation(t.name, tuple(k), pi, mpmath.nstr(a, 15),
                                              mpmath.nstr(b, 15), float(dev)))


# -- numeric nullspace -------------------------------------------------------------------
def numeric_matrix(sys: LinearSystem, point: Mapping, digits: int = 50) -> list[list]:
    return [[e.evaluate(point, digits) for e in row] for row in sys.rows]


def tensor_matrix(values: dict, n: int, slot: int) -> list[list]:
    """Rows of a numeric tensor table contracted in ``slot``."""
    rows: dict = {}
    for key, v in values.items():
        rest = key[:slot] + key[slot + 1:]
        rows.setdefault(rest, [mpmath.mpf(0)] * n)[key[slot] - 1] = to_mpf(v)
    return [rows[k] for k in sorted(rows)]


def numeric_nullspace(A: LinearSystem | Sequence[Sequence], point: Mapping | None = None,
                      tol: float = 1e-20, n: int | None = None, digits: int = 50
                      ) -> tuple[int, list[list]]:
    """Nullspace dimension and an orthonormal basis, by full-pivot elimination."""
    if isinstance(A, LinearSystem):
        n = A.n
        A = numeric_matrix(A, point or {}, digits)
    if n is None:
        if not A:
            raise ValueError("empty matrix needs n")
        n = len(A[0])
    with mpmath.workdps(digits):
        M = [[mpmath.mpf(x) for x in row] for row in A]
        cols = list(range(n))
        # entries below the floor are rounding residue of exact zeros
        floor = mpmath.mpf(10) ** (10 - digits)
        big = max([abs(x) for row in M for x in row] + [mpmath.mpf(0)])
        if big <= floor:
            return n, [[mpmath.mpf(1) if i == j else mpmath.mpf(0) for j in range(n)] for i in range(n)]
        rank = 0
        r = 0
        while r < len(M) and r < n:
            best, bi, bj = mpmath.mpf(0), -1, -1
            for i in range(r, len(M)):
                for j in range(r, n):
                    if abs(M[i][j]) > best:
                        best, bi, bj = abs(M[i][j]), i, j
            if best <= max(tol * big, floor):
                break
            M[r], M[bi] = M[bi], M[r]
            for row in M:
                row[r], row[bj] = row[bj], row[r]
            cols[r], cols[bj] = cols[bj], cols[r]
            piv = M[r][r]
            M[r] = [x / piv for x in M[r]]
            for i in range(len(M)):
                if i != r and M[i][r] != 0:
                    f = M[i][r]
                    M[i] = [a - f * b for a, b in zip(M[i], M[r])]
            r += 1
            rank = r
        basis = []
        for free in range(rank, n):
            v = [mpmath.mpf(0)] * n
            v[free] = mpmath.mpf(1)
            for i in range(rank):
                v[i] = -M[i][free]
            w = [mpmath.mpf(0)] * n
            for pos, c in enumerate(cols):
                w[c] = v[pos]
            basis.append(w)
        return n - rank, _orthonormal(basis)


def _orthonormal(vs: list[list]) -> list[list]:
    out = []
    for v in vs:
        w = v[:]
        for u in out:
            d = mpmath.fsum(a * b for a, b in zip(w, u))
            w = [a - d * b for a, b in zip(w, u)]
        nrm = mpmath.sqrt(mpmath.fsum(a * a for a in w))
        if nrm > 0:
            out.append([a / nrm for a in w])
    return out


def field_residual(sys_rows: Sequence[Sequence], vec: Sequence) -> mpmath.mpf:
    """max |row . vec| relative to the largest row entry times |vec|."""
    big = max([abs(x) for row in sys_rows for x in row] + [mpmath.mpf(0)])
    vn = max([abs(x) for x in vec] + [mpmath.mpf(0)])
    if big == 0 or vn == 0:
        return mpmath.mpf(0)
    return max(abs(mpmath.fsum(a * b for a, b in zip(row, vec))) for row in sys_rows) / (big * vn)


# -- branch ranks on strata -------------------------------------------------------------
def stratum_points(tower: Tower, assumptions: Sequence[Assumption], count: int, seed: int = 0,
                   finite: Iterable[Expression] = (), max_tries: int = 2000) -> list[dict]:
    """Points on the zero set of the ZERO assumptions where every NONZERO one
    is nonzero and every expression in ``finite`` evaluates."""
    rng = random.Random(seed)
    zero = [a.expr for a in assumptions if a.relation == ZERO]
    nonzero = [a.expr for a in assumptions if a.relation == NONZERO]
    finite = list(finite)
    tiny = mpmath.mpf(10) ** -20
    out, tries = [], 0
    while len(out) < count:
        tries += 1
        if tries > max_tries:
            raise GeometryError(f"could not find {count} points on the stratum (seed {seed})")
        p = {c: _rand_q(rng) for c in tower.coords}
        if zero:
            p = _project(tower, p, zero)
            if p is None:
                continue
        try:
            if any(abs(e.evaluate(p, 30)) < tiny for e in nonzero):
                continue
            if any(abs(e.evaluate(p, 30)) > tiny for e in zero):
                continue
            for e in finite:
                e.evaluate(p, 30)
        except (KernelError, ZeroDivisionError):
            continue
        out.append(p)
    return out


@dataclass
class RankCheck:
    assumptions: list[str]
    symbolic: int
    numeric: list[int]

    @property
    def passed(self) -> bool:
        return all(k == self.symbolic for k in self.numeric)

    def render(self) -> str:
        head = ", ".join(self.assumptions) or "generic"
        return f"[{head}] symbolic rank {self.symbolic}, numeric {self.numeric}"


def rank_check(sys: LinearSystem, branch, count: int = 5, seed: int = 0,
               digits: int = 50) -> RankCheck:
    """Numeric nullspace dimension of ``sys`` at points of the branch stratum."""
    entries = [e for row in sys.rows for e in row if not e.is_zero()]
    pts = stratum_points(sys.tower, branch.assumptions, count, seed, finite=entries)
    dims = [numeric_nullspace(sys, p, digits=digits)[0] for p in pts]
    return RankCheck([a.render() for a in branch.assumptions], branch.rank, dims)


def on_stratum(assumptions: Sequence[Assumption], point: Mapping, digits: int = 30) -> bool:
    tiny = mpmath.mpf(10) ** (10 - digits)
    try:
        for a in assumptions:
            small = abs(a.expr.evaluate(point, digits)) < tiny
            if small != (a.relation == ZERO):
                return False
    except (KernelError, ZeroDivisionError):
        return False
    return True
