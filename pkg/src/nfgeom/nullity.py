"""Nullity and kernel systems of curvature tensors, solved with
assumption-tracked case splitting.

Rows are kept as polynomial vectors over the tower ring. Elimination is
fraction-free (``R <- p*R - a*P``) followed by removal of the row gcd, so
entries never acquire denominators. A pivot that cannot be certified nonzero
under the current assumptions forks the computation on one of its irreducible
factors.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .finsler import Geometry, HorizontalField, VerticalField
from .kernel import Expression, Tower, _q
from .tensor import DOWN, LinearForm, Tensor

log = logging.getLogger(__name__)

NONZERO, ZERO = "nonzero", "zero"
DEFAULT_SPLIT_DEPTH = 2


class SolverError(ValueError):
    pass


@dataclass(frozen=True)
class Assumption:
    expr: Expression
    relation: str  # NONZERO | ZERO

    def __post_init__(self):
        if self.relation not in (NONZERO, ZERO):
            raise SolverError(f"bad relation {self.relation!r}")
        if self.relation == ZERO and self.expr.is_constant():
            raise SolverError("a nonzero constant cannot be assumed zero")

    @property
    def key(self) -> str:
        return self.expr.render()

    def render(self) -> str:
        return f"{self.expr.render()} {'<>' if self.relation == NONZERO else '='} 0"

    __str__ = render


def _monic(p):
    return p.quo_ground(p.LC) if p and p.LC != 1 else p


def _has_radical(t: Tower, p) -> bool:
    return any(p.degree(a.index) > 0 for a in t.radicals)


class Context:
    """An assumption set: irreducible factors assumed nonzero or zero."""

    def __init__(self, tower: Tower, nonzero: dict | None = None, zero: dict | None = None):
        self.tower = tower
        self.nonzero: dict[str, object] = dict(nonzero or {})
        self.zero: dict[str, object] = dict(zero or {})

    @classmethod
    def from_assumptions(cls, tower: Tower, items: Iterable[Assumption]) -> "Context":
        ctx = cls(tower)
        for a in items:
            ok = ctx.add(a.expr, a.relation)
            if not ok:
                raise SolverError(f"contradictory assumption {a.render()}")
        return ctx

    def copy(self) -> "Context":
        return Context(self.tower, self.nonzero, self.zero)

    def _key(self, p) -> str:
        return self.tower.render_poly(p)

    def add(self, e: Expression, relation: str) -> bool:
        """Record ``e <> 0`` (every factor) or ``e = 0``; False on contradiction."""
        t = self.tower
        if relation == NONZERO:
            num = t.lift(e.num)
            if not num:
                return False
            for f, _ in num.factor_list()[1]:
                f = _monic(f)
                if f.is_ground:
                    continue
                if self.reduce_poly(f) == 0 or not t.lift(f):
                    return False
                self.nonzero[self._key(f)] = f
            return True
        num = _monic(t.lift(e.num))
        if not num:
            return True
        if num.is_ground:
            return False
        factors = [_monic(f) for f, _ in num.factor_list()[1] if not f.is_ground]
        if len(factors) != 1:
            raise SolverError(f"zero assumption must be irreducible: {e.render()}")
        f = factors[0]
        if self._key(f) in self.nonzero or self.certified(f):
            return False
        self.zero[self._key(f)] = f
        # a nonzero factor that collapses on the new locus is a contradiction
        for g in self.nonzero.values():
            if not self.reduce_poly(t.lift(g)):
                return False
        return True

    def merged(self, other: "Context") -> "Context | None":
        out = self.copy()
        for f in other.nonzero.values():
            if not out.add(Expression(self.tower, f), NONZERO):
                return None
        for f in other.zero.values():
            if not out.add(Expression(self.tower, f), ZERO):
                return None
        return out

    # -- reduction -------------------------------------------------------------
    def reduce_poly(self, p):
        t = self.tower
        p = t.lift(p)
        if not self.zero or not p:
            return p
        for z in self.zero.values():
            z = t.lift(z)
            for atom in t.radicals:
                if p.degree(atom.index) > 0 and not atom.base.rem(z):
                    p = p.ring.from_dict({m: c for m, c in p.iterterms() if m[atom.index] == 0})
            if p:
                p = t.reduce(p.rem(z))
        return p

    def reduce(self, e: Expression) -> Expression:
        if not self.zero or e.is_zero():
            return e
        num = self.reduce_poly(e.num)
        return Expression(self.tower, num, self.tower.lift(e.den), e.shift)

    # -- nonzero certification -----------------------------------------------------
    def certified(self, f) -> bool:
        """Is the irreducible polynomial f provably nonzero here?"""
        t = self.tower
        f = t.lift(f)
        if f.is_ground:
            return bool(f)
        if self._key(_monic(f)) in self.nonzero:
            return True
        exp_idx = set(t.exp_indices())
        nz_vars = {i for i in range(len(t.coords))
                   if self._key(t.ring.gens[i]) in self.nonzero}
        if len(f) == 1:
            (mon,) = f.monoms()
            return all(e == 0 or i in exp_idx or i in nz_vars for i, e in enumerate(mon))
        return self._positive(f, exp_idx, nz_vars)

    def _positive(self, f, exp_idx, nz_vars) -> bool:
        t = self.tower
        even_rad = {a.index for a in t.radicals if a.degree % 2 == 0}
        signs = {_q(c) > 0 for c in f.coeffs()}
        if len(signs) != 1:
            return False
        strict = False
        for mon in f.monoms():
            ok = True
            for i, e in enumerate(mon):
                if not e or i in exp_idx:
                    continue
                if i in even_rad:
                    ok = False
                    continue
                if i >= len(t.coords) or e % 2:
                    return False
                if i not in nz_vars:
                    ok = False
            strict = strict or ok
        return strict

    def undecided(self, p) -> list:
        """Irreducible factors of p that are not certified nonzero."""
        out = []
        for f, _ in self.tower.lift(p).factor_list()[1]:
            f = _monic(f)
            if not self.certified(f):
                out.append(f)
        return out

    def assumptions(self) -> tuple[Assumption, ...]:
        t = self.tower
        out = [Assumption(Expression(t, f), NONZERO) for _, f in sorted(self.nonzero.items())]
        out += [Assumption(Expression(t, f), ZERO) for _, f in sorted(self.zero.items())]
        return tuple(out)

    def signature(self) -> tuple:
        return (tuple(sorted(self.nonzero)), tuple(sorted(self.zero)))


# -- systems -------------------------------------------------------------------------
@dataclass
class LinearSystem:
    n: int
    rows: list[tuple[Expression, ...]]
    tower: Tower
    unknown: str = "Z"

    def __post_init__(self):
        seen = set()
        rows = []
        for r in self.rows:
            if len(r) != self.n:
                raise SolverError("row length does not match the unknown count")
            if all(e.is_zero() for e in r):
                continue
            key = tuple(e.render() for e in _clear_row(self.tower, r))
            if key in seen:
                continue
            seen.add(key)
            rows.append(tuple(r))
        self.rows = rows

    def residual(self, v: Sequence[Expression], ctx: Context | None = None) -> list[Expression]:
        out = []
        for r in self.rows:
            acc = self.tower.const(0)
            for a, b in zip(r, v):
                if not a.is_zero() and not b.is_zero():
                    acc = acc + a * b
            out.append(ctx.reduce(acc) if ctx else acc)
        return out


def build_system(t: Tensor, slot: int, unknown: str = "Z", tower: Tower | None = None
                 ) -> LinearSystem:
    """Rows of ``t`` contracted in ``slot`` (0-based) with an unknown vector."""
    if not 0 <= slot < t.rank:
        raise SolverError(f"slot {slot} out of range for {t.name}")
    if t.signature[slot] != DOWN:
        raise SolverError(f"slot {slot + 1} of {t.name} is not covariant")
    if t.rank < 2:
        raise SolverError("contraction needs a tensor of rank >= 2")
    tower = tower or _tower_of(t)
    n = t.dim
    rows: dict[tuple, list] = {}
    for key, v in t.components.items():
        rest = key[:slot] + key[slot + 1:]
        row = rows.setdefault(rest, [None] * n)
        row[key[slot] - 1] = v
    out = []
    for rest in sorted(rows):
        out.append(tuple(tower.const(0) if e is None else e for e in rows[rest]))
    return LinearSystem(n, out, tower, unknown)


def system_from_forms(t: Tensor, tower: Tower | None = None) -> LinearSystem:
    """Rows of a tensor whose components are linear forms in an unknown vector."""
    forms = [v for _, v in t.nonzero()]
    if not forms:
        raise SolverError(f"{t.name} has no nonzero components")
    if not all(isinstance(f, LinearForm) for f in forms):
        raise SolverError(f"{t.name} is not linear in an unknown vector")
    if not forms:
        if tower is None:
            raise SolverError(f"{t.name} is identically zero; pass the tower explicitly")
        return LinearSystem(t.dim, [], tower)
    tower = forms[0].coeffs[0].tower
    return LinearSystem(t.dim, [f.coeffs for f in forms], tower, forms[0].unknown)


def _tower_of(t: Tensor) -> Tower:
    for v in t.components.values():
        if isinstance(v, LinearForm):
            return v.coeffs[0].tower
        return v.tower
    raise SolverError(f"{t.name} is identically zero; pass the tower explicitly")


# -- row arithmetic on raw polynomials -------------------------------------------------
def _clear_row(t: Tower, row: Sequence[Expression]) -> tuple[Expression, ...]:
    """Scale a row to polynomial entries with trivial gcd and monic leader."""
    polys = _row_polys(t, row)
    return tuple(Expression(t, p) for p in polys)


def _row_polys(t: Tower, row: Sequence[Expression]) -> list:
    ring = t.ring
    nz = [e for e in row if not e.is_zero()]
    if not nz:
        return [ring.zero] * len(row)
    L = ring.one
    for e in nz:
        d = t.lift(e.den)
        if not d.is_ground:
            L = L.lcm(d) if not L.is_ground else d
    eidx = t.exp_indices()
    lo = {i: min(dict(e.shift).get(i, 0) for e in nz) for i in eidx}
    out = []
    for e in row:
        if e.is_zero():
            out.append(ring.zero)
            continue
        p = t.lift(e.num) * L.exquo(t.lift(e.den)) if not t.lift(e.den).is_ground \
            else t.lift(e.num) * L.quo_ground(t.lift(e.den).LC)
        sh = dict(e.shift)
        mono = [0] * ring.ngens
        for i in eidx:
            mono[i] = sh.get(i, 0) - lo[i]
        if any(mono):
            p = p.mul_monom(tuple(mono))
        out.append(p)
    return _normalize_polys(t, out)


def _normalize_polys(t: Tower, polys: list, ctx: Context | None = None) -> list:
    """Divide out the row gcd (only its certified-nonzero factors when a
    context is given), unit exp monomials, and make the leader monic."""
    nz = [p for p in polys if p]
    if not nz:
        return polys
    g = nz[0]
    for p in nz[1:]:
        if g.is_ground:
            break
        g = g.gcd(p)
    if not g.is_ground and ctx is not None:
        h = g.ring.one
        for f, k in g.factor_list()[1]:
            if ctx.certified(_monic(f)):
                h = h * f ** k
        g = h
    if not g.is_ground and ctx is not None:
        polys = [p.exquo(g) if p else p for p in polys]
    # monomial factors in exp atoms are units
    eidx = t.exp_indices()
    if eidx:
        nz = [p for p in polys if p]
        lo = [0] * t.ring.ngens
        for i in eidx:
            lo[i] = min(m[i] for p in nz for m in p.itermonoms())
        if any(lo):
            polys = [t.ring.from_dict({tuple(a - b for a, b in zip(m, lo)): c
                                       for m, c in p.iterterms()}) if p else p for p in polys]
    lead = next(p for p in polys if p).LC
    if lead != 1:
        polys = [p.quo_ground(lead) if p else p for p in polys]
    return polys


# -- branches ----------------------------------------------------------------------------
@dataclass
class SolutionBranch:
    assumptions: tuple[Assumption, ...]
    basis: list[HorizontalField]
    complete: bool = True
    notes: list[str] = field(default_factory=list)
    context: Context | None = field(default=None, repr=False, compare=False)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def zero_assumptions(self) -> list[Assumption]:
        return [a for a in self.assumptions if a.relation == ZERO]

    def to_json(self) -> dict:
        return {
            "assumptions": [a.render() for a in self.assumptions],
            "rank": self.rank,
            "basis": [b.render() for b in self.basis],
            "complete": self.complete,
            "notes": list(self.notes),
        }

    def render(self) -> str:
        head = ", ".join(a.render() for a in self.assumptions) or "generic"
        lines = [f"branch [{head}] rank {self.rank}" + ("" if self.complete else " (incomplete)")]
        for i, b in enumerate(self.basis, 1):
            lines.append(f"  v{i} = {b.render()}")
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines)


def solve_branches(sys: LinearSystem, base: Iterable[Assumption] | Context = (),
                   split_depth: int = DEFAULT_SPLIT_DEPTH) -> list[SolutionBranch]:
    if split_depth < 0:
        raise SolverError("split_depth must be >= 0")
    t = sys.tower
    ctx = base.copy() if isinstance(base, Context) else Context.from_assumptions(t, base)
    rows = [_row_polys(t, r) for r in sys.rows]
    return _solve(t, sys.n, rows, ctx, split_depth)


def _prepare(t: Tower, rows: list[list], ctx: Context) -> list[list]:
    out, seen = [], set()
    for r in rows:
        r = [ctx.reduce_poly(p) for p in r]
        if not any(r):
            continue
        r = _normalize_polys(t, r, ctx)
        key = tuple(t.render_poly(p) for p in r)
        if key not in seen:
            seen.add(key)
            out.append(r)
    return out


def _solve(t: Tower, n: int, rows0: list[list], ctx: Context, depth: int) -> list[SolutionBranch]:
    rows = _prepare(t, rows0, ctx)
    complete = True
    notes: list[str] = []
    pivots: list[tuple[int, list]] = []  # (column, row)
    active = list(rows)
    for c in range(n):
        cands = [(i, r) for i, r in enumerate(active) if r[c]]
        if not cands:
            continue
        best = None
        for i, r in cands:
            und = ctx.undecided(r[c])
            score = (len(und), len(r[c]), i)
            if best is None or score < best[0]:
                best = (score, i, r, und)
        _, pi, prow, und = best
        if und:
            splittable = [f for f in und if not _has_radical(t, f)]
            if depth > 0 and splittable:
                return _split(t, n, rows0, ctx, depth, splittable[0])
            for f in und:
                ctx = ctx.copy()
                ctx.add(Expression(t, f), NONZERO)
            complete = False
            notes.append("split depth exhausted; assumed "
                         + ", ".join(f"{t.render_poly(f)} <> 0" for f in und))
        p = prow[c]
        nxt = []
        for i, r in enumerate(active):
            if i == pi:
                continue
            a = r[c]
            if a:
                r = [p * x - a * y for x, y in zip(r, prow)]
                r = [ctx.reduce_poly(x) for x in r]
            if any(r):
                nxt.append(_normalize_polys(t, r, ctx))
        pivots.append((c, prow))
        active = nxt
    basis = _back_substitute(t, n, pivots, ctx)
    br = SolutionBranch(ctx.assumptions(), basis, complete, notes, ctx)
    return [br]


def _split(t, n, rows0, ctx, depth, f) -> list[SolutionBranch]:
    fe = Expression(t, f)
    out: list[SolutionBranch] = []
    children = []
    for rel in (NONZERO, ZERO):
        sub = ctx.copy()
        if not sub.add(fe, rel):
            log.debug("pruned contradictory branch %s %s", t.render_poly(f), rel)
            continue
        children.append(_solve(t, n, rows0, sub, depth - 1))
    if len(children) == 2 and len(children[0]) == 1 and len(children[1]) == 1:
        a, b = children[0][0], children[1][0]
        if a.complete and b.complete and _same_basis(a.basis, b.basis, ctx):
            return [SolutionBranch(ctx.assumptions(), a.basis, True, a.notes, ctx)]
    for ch in children:
        out.extend(ch)
    return out


def _same_basis(a: list[HorizontalField], b: list[HorizontalField], ctx: Context) -> bool:
    if len(a) != len(b):
        return False
    return all((x - y).is_zero() for u, v in zip(a, b) for x, y in zip(u.comps, v.comps))


def _back_substitute(t: Tower, n: int, pivots: list, ctx: Context) -> list[HorizontalField]:
    pcols = {c for c, _ in pivots}
    free = [c for c in range(n) if c not in pcols]
    zero = t.const(0)
    basis = []
    for fcol in free:
        v = [zero] * n
        v[fcol] = t.const(1)
        for c, row in reversed(pivots):
            acc = zero
            for k in range(c + 1, n):
                if row[k] and not v[k].is_zero():
                    acc = acc + Expression(t, row[k]) * v[k]
            v[c] = ctx.reduce(-acc / Expression(t, row[c])) if not acc.is_zero() else zero
        basis.append(HorizontalField(tuple(_scale(t, v, ctx))))
    return basis


def _scale(t: Tower, v: list[Expression], ctx: Context) -> list[Expression]:
    for e in v:
        if e.is_zero():
            continue
        if e.is_constant() or all(ctx.certified(f) for f, _ in t.lift(e.num).factor_list()[1]):
            inv = 1 / e
            return [ctx.reduce(x * inv) for x in v]
    return v


# -- wrappers ---------------------------------------------------------------------------
NULLITY_SLOT = 2   # Z^j R^i_{hjk} and Z^k RG^i_{jk}
KERNEL_SLOT = 1    # W^h R^i_{hjk}


def solve_nullity(t: Tensor, base: Iterable[Assumption] | Context = (),
                  split_depth: int = DEFAULT_SPLIT_DEPTH, tower: Tower | None = None
                  ) -> list[SolutionBranch]:
    if t.rank < 3:
        raise SolverError("nullity needs a curvature of rank >= 3")
    base = base if isinstance(base, Context) else tuple(base)
    sys = build_system(t, NULLITY_SLOT, "W", tower or _base_tower(base))
    return solve_branches(sys, base, split_depth)


def solve_kernel(t: Tensor, base: Iterable[Assumption] | Context = (),
                 split_depth: int = DEFAULT_SPLIT_DEPTH, tower: Tower | None = None
                 ) -> list[SolutionBranch]:
    if t.rank != 4:
        raise SolverError("kernel is defined for (1,3) curvature tensors")
    base = base if isinstance(base, Context) else tuple(base)
    sys = build_system(t, KERNEL_SLOT, "Z", tower or _base_tower(base))
    return solve_branches(sys, base, split_depth)


def _base_tower(base) -> Tower | None:
    if isinstance(base, Context):
        return base.tower
    for a in base:
        return a.expr.tower
    return None


# -- membership and comparison -------------------------------------------------------------
def _generic_rank(t: Tower, rows: list[list], ctx: Context) -> tuple[int, Context]:
    """Row rank with undecided pivots assumed nonzero; returns the used context."""
    rows = _prepare(t, rows, ctx)
    rank = 0
    n = len(rows[0]) if rows else 0
    active = rows
    for c in range(n):
        cands = [(len(ctx.undecided(r[c])), len(r[c]), i, r) for i, r in enumerate(active) if r[c]]
        if not cands:
            continue
        nund, _, pi, prow = min(cands, key=lambda s: s[:3])
        if nund:
            ctx = ctx.copy()
            for f in ctx.undecided(prow[c]):
                ctx.add(Expression(t, f), NONZERO)
        p = prow[c]
        nxt = []
        for i, r in enumerate(active):
            if i == pi:
                continue
            if r[c]:
                r = [ctx.reduce_poly(p * x - r[c] * y) for x, y in zip(r, prow)]
            if any(r):
                nxt.append(_normalize_polys(t, r, ctx))
        active = nxt
        rank += 1
    return rank, ctx


def _field_rows(t: Tower, fields: Sequence[HorizontalField]) -> list[list]:
    return [_row_polys(t, f.comps) for f in fields if not f.is_zero()]


def membership(v: HorizontalField, b: SolutionBranch, ctx: Context | None = None
               ) -> tuple[bool, tuple[Assumption, ...]]:
    """Is v in the span of b's basis? Returns the verdict and the assumptions used."""
    ctx = ctx or b.context
    if ctx is None:
        raise SolverError("branch carries no context")
    t = ctx.tower
    vv = HorizontalField(tuple(ctx.reduce(c) for c in v.comps))
    if vv.is_zero():
        return True, ctx.assumptions()
    rows = _field_rows(t, b.basis)
    r0, c0 = _generic_rank(t, rows, ctx)
    r1, c1 = _generic_rank(t, rows + _field_rows(t, [vv]), c0)
    return r1 == r0, c1.assumptions()


def compare(a: SolutionBranch, b: SolutionBranch) -> str:
    """equal | strict_sub | strict_super | incomparable (a relative to b)."""
    if a.context is None or b.context is None:
        raise SolverError("branches carry no context")
    ctx = a.context.merged(b.context)
    if ctx is None:
        return "incomparable"
    a_in_b = all(membership(v, b, ctx)[0] for v in a.basis)
    b_in_a = all(membership(v, a, ctx)[0] for v in b.basis)
    if a_in_b and b_in_a:
        return "equal"
    if a_in_b:
        return "strict_sub"
    if b_in_a:
        return "strict_super"
    return "incomparable"


@dataclass
class BracketWitness:
    X: HorizontalField
    Y: HorizontalField
    horizontal: HorizontalField
    vertical: VerticalField

    def to_json(self) -> dict:
        return {"X": self.X.render(), "Y": self.Y.render(),
                "horizontal": self.horizontal.render(), "vertical": self.vertical.render()}


@dataclass
class IntegrabilityReport:
    branch: SolutionBranch
    involutive: bool
    witnesses: list[BracketWitness]
    brackets: list[BracketWitness]

    def to_json(self) -> dict:
        return {"assumptions": [a.render() for a in self.branch.assumptions],
                "involutive": self.involutive,
                "witnesses": [w.to_json() for w in self.witnesses]}

    def render(self) -> str:
        head = ", ".join(a.render() for a in self.branch.assumptions) or "generic"
        if self.involutive:
            return f"[{head}] involutive"
        w = self.witnesses[0]
        return (f"[{head}] NOT involutive: [{w.X.render()}, {w.Y.render()}] has vertical part "
                f"{w.vertical.render()}")


def integrability_report(b: SolutionBranch, geom: Geometry) -> IntegrabilityReport:
    ctx = b.context
    if ctx is None:
        raise SolverError("branch carries no context")
    witnesses, brackets = [], []
    for i in range(len(b.basis)):
        for j in range(i + 1, len(b.basis)):
            X, Y = b.basis[i], b.basis[j]
            H, V = geom.horizontal_bracket(X, Y)
            H = HorizontalField(tuple(ctx.reduce(c) for c in H.comps))
            V = VerticalField(tuple(ctx.reduce(c) for c in V.comps))
            w = BracketWitness(X, Y, H, V)
            brackets.append(w)
            if not V.is_zero() or not membership(H, b)[0]:
                witnesses.append(w)
    return IntegrabilityReport(b, not witnesses, witnesses, brackets)


def assumption_from(e: Expression, relation: str) -> list[Assumption]:
    """Split an assumption on an expression into assumptions on its factors."""
    t = e.tower
    num = t.lift(e.num)
    if relation == ZERO:
        return [Assumption(Expression(t, _monic(num)), ZERO)]
    return [Assumption(Expression(t, _monic(f)), NONZERO)
            for f, _ in num.factor_list()[1] if not f.is_ground]


def f2_vanishes(space_F2: Expression, b: SolutionBranch) -> bool:
    """True when F^2 reduces to zero on a branch's zero locus."""
    if b.context is None or not b.context.zero:
        return False
    return b.context.reduce(space_F2).is_zero()
