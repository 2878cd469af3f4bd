"""Statement language and session execution.

One statement per line, ``#`` starts a comment::

    space dim=4
    F2 := sqrt(x2^2*y1^4 + y2^4 + y3^4 + y4^4)
    assume y2 <> 0
    definetensor RCW[h,-i,-k] = RC[h,-i,-j,-k]*W[j]
    show RCW[h,-i,-k]
    solve nullity RC split_depth=2
    solve system RCW
    bracket (h1 + (y2/y1)*h2, h3)
    check numeric N RC points=20 tol=1e-9 seed=7
    check symmetry RG 2 3 sign=-1
    check homogeneity
    example ex2

The metric is always given as F^2.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .finsler import (BUILTIN_TENSORS, FinslerSpace, Geometry, GeometryError,
                      HorizontalField, VerticalField)
from .kernel import Expression, KernelError, Tower
from .nullity import (DEFAULT_SPLIT_DEPTH, NONZERO, ZERO, Assumption, SolutionBranch,
                      SolverError, assumption_from, f2_vanishes, solve_branches,
                      solve_kernel, solve_nullity, system_from_forms)
from .parser import (DERIVATIVES, Cursor, DerivRef, ParseError, constant_value,
                     evaluate, expr, names_in, parse_index_expression, parse_index_list,
                     tokenize)
from .tensor import (DOWN, UP, IndexExpression, LinearForm, Tensor, TensorError,
                     check_symmetry, define_tensor, delta, raise_lower)

log = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_MATH, EXIT_CHECK = 0, 1, 2, 3, 4


class DSLError(Exception):
    """Error tied to a source line; ``code`` is the CLI exit status."""

    def __init__(self, msg: str, line: int = 0, col: int = 1, code: int = EXIT_PARSE):
        self.msg, self.line, self.col, self.code = msg, line, col, code
        super().__init__(f"line {line}, col {col}: {msg}" if line else msg)


# -- statements -------------------------------------------------------------------------
def _idx(indices) -> str:
    return "[" + ",".join(l if v == UP else f"-{l}" for l, v in indices) + "]"


@dataclass
class SpaceDecl:
    dim: int
    line: int = field(default=0, compare=False)

    def render(self) -> str:
        return f"space dim={self.dim}"


@dataclass
class MetricDecl:
    expr: object
    line: int = field(default=0, compare=False)

    def render(self) -> str:
        return f"F2 := {self.expr.render()}"


@dataclass
class Assume:
    lhs: object
    relation: str
    rhs: object
    line: int = field(default=0, compare=False)

    def render(self) -> str:
        op = "<>" if self.relation == NONZERO else "="
        return f"assume {self.lhs.render()} {op} {self.rhs.render()}"


@dataclass
class DefineTensor:
    name: str
    target: tuple
    rhs: IndexExpression
    line: int = field(default=0, compare=False)

    def render(self) -> str:
        return f"definetensor {self.name}{_idx(self.target)} = {self.rhs.render()}"


@dataclass
class Show:
    name: str
    indices: tuple | None = None
    line: int = field(default=0, compare=False)

    def render(self) -> str:
        return f"show {self.name}" + (_idx(self.indices) if self.indices else "")


@dataclass
class Solve:
    kind: str          # nullity | kernel | system
    target: str
    split_depth: int | None = None
    line: int = field(default=0, compare=False)

    def render(self) -> str:
        s = f"solve {self.kind} {self.target}"
        return s if self.split_depth is None else s + f" split_depth={self.split_depth}"


@dataclass
class Bracket:
    X: object
    Y: object
    line: int = field(default=0, compare=False)

    def render(self) -> str:
        return f"bracket ({self.X.render()}, {self.Y.render()})"


@dataclass
class Check:
    kind: str          # numeric | symmetry | homogeneity
    args: tuple = ()
    options: tuple = ()
    line: int = field(default=0, compare=False)

    def render(self) -> str:
        parts = ["check", self.kind, *self.args, *(f"{k}={v}" for k, v in self.options)]
        return " ".join(parts)


@dataclass
class RunExample:
    name: str
    line: int = field(default=0, compare=False)

    def render(self) -> str:
        return f"example {self.name}"


# -- parsing ------------------------------------------------------------------------------
EXAMPLES = ("ex1", "ex2", "ex3")


def _strip_comment(text: str) -> str:
    i = text.find("#")
    return text if i < 0 else text[:i]


def parse_script(text: str) -> list:
    out = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        out.append(parse_statement(line, n))
    return out


def render_script(stmts: Sequence) -> str:
    return "\n".join(s.render() for s in stmts) + "\n"


def _options(cur: Cursor, allowed: dict[str, Callable]) -> tuple:
    opts = []
    while cur.tok.kind == "name" and cur.peek().text == "=":
        key = cur.next()
        if key.text not in allowed:
            raise ParseError(f"unknown option {key.text!r}", cur.line, key.col,
                             ", ".join(sorted(allowed)))
        cur.next()
        neg = cur.at("-")
        if neg:
            cur.next()
        val = cur.next()
        if val.kind not in ("num", "name"):
            raise ParseError("bad option value", cur.line, val.col, "number")
        text = ("-" if neg else "") + val.text
        try:
            allowed[key.text](text)
        except ValueError:
            raise ParseError(f"bad value {text!r} for {key.text}", cur.line, val.col) from None
        opts.append((key.text, text))
    return tuple(opts)


def _end(cur: Cursor):
    if cur.at(";"):
        cur.next()
    if cur.tok.kind != "end":
        cur.fail(f"unexpected {cur.describe()}", "end of line")


def _expr_until_end(cur: Cursor):
    node = expr(cur)
    _end(cur)
    return node


def parse_statement(text: str, line: int = 0):
    cur = Cursor(tokenize(text, line), line)
    t = cur.tok
    if t.kind != "name":
        cur.fail(f"unexpected {cur.describe()}", "a statement keyword")
    kw = t.text
    if kw in ("F2", "F0") and cur.peek().text == ":=":
        cur.next()
        cur.next()
        return MetricDecl(_expr_until_end(cur), line)
    cur.next()
    paren = False
    if kw in ("definetensor", "show") and cur.at("("):
        cur.next()
        paren = True

    if kw == "space":
        if cur.at("dim"):
            cur.next()
            cur.expect("=")
        tok = cur.expect_kind("num", "dimension")
        dim = Fraction(tok.text)
        if dim.denominator != 1 or not 1 <= dim <= 8:
            raise ParseError("dimension must be an integer in 1..8", line, tok.col)
        _end(cur)
        return SpaceDecl(int(dim), line)

    if kw == "assume":
        lhs = expr(cur)
        if cur.at("<>") or cur.at("!="):
            rel = NONZERO
        elif cur.at("="):
            rel = ZERO
        else:
            cur.fail(f"unexpected {cur.describe()}", "'<>' or '='")
        cur.next()
        rhs = _expr_until_end(cur)
        return Assume(lhs, rel, rhs, line)

    if kw == "definetensor":
        name = cur.expect_kind("name", "tensor name").text
        target = parse_index_list(cur)
        cur.expect("=")
        rhs = parse_index_expression(cur, stop=(")", ";"))
        if paren:
            cur.expect(")")
        _end(cur)
        return DefineTensor(name, target, rhs, line)

    if kw == "show":
        name = cur.expect_kind("name", "tensor name").text
        indices = parse_index_list(cur) if cur.at("[") else None
        if paren:
            cur.expect(")")
        _end(cur)
        return Show(name, indices, line)

    if kw == "solve":
        kind = cur.expect_kind("name", "nullity, kernel or system")
        if kind.text not in ("nullity", "kernel", "system"):
            raise ParseError(f"unknown solve kind {kind.text!r}", line, kind.col,
                             "nullity, kernel or system")
        target = cur.expect_kind("name", "tensor name").text
        opts = dict(_options(cur, {"split_depth": int}))
        _end(cur)
        sd = opts.get("split_depth")
        return Solve(kind.text, target, None if sd is None else int(sd), line)

    if kw == "bracket":
        cur.expect("(")
        X = expr(cur)
        cur.expect(",")
        Y = expr(cur)
        cur.expect(")")
        _end(cur)
        return Bracket(X, Y, line)

    if kw == "check":
        kind = cur.expect_kind("name", "numeric, symmetry or homogeneity")
        if kind.text == "numeric":
            args = []
            while cur.tok.kind == "name" and cur.peek().text != "=":
                args.append(cur.next().text)
            opts = _options(cur, {"points": int, "tol": float, "seed": int})
            _end(cur)
            return Check("numeric", tuple(args), opts, line)
        if kind.text == "symmetry":
            name = cur.expect_kind("name", "tensor name").text
            a = cur.expect_kind("num", "slot number").text
            b = cur.expect_kind("num", "slot number").text
            opts = _options(cur, {"sign": int})
            if opts and opts[0][1] not in ("1", "-1", "+1"):
                raise ParseError("sign must be 1 or -1", line, cur.tok.col)
            _end(cur)
            return Check("symmetry", (name, a, b), opts, line)
        if kind.text == "homogeneity":
            _end(cur)
            return Check("homogeneity", (), (), line)
        raise ParseError(f"unknown check {kind.text!r}", line, kind.col,
                         "numeric, symmetry or homogeneity")

    if kw == "example":
        name = cur.expect_kind("name", "ex1, ex2 or ex3")
        if name.text not in EXAMPLES:
            raise ParseError(f"unknown example {name.text!r}", line, name.col, "ex1, ex2 or ex3")
        _end(cur)
        return RunExample(name.text, line)

    raise ParseError(f"unknown statement {kw!r}", line, t.col,
                     "space, F2, assume, definetensor, show, solve, bracket, check or example")


# -- field values for brackets ----------------------------------------------------------------
class FieldValue:
    """Horizontal field sum c_i h_i used while evaluating bracket arguments."""

    def __init__(self, comps: list[Expression]):
        self.comps = comps

    def _check(self, other):
        if not isinstance(other, FieldValue):
            raise TypeError("cannot add a scalar to a vector field")
        return other

    def __add__(self, other):
        o = self._check(other)
        return FieldValue([a + b for a, b in zip(self.comps, o.comps)])

    def __sub__(self, other):
        o = self._check(other)
        return FieldValue([a - b for a, b in zip(self.comps, o.comps)])

    def __neg__(self):
        return FieldValue([-a for a in self.comps])

    def __mul__(self, s):
        if isinstance(s, FieldValue):
            raise TypeError("product of two vector fields")
        return FieldValue([a * s for a in self.comps])

    __rmul__ = __mul__

    def __truediv__(self, s):
        if isinstance(s, FieldValue):
            raise TypeError("division by a vector field")
        return FieldValue([a / s for a in self.comps])

    def __pow__(self, k):
        raise TypeError("power of a vector field")


# -- session ---------------------------------------------------------------------------------
@dataclass
class SessionConfig:
    split_depth: int = DEFAULT_SPLIT_DEPTH
    precision: int = 50
    points: int = 20
    tol: float = 1e-9
    seed: int = 0


@dataclass
class Output:
    statement: str
    line: int
    text: list[str]
    kind: str = "info"
    data: object = None


class Session:
    def __init__(self, config: SessionConfig | None = None):
        self.config = config or SessionConfig()
        self.tower: Tower | None = None
        self.space: FinslerSpace | None = None
        self.geometry: Geometry | None = None
        self.metric_text: str | None = None
        self.assumptions: list[Assumption] = []
        self.user: dict[str, Tensor] = {}
        self.derived: dict[str, Tensor] = {}
        self.shown: dict[str, dict] = {}
        self.solutions: dict[tuple[str, str], list[SolutionBranch]] = {}
        self.branch_records: list[dict] = []
        self.brackets: list[dict] = []
        self.checks: list[dict] = []
        self.verdicts: list[dict] = []
        self.outputs: list[Output] = []
        self.failed_checks = 0

    # -- helpers ---------------------------------------------------------------------
    def _need_space(self, st):
        if self.tower is None:
            raise DSLError("no space declared (use 'space dim=N' first)", st.line)

    def _need_metric(self, st):
        self._need_space(st)
        if self.geometry is None:
            raise DSLError("no metric declared (use 'F2 := ...' first)", st.line)

    def scalar(self, node, line: int = 0, fields: bool = False):
        """Evaluate a scalar AST in the current tower."""
        t = self.tower
        env = {c: t.var(c) for c in t.coords}
        if fields:
            n = t.dim
            zero = t.const(0)
            for i in range(1, n + 1):
                env[f"h{i}"] = FieldValue([t.const(1) if j == i else zero for j in range(1, n + 1)])
        unknown = sorted(names_in(node) - set(env))
        if unknown:
            raise DSLError(f"unknown name {unknown[0]!r}", line)
        try:
            return evaluate(node, env, t.const,
                            {"exp": t.exp, "sqrt": lambda u: t.radical(u, 2)},
                            lambda a, k: _rpow(t, a, k))
        except (TypeError, ValueError) as e:
            raise DSLError(str(e), line, code=EXIT_MATH) from None
        except ZeroDivisionError as e:
            raise DSLError(f"division by zero: {e}", line, code=EXIT_MATH) from None
        except KernelError as e:
            raise DSLError(str(e), line, code=EXIT_MATH) from None

    def expr(self, text: str) -> Expression:
        from .parser import parse_expr
        return self.scalar(parse_expr(text))

    def lookup(self, name: str, line: int = 0) -> Tensor:
        if name in self.user:
            return self.user[name]
        if name in self.derived:
            return self.derived[name]
        if name in BUILTIN_TENSORS:
            if self.geometry is None:
                raise DSLError("no metric declared (use 'F2 := ...' first)", line)
            return self.geometry.tensor(name)
        raise DSLError(f"unknown tensor {name!r}", line)

    def _adjust(self, t: Tensor, slot: int) -> Tensor:
        g = self.geometry
        metric = g.g if t.signature[slot] == UP else g.ginv
        return raise_lower(t, slot, metric)

    def _resolve_refs(self, rhs: IndexExpression, line: int) -> dict:
        reg: dict[str, Tensor] = {}
        for term in rhs.terms:
            for ref in term.factors:
                if isinstance(ref, DerivRef):
                    reg[ref.name] = self._derivative(ref, line)
                elif ref.name in self.user or ref.name in BUILTIN_TENSORS or ref.name in self.derived:
                    reg[ref.name] = self.lookup(ref.name, line)
                elif len(ref.indices) != 1 or ref.indices[0][1] != UP:
                    raise DSLError(f"unknown tensor {ref.name!r}", line)
        return reg

    def _derivative(self, ref: DerivRef, line: int) -> Tensor:
        if ref.name in self.derived:
            return self.derived[ref.name]
        base = self.lookup(ref.base.name, line)
        if base.rank != len(ref.base.indices):
            raise DSLError(f"{base.name} has rank {base.rank}", line)
        for slot, (_, var) in enumerate(ref.base.indices):
            if var != base.signature[slot]:
                base = self._adjust(base, slot)
        n = self.tower.dim
        N = self.geometry.N
        if ref.op == "tdiff":
            op = lambda e, k: e.diff(f"x{k}")
        elif ref.op == "tddiff":
            op = lambda e, k: e.diff(f"y{k}")
        else:
            op = lambda e, k: delta(e, k, N)
        out = Tensor(ref.name, base.signature + (DOWN,), n)
        for key, v in base.components.items():
            for k in range(1, n + 1):
                out[key + (k,)] = v.map(lambda e: op(e, k)) if isinstance(v, LinearForm) else op(v, k)
        self.derived[ref.name] = out
        return out

    # -- execution -----------------------------------------------------------------------
    def run(self, stmts: Sequence) -> list[Output]:
        for st in stmts:
            self.execute(st)
        return self.outputs

    def execute(self, st) -> Output:
        handler = getattr(self, "_do_" + type(st).__name__)
        try:
            out = handler(st)
        except DSLError as e:
            if not e.line:
                e.line = st.line
                e.args = (f"line {e.line}, col {e.col}: {e.msg}",)
            raise
        except TensorError as e:
            raise DSLError(str(e), st.line, code=EXIT_PARSE) from None
        except (GeometryError, KernelError, SolverError, ZeroDivisionError) as e:
            raise DSLError(str(e), st.line, code=EXIT_MATH) from None
        self.outputs.append(out)
        return out

    def _out(self, st, lines, kind="info", data=None) -> Output:
        return Output(st.render(), st.line, list(lines), kind, data)

    def _do_SpaceDecl(self, st: SpaceDecl):
        self.tower = Tower(st.dim)
        self.space = self.geometry = None
        self.metric_text = None
        self.assumptions = []
        self.user.clear()
        self.derived.clear()
        return self._out(st, [f"space of dimension {st.dim}: "
                              + ", ".join(self.tower.coords)])

    def _do_MetricDecl(self, st: MetricDecl):
        self._need_space(st)
        if self.geometry is not None:
            raise DSLError("metric already declared for this space", st.line)
        F2 = self.scalar(st.expr, st.line)
        space = FinslerSpace(self.tower, F2, self.assumptions)
        geom = Geometry(space)
        info = geom.validate()
        self.space, self.geometry = space, geom
        self.metric_text = F2.render()
        return self._out(st, [f"F2 = {F2.render()}"], data=info)

    def _do_Assume(self, st: Assume):
        self._need_space(st)
        e = self.scalar(st.lhs, st.line) - self.scalar(st.rhs, st.line)
        if e.is_constant():
            ok = (e.constant_value() != 0) == (st.relation == NONZERO)
            if not ok:
                raise DSLError("contradictory constant assumption", st.line, code=EXIT_MATH)
            return self._out(st, ["trivial assumption ignored"])
        items = assumption_from(e, st.relation)
        self.assumptions.extend(items)
        return self._out(st, ["assume " + ", ".join(a.render() for a in items)])

    def _do_DefineTensor(self, st: DefineTensor):
        self._need_metric(st)
        if st.name in BUILTIN_TENSORS:
            raise DSLError(f"{st.name} is a reserved built-in tensor name", st.line)
        reg = self._resolve_refs(st.rhs, st.line)
        t = define_tensor(st.name, st.target, st.rhs, reg, self.tower, self._adjust)
        self.user[st.name] = t
        return self._out(st, [f"defined {st.name}{_idx(st.target)} "
                              f"({len(t.components)} nonzero components)"])

    def _do_Show(self, st: Show):
        self._need_metric(st)
        t = self.lookup(st.name, st.line)
        if st.indices is not None:
            if len(st.indices) != t.rank:
                raise DSLError(f"{t.name} has rank {t.rank}, shown with {len(st.indices)} indices",
                               st.line)
            for slot, (_, var) in enumerate(st.indices):
                if var != t.signature[slot]:
                    t = self._adjust(t, slot)
        js = t.to_json()
        self.shown[t.name] = js
        lines = t.show_lines() or [f"{t.name} = 0"]
        return self._out(st, lines, "tensor", js)

    def _do_Solve(self, st: Solve):
        self._need_metric(st)
        depth = self.config.split_depth if st.split_depth is None else st.split_depth
        t = self.lookup(st.target, st.line)
        if st.kind == "system":
            branches = solve_branches(system_from_forms(t, self.tower), self.assumptions, depth)
        elif any(isinstance(v, LinearForm) for v in t.components.values()):
            raise DSLError(f"{t.name} contains unknowns; use 'solve system'", st.line)
        elif st.kind == "nullity":
            branches = solve_nullity(t, self.assumptions, depth, self.tower)
        else:
            branches = solve_kernel(t, self.assumptions, depth, self.tower)
        self.solutions[(st.kind, st.target)] = branches
        rec = {"kind": st.kind, "tensor": st.target, "split_depth": depth,
               "branches": [_branch_json(b, self.space) for b in branches]}
        self.branch_records.append(rec)
        lines = [f"{st.kind} of {st.target}: {len(branches)} branch(es)"]
        for b in branches:
            lines.extend("  " + l for l in b.render().splitlines())
            if f2_vanishes(self.space.F2, b):
                lines.append("  warning: F2 vanishes identically on this branch")
        return self._out(st, lines, "branches", rec)

    def _do_Bracket(self, st: Bracket):
        self._need_metric(st)
        X = self.scalar(st.X, st.line, fields=True)
        Y = self.scalar(st.Y, st.line, fields=True)
        if not isinstance(X, FieldValue) or not isinstance(Y, FieldValue):
            raise DSLError("bracket arguments must be combinations of h1..hn", st.line,
                           code=EXIT_MATH)
        Xf, Yf = HorizontalField(tuple(X.comps)), HorizontalField(tuple(Y.comps))
        H, V = self.geometry.horizontal_bracket(Xf, Yf)
        rec = {"X": Xf.render(), "Y": Yf.render(), "horizontal": H.render(),
               "vertical": V.render()}
        self.brackets.append(rec)
        return self._out(st, [f"horizontal part: {H.render()}", f"vertical part: {V.render()}"],
                         "bracket", rec)

    def _do_Check(self, st: Check):
        self._need_metric(st)
        opts = dict(st.options)
        if st.kind == "numeric":
            from .oracle import PIPELINE, cross_check
            names = list(st.args) or list(PIPELINE)
            for nm in names:
                if nm not in PIPELINE:
                    raise DSLError(f"no numeric counterpart for {nm!r}", st.line)
            rep = cross_check(self.geometry, names, count=int(opts.get("points", self.config.points)),
                              seed=int(opts.get("seed", self.config.seed)),
                              rel_tol=float(opts.get("tol", self.config.tol)),
                              digits=self.config.precision)
            rec = {"kind": "numeric", **rep.to_json()}
            passed = rep.passed
            lines = rep.render().splitlines()
        elif st.kind == "symmetry":
            name, a, b = st.args
            t = self.lookup(name, st.line)
            a, b = int(a) - 1, int(b) - 1
            if not (0 <= a < t.rank and 0 <= b < t.rank):
                raise DSLError(f"slot out of range for {name}", st.line)
            perm = list(range(t.rank))
            perm[a], perm[b] = perm[b], perm[a]
            sign = int(opts.get("sign", 1))
            passed = check_symmetry(t, perm, sign)
            rec = {"kind": "symmetry", "tensor": name, "slots": [a + 1, b + 1], "sign": sign,
                   "passed": passed}
            lines = [f"symmetry of {name} in slots {a + 1},{b + 1} (sign {sign:+d}): "
                     + ("PASS" if passed else "FAIL")]
        else:
            res = homogeneity_checks(self.geometry)
            passed = all(res.values())
            rec = {"kind": "homogeneity", "identities": res, "passed": passed}
            lines = [f"{k}: {'PASS' if v else 'FAIL'}" for k, v in res.items()]
        if not passed:
            self.failed_checks += 1
        self.checks.append(rec)
        return self._out(st, lines, "check", rec)

    def _do_RunExample(self, st: RunExample):
        from .examples import run_example
        rep = run_example(st.name, self.config)
        self.verdicts.extend(rep.verdicts)
        self.checks.extend(rep.session.checks)
        self.checks.extend({"kind": "golden", "example": st.name, **c.to_json()} for c in rep.checks)
        if not rep.passed:
            self.failed_checks += 1
        return self._out(st, rep.render_lines(), "example", rep.to_json())

    # -- rendering -------------------------------------------------------------------------
    def to_json(self) -> dict:
        space = None
        if self.tower is not None:
            space = {"dim": self.tower.dim,
                     "F2": self.metric_text,
                     "atoms": [a.render() for a in self.tower.atoms],
                     "assumptions": [a.render() for a in self.assumptions]}
        return {"space": space, "tensors": self.shown, "branches": self.branch_records,
                "brackets": self.brackets, "checks": self.checks, "verdicts": self.verdicts}

    def render_json(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2, ensure_ascii=False)

    def render_text(self) -> str:
        lines = []
        for o in self.outputs:
            lines.append(f"> {o.statement}")
            lines.extend(o.text)
        return "\n".join(lines) + "\n"


def _rpow(t: Tower, a, k: Fraction):
    if not isinstance(a, Expression):
        raise TypeError("fractional power of a vector field")
    r = t.radical(a, k.denominator)
    return r ** k.numerator


def _branch_json(b: SolutionBranch, space: FinslerSpace) -> dict:
    d = b.to_json()
    d["f2_vanishes"] = f2_vanishes(space.F2, b)
    return d


def homogeneity_checks(geom: Geometry) -> dict[str, bool]:
    """y^k dF2/dy^k = 2 F2, N^i_j y^j = 2 G^i, y^k dN^i_j/dy^k = N^i_j (exact)."""
    T, n = geom.tower, geom.n
    F2 = geom.space.F2
    out = {"y.dF2 = 2 F2": (geom.euler_y(F2) - 2 * F2).is_zero()}
    ok = True
    for i in range(1, n + 1):
        acc = T.const(0)
        for j in range(1, n + 1):
            acc = acc + geom.N.get((i, j), T) * T.y(j)
        ok = ok and (acc - 2 * geom.G.get((i,), T)).is_zero()
    out["N.y = 2 G"] = ok
    ok = True
    for key, v in geom.N.components.items():
        ok = ok and (geom.euler_y(v) - v).is_zero()
    out["y.dN = N"] = ok
    return out


def run_script(text: str, config: SessionConfig | None = None) -> Session:
    """Parse then execute; parse errors surface before anything runs."""
    try:
        stmts = parse_script(text)
    except ParseError as e:
        raise DSLError(e.msg + (f" (expected {e.expected})" if e.expected else ""),
                       e.line, e.col, EXIT_PARSE) from None
    s = Session(config)
    s.run(stmts)
    return s
