"""Indexed tensors with signed-index variance and Einstein summation.

Index convention: a positive index is contravariant, a negative one covariant,
so ``N[i,-j]`` is N^i_j. Component keys are 1-based integer tuples; storage is
sparse with zero default.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .kernel import Expression, Tower

UP, DOWN = 1, -1
DEFAULT_LETTERS = "hijklmnpqrs"


class TensorError(ValueError):
    pass


class LinearForm:
    """Linear combination ``sum_a c_a * U^a`` of the components of an unknown
    vector ``U``; the coefficients are expressions."""

    __slots__ = ("unknown", "coeffs")

    def __init__(self, unknown: str, coeffs: Sequence[Expression]):
        self.unknown = unknown
        self.coeffs = tuple(coeffs)

    @classmethod
    def basis(cls, unknown: str, tower: Tower, a: int) -> "LinearForm":
        n = tower.dim
        return cls(unknown, [tower.const(1 if b == a else 0) for b in range(1, n + 1)])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __add__(self, other):
        if isinstance(other, LinearForm):
            if other.unknown != self.unknown:
                raise TensorError("cannot mix different unknown vectors in one component")
            return LinearForm(self.unknown, [a + b for a, b in zip(self.coeffs, other.coeffs)])
        if isinstance(other, Expression) and other.is_zero():
            return self
        raise TensorError("tensor expression is not linear in the unknown vector")

    __radd__ = __add__

    def __mul__(self, s):
        if isinstance(s, LinearForm):
            raise TensorError("product of two unknown vectors is not linear")
        return LinearForm(self.unknown, [c * s for c in self.coeffs])

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def map(self, fn: Callable[[Expression], Expression]) -> "LinearForm":
        return LinearForm(self.unknown, [fn(c) for c in self.coeffs])

    def render(self) -> str:
        parts = []
        for a, c in enumerate(self.coeffs, start=1):
            if not c.is_zero():
                parts.append(f"({c.render()})*{self.unknown}^{a}")
        return " + ".join(parts) if parts else "0"

    __str__ = render


def _is_zero(v) -> bool:
    return v is None or v.is_zero()


@dataclass
class Tensor:
    name: str
    signature: tuple[int, ...]
    dim: int
    components: dict[tuple[int, ...], object] = field(default_factory=dict)
    letters: str | None = None

    def __post_init__(self):
        for key in list(self.components):
            if len(key) != len(self.signature):
                raise TensorError(f"{self.name}: key {key} does not match rank {self.rank}")
            if _is_zero(self.components[key]):
                del self.components[key]

    @property
    def rank(self) -> int:
        return len(self.signature)

    def __getitem__(self, key) -> object | None:
        return self.components.get(tuple(key))

    def get(self, key, tower: Tower) -> Expression:
        v = self.components.get(tuple(key))
        return tower.const(0) if v is None else v

    def __setitem__(self, key, value):
        key = tuple(key)
        if _is_zero(value):
            self.components.pop(key, None)
        else:
            self.components[key] = value

    def indices(self) -> Iterable[tuple[int, ...]]:
        return itertools.product(range(1, self.dim + 1), repeat=self.rank)

    def nonzero(self) -> list[tuple[tuple[int, ...], object]]:
        return sorted(self.components.items())

    def map(self, fn, name: str | None = None) -> "Tensor":
        out = Tensor(name or self.name, self.signature, self.dim, letters=self.letters)
        for k, v in self.components.items():
            out[k] = v.map(fn) if isinstance(v, LinearForm) else fn(v)
        return out

    def signed_letters(self) -> list[str]:
        letters = self.letters or DEFAULT_LETTERS[:self.rank]
        return [l if s == UP else f"-{l}" for l, s in zip(letters, self.signature)]

    # -- rendering -----------------------------------------------------------
    def show_lines(self) -> list[str]:
        """``NAME^{up}_{down} = expr`` lines for nonzero components, lexicographic."""
        lines = []
        for key, v in self.nonzero():
            up = " ".join(f"x{i}" for i, s in zip(key, self.signature) if s == UP)
            down = " ".join(f"x{i}" for i, s in zip(key, self.signature) if s == DOWN)
            head = self.name
            if up:
                head += "^{" + up + "}"
            if down:
                head += "_{" + down + "}"
            lines.append(f"{head} = {v.render()}")
        return lines

    def to_json(self) -> dict:
        sig = ",".join(self.signed_letters())
        return {
            "name": self.name,
            "signature": sig,
            "components": {f"{sig}={','.join(map(str, k))}": v.render()
                           for k, v in self.nonzero()},
        }


# -- index expressions --------------------------------------------------------
@dataclass(frozen=True)
class TensorRef:
    name: str
    indices: tuple[tuple[str, int], ...]  # (letter, UP|DOWN)

    def render(self) -> str:
        return f"{self.name}[" + ",".join(l if v == UP else f"-{l}" for l, v in self.indices) + "]"


@dataclass(frozen=True)
class IndexTerm:
    coef: Fraction
    factors: tuple[TensorRef, ...]

    def render(self) -> str:
        body = "*".join(f.render() for f in self.factors)
        if self.coef == 1:
            return body
        c = str(self.coef) if self.coef.denominator == 1 else f"({self.coef})"
        return f"{c}*{body}" if body else c


@dataclass(frozen=True)
class IndexExpression:
    terms: tuple[IndexTerm, ...]

    def render(self) -> str:
        out = ""
        for n, t in enumerate(self.terms):
            s = t.render()
            if n and s.startswith("-"):
                out += " - " + s[1:]
            elif n:
                out += " + " + s
            else:
                out = s
        return out


def _term_letters(term: IndexTerm) -> tuple[dict[str, int], list[str]]:
    seen: dict[str, list[int]] = {}
    for ref in term.factors:
        for letter, var in ref.indices:
            seen.setdefault(letter, []).append(var)
    free: dict[str, int] = {}
    dummy: list[str] = []
    for letter, vs in seen.items():
        if len(vs) == 1:
            free[letter] = vs[0]
        elif len(vs) == 2:
            if vs[0] == vs[1]:
                raise TensorError(f"letter {letter} repeated with equal variance")
            dummy.append(letter)
        else:
            raise TensorError(f"letter {letter} appears more than twice")
    return free, dummy


def check_index_expression(target: Sequence[tuple[str, int]], rhs: IndexExpression) -> None:
    want = dict(target)
    if len(want) != len(target):
        raise TensorError("repeated letter on the left-hand side")
    for term in rhs.terms:
        free, _ = _term_letters(term)
        if free != want:
            extra = sorted(set(free) - set(want))
            if extra:
                raise TensorError(f"letter {extra[0]} unpaired")
            raise TensorError("free letters do not match the target signature")


def define_tensor(name: str, target: Sequence[tuple[str, int]], rhs: IndexExpression,
                  registry: Mapping[str, Tensor], tower: Tower,
                  adjust: Callable[[Tensor, int], Tensor] | None = None) -> Tensor:
    """Evaluate ``name[target] = rhs`` by explicit summation.

    A factor naming an unregistered rank-1 contravariant object is treated as
    an unknown vector; the result then has :class:`LinearForm` components.
    ``adjust(t, slot)`` raises or lowers a slot when a reference's variance
    differs from the registered signature.
    """
    check_index_expression(target, rhs)
    n = tower.dim
    letters = [l for l, _ in target]
    out = Tensor(name, tuple(v for _, v in target), n, letters="".join(letters)
                 if all(len(l) == 1 for l in letters) else None)
    plans = []
    for term in rhs.terms:
        _, dummy = _term_letters(term)
        factors = []
        for ref in term.factors:
            t = registry.get(ref.name)
            if t is None:
                if len(ref.indices) == 1 and ref.indices[0][1] == UP:
                    factors.append((ref, None))
                    continue
                raise TensorError(f"unknown tensor {ref.name}")
            if t.rank != len(ref.indices):
                raise TensorError(f"{ref.name} has rank {t.rank}, used with {len(ref.indices)} indices")
            for slot, (_, var) in enumerate(ref.indices):
                if var != t.signature[slot]:
                    if adjust is None:
                        raise TensorError(f"variance mismatch on {ref.name} slot {slot + 1}")
                    t = adjust(t, slot)
            factors.append((ref, t))
        plans.append((term.coef, dummy, factors))
    for free_vals in itertools.product(range(1, n + 1), repeat=len(letters)):
        env0 = dict(zip(letters, free_vals))
        total = None
        for coef, dummy, factors in plans:
            for dvals in itertools.product(range(1, n + 1), repeat=len(dummy)):
                env = dict(env0)
                env.update(zip(dummy, dvals))
                prod = None
                for ref, t in factors:
                    key = tuple(env[l] for l, _ in ref.indices)
                    if t is None:
                        v = LinearForm.basis(ref.name, tower, key[0])
                    else:
                        v = t[key]
                        if v is None:
                            prod = None
                            break
                    prod = v if prod is None else _mul(prod, v)
                else:
                    if prod is None:  # scalar-only term
                        prod = tower.const(1)
                    if coef != 1:
                        prod = prod * coef
                    total = prod if total is None else total + prod
        if total is not None:
            out[free_vals] = total
    return out


def _mul(a, b):
    if isinstance(a, LinearForm):
        return a * b
    return b * a if isinstance(b, LinearForm) else a * b


def raise_lower(t: Tensor, slot: int, metric: Tensor) -> Tensor:
    """Flip the variance of ``slot`` (0-based) by contracting with ``metric``:
    pass g (covariant) to lower an upper slot, g^-1 to raise a lower one."""
    if not 0 <= slot < t.rank:
        raise TensorError(f"slot {slot} out of range for rank {t.rank}")
    want = DOWN if t.signature[slot] == UP else UP
    if metric.signature != (want, want):
        raise TensorError("metric does not match the requested direction")
    sig = t.signature[:slot] + (want,) + t.signature[slot + 1:]
    out = Tensor(t.name, sig, t.dim, letters=t.letters)
    n = t.dim
    for key, v in t.components.items():
        b = key[slot]
        for a in range(1, n + 1):
            gab = metric[(a, b)]
            if gab is None:
                continue
            nk = key[:slot] + (a,) + key[slot + 1:]
            term = v * gab
            prev = out[nk]
            out[nk] = term if prev is None else prev + term
    return out


def _extend(t: Tensor, k: int, op, name: str | None) -> Tensor:
    out = Tensor(name or t.name, t.signature + (DOWN,), t.dim)
    for key, v in t.components.items():
        out[key + (k,)] = v.map(op) if isinstance(v, LinearForm) else op(v)
    return out


def tdiff(t: Tensor, k: int, name: str | None = None) -> Tensor:
    """Partial derivative along x^k, appended as a covariant slot."""
    return _extend(t, k, lambda e: e.diff(f"x{k}"), name)


def tddiff(t: Tensor, k: int, name: str | None = None) -> Tensor:
    """Partial derivative along y^k."""
    return _extend(t, k, lambda e: e.diff(f"y{k}"), name)


def delta(f: Expression, k: int, N: Tensor) -> Expression:
    """Horizontal derivative delta_k f = d_k f - N^m_k dot-d_m f."""
    out = f.diff(f"x{k}")
    for m in range(1, N.dim + 1):
        nmk = N[(m, k)]
        if nmk is not None:
            d = f.diff(f"y{m}")
            if not d.is_zero():
                out = out - nmk * d
    return out


def hdiff(t: Tensor, k: int, N: Tensor, name: str | None = None) -> Tensor:
    """Componentwise delta_k; components are treated as scalar fields."""
    return _extend(t, k, lambda e: delta(e, k, N), name)


def check_symmetry(t: Tensor, perm: Sequence[int], sign: int = 1,
                   reduce: Callable[[object], object] | None = None) -> bool:
    """True iff t(idx permuted) == sign * t(idx) for every index.

    ``perm`` is a 0-based permutation of the slots; it may only exchange
    slots of equal variance.
    """
    if sorted(perm) != list(range(t.rank)):
        raise TensorError("not a permutation of the slots")
    for a, b in enumerate(perm):
        if t.signature[a] != t.signature[b]:
            raise TensorError("permutation mixes contravariant and covariant slots")
    keys = set(t.components)
    keys |= {tuple(k[p] for p in perm) for k in t.components}
    for key in keys:
        pk = tuple(key[p] for p in perm)
        a, b = t[pk], t[key]
        if a is None and b is None:
            continue
        if a is None:
            diff = -(b * sign)
        elif b is None:
            diff = a
        else:
            diff = a - b * sign
        if reduce is not None:
            diff = reduce(diff)
        if not diff.is_zero():
            return False
    return True
