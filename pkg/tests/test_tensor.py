import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nfgeom.kernel import Tower
from nfgeom.parser import Cursor, parse_index_expression, parse_index_list, tokenize
from nfgeom.tensor import (DOWN, UP, LinearForm, Tensor, TensorError, check_symmetry,
                           define_tensor, raise_lower)

T3 = Tower(3)


def ix(text):
    return parse_index_expression(Cursor(tokenize(text)))


def target(text):
    return parse_index_list(Cursor(tokenize(text)))


def from_array(name, sig, arr):
    t = Tensor(name, sig, arr.shape[0])
    for key in itertools.product(range(arr.shape[0]), repeat=arr.ndim):
        t[tuple(k + 1 for k in key)] = T3.const(int(arr[key]))
    return t


def to_array(t):
    arr = np.zeros((t.dim,) * t.rank, dtype=object)
    for key, v in t.components.items():
        arr[tuple(k - 1 for k in key)] = v.constant_value()
    return arr


arrays = lambda rank: st.lists(st.integers(-3, 3), min_size=3 ** rank, max_size=3 ** rank).map(
    lambda xs: np.array(xs, dtype=np.int64).reshape((3,) * rank))


@given(arrays(2), arrays(3))
def test_contraction_matches_einsum(a, b):
    reg = {"A": from_array("A", (UP, DOWN), a), "B": from_array("B", (UP, DOWN, DOWN), b)}
    c = define_tensor("C", target("[i,-k,-l]"), ix("A[i,-j]*B[j,-k,-l]"), reg, T3)
    assert (to_array(c) == np.einsum("ij,jkl->ikl", a, b)).all()


@given(arrays(2), arrays(2))
def test_sums_and_coefficients(a, b):
    reg = {"A": from_array("A", (UP, DOWN), a), "B": from_array("B", (UP, DOWN), b)}
    c = define_tensor("C", target("[i,-j]"), ix("2*A[i,-j] - (1/2)*B[i,-j]"), reg, T3)
    want = 2 * a.astype(object) - b.astype(object) * Fraction(1, 2)
    assert (to_array(c) == want).all()


def test_unknown_vector_gives_linear_forms():
    a = np.arange(27).reshape(3, 3, 3) - 13
    reg = {"R": from_array("R", (UP, DOWN, DOWN), a)}
    t = define_tensor("RW", target("[i,-k]"), ix("R[i,-j,-k]*W[j]"), reg, T3)
    v = t[(1, 2)]
    assert isinstance(v, LinearForm) and v.unknown == "W"
    assert [c.constant_value() for c in v.coeffs] == [a[0, j, 1] for j in range(3)]


@pytest.mark.parametrize("lhs, rhs", [
    ("[i,-j]", "A[i,-k]"),          # free letters differ
    ("[i]", "A[i,-j]*A[j,-j]"),     # letter used three times
    ("[i,-j]", "Q[i,-k]*A[k,-j]"),  # unknown rank-2 tensor
])
def test_static_errors(lhs, rhs):
    reg = {"A": from_array("A", (UP, DOWN), np.eye(3, dtype=np.int64))}
    with pytest.raises(TensorError):
        define_tensor("C", target(lhs), ix(rhs), reg, T3)


def test_raise_lower_round_trip():
    y = T3.y
    g = Tensor("g", (DOWN, DOWN), 3)
    gi = Tensor("ginv", (UP, UP), 3)
    diag = [1 + y(1) ** 2, 2 + y(2) ** 2, T3.const(3)]
    for i, d in enumerate(diag, 1):
        g[(i, i)] = d
        gi[(i, i)] = d.inverse()
    v = Tensor("v", (UP, DOWN), 3, {(1, 2): y(3), (3, 1): T3.x(1)})
    down = raise_lower(v, 0, g)
    assert down.signature == (DOWN, DOWN)
    back = raise_lower(down, 0, gi)
    assert set(back.components) == set(v.components)
    assert all(back[k] == v[k] for k in v.components)
    with pytest.raises(TensorError):
        raise_lower(v, 0, gi)


def test_symmetry_checks():
    s = Tensor("S", (DOWN, DOWN), 3, {(1, 2): T3.y(1), (2, 1): T3.y(1)})
    assert check_symmetry(s, [1, 0], 1)
    assert not check_symmetry(s, [1, 0], -1)
    with pytest.raises(TensorError):
        check_symmetry(Tensor("M", (UP, DOWN), 3), [1, 0], 1)


def test_sparse_storage_drops_zeros():
    t = Tensor("Z", (UP,), 3, {(1,): T3.const(0), (2,): T3.y(2) - T3.y(2)})
    assert t.components == {}
    assert t.get((1,), T3).is_zero()
