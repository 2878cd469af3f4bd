import pytest
from hypothesis import given, strategies as st

from nfgeom.finsler import FinslerSpace, Geometry, HorizontalField
from nfgeom.kernel import Tower
from nfgeom.nullity import (NONZERO, ZERO, Assumption, LinearSystem, SolutionBranch,
                            SolverError, build_system, compare, integrability_report,
                            membership, solve_branches, solve_nullity)
from nfgeom.oracle import rank_check

from strategies import random_system

T = Tower(2)
y, x = T.y, T.x
zero, one = T.const(0), T.const(1)


def h(*cs):
    return HorizontalField(tuple(T.const(c) if isinstance(c, int) else c for c in cs))


def test_single_row_generic():
    (b,) = solve_branches(LinearSystem(2, [(y(1), y(2))], T), [Assumption(y(1), NONZERO)])
    assert b.rank == 1
    assert all(r.is_zero() for r in LinearSystem(2, [(y(1), y(2))], T).residual(b.basis[0].comps))


def test_split_on_undecided_pivot():
    sys = LinearSystem(2, [(y(2), zero)], T)
    br = solve_branches(sys, [], split_depth=1)
    ranks = sorted((b.rank, bool(b.zero_assumptions())) for b in br)
    assert ranks == [(1, False), (2, True)]
    (flat,) = [b for b in br if b.zero_assumptions()]
    assert flat.zero_assumptions()[0].relation == ZERO


def test_split_depth_zero_marks_incomplete():
    br = solve_branches(LinearSystem(2, [(y(2), zero)], T), [], split_depth=0)
    assert len(br) == 1 and br[0].rank == 1


def test_duplicate_and_zero_rows_removed():
    sys = LinearSystem(2, [(y(1), y(2)), (zero, zero), (y(1), y(2))], T)
    assert len(sys.rows) == 1


def test_membership_and_compare():
    (a,) = solve_branches(LinearSystem(2, [(zero, one)], T), [])       # span{h1}
    (b,) = solve_branches(LinearSystem(2, [(zero, zero)], T), [])      # everything
    assert membership(h(y(1), 0), a)[0]
    assert not membership(h(0, 1), a)[0]
    assert compare(a, b) == "strict_sub"
    assert compare(b, a) == "strict_super"
    assert compare(a, a) == "equal"
    (c,) = solve_branches(LinearSystem(2, [(one, zero)], T), [])       # span{h2}
    assert compare(a, c) == "incomparable"


def test_build_system_slot_checks():
    from nfgeom.tensor import DOWN, UP, Tensor
    t = Tensor("R", (UP, DOWN, DOWN), 2, {(1, 1, 2): y(1), (1, 2, 1): -y(1)})
    with pytest.raises(SolverError):
        build_system(t, 0)
    rows = build_system(t, 2).rows
    assert len(rows) == 2


@pytest.mark.parametrize("seed", range(15))
def test_random_systems_sound(seed):
    sys = random_system(seed)
    for b in solve_branches(sys, [], split_depth=2):
        for v in b.basis:
            assert all(r.is_zero() for r in sys.residual(v.comps, b.context))
        assert rank_check(sys, b, count=2, seed=seed).passed


def test_riemannian_bracket_is_involutive():
    # flat metric: every horizontal distribution is integrable
    space = FinslerSpace(T, y(1) ** 2 + y(2) ** 2, [])
    g = Geometry(space)
    (b,) = solve_nullity(g.RB, [], tower=T)
    assert b.rank == 2
    assert integrability_report(b, g).involutive
