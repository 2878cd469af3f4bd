"""Exact nullity foliations of Finsler spaces, with a numeric oracle and a small DSL.

The metric is always supplied as F^2 (the squared fundamental function).
"""
from .kernel import Expression, KernelError, PoleError, Tower
from .tensor import DOWN, UP, Tensor, TensorError, define_tensor, raise_lower
from .finsler import FinslerSpace, Geometry, GeometryError, HorizontalField, VerticalField
from .nullity import (Assumption, LinearSystem, SolutionBranch, SolverError, build_system,
                      compare, integrability_report, membership, solve_kernel, solve_nullity)
from .oracle import NumericGeometry, cross_check, numeric_nullspace, numeric_tensor
from .parser import ParseError, parse_expr
from .dsl import DSLError, Session, SessionConfig, parse_script, render_script, run_script
from .examples import run_example

__all__ = [n for n in dir() if not n.startswith("_")]
