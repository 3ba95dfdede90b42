"""Exact arithmetic, Galois analysis and vanishing-sum search for cyclotomic integers."""
from .core import (
    BudgetError,
    CycElement,
    CycloError,
    InvalidOrderError,
    NotAUnitError,
    PreconditionError,
    RootOfUnity,
    SumOfRoots,
    cyclotomic_polynomial,
    format_sum,
    galois_apply,
    make_root,
    normalize_modulus,
    parse_sum,
    sum_to_element,
)
from .galois import ConductorReport, UnitSubgroup, conductor, index_at_conductor, stabilizer, subgroup_generated
from .vanishing import CanonicalMVS, MVSAtlas, canonicalize, enumerate_mvs, is_minimal_vanishing, is_vanishing

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "CanonicalMVS",
    "ConductorReport",
    "CycElement",
    "CycloError",
    "InvalidOrderError",
    "MVSAtlas",
    "NotAUnitError",
    "PreconditionError",
    "RootOfUnity",
    "SumOfRoots",
    "UnitSubgroup",
    "canonicalize",
    "conductor",
    "cyclotomic_polynomial",
    "enumerate_mvs",
    "format_sum",
    "galois_apply",
    "index_at_conductor",
    "is_minimal_vanishing",
    "is_vanishing",
    "make_root",
    "normalize_modulus",
    "parse_sum",
    "stabilizer",
    "subgroup_generated",
    "sum_to_element",
]
