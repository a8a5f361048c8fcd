"""Constant-free generalized polynomials with certified interval evaluation."""
from __future__ import annotations

from .evaluate import (
    DEFAULT_PRECISION,
    MAX_PRECISION,
    ScanResult,
    evaluate,
    fs_intersection_check,
    nearest_int_distance,
    return_set_scan,
)
from .expr import Add, Atom, Const, Frac, GenPolyExpr, LinearForm, Mul, depth, parse, pretty
from .intervals import IntervalValue

eval = evaluate  # noqa: A001 - the documented operation name

__all__ = [
    "Add",
    "Atom",
    "Const",
    "DEFAULT_PRECISION",
    "Frac",
    "GenPolyExpr",
    "IntervalValue",
    "LinearForm",
    "MAX_PRECISION",
    "Mul",
    "ScanResult",
    "depth",
    "eval",
    "evaluate",
    "fs_intersection_check",
    "nearest_int_distance",
    "parse",
    "pretty",
    "return_set_scan",
]
