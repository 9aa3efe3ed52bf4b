"""Randomized rank-revealing UTV factorization.

A = U T V' with orthogonal U, V and an upper trapezoidal T whose diagonal
tracks the singular values.  The `factorize` entry point runs either the
blocked reference driver or the task-parallel tiled driver; both preserve
the spectrum to machine precision and are deterministic for a fixed seed.
"""

from ._randutv import (
    analyze_transcript,
    factorize,
    layout_map,
    make_test_matrix,
    scaled_time,
    singular_values,
    svd,
)

__version__ = "0.1.0"

__all__ = [
    "analyze_transcript",
    "factorize",
    "layout_map",
    "make_test_matrix",
    "scaled_time",
    "singular_values",
    "svd",
]
