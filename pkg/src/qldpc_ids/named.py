"""Pinned code instances used by the tests, demos and CLI.

The literature matrices behind these parameters are not all public, so the
bicycle and HP instances are our own draws with the same parameters.
"""

from __future__ import annotations

from functools import lru_cache

from .codes import CssCode, make_bicycle, make_generalized_bicycle, make_hypergraph_product
from .gf2 import SparseBinaryMatrix

HAMMING_7_4 = SparseBinaryMatrix.from_rows(7, [[0, 1, 2, 4], [1, 2, 3, 5], [0, 1, 3, 6]])

# (3,4)-regular [16,4,6] code: full rank, fewest 4-cycles among the d=6 draws we tried
CODE_16_4_6 = SparseBinaryMatrix.from_rows(
    16,
    [
        [1, 8, 10, 15], [1, 4, 6, 9], [4, 7, 8, 12], [0, 7, 11, 15],
        [3, 6, 7, 10], [0, 2, 12, 13], [5, 6, 11, 15], [2, 5, 10, 14],
        [0, 5, 8, 9], [4, 9, 13, 14], [1, 3, 11, 12], [2, 3, 13, 14],
    ],
)

GB_126_A = (0, 1, 14, 16, 22)
GB_126_B = (0, 3, 13, 20, 42)

BICYCLE_256_ROW_WEIGHT = 16
BICYCLE_256_SEED = 1


@lru_cache(maxsize=None)
def steane() -> CssCode:
    return CssCode(HAMMING_7_4, HAMMING_7_4, label="steane", d=3)


@lru_cache(maxsize=None)
def bicycle_256_32() -> CssCode:
    code = make_bicycle(256, BICYCLE_256_ROW_WEIGHT, 112, seed=BICYCLE_256_SEED, full_rank=True)
    code.label = "bicycle-256-32"
    return code


@lru_cache(maxsize=None)
def gb_126_28() -> CssCode:
    code = make_generalized_bicycle(GB_126_A, GB_126_B, 63)
    code.label, code.d = "gb-126-28", 8
    return code


@lru_cache(maxsize=None)
def hp_400_16() -> CssCode:
    code = make_hypergraph_product(CODE_16_4_6, CODE_16_4_6)
    code.label, code.d = "hp-400-16", 6
    return code


NAMED_CODES = {
    "steane": steane,
    "bicycle-256-32": bicycle_256_32,
    "gb-126-28": gb_126_28,
    "hp-400-16": hp_400_16,
}
