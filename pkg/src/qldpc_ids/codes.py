"""CSS code containers and constructions (bicycle, generalized bicycle, HP)."""

from __future__ import annotations

import hashlib
import os
from functools import cached_property
from typing import Sequence

import numpy as np

from .gf2 import DimensionError, SparseBinaryMatrix, rank_mod2, read_alist


class OrthogonalityError(ValueError):
    """H_X and H_Z do not commute: some row pair has odd overlap."""


class CssCode:
    """A CSS code given by its two parity-check matrices.

    X errors are decoded against ``h_z``; two X errors are equivalent when they
    differ by an element of the row space of ``h_x``.
    """

    def __init__(
        self,
        h_x: SparseBinaryMatrix,
        h_z: SparseBinaryMatrix,
        label: str = "",
        d: int | None = None,
        meta: dict | None = None,
    ):
        if h_x.n_cols != h_z.n_cols:
            raise DimensionError(f"h_x has {h_x.n_cols} columns but h_z has {h_z.n_cols}")
        self.h_x = h_x
        self.h_z = h_z
        self.label = label
        self.d = d
        self.meta = dict(meta or {})
        bad = first_non_orthogonal_pair(h_x, h_z)
        if bad is not None:
            raise OrthogonalityError(
                f"row {bad[0]} of h_x and row {bad[1]} of h_z have odd overlap"
            )

    @property
    def n(self) -> int:
        return self.h_x.n_cols

    @cached_property
    def k(self) -> int:
        return self.n - rank_mod2(self.h_x) - rank_mod2(self.h_z)

    @cached_property
    def tanner(self):
        """Flat Tanner-graph arrays of ``h_z`` used by every decoder."""
        from .kernels import TannerGraph

        return TannerGraph.from_matrix(self.h_z)

    @cached_property
    def fingerprint(self) -> str:
        h = hashlib.sha256()
        for mat in (self.h_x, self.h_z):
            h.update(f"{mat.n_rows}x{mat.n_cols};".encode())
            for r in mat.row_support:
                h.update((",".join(map(str, r)) + ";").encode())
        return h.hexdigest()[:12]

    def __repr__(self) -> str:
        d = f",{self.d}" if self.d is not None else ""
        name = f" {self.label}" if self.label else ""
        return f"CssCode{name} [[{self.n},{self.k}{d}]]"


def first_non_orthogonal_pair(h_x: SparseBinaryMatrix, h_z: SparseBinaryMatrix):
    """Return the first ``(i, j)`` with odd ``|row_i(h_x) & row_j(h_z)|``, or None."""
    if h_x.n_rows == 0 or h_z.n_rows == 0:
        return None
    prod = (h_x.to_dense().astype(np.int64) @ h_z.to_dense().T.astype(np.int64)) & 1
    bad = np.argwhere(prod)
    if bad.size == 0:
        return None
    return int(bad[0, 0]), int(bad[0, 1])


def circulant(exponents: Sequence[int], size: int) -> np.ndarray:
    """Dense circulant whose row ``i`` has ones at ``(i + e) % size``."""
    a = np.zeros((size, size), dtype=np.uint8)
    rows = np.arange(size)
    for e in exponents:
        a[rows, (rows + e) % size] ^= 1
    return a


def _deletion_order(h: np.ndarray, n_delete: int) -> list[int]:
    # greedy: drop the row leaving the least column-weight variance; lowest index on ties
    w = h.sum(axis=0).astype(np.int64)
    alive = list(range(h.shape[0]))
    dropped = []
    for _ in range(n_delete):
        best, best_var = None, None
        for r in alive:
            var = float(np.var(w - h[r]))
            if best_var is None or var < best_var - 1e-12:
                best, best_var = r, var
        dropped.append(best)
        alive.remove(best)
        w -= h[best]
    return dropped


def make_bicycle(
    n: int,
    row_weight: int,
    rows_kept: int,
    seed: int,
    max_retries: int = 200,
    full_rank: bool = False,
) -> CssCode:
    """MacKay bicycle code ``H = [C | C^T]`` with some rows deleted.

    ``C`` is a random ``n/2`` circulant of row weight ``row_weight/2``. Rows are
    removed greedily to keep column weights as even as possible. With
    ``full_rank`` set, draws whose kept rows are linearly dependent are
    rejected, so ``k == n - 2*rows_kept``.
    """
    if n <= 0 or n % 2:
        raise ValueError("n must be a positive even number")
    half = n // 2
    if row_weight <= 0 or row_weight % 2 or row_weight > half:
        raise ValueError("row_weight must be even and at most n/2")
    if not 0 < rows_kept <= half:
        raise ValueError("rows_kept must be in 1..n/2")

    for attempt in range(max_retries):
        rng = np.random.default_rng(np.random.SeedSequence([seed, attempt]))
        exps = np.sort(rng.choice(half, size=row_weight // 2, replace=False))
        c = circulant(exps.tolist(), half)
        h = np.hstack([c, c.T])
        h = np.delete(h, _deletion_order(h, half - rows_kept), axis=0)
        mat = SparseBinaryMatrix.from_dense(h)
        try:
            code = CssCode(mat, mat, label=f"bicycle-{n}")
        except OrthogonalityError:
            continue
        if full_rank and rank_mod2(mat) != rows_kept:
            continue
        code.meta.update(
            construction="bicycle",
            seed=seed,
            attempt=attempt,
            circulant_exponents=exps.tolist(),
            row_weight=row_weight,
            rows_kept=rows_kept,
        )
        return code
    raise RuntimeError(f"no valid bicycle code after {max_retries} draws")


def make_generalized_bicycle(
    a_exps: Sequence[int], b_exps: Sequence[int], block_size: int
) -> CssCode:
    """GB code ``H_X = [A | B]``, ``H_Z = [B^T | A^T]`` from two circulants."""
    for e in list(a_exps) + list(b_exps):
        if not 0 <= e < block_size:
            raise ValueError(f"exponent {e} outside 0..{block_size - 1}")
    a = circulant(a_exps, block_size)
    b = circulant(b_exps, block_size)
    h_x = SparseBinaryMatrix.from_dense(np.hstack([a, b]))
    h_z = SparseBinaryMatrix.from_dense(np.hstack([b.T, a.T]))
    code = CssCode(h_x, h_z, label=f"gb-{2 * block_size}")
    code.meta.update(
        construction="generalized_bicycle",
        a_exponents=list(a_exps),
        b_exponents=list(b_exps),
        block_size=block_size,
    )
    return code


def make_hypergraph_product(h1: SparseBinaryMatrix, h2: SparseBinaryMatrix) -> CssCode:
    """Tillich-Zemor product: ``H_X = [H1 x I | I x H2^T]``, ``H_Z = [I x H2 | H1^T x I]``."""
    a1, a2 = h1.to_dense().astype(np.int64), h2.to_dense().astype(np.int64)
    m1, n1 = a1.shape
    m2, n2 = a2.shape
    h_x = np.hstack([np.kron(a1, np.eye(n2, dtype=np.int64)), np.kron(np.eye(m1, dtype=np.int64), a2.T)])
    h_z = np.hstack([np.kron(np.eye(n1, dtype=np.int64), a2), np.kron(a1.T, np.eye(m2, dtype=np.int64))])
    code = CssCode(
        SparseBinaryMatrix.from_dense(h_x),
        SparseBinaryMatrix.from_dense(h_z),
        label=f"hp-{n1 * n2 + m1 * m2}",
    )
    code.meta.update(construction="hypergraph_product")
    return code


def load_code(path_x: str | os.PathLike, path_z: str | os.PathLike, label: str = "") -> CssCode:
    code = CssCode(read_alist(path_x), read_alist(path_z), label=label or os.path.basename(str(path_z)))
    code.meta.update(construction="alist", path_x=str(path_x), path_z=str(path_z))
    return code
