"""Sparse GF(2) matrices, row reduction and the alist file format.

A :class:`SparseBinaryMatrix` keeps both the row and the column adjacency of
its nonzero entries, which is exactly the Tanner graph view the decoders need.
Row reduction works on a dense copy where every row is packed into a Python
integer, so XOR of two rows is a single big-int operation.
"""

from __future__ import annotations

import os
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class DimensionError(ValueError):
    """Raised when a vector or matrix has the wrong shape for an operation."""


class SparseBinaryMatrix:
    """Binary matrix stored as sorted row and column supports.

    Instances are treated as immutable once built. Use :meth:`from_dense`,
    :meth:`from_rows` or :func:`read_alist` rather than the constructor when
    the column supports are not already at hand.
    """

    def __init__(
        self,
        n_rows: int,
        n_cols: int,
        row_support: Sequence[Sequence[int]],
        col_support: Sequence[Sequence[int]] | None = None,
    ):
        self.n_rows = int(n_rows)
        self.n_cols = int(n_cols)
        if len(row_support) != self.n_rows:
            raise DimensionError(f"expected {self.n_rows} rows, got {len(row_support)}")
        rows = []
        for i, r in enumerate(row_support):
            r = tuple(int(j) for j in r)
            if any(b <= a for a, b in zip(r, r[1:])):
                raise ValueError(f"row {i} support is not strictly increasing: {r}")
            if r and (r[0] < 0 or r[-1] >= self.n_cols):
                raise ValueError(f"row {i} has a column index out of range")
            rows.append(r)
        self.row_support: tuple[tuple[int, ...], ...] = tuple(rows)

        cols: list[list[int]] = [[] for _ in range(self.n_cols)]
        for i, r in enumerate(self.row_support):
            for j in r:
                cols[j].append(i)
        derived = tuple(tuple(c) for c in cols)
        if col_support is not None:
            given = tuple(tuple(int(i) for i in c) for c in col_support)
            if given != derived:
                raise ValueError("row and column supports describe different matrices")
        self.col_support: tuple[tuple[int, ...], ...] = derived

    @classmethod
    def from_dense(cls, a) -> "SparseBinaryMatrix":
        a = np.asarray(a)
        if a.ndim != 2:
            raise DimensionError("expected a 2-d array")
        a = a.astype(np.int64) % 2
        rows = [np.flatnonzero(row).tolist() for row in a]
        return cls(a.shape[0], a.shape[1], rows)

    @classmethod
    def from_rows(cls, n_cols: int, rows: Iterable[Iterable[int]]) -> "SparseBinaryMatrix":
        rows = [sorted(set(int(j) for j in r)) for r in rows]
        return cls(len(rows), n_cols, rows)

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        for i, r in enumerate(self.row_support):
            a[i, list(r)] = 1
        return a

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.row_support)

    def row_weights(self) -> np.ndarray:
        return np.array([len(r) for r in self.row_support], dtype=np.int64)

    def col_weights(self) -> np.ndarray:
        return np.array([len(c) for c in self.col_support], dtype=np.int64)

    def transpose(self) -> "SparseBinaryMatrix":
        return SparseBinaryMatrix(self.n_cols, self.n_rows, self.col_support, self.row_support)

    def delete_rows(self, rows: Iterable[int]) -> "SparseBinaryMatrix":
        drop = set(rows)
        kept = [r for i, r in enumerate(self.row_support) if i not in drop]
        return SparseBinaryMatrix(len(kept), self.n_cols, kept)

    @cached_property
    def packed_rows(self) -> tuple[int, ...]:
        """Rows as Python integers, bit ``j`` set iff column ``j`` is nonzero."""
        return tuple(sum(1 << j for j in r) for r in self.row_support)

    @cached_property
    def row_space(self) -> "RowSpace":
        return RowSpace(self.packed_rows, self.n_cols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseBinaryMatrix):
            return NotImplemented
        return self.shape == other.shape and self.row_support == other.row_support

    def __hash__(self) -> int:
        return hash((self.shape, self.row_support))

    def __repr__(self) -> str:
        return f"SparseBinaryMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz})"


def pack_bits(x) -> int:
    """Pack a dense 0/1 vector into an integer (bit ``j`` = entry ``j``)."""
    x = np.asarray(x).astype(np.uint8) & 1
    return int.from_bytes(np.packbits(x, bitorder="little").tobytes(), "little")


def unpack_bits(v: int, length: int) -> np.ndarray:
    raw = v.to_bytes((length + 7) // 8, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:length]


class RowSpace:
    """Echelon basis of the span of a set of packed rows.

    Each basis vector is keyed by its leading (highest) set bit, so membership
    is a single reduction pass.
    """

    def __init__(self, rows: Iterable[int], n_cols: int):
        self.n_cols = n_cols
        self._basis: dict[int, int] = {}
        for r in rows:
            self.add(r)

    def reduce(self, v: int) -> int:
        basis = self._basis
        while v:
            lead = v.bit_length() - 1
            b = basis.get(lead)
            if b is None:
                return v
            v ^= b
        return 0

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        self._basis[v.bit_length() - 1] = v
        return True

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    @property
    def rank(self) -> int:
        return len(self._basis)


def _as_bits(x, length: int, what: str = "vector") -> np.ndarray:
    x = np.asarray(x)
    if x.ndim != 1 or x.shape[0] != length:
        raise DimensionError(f"{what} has shape {x.shape}, expected ({length},)")
    return x.astype(np.uint8) & 1


def mat_vec_mod2(h: SparseBinaryMatrix, x) -> np.ndarray:
    """Return ``h @ x`` over GF(2) as a uint8 vector of length ``h.n_rows``."""
    x = _as_bits(x, h.n_cols)
    out = np.zeros(h.n_rows, dtype=np.uint8)
    for i, r in enumerate(h.row_support):
        if r:
            out[i] = int(x[list(r)].sum()) & 1
    return out


def rank_mod2(h: SparseBinaryMatrix) -> int:
    """GF(2) rank by Gaussian elimination on a packed dense copy."""
    return RowSpace(h.packed_rows, h.n_cols).rank


def in_row_space(h: SparseBinaryMatrix, v) -> bool:
    """True iff ``v`` is a GF(2) combination of the rows of ``h``."""
    v = _as_bits(v, h.n_cols)
    return pack_bits(v) in h.row_space


# -- alist ---------------------------------------------------------------------


def parse_alist(text: str) -> SparseBinaryMatrix:
    """Parse MacKay's alist format.

    Layout: ``N M``, max column/row degree, the N column degrees, the M row
    degrees, then N column index lists and M row index lists (1-based; zero
    entries are padding).
    """
    tokens = text.split()
    try:
        vals = [int(t) for t in tokens]
    except ValueError as exc:
        raise ValueError(f"alist: non-integer token ({exc})") from None
    pos = 0

    def take(k: int) -> list[int]:
        nonlocal pos
        if pos + k > len(vals):
            raise ValueError("alist: unexpected end of data")
        out = vals[pos : pos + k]
        pos += k
        return out

    n_cols, n_rows = take(2)
    max_col_deg, max_row_deg = take(2)
    col_deg = take(n_cols)
    row_deg = take(n_rows)

    cols = []
    for j in range(n_cols):
        # some writers pad every list to the max degree, some do not
        entries = take(col_deg[j])
        while pos < len(vals) and len(entries) < max_col_deg and vals[pos] == 0:
            pos += 1
            entries.append(0)
        cols.append(sorted(i - 1 for i in entries if i > 0))
    rows = []
    for i in range(n_rows):
        entries = take(row_deg[i])
        while pos < len(vals) and len(entries) < max_row_deg and vals[pos] == 0:
            pos += 1
            entries.append(0)
        rows.append(sorted(j - 1 for j in entries if j > 0))

    for j, c in enumerate(cols):
        if len(c) != col_deg[j]:
            raise ValueError(f"alist: column {j} lists {len(c)} entries, degree says {col_deg[j]}")
    for i, r in enumerate(rows):
        if len(r) != row_deg[i]:
            raise ValueError(f"alist: row {i} lists {len(r)} entries, degree says {row_deg[i]}")
    return SparseBinaryMatrix(n_rows, n_cols, rows, cols)


def format_alist(h: SparseBinaryMatrix) -> str:
    """Serialize ``h`` in alist format, zero-padding lists to the max degree."""
    cw, rw = h.col_weights(), h.row_weights()
    max_c = int(cw.max()) if h.n_cols else 0
    max_r = int(rw.max()) if h.n_rows else 0
    lines = [f"{h.n_cols} {h.n_rows}", f"{max_c} {max_r}"]
    lines.append(" ".join(map(str, cw)))
    lines.append(" ".join(map(str, rw)))
    for c in h.col_support:
        lines.append(" ".join(str(i + 1) for i in c) + " 0" * (max_c - len(c)))
    for r in h.row_support:
        lines.append(" ".join(str(j + 1) for j in r) + " 0" * (max_r - len(r)))
    return "\n".join(line.strip() for line in lines) + "\n"


def read_alist(path: str | os.PathLike) -> SparseBinaryMatrix:
    with open(path) as f:
        return parse_alist(f.read())


def write_alist(h: SparseBinaryMatrix, path: str | os.PathLike) -> None:
    with open(path, "w") as f:
        f.write(format_alist(h))
