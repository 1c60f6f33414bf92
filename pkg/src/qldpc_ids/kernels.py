"""Syndrome-based BP message rules on a flat Tanner graph.

Messages live in arrays indexed by edge (see :class:`TannerGraph`). All LLRs
are clamped to ``[-LLR_CLIP, LLR_CLIP]`` and tanh products to
``1 - 1e-12`` in magnitude, so no update can produce an infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _engine
from ._engine import LLR_CLIP, TANH_CLIP
from .gf2 import DimensionError, SparseBinaryMatrix

__all__ = [
    "LLR_CLIP",
    "TANH_CLIP",
    "TannerGraph",
    "MessageState",
    "prior_llr",
    "c2v_exact",
    "c2v_min_sum",
    "v2c",
    "marginal_and_decide",
    "check_convergence",
    "exact_rule",
    "min_sum_rule",
]


@dataclass(frozen=True, eq=False)
class TannerGraph:
    """CSR view of a parity-check matrix with check-major edge numbering."""

    n_checks: int
    n_vars: int
    chk_ptr: np.ndarray
    edge_var: np.ndarray
    edge_chk: np.ndarray
    var_ptr: np.ndarray
    var_edges: np.ndarray

    @classmethod
    def from_matrix(cls, h: SparseBinaryMatrix) -> "TannerGraph":
        chk_ptr = np.zeros(h.n_rows + 1, dtype=np.int64)
        chk_ptr[1:] = np.cumsum(h.row_weights())
        edge_var = np.fromiter((j for r in h.row_support for j in r), dtype=np.int64, count=h.nnz)
        edge_chk = np.repeat(np.arange(h.n_rows, dtype=np.int64), np.diff(chk_ptr))
        order = np.lexsort((edge_chk, edge_var))  # by variable, then check
        var_ptr = np.zeros(h.n_cols + 1, dtype=np.int64)
        var_ptr[1:] = np.cumsum(np.bincount(edge_var, minlength=h.n_cols))
        return cls(h.n_rows, h.n_cols, chk_ptr, edge_var, edge_chk, var_ptr, order.astype(np.int64))

    @property
    def n_edges(self) -> int:
        return int(self.edge_var.shape[0])

    @property
    def check_degrees(self) -> np.ndarray:
        return np.diff(self.chk_ptr)

    @property
    def var_degrees(self) -> np.ndarray:
        return np.diff(self.var_ptr)

    def check_edges(self, c: int) -> range:
        return range(int(self.chk_ptr[c]), int(self.chk_ptr[c + 1]))

    def var_edge_list(self, v: int) -> np.ndarray:
        return self.var_edges[self.var_ptr[v] : self.var_ptr[v + 1]]

    def edge(self, check: int, var: int) -> int:
        lo, hi = int(self.chk_ptr[check]), int(self.chk_ptr[check + 1])
        pos = lo + int(np.searchsorted(self.edge_var[lo:hi], var))
        if pos >= hi or self.edge_var[pos] != var:
            raise KeyError(f"no edge between check {check} and variable {var}")
        return pos

    def is_regular(self) -> bool:
        return (
            self.n_edges > 0
            and len(set(self.check_degrees.tolist())) == 1
            and len(set(self.var_degrees.tolist())) == 1
        )

    def syndrome(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.uint8)
        if x.shape != (self.n_vars,):
            raise DimensionError(f"vector of shape {x.shape}, expected ({self.n_vars},)")
        out = np.zeros(self.n_checks, dtype=np.uint8)
        np.bitwise_xor.at(out, self.edge_chk, x[self.edge_var])
        return out


def prior_llr(p: float) -> float:
    """``ln((1-p)/p)``, clamped like every other message (so ``p = 0`` is allowed)."""
    if not 0.0 <= p < 0.5:
        raise ValueError(f"channel probability must lie in [0, 0.5), got {p}")
    if p == 0.0:
        return LLR_CLIP
    return min(math.log((1.0 - p) / p), LLR_CLIP)


@dataclass
class MessageState:
    """Edge messages of one decode. ``v2c`` starts at the prior, ``c2v`` at zero."""

    graph: TannerGraph
    l0: float
    v2c: np.ndarray
    c2v: np.ndarray
    llr_marginal: np.ndarray
    e_hat: np.ndarray
    iteration: int = 0

    @classmethod
    def initial(cls, graph: TannerGraph, p: float) -> "MessageState":
        l0 = prior_llr(p)
        return cls(
            graph,
            l0,
            v2c=np.full(graph.n_edges, l0),
            c2v=np.zeros(graph.n_edges),
            llr_marginal=np.full(graph.n_vars, l0),
            e_hat=np.zeros(graph.n_vars, dtype=np.uint8),
        )


def _sign(s_i) -> float:
    return -1.0 if int(s_i) & 1 else 1.0


def exact_rule(inbound, s_i: int = 0) -> float:
    """Tanh-rule C2V value given the other inbound V2C LLRs of the check."""
    return float(_engine.exact_rule(np.asarray(inbound, dtype=np.float64), _sign(s_i)))


def min_sum_rule(inbound, s_i: int = 0) -> float:
    return float(_engine.min_sum_rule(np.asarray(inbound, dtype=np.float64), _sign(s_i)))


def c2v_exact(state: MessageState, s_i: int, check: int, var: int) -> float:
    """``(-1)^s_i * 2 atanh(prod tanh(L/2))`` over the other variables of ``check``."""
    g = state.graph
    e = g.edge(check, var)
    return float(_engine.exact_edge(e, check, g.chk_ptr, state.v2c, _sign(s_i)))


def c2v_min_sum(state: MessageState, s_i: int, check: int, var: int) -> float:
    g = state.graph
    e = g.edge(check, var)
    return float(_engine.min_sum_edge(e, check, g.chk_ptr, state.v2c, _sign(s_i)))


def v2c(state: MessageState, var: int, check: int) -> float:
    """Prior plus every C2V into ``var`` except the one from ``check``."""
    g = state.graph
    e = g.edge(check, var)
    return float(_engine.v2c_edge(e, var, g.var_ptr, g.var_edges, state.c2v, state.l0))


def marginal_and_decide(state: MessageState) -> tuple[np.ndarray, np.ndarray]:
    """Refresh the marginals and hard decision; a zero marginal decides 1."""
    g = state.graph
    _engine.decide(g.var_ptr, g.var_edges, state.c2v, state.l0, state.llr_marginal, state.e_hat)
    return state.llr_marginal, state.e_hat


def check_convergence(code_or_graph, state_or_ehat, s) -> bool:
    """True iff the hard decision reproduces the syndrome ``s``."""
    g = code_or_graph.tanner if hasattr(code_or_graph, "tanner") else code_or_graph
    e_hat = state_or_ehat.e_hat if isinstance(state_or_ehat, MessageState) else state_or_ehat
    s = np.asarray(s, dtype=np.uint8)
    if s.shape != (g.n_checks,):
        raise DimensionError(f"syndrome of shape {s.shape}, expected ({g.n_checks},)")
    return bool(_engine.syndrome_matches(np.asarray(e_hat, dtype=np.uint8), s, g.chk_ptr, g.edge_var))
