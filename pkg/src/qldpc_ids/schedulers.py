"""Fixed (flooding, layered) and residual-driven (sRBP family) schedules.

The residual schedules share three steps: pick the max-residual edge of the
current pool and send its exact C2V (its residual drops to zero), propagate
the new information out of the receiving variable and refresh the min-sum
residuals of the touched checks, then build the next pool. They differ only
in the pool. One iteration is ``E`` C2V updates; convergence is tested at
iteration boundaries only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import _engine
from .gf2 import DimensionError
from .kernels import MessageState, TannerGraph, prior_llr

COUNTER_NAMES = ("c2v", "v2c", "precomp", "comparisons")


@dataclass
class OpCounters:
    """Operation counts, one row per completed iteration.

    Columns follow :data:`COUNTER_NAMES`. Work done once before the first
    selection (the min-sum pass that seeds the residual table, and the
    global scan that bootstraps LMD-sRBP) is kept apart in the ``init_*``
    fields so per-iteration rows stay comparable. ``rebases`` counts how
    often a stalled residual table was re-anchored on the exact messages.
    """

    per_iteration: np.ndarray = field(default_factory=lambda: np.zeros((0, 4), dtype=np.int64))
    init_precomputations: int = 0
    init_comparisons: int = 0
    rebases: int = 0

    @property
    def totals(self) -> np.ndarray:
        return self.per_iteration.sum(axis=0)

    @property
    def c2v_updates(self) -> int:
        return int(self.totals[0])

    @property
    def v2c_updates(self) -> int:
        return int(self.totals[1])

    @property
    def pre_computations(self) -> int:
        return int(self.totals[2])

    @property
    def residual_comparisons(self) -> int:
        return int(self.totals[3])

    def extend(self, other: "OpCounters") -> None:
        self.per_iteration = np.vstack([self.per_iteration, other.per_iteration])
        self.init_precomputations += other.init_precomputations
        self.init_comparisons += other.init_comparisons
        self.rebases += other.rebases

    def grand_totals(self) -> np.ndarray:
        """Totals including the one-off initialisation work."""
        t = self.totals.copy()
        t[2] += self.init_precomputations
        t[3] += self.init_comparisons
        return t


@dataclass
class DecodeOutcome:
    converged: bool
    e_hat: np.ndarray
    iterations: int
    counters: OpCounters
    decoder: str = ""
    llr_marginal: np.ndarray | None = None
    failure_class: object = None  # FailureClass, filled in once the true error is known
    trial: int | None = None
    reduced_position: int | None = None


RESIDUAL_MODES = ("minsum", "exact")


@dataclass
class ResidualTable:
    """Residual bookkeeping of one decode.

    ``reference`` is what the min-sum pre-computation is compared against:
    in ``"minsum"`` mode it holds the min-sum value each edge had when it was
    last sent (zero before that); in ``"exact"`` mode it is the message
    array ``c2v`` itself.
    """

    residual: np.ndarray
    pre_computed: np.ndarray
    reference: np.ndarray
    mode: str = "minsum"

    @classmethod
    def empty(cls, state: MessageState, mode: str = "minsum") -> "ResidualTable":
        if mode not in RESIDUAL_MODES:
            raise ValueError(f"unknown residual mode {mode!r}")
        e = state.graph.n_edges
        ref = np.zeros(e) if mode == "minsum" else state.c2v
        return cls(np.zeros(e), np.zeros(e), ref, mode)


def _graph(code) -> TannerGraph:
    return code if isinstance(code, TannerGraph) else code.tanner


def _syndrome(g: TannerGraph, s) -> np.ndarray:
    s = np.asarray(s, dtype=np.uint8)
    if s.shape != (g.n_checks,):
        raise DimensionError(f"syndrome of shape {s.shape}, expected ({g.n_checks},)")
    return s


def tie_keys(n_edges: int, tie_break: str = "lex", tie_seed: int | None = None) -> np.ndarray:
    """Priority among equal residuals: lower key wins.

    ``"lex"`` keeps the deterministic (check, variable) order; ``"random"``
    draws a seeded permutation instead.
    """
    if tie_break == "lex":
        return np.arange(n_edges, dtype=np.int64)
    if tie_break == "random":
        return np.random.default_rng(tie_seed).permutation(n_edges).astype(np.int64)
    raise ValueError(f"unknown tie_break {tie_break!r}")


def _fixed(code, s, p, i_max, layered, name) -> DecodeOutcome:
    g = _graph(code)
    s = _syndrome(g, s)
    st = MessageState.initial(g, p)
    counters = np.zeros((max(i_max, 1), 4), dtype=np.int64)
    converged, iters = _engine.run_fixed(
        g.chk_ptr, g.edge_var, g.edge_chk, g.var_ptr, g.var_edges, s, st.l0, int(i_max), layered,
        st.v2c, st.c2v, st.llr_marginal, st.e_hat, counters,
    )
    return DecodeOutcome(
        bool(converged), st.e_hat, int(iters), OpCounters(counters[:iters].copy()), name,
        llr_marginal=st.llr_marginal,
    )


def decode_flooding(code, s, p: float, i_max: int = 90) -> DecodeOutcome:
    """Flooding sBP: all C2V messages, then all V2C messages, per iteration."""
    return _fixed(code, s, p, i_max, False, "sbp")


def decode_layered(code, s, p: float, i_max: int = 90) -> DecodeOutcome:
    """Layered sBP with one check per layer, in ascending check order."""
    return _fixed(code, s, p, i_max, True, "slbp")


def run_residual_schedule(
    code,
    s,
    p: float,
    i_max: int,
    policy: int,
    tie_break: str = "lex",
    tie_seed: int | None = None,
    residual_mode: str = "minsum",
    name: str = "",
) -> tuple[DecodeOutcome, MessageState, ResidualTable]:
    """Run one residual schedule from a fresh state; also return the final state."""
    g = _graph(code)
    s = _syndrome(g, s)
    st = MessageState.initial(g, p)
    table = ResidualTable.empty(st, residual_mode)
    flags = np.zeros(g.n_edges, dtype=np.uint8)
    flag_count = np.zeros(g.n_vars, dtype=np.int64)
    counters = np.zeros((max(i_max, 1), 4), dtype=np.int64)
    key = tie_keys(g.n_edges, tie_break, tie_seed)
    converged, iters, n_init, n_init_cmp, rebases = _engine.run_residual(
        g.chk_ptr, g.edge_var, g.edge_chk, g.var_ptr, g.var_edges, s, st.l0, int(i_max), policy,
        key, st.v2c, st.c2v, table.reference, residual_mode == "minsum", st.llr_marginal, st.e_hat,
        table.pre_computed, table.residual, flags, flag_count, counters,
    )
    st.iteration = int(iters)
    ops = OpCounters(counters[:iters].copy(), int(n_init), int(n_init_cmp), int(rebases))
    out = DecodeOutcome(bool(converged), st.e_hat, int(iters), ops, name, llr_marginal=st.llr_marginal)
    return out, st, table


def decode_srbp(code, s, p: float, i_max: int = 90, **opts) -> DecodeOutcome:
    """sRBP: every selection scans all ``E`` edges.

    ``opts`` go to :func:`run_residual_schedule` (``tie_break``,
    ``tie_seed``, ``residual_mode``); the same holds for the other
    residual decoders.
    """
    return run_residual_schedule(code, s, p, i_max, _engine.SRBP, name="srbp", **opts)[0]


def decode_nw_srbp(code, s, p: float, i_max: int = 90, **opts) -> DecodeOutcome:
    """Node-wise sRBP: the winning check sends all of its C2V messages at once."""
    return run_residual_schedule(code, s, p, i_max, _engine.NW_SRBP, name="nw-srbp", **opts)[0]


def decode_lmd_srbp(code, s, p: float, i_max: int = 90, **opts) -> DecodeOutcome:
    """Latest-message-driven sRBP.

    After the first (global) pick, the next receiving variable is the
    endpoint of the best edge leaving the checks just refreshed, and the
    sending check is the best one among that variable's edges. Falls back to
    the global pool when that intermediate pool is empty.
    """
    return run_residual_schedule(code, s, p, i_max, _engine.LMD_SRBP, name="lmd-srbp", **opts)[0]


# -- single-step API -----------------------------------------------------------


def init_residual_table(state: MessageState, s, mode: str = "minsum") -> ResidualTable:
    """Residuals before any C2V has been sent: ``|min-sum value - 0|``."""
    g = state.graph
    s = _syndrome(g, s)
    table = ResidualTable.empty(state, mode)
    _engine.init_residuals(
        g.chk_ptr, g.edge_var, state.v2c, table.reference, _engine._signs(s), table.pre_computed,
        table.residual, np.zeros(1, dtype=np.int64),
    )
    return table


def select_max_edge(
    pool: Iterable, table: ResidualTable, graph: TannerGraph, key: np.ndarray | None = None
) -> tuple[int, int]:
    """Return ``(check, var)`` of the largest residual in ``pool``.

    ``pool`` holds edge indices or ``(check, var)`` pairs. Ties go to the
    smaller check, then the smaller variable (or to the smaller ``key``).
    """
    edges = [graph.edge(*e) if isinstance(e, tuple) else int(e) for e in pool]
    if not edges:
        raise ValueError("empty edge pool")
    if key is None:
        key = np.arange(graph.n_edges)
    best = edges[0]
    for e in edges[1:]:
        if _engine.better(e, best, table.residual, key):
            best = e
    return int(graph.edge_chk[best]), int(graph.edge_var[best])


def update_edge(state: MessageState, table: ResidualTable, s, c_max: int, v_max: int) -> float:
    """Send the exact C2V ``c_max -> v_max`` and zero its residual."""
    g = state.graph
    e = g.edge(c_max, v_max)
    sgn = -1.0 if int(s[c_max]) & 1 else 1.0
    state.c2v[e] = _engine.exact_edge(e, c_max, g.chk_ptr, state.v2c, sgn)
    if table.mode == "minsum":
        table.reference[e] = table.pre_computed[e]
    table.residual[e] = 0.0
    return float(state.c2v[e])


def propagate_and_refresh(
    state: MessageState, table: ResidualTable, s, c_max: int, v_max: int
) -> tuple[int, int]:
    """Recompute V2C out of ``v_max`` and refresh residuals of the touched checks.

    Returns ``(v2c_updates, pre_computations)``.
    """
    g = state.graph
    s = _syndrome(g, s)
    a, b = _engine.propagate(
        v_max, c_max, g.chk_ptr, g.edge_var, g.edge_chk, g.var_ptr, g.var_edges, state.v2c,
        state.c2v, table.reference, _engine._signs(s), state.l0, table.pre_computed,
        table.residual, np.zeros(1, dtype=np.int64),
    )
    return int(a), int(b)


def rebase_if_stalled(state: MessageState, table: ResidualTable) -> bool:
    """Re-anchor a min-sum table on the exact messages once every residual is zero."""
    if table.mode != "minsum" or table.residual.any():
        return False
    table.reference[:] = state.c2v
    np.abs(table.pre_computed - table.reference, out=table.residual)
    return True


__all__ = [
    "COUNTER_NAMES",
    "OpCounters",
    "DecodeOutcome",
    "ResidualTable",
    "RESIDUAL_MODES",
    "decode_flooding",
    "decode_layered",
    "decode_srbp",
    "decode_nw_srbp",
    "decode_lmd_srbp",
    "run_residual_schedule",
    "init_residual_table",
    "select_max_edge",
    "update_edge",
    "propagate_and_refresh",
    "rebase_if_stalled",
    "tie_keys",
    "prior_llr",
]
