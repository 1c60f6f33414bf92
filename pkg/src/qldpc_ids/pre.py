"""PRE-sRBP: residual BP with a rotating, flag-filtered edge pool and
predict-and-reduce trials driven by the estimated support sequence.

For a syndrome ``s``, a variable of degree ``d`` touching ``w1`` unsatisfied
checks gets the score ``d - 2*w1``. Sorting variables by ascending score
gives the estimated support sequence: the head of that list are the most
likely error positions. Each trial flips one predicted position, removes its
syndrome contribution and decodes what is left.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _engine
from .kernels import TannerGraph
from .schedulers import DecodeOutcome, OpCounters, _graph, _syndrome, run_residual_schedule


@dataclass(frozen=True)
class TrialConfig:
    lambda_max: int = 15
    i_t: int = 6
    include_plain_trial: bool = False

    def __post_init__(self):
        if self.lambda_max < 1 or self.i_t < 1:
            raise ValueError("lambda_max and i_t must both be at least 1")

    @property
    def i_max(self) -> int:
        return self.lambda_max * self.i_t


@dataclass(frozen=True)
class SupportSequence:
    order: np.ndarray  # variable indices, most likely error first
    metric: np.ndarray  # d_v - 2*w1, aligned with ``order``
    w1: np.ndarray  # unsatisfied-neighbour count, indexed by variable

    def __len__(self) -> int:
        return len(self.order)

    def __getitem__(self, i):
        return int(self.order[i])


class FlagLists:
    """Per-variable flags over its checks; mirrors the flag logic of the engine.

    Flags are stored per edge: ``flags[e]`` is the flag of check ``edge_chk[e]``
    in the list of variable ``edge_var[e]``.
    """

    def __init__(self, graph: TannerGraph):
        self.graph = graph
        self.flags = np.zeros(graph.n_edges, dtype=np.uint8)
        self.count = np.zeros(graph.n_vars, dtype=np.int64)

    def flag(self, v: int, c: int) -> int:
        return int(self.flags[self.graph.edge(c, v)])

    def pool(self, vt: int) -> list[int]:
        """Candidate edges ``(c, v)``: ``c`` unflagged neighbour of ``vt``, ``v != vt``."""
        g = self.graph
        out = []
        for f in g.var_edge_list(vt):
            if self.flags[f]:
                continue
            c = int(g.edge_chk[f])
            out.extend(e for e in g.check_edges(c) if g.edge_var[e] != vt)
        return out

    def mark(self, vt: int, c: int) -> None:
        g = self.graph
        _engine.mark_flag(vt, g.edge(c, vt), self.flags, self.count, g.var_ptr, g.var_edges)


def build_support_sequence(code, s) -> SupportSequence:
    """Variables sorted by ``(d_v - 2*w1, index)``."""
    g = _graph(code)
    s = _syndrome(g, s)
    unsat = s[g.edge_chk].astype(np.int64)
    w1 = np.bincount(g.edge_var, weights=unsat, minlength=g.n_vars).astype(np.int64)
    metric = g.var_degrees - 2 * w1
    order = np.lexsort((np.arange(g.n_vars), metric))
    return SupportSequence(order.astype(np.int64), metric[order], w1)


def rank_oracle_one_iter_bp(code, s, p: float) -> np.ndarray:
    """Posterior odds ``q1/q0`` of every variable after one probability-domain BP pass.

    Closed form ``p/(1-p) * ((1-A)/A)**(d_v - 2 w1)`` with
    ``A = (1 + (1-2p)**(d_c-1)) / 2``; only valid for a constant check degree.
    """
    g = _graph(code)
    s = _syndrome(g, s)
    dc = set(g.check_degrees.tolist())
    if len(dc) != 1:
        raise ValueError(f"check degree is not constant: {sorted(dc)}")
    (d_c,) = dc
    a = (1.0 + (1.0 - 2.0 * p) ** (d_c - 1)) / 2.0
    unsat = s[g.edge_chk].astype(np.int64)
    w1 = np.bincount(g.edge_var, weights=unsat, minlength=g.n_vars)
    expo = g.var_degrees - 2 * w1
    return (p / (1.0 - p)) * ((1.0 - a) / a) ** expo


def decode_proposed_pool(code, s, p: float, i_max: int = 90, **opts) -> DecodeOutcome:
    """sRBP whose pool is induced by a variable ``v_t`` that advances every selection.

    Only checks of ``v_t`` whose flag is clear take part; the chosen check
    is flagged, and the flags of ``v_t`` clear once ``d_v - 1`` are set.
    """
    return run_residual_schedule(code, s, p, i_max, _engine.PROPOSED, name="proposed-pool", **opts)[0]


def decode_pre_srbp(code, s, p: float, trial_cfg: TrialConfig | None = None, **opts) -> DecodeOutcome:
    """Predict-and-reduce sRBP.

    Trial ``lam`` flips position ``c = sequence[lam]``, decodes
    ``s + H e_c`` with the proposed pool for ``i_t`` iterations from a clean
    state, and on convergence returns ``e_hat_r + e_c``.
    """
    cfg = trial_cfg or TrialConfig()
    g = _graph(code)
    s = _syndrome(g, s)
    if cfg.lambda_max > g.n_vars:
        raise ValueError(f"lambda_max={cfg.lambda_max} exceeds the code length {g.n_vars}")
    if not s.any():
        return DecodeOutcome(True, np.zeros(g.n_vars, dtype=np.uint8), 0, OpCounters(), "pre-srbp")
    seq = build_support_sequence(g, s)

    counters = OpCounters()
    iterations = 0
    positions: list[int | None] = [None] if cfg.include_plain_trial else []
    positions += [seq[lam] for lam in range(cfg.lambda_max)]
    last = None
    for trial, c in enumerate(positions):
        s_r = s.copy()
        if c is not None:
            lo, hi = g.var_ptr[c], g.var_ptr[c + 1]
            s_r[g.edge_chk[g.var_edges[lo:hi]]] ^= 1
        out, _, _ = run_residual_schedule(g, s_r, p, cfg.i_t, _engine.PROPOSED, **opts)
        counters.extend(out.counters)
        iterations += out.iterations
        last = out
        if out.converged:
            e_hat = out.e_hat.copy()
            if c is not None:
                e_hat[c] ^= 1
            return DecodeOutcome(
                True, e_hat, iterations, counters, "pre-srbp", llr_marginal=out.llr_marginal,
                trial=trial, reduced_position=c,
            )
    return DecodeOutcome(
        False, last.e_hat, iterations, counters, "pre-srbp", llr_marginal=last.llr_marginal
    )
