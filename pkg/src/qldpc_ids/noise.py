"""Bit-flip noise, per-frame RNG streams and outcome classification."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .codes import CssCode
from .gf2 import DimensionError, pack_bits


class FailureClass(enum.Enum):
    CONVERGED_SUCCESS = "success"
    CONVERGED_LOGICAL_FAILURE = "logical"
    NOT_CONVERGED = "nonconv"

    @property
    def failed(self) -> bool:
        return self is not FailureClass.CONVERGED_SUCCESS


@dataclass(frozen=True)
class ChannelConfig:
    p_x: float
    seed: int = 0

    def __post_init__(self):
        # p_x = 0 is accepted for sampling only (noiseless sanity runs)
        if not 0.0 <= self.p_x < 0.5:
            raise ValueError(f"p_x must lie in [0, 0.5), got {self.p_x}")


def frame_rng(seed: int, *stream: int) -> np.random.Generator:
    """Independent generator for one frame, keyed by ``(seed, *stream)``.

    Streams never depend on how frames are spread over workers.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, stream)]))


def sample_error(cfg: ChannelConfig, n: int, trial: int = 0) -> np.ndarray:
    """i.i.d. bit flips with probability ``cfg.p_x`` for frame ``trial``."""
    rng = frame_rng(cfg.seed, trial)
    return (rng.random(n) < cfg.p_x).astype(np.uint8)


def sample_weight_error(n: int, weight: int, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random error with exactly ``weight`` flipped bits."""
    if not 0 <= weight <= n:
        raise ValueError(f"weight {weight} outside 0..{n}")
    e = np.zeros(n, dtype=np.uint8)
    e[rng.choice(n, size=weight, replace=False)] = 1
    return e


def classify_outcome(code: CssCode, e_true, e_hat, converged: bool) -> FailureClass:
    """Success iff converged and ``e_true + e_hat`` lies in the row space of ``h_x``."""
    e_true = np.asarray(e_true, dtype=np.uint8)
    e_hat = np.asarray(e_hat, dtype=np.uint8)
    if e_true.shape != (code.n,) or e_hat.shape != (code.n,):
        raise DimensionError(f"error vectors must have length {code.n}")
    if not converged:
        return FailureClass.NOT_CONVERGED
    g = code.tanner
    # a decoder that claims convergence must reproduce the syndrome
    assert np.array_equal(g.syndrome(e_hat), g.syndrome(e_true)), "decoder lied about convergence"
    if pack_bits(e_true ^ e_hat) in code.h_x.row_space:
        return FailureClass.CONVERGED_SUCCESS
    return FailureClass.CONVERGED_LOGICAL_FAILURE
