"""Name-based access to every decoder, as used by the harness and the CLI."""

from __future__ import annotations

from .pre import TrialConfig, decode_pre_srbp, decode_proposed_pool
from .schedulers import (
    DecodeOutcome,
    decode_flooding,
    decode_layered,
    decode_lmd_srbp,
    decode_nw_srbp,
    decode_srbp,
)

DECODERS = ("sbp", "slbp", "srbp", "nw-srbp", "lmd-srbp", "pre-srbp")

_PLAIN = {
    "sbp": decode_flooding,
    "slbp": decode_layered,
    "srbp": decode_srbp,
    "nw-srbp": decode_nw_srbp,
    "lmd-srbp": decode_lmd_srbp,
    "proposed-pool": decode_proposed_pool,
}


def decode(
    code,
    s,
    p: float,
    decoder: str = "sbp",
    i_max: int = 90,
    lambda_max: int = 15,
    i_t: int = 6,
    plain_trial: bool = False,
    **opts,
) -> DecodeOutcome:
    """Decode syndrome ``s`` with the named decoder.

    ``i_max`` is ignored by ``pre-srbp``, whose budget is ``lambda_max * i_t``.
    Extra keyword options (``tie_break``, ``tie_seed``, ``residual_mode``)
    only apply to the residual decoders.
    """
    if decoder == "pre-srbp":
        return decode_pre_srbp(code, s, p, TrialConfig(lambda_max, i_t, plain_trial), **opts)
    try:
        fn = _PLAIN[decoder]
    except KeyError:
        raise ValueError(f"unknown decoder {decoder!r}; choose from {DECODERS}") from None
    if decoder in ("sbp", "slbp"):
        return fn(code, s, p, i_max)
    return fn(code, s, p, i_max, **opts)
