"""Syndrome-based BP decoders with informed dynamic scheduling for quantum LDPC codes."""

from .codes import CssCode, OrthogonalityError, load_code, make_bicycle, make_generalized_bicycle, make_hypergraph_product
from .decoders import DECODERS, decode
from .gf2 import DimensionError, SparseBinaryMatrix, in_row_space, mat_vec_mod2, rank_mod2, read_alist, write_alist
from .kernels import MessageState, TannerGraph, prior_llr
from .named import NAMED_CODES
from .noise import ChannelConfig, FailureClass, classify_outcome, sample_error, sample_weight_error
from .pre import TrialConfig, build_support_sequence, decode_pre_srbp, rank_oracle_one_iter_bp
from .schedulers import DecodeOutcome, OpCounters
from .sim import CodeSpec, ExperimentConfig, SimReport, run_fer_sweep, run_iter_sweep, run_weight_profile, verify_counters

__all__ = [
    "CssCode", "OrthogonalityError", "load_code", "make_bicycle", "make_generalized_bicycle",
    "make_hypergraph_product", "DECODERS", "decode", "DimensionError", "SparseBinaryMatrix",
    "in_row_space", "mat_vec_mod2", "rank_mod2", "read_alist", "write_alist", "MessageState",
    "TannerGraph", "prior_llr", "NAMED_CODES", "ChannelConfig", "FailureClass",
    "classify_outcome", "sample_error", "sample_weight_error", "TrialConfig",
    "build_support_sequence", "decode_pre_srbp", "rank_oracle_one_iter_bp", "DecodeOutcome",
    "OpCounters", "CodeSpec", "ExperimentConfig", "SimReport", "run_fer_sweep",
    "run_iter_sweep", "run_weight_profile", "verify_counters",
]
