"""Seeded Monte Carlo experiments: FER sweeps, iteration sweeps, weight profiles.

Every frame draws its error from its own generator keyed by
``(seed, point index, frame index)``, so a frame can be replayed on its own
and results do not depend on how frames are spread over workers.

Stopping rule. Frames run in fixed blocks of ``block_size``. After each block
a point stops once ``frames >= max_frames``, or once it holds at least
``min_failures`` failures and at least ``min_frames`` frames. The reported
FER is ``failures / frames`` over every frame run; since the stop is only
checked on block boundaries the decision never depends on worker count.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from statsmodels.stats.proportion import proportion_confint

from . import named
from .codes import CssCode, load_code, make_bicycle, make_generalized_bicycle, make_hypergraph_product
from .decoders import DECODERS, decode
from .gf2 import read_alist
from .noise import FailureClass, classify_outcome, frame_rng, sample_weight_error

CSV_HEADER = (
    "decoder,code,seed,p_x,i_max,lambda_max,i_t,frames,fail_total,fail_nonconv,fail_logical,"
    "fer,fer_lo,fer_hi,mean_iters,c2v,v2c,precomp,comparisons"
)
PROFILE_HEADER = "decoder,code,seed,weight,samples,solved,ratio,ratio_lo,ratio_hi"

_CLASSICAL = {"hamming-7-4": named.HAMMING_7_4, "code-16-4-6": named.CODE_16_4_6}


@dataclass(frozen=True)
class CodeSpec:
    """How to obtain a code: a named instance, a constructor with parameters,
    or a pair of alist files.

    ``kind`` is one of ``named`` (``name``), ``bicycle`` (``n``,
    ``row_weight``, ``rows_kept``, ``seed``), ``gb`` (``a``, ``b``,
    ``block_size``), ``hp`` (``h1``, ``h2``: a classical name or an alist
    path) or ``alist`` (``h_x``, ``h_z``).
    """

    kind: str = "named"
    params: dict = field(default_factory=dict)

    @classmethod
    def named(cls, name: str) -> "CodeSpec":
        return cls("named", {"name": name})


def _classical(ref: str):
    return _CLASSICAL[ref] if ref in _CLASSICAL else read_alist(ref)


def build_code(spec: CodeSpec | str | CssCode) -> CssCode:
    if isinstance(spec, CssCode):
        return spec
    if isinstance(spec, str):
        spec = CodeSpec.named(spec)
    p = spec.params
    if spec.kind == "named":
        try:
            return named.NAMED_CODES[p["name"]]()
        except KeyError:
            raise ValueError(f"unknown code {p.get('name')!r}; known: {sorted(named.NAMED_CODES)}") from None
    if spec.kind == "bicycle":
        return make_bicycle(
            int(p["n"]), int(p["row_weight"]), int(p["rows_kept"]), int(p.get("seed", 0)),
            full_rank=bool(p.get("full_rank", False)),
        )
    if spec.kind == "gb":
        return make_generalized_bicycle(p["a"], p["b"], int(p["block_size"]))
    if spec.kind == "hp":
        return make_hypergraph_product(_classical(p["h1"]), _classical(p.get("h2", p["h1"])))
    if spec.kind == "alist":
        return load_code(p["h_x"], p["h_z"], label=p.get("label", ""))
    raise ValueError(f"unknown code kind {spec.kind!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    code: CodeSpec | str = "bicycle-256-32"
    decoder: str = "sbp"
    p_values: tuple = (0.02,)
    seed: int = 0
    i_max: int = 90
    i_max_values: tuple = ()
    lambda_max: int = 15
    i_t: int = 6
    plain_trial: bool = False
    max_frames: int = 10_000
    min_failures: int = 100
    min_frames: int = 1_000
    block_size: int = 200
    workers: int = 1
    decoder_opts: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.decoder not in DECODERS:
            raise ValueError(f"unknown decoder {self.decoder!r}; choose from {DECODERS}")
        if self.max_frames < 1 or self.block_size < 1 or self.workers < 1:
            raise ValueError("max_frames, block_size and workers must be positive")
        if self.min_failures < 0 or self.min_frames < 0:
            raise ValueError("min_failures and min_frames must be non-negative")
        for p in self.p_values:
            # 0 is allowed as a noiseless sanity point
            if not 0.0 <= float(p) < 0.5:
                raise ValueError(f"p_x must lie in [0, 0.5), got {p}")
        for i in (self.i_max, *self.i_max_values):
            if int(i) < 0:
                raise ValueError("iteration budgets must be non-negative")


@dataclass
class PointResult:
    p_x: float
    i_max: int
    lambda_max: int | None
    i_t: int | None
    frames: int
    fail_nonconv: int
    fail_logical: int
    fer: float
    fer_lo: float
    fer_hi: float
    mean_iters: float
    counter_means: tuple

    @property
    def fail_total(self) -> int:
        return self.fail_nonconv + self.fail_logical


@dataclass
class SimReport:
    decoder: str
    code_label: str
    code_fingerprint: str
    seed: int
    rows: list
    meta: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(CSV_HEADER + "\n")
        w = csv.writer(buf, lineterminator="\n")
        for r in self.rows:
            w.writerow([
                self.decoder, self.code_label, self.seed, repr(float(r.p_x)), r.i_max,
                "" if r.lambda_max is None else r.lambda_max, "" if r.i_t is None else r.i_t,
                r.frames, r.fail_total, r.fail_nonconv, r.fail_logical,
                _fmt(r.fer), _fmt(r.fer_lo), _fmt(r.fer_hi), _fmt(r.mean_iters),
                *(_fmt(x) for x in r.counter_means),
            ])
        return buf.getvalue()


def _fmt(x: float) -> str:
    return "" if math.isnan(x) else f"{x:.6g}"


def wilson_interval(failures: int, frames: int) -> tuple[float, float]:
    if frames == 0:
        return math.nan, math.nan
    lo, hi = proportion_confint(failures, frames, alpha=0.05, method="wilson")
    return float(lo), float(hi)


# -- frame level ---------------------------------------------------------------


def frame_error(seed: int, point: int, frame: int, n: int, p: float) -> np.ndarray:
    """Replay the error of one frame."""
    return (frame_rng(seed, point, frame).random(n) < p).astype(np.uint8)


def _decode_kwargs(cfg: ExperimentConfig, i_max: int) -> dict:
    kw = dict(decoder=cfg.decoder, i_max=i_max, lambda_max=cfg.lambda_max, i_t=cfg.i_t,
              plain_trial=cfg.plain_trial, **cfg.decoder_opts)
    if cfg.decoder == "pre-srbp":
        kw["lambda_max"] = max(i_max // cfg.i_t, 0) if cfg.i_max_values else cfg.lambda_max
    return kw


def run_frame(code: CssCode, e_true: np.ndarray, p: float, kw: dict):
    """Decode one error; return ``(FailureClass, iterations, counter totals)``."""
    s = code.tanner.syndrome(e_true)
    if kw["decoder"] == "pre-srbp" and kw["lambda_max"] == 0:
        # no trial fits in the budget: only the iteration-0 check remains
        kw = dict(kw, decoder="sbp", i_max=0)
    out = decode(code, s, p, **kw)
    cls = classify_outcome(code, e_true, out.e_hat, out.converged)
    return cls, out.iterations, out.counters.grand_totals()


_CLASS_CODE = {FailureClass.CONVERGED_SUCCESS: 0, FailureClass.CONVERGED_LOGICAL_FAILURE: 1,
               FailureClass.NOT_CONVERGED: 2}

_WORKER_CODE: CssCode | None = None


def _init_worker(code: CssCode) -> None:
    global _WORKER_CODE
    _WORKER_CODE = code


def _run_block(job):
    code, seed, point, p, kw, start, stop = job
    code = code if code is not None else _WORKER_CODE
    cls = np.empty(stop - start, dtype=np.int8)
    iters = np.empty(stop - start, dtype=np.int64)
    ops = np.empty((stop - start, 4), dtype=np.int64)
    for j, f in enumerate(range(start, stop)):
        e = frame_error(seed, point, f, code.n, p)
        c, it, tot = run_frame(code, e, p, kw)
        cls[j], iters[j], ops[j] = _CLASS_CODE[c], it, tot
    return cls, iters, ops


def _run_point(code, cfg, point, p, i_max, pool) -> PointResult:
    kw = _decode_kwargs(cfg, i_max)
    blocks = []
    frames = fails = 0
    start = 0

    def done():
        return frames >= cfg.max_frames or (fails >= cfg.min_failures and frames >= cfg.min_frames)

    while not done():
        wave = []
        for _ in range(cfg.workers):
            if start >= cfg.max_frames:
                break
            stop = min(start + cfg.block_size, cfg.max_frames)
            wave.append((None if pool else code, cfg.seed, point, p, kw, start, stop))
            start = stop
        results = pool.map(_run_block, wave) if pool else map(_run_block, wave)
        for res in results:
            # blocks are consumed in order; anything past the stopping block is dropped
            if done():
                break
            blocks.append(res)
            frames += len(res[0])
            fails += int(np.count_nonzero(res[0]))

    cls = np.concatenate([b[0] for b in blocks])
    iters = np.concatenate([b[1] for b in blocks])
    ops = np.concatenate([b[2] for b in blocks])
    logical, nonconv = int(np.sum(cls == 1)), int(np.sum(cls == 2))
    lo, hi = wilson_interval(logical + nonconv, frames)
    conv = cls != 2
    mean_iters = float(iters[conv].mean()) if conv.any() else math.nan
    pre = cfg.decoder == "pre-srbp"
    return PointResult(
        p_x=float(p), i_max=i_max if (cfg.i_max_values or not pre) else kw["lambda_max"] * cfg.i_t,
        lambda_max=kw["lambda_max"] if pre else None,
        i_t=cfg.i_t if pre else None, frames=frames, fail_nonconv=nonconv, fail_logical=logical,
        fer=(logical + nonconv) / frames, fer_lo=lo, fer_hi=hi, mean_iters=mean_iters,
        counter_means=tuple(float(x) for x in ops.mean(axis=0)),
    )


def _sweep(cfg: ExperimentConfig, points) -> SimReport:
    code = build_code(cfg.code)
    pool = None
    if cfg.workers > 1:
        pool = ProcessPoolExecutor(cfg.workers, initializer=_init_worker, initargs=(code,))
    try:
        rows = [_run_point(code, cfg, k, p, i, pool) for k, p, i in points]
    finally:
        if pool:
            pool.shutdown()
    meta = dict(
        stopping_rule=f"block={cfg.block_size}, max_frames={cfg.max_frames}, "
        f"min_failures={cfg.min_failures}, min_frames={cfg.min_frames}",
        decoder_opts=dict(cfg.decoder_opts),
    )
    return SimReport(cfg.decoder, code.label, code.fingerprint, cfg.seed, rows, meta)


def run_fer_sweep(cfg: ExperimentConfig) -> SimReport:
    """FER for each ``p_x`` in ``cfg.p_values`` at budget ``cfg.i_max``."""
    return _sweep(cfg, [(k, p, cfg.i_max) for k, p in enumerate(cfg.p_values)])


def run_iter_sweep(cfg: ExperimentConfig) -> SimReport:
    """FER for each budget in ``cfg.i_max_values`` at the first ``p_x``.

    Every budget sees the same frames. PRE-sRBP runs
    ``floor(i_max / i_t)`` trials.
    """
    if not cfg.i_max_values:
        raise ValueError("run_iter_sweep needs i_max_values")
    p = cfg.p_values[0]
    return _sweep(cfg, [(0, p, int(i)) for i in cfg.i_max_values])


@dataclass
class ProfileRow:
    weight: int
    samples: int
    solved: int

    @property
    def ratio(self) -> float:
        return self.solved / self.samples if self.samples else math.nan


def run_weight_profile(
    cfg: ExperimentConfig, weights, samples: int
) -> list[ProfileRow]:
    """Solvable ratio per error weight; errors are uniform over exact-weight supports."""
    code = build_code(cfg.code)
    kw = _decode_kwargs(replace(cfg, i_max_values=()), cfg.i_max)
    rows = []
    for w in weights:
        if not 0 <= w <= code.n:
            raise ValueError(f"weight {w} outside 0..{code.n}")
        solved = 0
        for i in range(samples):
            e = sample_weight_error(code.n, w, frame_rng(cfg.seed, w, i))
            cls, _, _ = run_frame(code, e, cfg.p_values[0], kw)
            solved += cls is FailureClass.CONVERGED_SUCCESS
        rows.append(ProfileRow(int(w), samples, solved))
    return rows


def profile_csv(cfg: ExperimentConfig, rows) -> str:
    label = build_code(cfg.code).label
    lines = [PROFILE_HEADER]
    for r in rows:
        lo, hi = wilson_interval(r.solved, r.samples)
        lines.append(
            f"{cfg.decoder},{label},{cfg.seed},{r.weight},{r.samples},{r.solved},"
            f"{_fmt(r.ratio)},{_fmt(lo)},{_fmt(hi)}"
        )
    return "\n".join(lines) + "\n"


# -- counter identities --------------------------------------------------------


class CounterMismatch(AssertionError):
    pass


def expected_counters(code, decoder: str) -> dict:
    """Per-iteration operation counts for a regular code.

    Values are exact except ``comparisons`` of the proposed pool, which is an
    upper bound.
    """
    g = code.tanner if isinstance(code, CssCode) else code
    if not g.is_regular():
        raise ValueError("counter identities need a regular code")
    E, M = g.n_edges, g.n_checks
    dv, dc = int(g.var_degrees[0]), int(g.check_degrees[0])
    if decoder in ("sbp", "slbp"):
        return dict(c2v=E, v2c=E, precomp=0, comparisons=0)
    base = dict(c2v=E, v2c=E * (dv - 1), precomp=E * (dc - 1) * (dv - 1))
    cmp = {
        "srbp": E * (E - 1),
        "nw-srbp": M * (E - 1),
        "lmd-srbp": E * ((dv - 1) * dc - 1),
        "pre-srbp": E * (dv * (dc - 1) - 1),
        "proposed-pool": E * (dv * (dc - 1) - 1),
    }
    return dict(base, comparisons=cmp[decoder])


def verify_counters(code, decoder: str, i_max: int = 6, seed: int = 0, weight: int | None = None) -> dict:
    """Decode one non-trivial syndrome and check every iteration's counters.

    Raises :class:`CounterMismatch` naming the first violated row; returns a
    report with the expected values and the observed per-iteration rows.
    """
    code = build_code(code)
    g = code.tanner
    exp = expected_counters(code, decoder)
    rng = frame_rng(seed, 0)
    w = weight if weight is not None else max(1, code.n // 8)
    e = sample_weight_error(code.n, w, rng)
    s = g.syndrome(e)
    if decoder == "pre-srbp":
        out = decode(code, s, 0.02, "pre-srbp", lambda_max=max(1, i_max // 6), i_t=6)
    else:
        out = decode(code, s, 0.02, decoder, i_max=i_max)
    rows = out.counters.per_iteration
    bounded = decoder in ("pre-srbp", "proposed-pool")
    for it, row in enumerate(rows):
        for name, got in zip(("c2v", "v2c", "precomp", "comparisons"), row):
            want = exp[name]
            ok = got <= want if (bounded and name == "comparisons") else got == want
            if not ok:
                rel = "<=" if bounded and name == "comparisons" else "=="
                raise CounterMismatch(
                    f"{decoder} iteration {it + 1}: {name} = {got}, expected {rel} {want}"
                )
    return dict(decoder=decoder, expected=exp, per_iteration=rows.tolist(), iterations=len(rows),
                converged=out.converged)


def default_workers() -> int:
    return max(1, os.cpu_count() or 1)
