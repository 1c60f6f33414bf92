"""Command-line entry point: ``qldpc-ids <subcommand> ...``.

Every sweep writes CSV to stdout or ``--out``. Options can also come from a
TOML file given with ``--config``; flags on the command line win.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .decoders import DECODERS, decode
from .gf2 import write_alist
from .noise import classify_outcome, frame_rng, sample_weight_error
from .sim import (
    CodeSpec,
    ExperimentConfig,
    build_code,
    default_workers,
    profile_csv,
    run_fer_sweep,
    run_iter_sweep,
    run_weight_profile,
    verify_counters,
)

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

ALL_DECODERS = DECODERS + ("proposed-pool",)


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x)


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x)


def _as_tuple(x) -> tuple:
    return tuple(x) if isinstance(x, (list, tuple)) else (x,)


def _code_spec(value: str) -> CodeSpec:
    """``NAME`` for a built-in code or ``HX.alist:HZ.alist`` for files."""
    if ":" in value:
        hx, hz = value.split(":", 1)
        return CodeSpec("alist", {"h_x": hx, "h_z": hz, "label": Path(hz).stem})
    return CodeSpec.named(value)


def _common(p: argparse.ArgumentParser, sweep: bool) -> None:
    p.add_argument("--config", type=Path, help="TOML file with default option values")
    p.add_argument("--code", default=None, help="built-in name or HX.alist:HZ.alist")
    p.add_argument("--decoder", choices=ALL_DECODERS if not sweep else DECODERS, default=None)
    p.add_argument("--lambda-max", type=int, default=None)
    p.add_argument("--it", type=int, default=None, help="iterations per PRE-sRBP trial")
    p.add_argument("--plain-trial", action="store_true", default=None,
                   help="run an unreduced trial before the first reduction")
    p.add_argument("--i-max", type=int, default=None)
    p.add_argument("--seed", type=int, required=sweep, default=None)
    p.add_argument("--out", type=Path, default=None)


def _sweep_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p", type=_floats, default=None, help="comma-separated p_x values")
    p.add_argument("--frames", type=int, default=None, help="maximum frames per point")
    p.add_argument("--min-failures", type=int, default=None)
    p.add_argument("--min-frames", type=int, default=None)
    p.add_argument("--block-size", type=int, default=None)
    p.add_argument("--workers", type=int, default=None, help="0 uses every CPU")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qldpc-ids", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="write a code as alist files plus a JSON sidecar")
    p.add_argument("kind", choices=("named", "bicycle", "gb", "hp"))
    p.add_argument("--name", help="built-in code (kind=named)")
    p.add_argument("--n", type=int)
    p.add_argument("--row-weight", type=int)
    p.add_argument("--rows-kept", type=int)
    p.add_argument("--full-rank", action="store_true")
    p.add_argument("--a", type=_ints, help="GB exponents of a(x)")
    p.add_argument("--b", type=_ints, help="GB exponents of b(x)")
    p.add_argument("--block-size", type=int)
    p.add_argument("--h1", help="classical code name or alist path (kind=hp)")
    p.add_argument("--h2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True, help="output prefix")

    p = sub.add_parser("decode", help="decode a single frame and print a trace")
    _common(p, sweep=False)
    p.add_argument("--p", type=float, default=0.02)
    p.add_argument("--weight", type=int, help="sample an error of this weight (default: channel)")
    p.add_argument("--error", help="comma-separated support of the error")

    p = sub.add_parser("fer-sweep", help="FER against p_x")
    _common(p, sweep=True)
    _sweep_opts(p)

    p = sub.add_parser("iter-sweep", help="FER against the iteration budget")
    _common(p, sweep=True)
    _sweep_opts(p)
    p.add_argument("--i-max-values", type=_ints, required=False, default=None)

    p = sub.add_parser("weight-profile", help="solvable ratio against error weight")
    _common(p, sweep=True)
    p.add_argument("--p", type=_floats, default=None, help="p_x for the prior LLR")
    p.add_argument("--weights", type=_ints, default=None)
    p.add_argument("--samples", type=int, default=None)

    p = sub.add_parser("verify-counters", help="check per-iteration operation counts")
    _common(p, sweep=False)
    p.add_argument("--weight", type=int, default=None)
    return ap


def _merged(args: argparse.Namespace) -> dict:
    opts = {}
    if getattr(args, "config", None):
        with open(args.config, "rb") as f:
            opts = {k.replace("-", "_"): v for k, v in tomllib.load(f).items()}
    for k, v in vars(args).items():
        if v is not None:
            opts[k] = v
    return opts


def _config(o: dict) -> ExperimentConfig:
    fields = dict(
        code=_code_spec(o.get("code", "bicycle-256-32")),
        decoder=o.get("decoder", "sbp"),
        p_values=_as_tuple(o.get("p", (0.02,))),
        seed=int(o["seed"]),
        i_max=int(o.get("i_max", 90)),
        i_max_values=tuple(o.get("i_max_values", ())),
        lambda_max=int(o.get("lambda_max", 15)),
        i_t=int(o.get("it", 6)),
        plain_trial=bool(o.get("plain_trial", False)),
        max_frames=int(o.get("frames", 10_000)),
        min_failures=int(o.get("min_failures", 100)),
        min_frames=int(o.get("min_frames", 1_000)),
        block_size=int(o.get("block_size", 200)),
        workers=int(o.get("workers", 1)) or default_workers(),
    )
    return ExperimentConfig(**fields)


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_construct(args) -> int:
    if args.kind == "named":
        spec = CodeSpec.named(args.name)
    elif args.kind == "bicycle":
        spec = CodeSpec("bicycle", dict(n=args.n, row_weight=args.row_weight, rows_kept=args.rows_kept,
                                        seed=args.seed, full_rank=args.full_rank))
    elif args.kind == "gb":
        spec = CodeSpec("gb", dict(a=list(args.a), b=list(args.b), block_size=args.block_size))
    else:
        spec = CodeSpec("hp", dict(h1=args.h1, h2=args.h2 or args.h1))
    code = build_code(spec)
    prefix = args.out
    prefix.parent.mkdir(parents=True, exist_ok=True)
    write_alist(code.h_x, f"{prefix}_hx.alist")
    write_alist(code.h_z, f"{prefix}_hz.alist")

    def hist(degrees):
        vals, counts = np.unique(degrees, return_counts=True)
        return {str(int(v)): int(c) for v, c in zip(vals, counts)}

    side = dict(
        n=code.n, k=code.k, d=code.d, label=code.label, fingerprint=code.fingerprint, seed=args.seed,
        kind=spec.kind, params={k: v for k, v in spec.params.items()},
        h_z_row_weights=hist(code.h_z.row_weights()), h_z_col_weights=hist(code.h_z.col_weights()),
        h_x_row_weights=hist(code.h_x.row_weights()), h_x_col_weights=hist(code.h_x.col_weights()),
    )
    Path(f"{prefix}.json").write_text(json.dumps(side, indent=2) + "\n")
    print(f"{code!r} -> {prefix}_hx.alist, {prefix}_hz.alist, {prefix}.json")
    return 0


def cmd_decode(args) -> int:
    o = _merged(args)
    code = build_code(_code_spec(o.get("code", "bicycle-256-32")))
    seed = int(o.get("seed", 0))
    p = float(o.get("p", 0.02))
    e = np.zeros(code.n, dtype=np.uint8)
    if args.error:
        e[list(_ints(args.error))] = 1
    elif args.weight is not None:
        e = sample_weight_error(code.n, args.weight, frame_rng(seed, 0))
    else:
        e = (frame_rng(seed, 0).random(code.n) < p).astype(np.uint8)
    s = code.tanner.syndrome(e)
    out = decode(code, s, p, o.get("decoder", "sbp"), i_max=int(o.get("i_max", 90)),
                 lambda_max=int(o.get("lambda_max", 15)), i_t=int(o.get("it", 6)),
                 plain_trial=bool(o.get("plain_trial", False)))
    cls = classify_outcome(code, e, out.e_hat, out.converged)
    lines = [
        f"code        {code!r}",
        f"decoder     {out.decoder}",
        f"error       weight {int(e.sum())} at {np.flatnonzero(e).tolist()}",
        f"syndrome    weight {int(s.sum())}",
        f"converged   {out.converged} after {out.iterations} iterations",
        f"e_hat       weight {int(out.e_hat.sum())} at {np.flatnonzero(out.e_hat).tolist()}",
        f"outcome     {cls.name}",
    ]
    if out.trial is not None:
        lines.append(f"trial       {out.trial} (reduced position {out.reduced_position})")
    lines.append("iter   c2v    v2c    precomp  comparisons")
    for i, row in enumerate(out.counters.per_iteration, 1):
        lines.append(f"{i:<6} {row[0]:<6} {row[1]:<6} {row[2]:<8} {row[3]}")
    _emit("\n".join(lines) + "\n", o.get("out"))
    return 0 if cls.name == "CONVERGED_SUCCESS" else 1


def cmd_fer_sweep(args) -> int:
    o = _merged(args)
    _emit(run_fer_sweep(_config(o)).to_csv(), o.get("out"))
    return 0


def cmd_iter_sweep(args) -> int:
    o = _merged(args)
    if not o.get("i_max_values"):
        raise SystemExit("iter-sweep needs --i-max-values")
    _emit(run_iter_sweep(_config(o)).to_csv(), o.get("out"))
    return 0


def cmd_weight_profile(args) -> int:
    o = _merged(args)
    cfg = _config(o)
    rows = run_weight_profile(cfg, o.get("weights", tuple(range(1, 16))), int(o.get("samples", 200)))
    _emit(profile_csv(cfg, rows), o.get("out"))
    return 0


def cmd_verify_counters(args) -> int:
    o = _merged(args)
    rep = verify_counters(_code_spec(o.get("code", "gb-126-28")), o.get("decoder", "srbp"),
                          i_max=int(o.get("i_max", 6)), seed=int(o.get("seed", 0)),
                          weight=o.get("weight"))
    exp = rep["expected"]
    lines = [f"{rep['decoder']}: {rep['iterations']} iterations checked, expected per iteration {exp}"]
    lines += [f"  iteration {i}: {row}" for i, row in enumerate(rep["per_iteration"], 1)]
    lines.append("OK")
    _emit("\n".join(lines) + "\n", o.get("out"))
    return 0


COMMANDS = {
    "construct": cmd_construct,
    "decode": cmd_decode,
    "fer-sweep": cmd_fer_sweep,
    "iter-sweep": cmd_iter_sweep,
    "weight-profile": cmd_weight_profile,
    "verify-counters": cmd_verify_counters,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    raise SystemExit(main())
