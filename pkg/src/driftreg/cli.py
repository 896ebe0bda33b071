"""Command-line interface: simulate, register, coadd, sweep, compare.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import math
import os
import re
import sys
import time
from pathlib import Path

import numpy as np

from .baseline import pairwise_register, project_constant
from .core import FrameSequence, MotionVector, NoiseSpec
from .formats import FormatError, read_frame, read_manifest, write_frame, write_manifest, write_mlrf
from .reconstruction import coadd
from .registration import SearchRange, ml_register
from .simulator import SceneSource, SequenceSpec, apply_window, load_scene, simulate_sequence
from .sweep import COMPARE_SNR_DB, SweepConfig, lowest_passing_snr, run_sweep, summarize, write_csv

EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4

MANIFEST = "manifest.txt"


class UsageError(Exception):
    pass


def _motion(text: str) -> MotionVector:
    try:
        r, c = text.split(",")
        return MotionVector(int(r), int(c))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected ROWS,COLS integers, got {text!r}")


def _motion_or_random(text: str):
    return None if text == "random" else _motion(text)


def _float_list(text: str):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text: str):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _scene_source(args) -> SceneSource:
    if args.scene == "synth":
        return SceneSource(kind="synthetic", shape=(args.size, args.size), seed=args.scene_seed)
    return SceneSource(kind="file", path=args.scene)


def _add_scene_flags(p):
    p.add_argument("--scene", default="synth", help="'synth' or a .pgm/.mlrf scene file")
    p.add_argument("--size", type=int, default=250, help="synthetic scene edge length")
    p.add_argument("--scene-seed", type=int, default=0)


def _add_noise_flags(p):
    p.add_argument("--noise", choices=("awgn", "poisson"), default="awgn")
    p.add_argument("--photon-scale", type=float, default=1.0)
    p.add_argument("--window", choices=("none", "hann"), default="none")


def _add_register_flags(p):
    p.add_argument("--method", choices=("ml", "pairwise"), default="ml")
    p.add_argument("--max-drift", type=int, default=None)
    p.add_argument("--full-range", action="store_true")
    p.add_argument("--downsample", choices=("modular", "zero-pad"), default="modular")
    p.add_argument("--subtract-mean", action="store_true")
    p.add_argument("--window", choices=("none", "hann"), default="none")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="driftreg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="write a simulated frame sequence and manifest")
    _add_scene_flags(p)
    p.add_argument("--k", type=int, default=20)
    p.add_argument("--c", type=_motion_or_random, default=None, help="ROWS,COLS or 'random'")
    p.add_argument("--max-drift", type=int, default=None, help="bound for a random drift")
    p.add_argument("--snr-db", type=float, default=math.inf)
    _add_noise_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("mlrf", "pgm"), default="mlrf")
    p.add_argument("--out", required=True)

    p = sub.add_parser("register", help="estimate the drift of a frame sequence")
    p.add_argument("input", help="frame directory or manifest file")
    _add_register_flags(p)
    p.add_argument("--dump-surface", default=None, help="write the objective surface (.mlrf)")

    p = sub.add_parser("coadd", help="register and shift-and-add a sequence")
    p.add_argument("input")
    _add_register_flags(p)
    p.add_argument("--c", type=_motion, default=None, help="use this drift instead of estimating")
    p.add_argument("--out", required=True)

    for name, helptext in (("sweep", "Monte-Carlo SNR x K sweep to CSV"), ("compare", "ml vs pairwise over SNR")):
        p = sub.add_parser(name, help=helptext)
        _add_scene_flags(p)
        if name == "sweep":
            p.add_argument("--snr-db", type=_float_list, required=True)
            p.add_argument("--k", type=_int_list, required=True)
            p.add_argument("--method", type=lambda s: [m for m in s.split(",") if m], default=["ml"])
        else:
            p.add_argument("--snr-db", type=_float_list, default=list(COMPARE_SNR_DB))
            p.add_argument("--k", type=int, default=20)
        p.add_argument("--trials", type=int, default=50)
        p.add_argument("--drift-bound", type=int, default=None)
        p.add_argument("--max-drift", type=int, default=None)
        p.add_argument("--seed", type=int, default=0)
        _add_noise_flags(p)
        p.add_argument("--downsample", choices=("modular", "zero-pad"), default="modular")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--timing", action="store_true", help="record wall_time_ms (breaks byte-identical reruns)")
        p.add_argument("--out", required=True)
    return parser


def load_sequence(path) -> tuple:
    """Frames from a directory or manifest, plus the manifest entries (possibly empty)."""
    path = Path(path)
    manifest_path = path if path.is_file() else path / MANIFEST
    root = manifest_path.parent if path.is_file() else path
    entries = {}
    if manifest_path.is_file():
        entries = read_manifest(manifest_path)
        names = [n for n in entries.get("frames", "").split(",") if n]
    elif path.is_dir():
        names = sorted(n for n in os.listdir(path) if n.lower().endswith((".mlrf", ".pgm")) and n.startswith("frame"))
    else:
        raise FormatError(f"{path}: no such frame directory or manifest")
    if len(names) < 2:
        raise FormatError(f"{path}: need at least 2 frames, found {len(names)}")
    frames = [read_frame(root / n) for n in names]
    shapes = {f.shape for f in frames}
    if len(shapes) != 1:
        raise FormatError(f"{path}: frames have mismatched shapes {sorted(shapes)}")
    return FrameSequence(frames), entries


def cmd_simulate(args) -> int:
    if args.k < 2:
        raise UsageError("--k must be at least 2")
    seed = args.seed
    spec = SequenceSpec(
        scene=_scene_source(args),
        K=args.k,
        c=args.c,
        drift_bound=args.max_drift,
        noise=NoiseSpec(kind=args.noise, snr_db=args.snr_db, photon_scale=args.photon_scale, seed=seed),
        window=args.window,
        seed=seed,
    )
    scene = load_scene(spec.scene)
    seq, c = simulate_sequence(dataclasses.replace(spec, scene=scene))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    width = max(4, len(str(args.k)))
    names = [f"frame_{k:0{width}d}.{args.format}" for k in range(1, args.k + 1)]
    for name, frame in zip(names, seq.frames):
        write_frame(out / name, frame)
    write_mlrf(out / "scene.mlrf", scene)
    write_manifest(
        out / MANIFEST,
        {
            "format": "driftreg-sequence",
            "version": 1,
            "K": args.k,
            "rows": seq.shape[0],
            "cols": seq.shape[1],
            "c": f"{c.rows},{c.cols}",
            "scene": args.scene,
            "scene_seed": args.scene_seed,
            "size": args.size,
            "noise": args.noise,
            "snr_db": repr(float(args.snr_db)),
            "photon_scale": repr(float(args.photon_scale)),
            "window": args.window,
            "seed": seed,
            "frames": ",".join(names),
        },
    )
    print(f"wrote {args.k} frames to {out} (c={c.rows},{c.cols})")
    return 0


def _prepare(seq: FrameSequence, args) -> FrameSequence:
    if args.window == "hann":
        return FrameSequence([apply_window(f) for f in seq.frames])
    return seq


def _register(seq, args):
    search = SearchRange(max_drift=args.max_drift, full_range=args.full_range)
    t0 = time.perf_counter()
    if args.method == "ml":
        res = ml_register(seq, search, downsample=args.downsample, subtract_mean=args.subtract_mean)
        info = {"estimate": res.estimate, "score": res.score, "range_limited": res.range_limited, "surface": res.objective_surface}
    else:
        offsets = pairwise_register(seq, search)
        est = project_constant(offsets)
        info = {"estimate": est, "score": float(np.mean(offsets.peak_scores)), "range_limited": None, "offsets": offsets}
    info["wall_time_ms"] = (time.perf_counter() - t0) * 1e3
    return info


def cmd_register(args) -> int:
    seq, entries = load_sequence(args.input)
    info = _register(_prepare(seq, args), args)
    est = info["estimate"]
    print(f"method: {args.method}")
    print(f"estimate: {est.rows},{est.cols}")
    print(f"score: {info['score']!r}")
    print(f"wall_time_ms: {info['wall_time_ms']:.3f}")
    if info["range_limited"] is not None:
        print(f"range_limited: {'yes' if info['range_limited'] else 'no'}")
    if "offsets" in info:
        print("offsets: " + " ".join(f"{o.rows},{o.cols}" for o in info["offsets"].offsets))
    if args.dump_surface:
        if "surface" not in info:
            raise UsageError("--dump-surface needs --method ml")
        write_mlrf(args.dump_surface, info["surface"])
    return 0


def cmd_coadd(args) -> int:
    seq, _ = load_sequence(args.input)
    if args.c is not None:
        c = args.c
    else:
        c = _register(_prepare(seq, args), args)["estimate"]
    write_frame(args.out, coadd(seq, c))
    print(f"coadded {seq.K} frames with c={c.rows},{c.cols} -> {args.out}")
    return 0


def _sweep_config(args, methods, k_list) -> SweepConfig:
    return SweepConfig(
        snr_db_list=args.snr_db,
        k_list=k_list,
        trials=args.trials,
        methods=methods,
        scene=_scene_source(args),
        drift_bound=args.drift_bound,
        max_drift=args.max_drift,
        base_seed=args.seed,
        noise=args.noise,
        photon_scale=args.photon_scale,
        downsample=args.downsample,
        window=args.window,
        timing=args.timing,
    )


def _checked_config(args, methods, k_list) -> SweepConfig:
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    try:
        return _sweep_config(args, methods, k_list)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_sweep(args) -> int:
    config = _checked_config(args, args.method, args.k)
    records = run_sweep(config, jobs=args.jobs)
    write_csv(records, args.out)
    for s in summarize(records):
        print(f"{s.method:9s} snr={s.snr_db:7.2f} K={s.K:3d} mean_abs_error={s.mean:.4f} std={s.std:.4f}")
    return 0


def cmd_compare(args) -> int:
    config = _checked_config(args, ["ml", "pairwise"], [args.k])
    records = run_sweep(config, jobs=args.jobs)
    write_csv(records, args.out)
    for method in config.methods:
        snr = lowest_passing_snr(records, method, args.k)
        shown = "none" if snr is None else f"{snr:g} dB"
        print(f"{method}: lowest SNR with mean error < 1 px: {shown}")
    return 0


COMMANDS = {
    "simulate": cmd_simulate,
    "register": cmd_register,
    "coadd": cmd_coadd,
    "sweep": cmd_sweep,
    "compare": cmd_compare,
}


_SIGNED_FLAGS = ("--snr-db", "--c")
_SIGNED_VALUE = re.compile(r"^-(inf|[0-9.])", re.IGNORECASE)


def _glue_signed_values(argv):
    """Rewrite ``--snr-db -25,-30`` as ``--snr-db=-25,-30`` so argparse keeps the value."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _SIGNED_FLAGS and i + 1 < len(argv) and _SIGNED_VALUE.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_signed_values(argv))
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"driftreg {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FloatingPointError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"driftreg {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"driftreg {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
