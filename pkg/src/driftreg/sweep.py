"""Monte-Carlo error sweeps over SNR, frame count and method.

Each (snr, K, trial) cell gets one seed, ``mix_seed(base_seed, snr, K,
trial)``. The seed fixes the drift and every frame's noise, and all methods
in a sweep are scored on that same sequence, so rows for different methods
share ``true_c``. Rows come out in (method, snr, K, trial) order whatever
the worker count.
"""
from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .baseline import pairwise_register, project_constant
from .core import MotionVector, NoiseSpec, euclidean_error, registration_error
from .registration import SearchRange, ml_register
from .rng import mix_seed
from .simulator import SceneSource, SequenceSpec, load_scene, simulate_sequence

METHODS = ("ml", "pairwise")
CSV_FIELDS = (
    "method",
    "snr_db",
    "K",
    "trial_index",
    "seed",
    "true_c",
    "est_c",
    "mean_abs_error",
    "euclidean_error",
    "wall_time_ms",
)
COMPARE_SNR_DB = tuple(float(x) for x in np.arange(-35.0, 0.0 + 1e-9, 2.5))


@dataclass(frozen=True)
class SweepConfig:
    snr_db_list: Sequence[float]
    k_list: Sequence[int]
    trials: int = 50
    methods: Sequence[str] = ("ml",)
    scene: SceneSource = field(default_factory=SceneSource)
    drift_bound: Optional[int] = None
    max_drift: Optional[int] = None
    base_seed: int = 0
    noise: str = "awgn"
    photon_scale: float = 1.0
    downsample: str = "modular"
    window: str = "none"
    timing: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.snr_db_list or not self.k_list or not self.methods:
            raise ValueError("snr, K and method lists must be non-empty")
        bad = [m for m in self.methods if m not in METHODS]
        if bad:
            raise ValueError(f"unknown methods {bad}")
        if len(set(self.methods)) != len(self.methods):
            raise ValueError("duplicate methods")
        if any(int(k) < 2 for k in self.k_list):
            raise ValueError("every K must be at least 2")
        object.__setattr__(self, "snr_db_list", tuple(float(s) for s in self.snr_db_list))
        object.__setattr__(self, "k_list", tuple(int(k) for k in self.k_list))
        object.__setattr__(self, "methods", tuple(self.methods))


@dataclass(frozen=True)
class SweepRecord:
    method: str
    snr_db: float
    K: int
    trial_index: int
    seed: int
    true_c: MotionVector
    est_c: MotionVector
    mean_abs_error: float
    euclidean_error: float
    wall_time_ms: Optional[float] = None


def trial_seed(base_seed: int, snr_db: float, K: int, trial: int) -> int:
    return mix_seed(base_seed, float(snr_db), int(K), int(trial))


def estimate(method: str, seq, config: SweepConfig) -> MotionVector:
    search = SearchRange(max_drift=config.max_drift)
    if method == "ml":
        return ml_register(seq, search, downsample=config.downsample).estimate
    if method == "pairwise":
        return project_constant(pairwise_register(seq, search))
    raise ValueError(f"unknown method {method!r}")


def run_cell(config: SweepConfig, scene: np.ndarray, snr: float, K: int, trial: int) -> list:
    """Simulate one sequence and score it with every configured method."""
    seed = trial_seed(config.base_seed, snr, K, trial)
    spec = SequenceSpec(
        scene=scene,
        K=K,
        drift_bound=config.drift_bound,
        noise=NoiseSpec(kind=config.noise, snr_db=snr, photon_scale=config.photon_scale, seed=seed),
        window=config.window,
        seed=seed,
    )
    seq, true_c = simulate_sequence(spec)
    rows = []
    for method in config.methods:
        t0 = time.perf_counter()
        est = estimate(method, seq, config)
        elapsed = (time.perf_counter() - t0) * 1e3
        rows.append(
            SweepRecord(
                method=method,
                snr_db=snr,
                K=K,
                trial_index=trial,
                seed=seed,
                true_c=true_c,
                est_c=est,
                mean_abs_error=registration_error(true_c, est),
                euclidean_error=euclidean_error(true_c, est),
                wall_time_ms=elapsed if config.timing else None,
            )
        )
    return rows


_worker_state: dict = {}


def _init_worker(config, scene):
    _worker_state["config"] = config
    _worker_state["scene"] = scene


def _run_cell_in_worker(cell):
    return run_cell(_worker_state["config"], _worker_state["scene"], *cell)


def run_sweep(config: SweepConfig, jobs: int = 1, scene: Optional[np.ndarray] = None) -> list:
    if jobs < 1:
        raise ValueError("jobs must be at least 1")
    if scene is None:
        scene = load_scene(config.scene)
    cells = [(s, k, t) for s in config.snr_db_list for k in config.k_list for t in range(config.trials)]
    if jobs == 1:
        results = [run_cell(config, scene, *cell) for cell in cells]
    else:
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(config, scene)) as pool:
            results = list(pool.map(_run_cell_in_worker, cells, chunksize=max(1, len(cells) // (4 * jobs))))
    by_method = {m: [] for m in config.methods}
    for rows in results:
        for rec in rows:
            by_method[rec.method].append(rec)
    return [rec for m in config.methods for rec in by_method[m]]


def _fmt_c(c: MotionVector) -> str:
    return f"{c.rows},{c.cols}"


def _fmt_float(x: float) -> str:
    return repr(float(x))


def write_csv(records, path_or_file) -> None:
    """RFC-4180 CSV with a header row; floats via ``repr`` so reruns are byte-identical."""
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", newline="", encoding="utf-8") if own else path_or_file
    try:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(CSV_FIELDS)
        for r in records:
            w.writerow(
                [
                    r.method,
                    _fmt_float(r.snr_db),
                    r.K,
                    r.trial_index,
                    r.seed,
                    _fmt_c(r.true_c),
                    _fmt_c(r.est_c),
                    _fmt_float(r.mean_abs_error),
                    _fmt_float(r.euclidean_error),
                    "" if r.wall_time_ms is None else f"{r.wall_time_ms:.3f}",
                ]
            )
    finally:
        if own:
            fh.close()


def _parse_c(text: str) -> MotionVector:
    r, c = text.split(",")
    return MotionVector(int(r), int(c))


def read_csv(path) -> list:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return [
        SweepRecord(
            method=row["method"],
            snr_db=float(row["snr_db"]),
            K=int(row["K"]),
            trial_index=int(row["trial_index"]),
            seed=int(row["seed"]),
            true_c=_parse_c(row["true_c"]),
            est_c=_parse_c(row["est_c"]),
            mean_abs_error=float(row["mean_abs_error"]),
            euclidean_error=float(row["euclidean_error"]),
            wall_time_ms=float(row["wall_time_ms"]) if row["wall_time_ms"] else None,
        )
        for row in rows
    ]


@dataclass(frozen=True)
class CellSummary:
    method: str
    snr_db: float
    K: int
    n: int
    mean: float
    std: float
    stderr: float


def summarize(records, metric: str = "mean_abs_error") -> list:
    """Mean, sample std and standard error of ``metric`` per (method, snr, K)."""
    groups: dict = {}
    for r in records:
        groups.setdefault((r.method, r.snr_db, r.K), []).append(getattr(r, metric))
    out = []
    for (method, snr, K), vals in groups.items():
        v = np.asarray(vals, dtype=np.float64)
        std = float(v.std(ddof=1)) if v.size > 1 else 0.0
        out.append(CellSummary(method, snr, K, v.size, float(v.mean()), std, std / math.sqrt(v.size)))
    return out


def lowest_passing_snr(records, method: str, K: int, threshold: float = 1.0) -> Optional[float]:
    """Lowest SNR from which every higher SNR in the grid also has mean error below ``threshold``.

    Returns ``None`` when even the highest SNR fails.
    """
    cells = sorted(
        (s for s in summarize(records) if s.method == method and s.K == K),
        key=lambda s: s.snr_db,
        reverse=True,
    )
    lowest = None
    for cell in cells:
        if cell.mean < threshold:
            lowest = cell.snr_db
        else:
            break
    return lowest
