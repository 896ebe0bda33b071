"""Noisy constant-drift sequences with known ground truth."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import rng
from .core import FrameSequence, MotionVector, NoiseSpec, as_frame, snr_to_sigma
from .formats import FormatError, read_mlrf, read_pgm
from .registration import default_max_drift

__all__ = [
    "SceneSource",
    "SequenceSpec",
    "synthetic_scene",
    "load_scene",
    "simulate_sequence",
    "hann_window",
    "apply_window",
]


@dataclass(frozen=True)
class SceneSource:
    """Where the ground-truth scene comes from.

    The synthetic field is a sum of circular Gaussian blobs with
    log-uniform peaks and widths on a flat background, loosely imitating a
    deep-field exposure: many faint compact sources, a few bright ones.
    """

    kind: str = "synthetic"
    path: Optional[str] = None
    shape: tuple = (250, 250)
    n_blobs: int = 300
    peak_range: tuple = (0.02, 1.0)
    sigma_range: tuple = (0.7, 4.0)
    background: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("synthetic", "file"):
            raise ValueError(f"unknown scene kind {self.kind!r}")
        if self.kind == "file" and not self.path:
            raise ValueError("file scenes need a path")
        if self.kind == "synthetic":
            if self.n_blobs < 0 or len(self.shape) != 2 or min(self.shape) < 1:
                raise ValueError("invalid synthetic scene parameters")
            lo, hi = self.peak_range
            slo, shi = self.sigma_range
            if not (0 < lo <= hi and 0 < slo <= shi and self.background >= 0):
                raise ValueError("invalid synthetic scene parameters")


def synthetic_scene(src: SceneSource) -> np.ndarray:
    gen = rng.stream(src.seed, rng.SCENE)
    nr, nc = src.shape
    n = src.n_blobs
    centres = gen.random((n, 2)) * (nr, nc)
    log_peak = np.log(src.peak_range)
    log_sigma = np.log(src.sigma_range)
    peaks = np.exp(log_peak[0] + gen.random(n) * (log_peak[1] - log_peak[0]))
    sigmas = np.exp(log_sigma[0] + gen.random(n) * (log_sigma[1] - log_sigma[0]))
    rr = np.arange(nr)[:, None]
    cc = np.arange(nc)[None, :]
    img = np.full((nr, nc), float(src.background))
    for (r0, c0), a, s in zip(centres, peaks, sigmas):
        # wrapped distances so the field tiles seamlessly
        dr = (rr - r0 + nr / 2) % nr - nr / 2
        dc = (cc - c0 + nc / 2) % nc - nc / 2
        img += a * np.exp(-(dr * dr + dc * dc) / (2.0 * s * s))
    top = img.max()
    return img / top if top > 0 else img


def load_scene(src: Union[SceneSource, str]) -> np.ndarray:
    """Scene as a float64 frame scaled into [0, 1]."""
    if isinstance(src, str):
        src = SceneSource(kind="file", path=src)
    if src.kind == "synthetic":
        scene = synthetic_scene(src)
    else:
        path = str(src.path)
        if path.lower().endswith(".pgm"):
            scene = read_pgm(path)
        elif path.lower().endswith(".mlrf"):
            scene = read_mlrf(path)
            if np.any(scene < 0):
                raise FormatError(f"{path}: scene has negative samples")
            top = scene.max()
            if top > 0:
                scene = scene / top
        else:
            raise FormatError(f"{path}: unsupported scene format")
    scene = as_frame(scene, name="scene")
    if np.ptp(scene) == 0:
        raise ValueError("scene is constant")
    return scene


@dataclass(frozen=True)
class SequenceSpec:
    """Recipe for one simulated sequence.

    ``c=None`` draws each drift component uniformly from
    ``[-drift_bound, drift_bound]``; ``drift_bound=None`` uses the default
    registration search bound for this frame size and K.
    """

    scene: Union[SceneSource, np.ndarray] = field(default_factory=SceneSource)
    K: int = 20
    c: Optional[MotionVector] = None
    drift_bound: Optional[int] = None
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    window: str = "none"
    seed: int = 0

    def __post_init__(self):
        if self.K < 2:
            raise ValueError(f"K must be at least 2, got {self.K}")
        if self.window not in ("none", "hann"):
            raise ValueError(f"unknown window {self.window!r}")
        if self.drift_bound is not None and self.drift_bound < 0:
            raise ValueError("drift_bound must be non-negative")
        if self.c is not None:
            object.__setattr__(self, "c", MotionVector.of(self.c))


def _draw_drift(spec: SequenceSpec, shape) -> MotionVector:
    limit = default_max_drift(min(shape), spec.K)
    bound = limit if spec.drift_bound is None else spec.drift_bound
    if bound > limit:
        raise ValueError(f"drift bound {bound} exceeds the search bound {limit} for K={spec.K}")
    gen = rng.stream(spec.seed, rng.MOTION)
    r, c = gen.integers(-bound, bound, size=2, endpoint=True)
    return MotionVector(int(r), int(c))


def simulate_sequence(spec: SequenceSpec):
    """Return ``(FrameSequence, true_c)`` with frame k = shift(scene, k*c) + noise_k."""
    if isinstance(spec.scene, SceneSource):
        scene = load_scene(spec.scene)
    else:
        scene = as_frame(spec.scene, name="scene")
    c = spec.c if spec.c is not None else _draw_drift(spec, scene.shape)
    noise = spec.noise
    sigma = snr_to_sigma(scene, noise.snr_db) if noise.kind == "awgn" else None
    frames = []
    for k in range(1, spec.K + 1):
        clean = np.roll(scene, (k * c.rows, k * c.cols), axis=(0, 1))
        gen = rng.stream(noise.seed, rng.NOISE, k)
        if noise.kind == "awgn":
            y = clean + sigma * rng.box_muller(gen, clean.shape) if sigma else clean.copy()
        else:
            lam = noise.photon_scale * np.maximum(clean, 0.0)
            y = gen.poisson(lam).astype(np.float64) / noise.photon_scale
        if spec.window == "hann":
            y = apply_window(y)
        frames.append(y)
    meta = {"c": c, "K": spec.K, "noise": noise, "window": spec.window, "seed": spec.seed}
    return FrameSequence(frames, metadata=meta), c


def hann_window(n: int) -> np.ndarray:
    return np.hanning(n)


def apply_window(frame) -> np.ndarray:
    """Multiply by the separable Hann taper ``0.5 * (1 - cos(2*pi*n / (N-1)))``."""
    frame = as_frame(frame)
    return frame * np.outer(hann_window(frame.shape[0]), hann_window(frame.shape[1]))
