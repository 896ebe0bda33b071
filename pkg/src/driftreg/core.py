"""Image/motion types, circular translation and shared metrics."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

__all__ = [
    "MotionVector",
    "FrameSequence",
    "NoiseSpec",
    "as_frame",
    "canonical",
    "translate",
    "snr_to_sigma",
    "snr_db",
    "registration_error",
    "euclidean_error",
]


class MotionVector(NamedTuple):
    """Integer drift in pixels per frame interval."""

    rows: int
    cols: int

    @classmethod
    def of(cls, value) -> "MotionVector":
        r, c = value
        if int(r) != r or int(c) != c:
            raise ValueError(f"motion components must be integers, got {value!r}")
        return cls(int(r), int(c))

    def __mul__(self, k):  # type: ignore[override]
        return MotionVector(self.rows * int(k), self.cols * int(k))

    __rmul__ = __mul__

    def __neg__(self) -> "MotionVector":
        return MotionVector(-self.rows, -self.cols)

    def __add__(self, other):  # type: ignore[override]
        other = MotionVector.of(other)
        return MotionVector(self.rows + other.rows, self.cols + other.cols)


def canonical(c, shape: Sequence[int]) -> MotionVector:
    """Reduce ``c`` to the residue range ``[-n // 2, n - n // 2)`` per axis."""
    c = MotionVector.of(c)
    nr, nc = shape
    return MotionVector(
        (c.rows + nr // 2) % nr - nr // 2,
        (c.cols + nc // 2) % nc - nc // 2,
    )


def as_frame(data, name: str = "frame") -> np.ndarray:
    """Validate a 2-D finite real grid and return it as float64."""
    arr = np.asarray(data)
    if np.iscomplexobj(arr):
        raise TypeError(f"{name} must be real-valued")
    arr = arr.astype(np.float64, copy=False)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf")
    return arr


@dataclass(frozen=True)
class FrameSequence:
    """K equally shaped frames, stacked as a ``(K, rows, cols)`` array.

    ``frames[0]`` is frame k=1: it is offset by one drift step from the scene.
    """

    frames: np.ndarray
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        items = list(self.frames)
        if len(items) < 2:
            raise ValueError(f"a sequence needs at least 2 frames, got {len(items)}")
        checked = [as_frame(f, name=f"frame {i + 1}") for i, f in enumerate(items)]
        shape = checked[0].shape
        for i, f in enumerate(checked):
            if f.shape != shape:
                raise ValueError(f"frame {i + 1} has shape {f.shape}, expected {shape}")
        arr = np.stack(checked)
        arr.setflags(write=False)
        object.__setattr__(self, "frames", arr)

    @classmethod
    def from_frames(cls, frames: Iterable, **metadata) -> "FrameSequence":
        return cls(list(frames), metadata=dict(metadata))

    @property
    def K(self) -> int:
        return self.frames.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.frames.shape[1], self.frames.shape[2]

    def __len__(self) -> int:
        return self.K

    def __getitem__(self, i):
        return self.frames[i]

    def __iter__(self):
        return iter(self.frames)


@dataclass(frozen=True)
class NoiseSpec:
    kind: str = "awgn"
    snr_db: float = math.inf
    photon_scale: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("awgn", "poisson"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.kind == "poisson" and not self.photon_scale > 0:
            raise ValueError("photon_scale must be positive for poisson noise")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")


def translate(frame, shift) -> np.ndarray:
    """Circularly shift ``frame`` so that ``out[n] = frame[(n - shift) mod dims]``."""
    frame = as_frame(frame)
    shift = MotionVector.of(shift)
    return np.roll(frame, (shift.rows, shift.cols), axis=(0, 1))


def snr_to_sigma(scene, snr_db: float) -> float:
    """Noise standard deviation giving ``10*log10(var(scene) / sigma**2) == snr_db``.

    ``var`` is the population variance of the noiseless scene. ``+inf`` dB
    maps to zero noise.
    """
    scene = as_frame(scene, name="scene")
    var = float(np.var(scene))
    if not var > 0:
        raise ValueError("scene is constant; SNR is undefined")
    if math.isinf(snr_db) and snr_db > 0:
        return 0.0
    return math.sqrt(var / 10.0 ** (snr_db / 10.0))


def snr_db(scene, sigma: float) -> float:
    """Inverse of :func:`snr_to_sigma`."""
    var = float(np.var(as_frame(scene, name="scene")))
    if sigma == 0:
        return math.inf
    return 10.0 * math.log10(var / sigma**2)


def registration_error(true_c, est_c) -> float:
    """Mean of the per-component absolute differences."""
    t, e = MotionVector.of(true_c), MotionVector.of(est_c)
    return (abs(t.rows - e.rows) + abs(t.cols - e.cols)) / 2.0


def euclidean_error(true_c, est_c) -> float:
    t, e = MotionVector.of(true_c), MotionVector.of(est_c)
    return math.hypot(t.rows - e.rows, t.cols - e.cols)
