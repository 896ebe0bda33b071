"""Pairwise registration of consecutive frames, projected onto constant drift.

Represents the class of methods that estimate each frame-to-frame offset
independently and only afterwards impose the constant-motion model.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import FrameSequence, MotionVector
from .registration import SearchRange, _argmax, _check_nondegenerate, DegenerateSurfaceError
from .spectral import inverse_dft, sequence_spectra

__all__ = ["PairwiseOffsets", "pairwise_register", "project_constant"]


@dataclass(frozen=True)
class PairwiseOffsets:
    offsets: tuple  # offsets[i] is the displacement from frame i+1 to frame i+2
    peak_scores: tuple

    def __post_init__(self):
        if len(self.offsets) != len(self.peak_scores):
            raise ValueError("offsets and peak_scores differ in length")

    def __len__(self):
        return len(self.offsets)


def pairwise_register(seq, search: Optional[SearchRange] = None) -> PairwiseOffsets:
    """Whole-pixel cross-correlation peak for each consecutive frame pair.

    The window is the one :func:`~driftreg.registration.ml_register` would
    use for the same sequence, with the same tie-break.
    """
    if not isinstance(seq, FrameSequence):
        seq = FrameSequence(seq)
    _check_nondegenerate(seq)
    search = SearchRange() if search is None else search
    nr, nc = seq.shape
    rows = search.axis_candidates(nr, seq.K)
    cols = search.axis_candidates(nc, seq.K)
    spectra = sequence_spectra(seq.frames)
    offsets, scores = [], []
    for k in range(seq.K - 1):
        surface = inverse_dft(np.conj(spectra[k]) * spectra[k + 1])
        est, sub = _argmax(surface, rows, cols)
        if sub.size > 1 and np.ptp(sub) == 0:
            raise DegenerateSurfaceError(f"flat correlation between frames {k + 1} and {k + 2}")
        offsets.append(est)
        scores.append(float(surface[est.rows % nr, est.cols % nc]))
    return PairwiseOffsets(tuple(offsets), tuple(scores))


def _round_half_to_zero(x: float) -> int:
    return int(math.copysign(math.ceil(abs(x) - 0.5), x))


def project_constant(offsets, estimator: str = "mean") -> MotionVector:
    """Constant drift closest to a list of pairwise offsets.

    ``"mean"`` is the least-squares projection; ``"median"`` is the robust
    alternative. Both round to the nearest integer with halves towards zero.
    """
    if isinstance(offsets, PairwiseOffsets):
        offsets = offsets.offsets
    arr = np.asarray([tuple(o) for o in offsets], dtype=np.float64)
    if arr.size == 0:
        raise ValueError("no offsets to project")
    if estimator == "mean":
        centre = arr.mean(axis=0)
    elif estimator == "median":
        centre = np.median(arr, axis=0)
    else:
        raise ValueError(f"unknown estimator {estimator!r}")
    return MotionVector(_round_half_to_zero(centre[0]), _round_half_to_zero(centre[1]))
