"""Shift-and-add scene estimate for a registered sequence."""
from __future__ import annotations

import numpy as np

from .core import FrameSequence, MotionVector

__all__ = ["coadd"]


def coadd(seq, c) -> np.ndarray:
    """Mean of the frames after undoing drift ``k*c`` on frame ``k`` (k from 1).

    With the true drift this is the least-squares scene estimate; using the
    mean instead of the raw sum keeps intensities comparable across K.
    """
    if not isinstance(seq, FrameSequence):
        if len(seq) == 0:
            raise ValueError("cannot coadd an empty sequence")
        seq = FrameSequence(seq)
    c = MotionVector.of(c)
    acc = np.zeros(seq.shape)
    for k, frame in enumerate(seq.frames, start=1):
        acc += np.roll(frame, (-k * c.rows, -k * c.cols), axis=(0, 1))
    return acc / seq.K
