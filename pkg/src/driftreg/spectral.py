"""DFT wrappers and circular cross-correlation.

Convention: unnormalized forward transform, ``1/(rows*cols)`` on the inverse
(numpy's default). Correlation is ``surface[d] = sum_n a[n] * b[(n + d) mod dims]``,
realised in the frequency domain as ``ifft(conj(A) * B)``.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import as_frame

__all__ = [
    "forward_dft",
    "inverse_dft",
    "cross_correlate",
    "group_sum_surface",
    "sequence_spectra",
]


def forward_dft(frame, subtract_mean: bool = False) -> np.ndarray:
    frame = as_frame(frame)
    if subtract_mean:
        frame = frame - frame.mean()
    return np.fft.fft2(frame)


def inverse_dft(spectrum) -> np.ndarray:
    """Inverse transform of a spectrum that came from a real frame (real part kept)."""
    return np.fft.ifft2(np.asarray(spectrum)).real


def sequence_spectra(frames, subtract_mean: bool = False) -> np.ndarray:
    """Spectra of every frame in a ``(K, rows, cols)`` stack, as one array."""
    frames = np.asarray(frames, dtype=np.float64)
    if subtract_mean:
        frames = frames - frames.mean(axis=(1, 2), keepdims=True)
    return np.fft.fft2(frames, axes=(1, 2))


def cross_correlate(a, b) -> np.ndarray:
    a = as_frame(a, name="a")
    b = as_frame(b, name="b")
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return inverse_dft(np.conj(forward_dft(a)) * forward_dft(b))


def group_sum_surface(spectra: Sequence[np.ndarray], m: int) -> np.ndarray:
    """Summed correlation of all frame pairs ``m`` apart, with a single inverse DFT.

    ``spectra[0]`` is the spectrum of frame 1.
    """
    spectra = np.asarray(spectra)
    K = spectra.shape[0]
    if not 1 <= m <= K - 1:
        raise ValueError(f"separation m={m} outside 1..{K - 1}")
    acc = np.sum(np.conj(spectra[: K - m]) * spectra[m:], axis=0)
    return inverse_dft(acc)
