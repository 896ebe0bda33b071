"""Maximum-likelihood drift estimation for constant-translation sequences.

Three estimators share one contract and one candidate grid:

* :func:`ml_register` -- FFT fast path: per-frame spectra, one summed
  correlation surface per frame separation ``m``, downsample each by ``m``,
  sum, argmax.
* :func:`direct_register` -- the same objective summed literally in the
  spatial domain.
* :func:`brute_force_cost_register` -- least-squares residual after
  coadding with each candidate drift; argmin.

All three return a surface laid out by circular displacement (index ``d``
holds candidate ``d mod dims``) and break ties towards the lexicographically
smallest canonical candidate.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import FrameSequence, MotionVector, canonical
from .spectral import group_sum_surface, sequence_spectra

__all__ = [
    "SearchRange",
    "RegistrationResult",
    "DegenerateSurfaceError",
    "default_max_drift",
    "downsample_mod",
    "objective_surface",
    "ml_register",
    "direct_register",
    "brute_force_cost_register",
]


class DegenerateSurfaceError(ValueError):
    """The objective is flat over the search window, so no argmax exists."""


def default_max_drift(n: int, K: int) -> int:
    """Largest per-frame drift whose total excursion ``(K-1)*c`` stays under ``n/2``."""
    return n // (2 * K)


@dataclass(frozen=True)
class SearchRange:
    """Per-axis bound on the candidate drift.

    ``max_drift=None`` means :func:`default_max_drift` for each axis.
    ``full_range=True`` searches every residue and ignores ``max_drift``.
    """

    max_drift: Optional[int] = None
    full_range: bool = False

    def __post_init__(self):
        if self.max_drift is not None and self.max_drift < 0:
            raise ValueError("max_drift must be non-negative")

    def axis_candidates(self, n: int, K: int) -> np.ndarray:
        """Sorted canonical residues searched along an axis of length ``n``."""
        lo, hi = -(n // 2), n - n // 2
        if self.full_range:
            return np.arange(lo, hi)
        bound = default_max_drift(n, K) if self.max_drift is None else self.max_drift
        if bound > n / 2:
            raise ValueError(f"max_drift={bound} exceeds half the axis length {n}")
        vals = np.arange(-bound, bound + 1)
        return np.unique((vals - lo) % n + lo)

    def contains(self, c, shape, K: int) -> bool:
        c = canonical(c, shape)
        return bool(
            np.isin(c.rows, self.axis_candidates(shape[0], K))
            and np.isin(c.cols, self.axis_candidates(shape[1], K))
        )


@dataclass(frozen=True)
class RegistrationResult:
    """Outcome of one registration.

    ``objective_surface`` is indexed by circular displacement. For the
    least-squares oracle it holds the negated cost, so every method is an
    argmax. ``range_limited`` is set when the unrestricted argmax of the
    surface falls outside the search window.
    """

    estimate: MotionVector
    score: float
    objective_surface: np.ndarray
    range_limited: bool = False
    method: str = "ml"


def _as_sequence(seq) -> FrameSequence:
    if isinstance(seq, FrameSequence):
        return seq
    return FrameSequence(seq)


def _check_nondegenerate(seq: FrameSequence) -> None:
    if not np.any(seq.frames):
        raise DegenerateSurfaceError("all frames are zero; the drift is undefined")


def _argmax(surface: np.ndarray, rows: np.ndarray, cols: np.ndarray):
    # rows/cols ascending, so argmax's first hit is the lexicographic minimum
    nr, nc = surface.shape
    sub = surface[np.ix_(rows % nr, cols % nc)]
    i, j = np.unravel_index(int(np.argmax(sub)), sub.shape)
    return MotionVector(int(rows[i]), int(cols[j])), sub


def _select(surface: np.ndarray, K: int, search: Optional[SearchRange], method: str) -> RegistrationResult:
    search = SearchRange() if search is None else search
    nr, nc = surface.shape
    rows = search.axis_candidates(nr, K)
    cols = search.axis_candidates(nc, K)
    est, sub = _argmax(surface, rows, cols)
    if sub.size > 1 and np.ptp(sub) == 0:
        raise DegenerateSurfaceError("objective is flat over the search window")
    limited = False
    if not search.full_range:
        limited = float(surface.max()) > float(surface[est.rows % nr, est.cols % nc])
    score = float(surface[est.rows % nr, est.cols % nc])
    surface = surface.copy()
    surface.setflags(write=False)
    return RegistrationResult(est, score, surface, bool(limited), method)


def downsample_mod(surface, m: int, mode: str = "modular") -> np.ndarray:
    """Resample ``surface`` so that ``out[c] = surface[m * c]``.

    ``mode="modular"`` wraps ``m*c`` modulo the shape. ``mode="zero-pad"``
    keeps only the strided samples that fit inside the array (by array
    index) and fills the remainder with zeros.
    """
    if m < 1:
        raise ValueError(f"downsample factor must be >= 1, got {m}")
    surface = np.asarray(surface, dtype=np.float64)
    nr, nc = surface.shape
    if mode == "modular":
        return surface[np.ix_((m * np.arange(nr)) % nr, (m * np.arange(nc)) % nc)]
    if mode == "zero-pad":
        out = np.zeros_like(surface)
        strided = surface[::m, ::m]
        out[: strided.shape[0], : strided.shape[1]] = strided
        return out
    raise ValueError(f"unknown downsample mode {mode!r}")


def objective_surface(seq, downsample: str = "modular", subtract_mean: bool = False) -> np.ndarray:
    """Sum over separations ``m`` of the downsampled group correlation surfaces."""
    seq = _as_sequence(seq)
    spectra = sequence_spectra(seq.frames, subtract_mean=subtract_mean)
    total = np.zeros(seq.shape)
    for m in range(1, seq.K):
        total += downsample_mod(group_sum_surface(spectra, m), m, mode=downsample)
    return total


def ml_register(
    seq,
    search: Optional[SearchRange] = None,
    downsample: str = "modular",
    subtract_mean: bool = False,
) -> RegistrationResult:
    """Estimate the constant drift of ``seq`` by the FFT correlation-sum method.

    Cost is ``O(K N^2 log N + K^2 N^2)``. The estimate is returned in
    canonical residue form and lies inside ``search``.
    """
    seq = _as_sequence(seq)
    _check_nondegenerate(seq)
    surface = objective_surface(seq, downsample=downsample, subtract_mean=subtract_mean)
    return _select(surface, seq.K, search, "ml")


def direct_register(seq, search: Optional[SearchRange] = None) -> RegistrationResult:
    """Spatial-domain evaluation of the correlation-sum objective.

    For every displacement ``d`` accumulates
    ``sum_m sum_k sum_n y_k[n] * y_{k+m}[n + m*d]``. Quartic in N; small
    inputs only.
    """
    seq = _as_sequence(seq)
    _check_nondegenerate(seq)
    y = seq.frames
    K = seq.K
    nr, nc = seq.shape
    surface = np.zeros((nr, nc))
    for dr in range(nr):
        for dc in range(nc):
            acc = 0.0
            for m in range(1, K):
                later = np.roll(y[m:], (-m * dr, -m * dc), axis=(1, 2))
                acc += float(np.sum(y[: K - m] * later))
            surface[dr, dc] = acc
    return _select(surface, K, search, "direct")


def brute_force_cost_register(seq, search: Optional[SearchRange] = None) -> RegistrationResult:
    """Least-squares oracle.

    For each candidate drift the scene estimate is the mean of the
    motion-corrected frames, and the cost is the squared residual of the
    frames against that estimate re-shifted. ``objective_surface`` holds
    ``-cost``.
    """
    seq = _as_sequence(seq)
    _check_nondegenerate(seq)
    y = seq.frames
    K = seq.K
    nr, nc = seq.shape
    cost = np.zeros((nr, nc))
    for dr in range(nr):
        for dc in range(nc):
            mu = np.zeros((nr, nc))
            for k in range(1, K + 1):
                mu += np.roll(y[k - 1], (-k * dr, -k * dc), axis=(0, 1))
            mu /= K
            total = 0.0
            for k in range(1, K + 1):
                resid = y[k - 1] - np.roll(mu, (k * dr, k * dc), axis=(0, 1))
                total += float(np.sum(resid * resid))
            cost[dr, dc] = total
    return _select(-cost, K, search, "brute_force")
