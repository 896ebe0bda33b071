import numpy as np
import pytest


def naive_dft(x):
    """O(N^4) forward DFT by direct summation."""
    nr, nc = x.shape
    out = np.zeros((nr, nc), dtype=complex)
    r = np.arange(nr)[:, None]
    c = np.arange(nc)[None, :]
    for u in range(nr):
        for v in range(nc):
            out[u, v] = np.sum(x * np.exp(-2j * np.pi * (u * r / nr + v * c / nc)))
    return out


def spatial_xcorr(a, b):
    """surface[d] = sum_n a[n] * b[(n + d) mod dims], by explicit loops."""
    nr, nc = a.shape
    out = np.zeros((nr, nc))
    for dr in range(nr):
        for dc in range(nc):
            s = 0.0
            for i in range(nr):
                for j in range(nc):
                    s += a[i, j] * b[(i + dr) % nr, (j + dc) % nc]
            out[dr, dc] = s
    return out


def loop_downsample(s, m):
    nr, nc = s.shape
    out = np.empty_like(s)
    for i in range(nr):
        for j in range(nc):
            out[i, j] = s[(m * i) % nr, (m * j) % nc]
    return out


def shifted_sequence(scene, c, K):
    """Noiseless frames y_k = roll(scene, k*c), k = 1..K, built index by index."""
    nr, nc = scene.shape
    frames = []
    for k in range(1, K + 1):
        y = np.empty_like(scene)
        for i in range(nr):
            for j in range(nc):
                y[i, j] = scene[(i - k * c[0]) % nr, (j - k * c[1]) % nc]
        frames.append(y)
    return np.stack(frames)


def rel_err(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
