"""Frame file formats: binary PGM, the MLRF raw float container, manifests.

MLRF layout (little-endian throughout)::

    b"MLRF" | version u8 = 1 | dtype u8 (0=f32, 1=f64) | rows u32 | cols u32 | samples

Samples are row-major. Manifests are UTF-8 text, one ``key=value`` per line,
``#`` starts a comment line.
"""
from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

from .core import as_frame

MAGIC = b"MLRF"
_HEADER = struct.Struct("<4sBBII")
_DTYPES = {0: np.dtype("<f4"), 1: np.dtype("<f8")}


class FormatError(ValueError):
    pass


def write_mlrf(path, frame, dtype: str = "f64") -> None:
    frame = as_frame(frame)
    code = {"f32": 0, "f64": 1}[dtype]
    rows, cols = frame.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, 1, code, rows, cols))
        fh.write(frame.astype(_DTYPES[code]).tobytes(order="C"))


def read_mlrf(path) -> np.ndarray:
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise FormatError(f"{path}: truncated MLRF header")
    magic, version, code, rows, cols = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"{path}: not an MLRF file")
    if version != 1:
        raise FormatError(f"{path}: unsupported MLRF version {version}")
    if code not in _DTYPES:
        raise FormatError(f"{path}: unknown dtype code {code}")
    dt = _DTYPES[code]
    expected = rows * cols * dt.itemsize
    body = data[_HEADER.size :]
    if len(body) != expected:
        raise FormatError(f"{path}: expected {expected} sample bytes, found {len(body)}")
    return np.frombuffer(body, dtype=dt).reshape(rows, cols).astype(np.float64)


def _pgm_tokens(data: bytes, count: int):
    """First ``count`` header tokens and the offset of the raster."""
    tokens, i, n = [], 0, len(data)
    while len(tokens) < count:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i : i + 1] == b"#":
            while i < n and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        start = i
        while i < n and not data[i : i + 1].isspace() and data[i : i + 1] != b"#":
            i += 1
        if start == i:
            raise FormatError("truncated PGM header")
        tokens.append(data[start:i])
    # exactly one whitespace byte separates maxval from the raster
    return tokens, i + 1


def read_pgm(path, normalize: bool = True) -> np.ndarray:
    """Decode a binary (P5) PGM. ``normalize`` maps ``maxval`` to 1.0."""
    data = Path(path).read_bytes()
    tokens, offset = _pgm_tokens(data, 4)
    if tokens[0] != b"P5":
        raise FormatError(f"{path}: only binary PGM (P5) is supported, got {tokens[0]!r}")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise FormatError(f"{path}: malformed PGM header") from exc
    if not 0 < maxval < 65536 or width < 1 or height < 1:
        raise FormatError(f"{path}: invalid PGM header values")
    dt = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    need = width * height * dt.itemsize
    raster = data[offset : offset + need]
    if len(raster) != need:
        raise FormatError(f"{path}: truncated PGM raster")
    img = np.frombuffer(raster, dtype=dt).reshape(height, width).astype(np.float64)
    if np.any(img > maxval):
        raise FormatError(f"{path}: sample exceeds maxval")
    return img / maxval if normalize else img


def write_pgm(path, frame, maxval: int = 65535) -> None:
    """Encode a frame with values in [0, 1] (clipped) as a binary PGM."""
    if not 0 < maxval < 65536:
        raise ValueError("maxval must be in 1..65535")
    frame = as_frame(frame)
    q = np.rint(np.clip(frame, 0.0, 1.0) * maxval)
    dt = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    rows, cols = frame.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{cols} {rows}\n{maxval}\n".encode("ascii"))
        fh.write(q.astype(dt).tobytes())


def read_frame(path) -> np.ndarray:
    ext = os.path.splitext(str(path))[1].lower()
    if ext == ".pgm":
        return read_pgm(path)
    if ext == ".mlrf":
        return read_mlrf(path)
    raise FormatError(f"{path}: unsupported frame format {ext!r}")


def write_frame(path, frame) -> None:
    ext = os.path.splitext(str(path))[1].lower()
    if ext == ".pgm":
        write_pgm(path, frame)
    elif ext == ".mlrf":
        write_mlrf(path, frame)
    else:
        raise FormatError(f"{path}: unsupported frame format {ext!r}")


def write_manifest(path, entries: dict) -> None:
    lines = []
    for key, value in entries.items():
        if "=" in key or "\n" in key or "\n" in str(value):
            raise ValueError(f"manifest entry {key!r} is not representable")
        lines.append(f"{key}={value}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_manifest(path) -> dict:
    entries = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise FormatError(f"{path}:{lineno}: expected key=value")
        entries[key.strip()] = value.strip()
    return entries
