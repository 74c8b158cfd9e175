"""Deterministic ASCII and PPM pictures of tilings.

A cell covered exactly once gets the colour of the translate ``a + F``
covering it.  The colour depends on the residue of ``a`` modulo the period
lattice and on the parity of its lattice coefficients, so neighbouring
translates of the same class still differ.  Cells covered zero or several
times (or any cell of a tiling of level above one) show plain membership.
Rows are drawn top to bottom, from ``y0 + h - 1`` down to ``y0``.
"""
from __future__ import annotations

import numpy as np

from .errors import WindowTooLarge
from .lattice import Lattice, PeriodicSet, Tile
from .slide import SlideTiling, cover_grid, membership_grid

MAX_PIXELS = 4096 * 4096

PALETTE = np.array([
    (230, 159, 0), (86, 180, 233), (0, 158, 115), (240, 228, 66),
    (0, 114, 178), (213, 94, 0), (204, 121, 167), (120, 94, 240),
    (100, 143, 255), (254, 97, 0), (220, 38, 127), (255, 176, 0),
], dtype=np.uint8)
IN_COLOR = np.array((25, 25, 25), dtype=np.uint8)
OUT_COLOR = np.array((245, 245, 245), dtype=np.uint8)
ASCII_CLASSES = "abcdefghijklmnopqrstuvwxyz"


def _lattice_of(A) -> Lattice:
    if isinstance(A, PeriodicSet):
        return A.minimal.lattice
    if isinstance(A, SlideTiling):
        return A.scaffold.minimal.lattice
    return Lattice.standard(2)


def _class_index(L: Lattice, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Residue index times 4 plus the coefficient parities, vectorised."""
    (a, _), (b, c) = L.basis
    t = Y // c
    xr = X - t * b
    s = xr // a
    rx, ry = xr - s * a, Y - t * c
    return (rx * c + ry) * 4 + 2 * (s % 2) + (t % 2)


def class_grid(A, F: Tile, x0: int, y0: int, w: int, h: int):
    """(cover count, class index or -1, membership) on the window."""
    if w <= 0 or h <= 0:
        raise ValueError("window must be nonempty")
    if w * h > MAX_PIXELS:
        raise WindowTooLarge(f"{w}x{h} exceeds {MAX_PIXELS} pixels")
    cover = cover_grid(F, A, x0, y0, w, h)
    member = membership_grid(A, x0, y0, w, h).astype(bool)
    X = np.arange(x0, x0 + w)[:, None] + np.zeros((1, h), dtype=np.int64)
    Y = np.arange(y0, y0 + h)[None, :] + np.zeros((w, 1), dtype=np.int64)
    owner_x = np.zeros((w, h), dtype=np.int64)
    owner_y = np.zeros((w, h), dtype=np.int64)
    L = _lattice_of(A)
    for fx, fy in F:
        m = membership_grid(A, x0 - fx, y0 - fy, w, h).astype(bool)
        owner_x = np.where(m, X - fx, owner_x)
        owner_y = np.where(m, Y - fy, owner_y)
    cls = np.where(cover == 1, _class_index(L, owner_x, owner_y), -1)
    return cover, cls, member


def render_ascii(A, F: Tile, x0: int, y0: int, w: int, h: int) -> str:
    """Letters for translate classes (upper case on A itself); '#'/'.' otherwise."""
    _, cls, member = class_grid(A, F, x0, y0, w, h)
    rows = []
    for j in range(h - 1, -1, -1):
        chars = []
        for i in range(w):
            k = cls[i, j]
            if k < 0:
                chars.append("#" if member[i, j] else ".")
            else:
                ch = ASCII_CLASSES[k % len(ASCII_CLASSES)]
                chars.append(ch.upper() if member[i, j] else ch)
        rows.append("".join(chars))
    return "\n".join(rows) + "\n"


def render_rgb(A, F: Tile, x0: int, y0: int, w: int, h: int, scale: int = 1) -> np.ndarray:
    """An (h*scale, w*scale, 3) uint8 image, top row first."""
    _, cls, member = class_grid(A, F, x0, y0, w, h)
    img = np.where(member[..., None], IN_COLOR, OUT_COLOR)
    img = np.where((cls >= 0)[..., None], PALETTE[np.maximum(cls, 0) % len(PALETTE)], img)
    img = img.transpose(1, 0, 2)[::-1]
    if scale > 1:
        if img.shape[0] * img.shape[1] * scale * scale > MAX_PIXELS:
            raise WindowTooLarge("scaled image exceeds the pixel cap")
        img = img.repeat(scale, axis=0).repeat(scale, axis=1)
    return np.ascontiguousarray(img, dtype=np.uint8)


def ppm_bytes(img: np.ndarray) -> bytes:
    hgt, wid, _ = img.shape
    return f"P6\n{wid} {hgt}\n255\n".encode("ascii") + img.tobytes()


def render_ppm(A, F: Tile, x0: int, y0: int, w: int, h: int, scale: int = 1) -> bytes:
    return ppm_bytes(render_rgb(A, F, x0, y0, w, h, scale))


def render_tiling(A, F: Tile, window, fmt: str = "ascii", scale: int = 1):
    """``window = (x0, y0, w, h)``; str for ascii, bytes for ppm."""
    x0, y0, w, h = window
    if fmt == "ascii":
        return render_ascii(A, F, x0, y0, w, h)
    if fmt == "ppm":
        return render_ppm(A, F, x0, y0, w, h, scale)
    raise ValueError(f"unknown format {fmt!r}")
