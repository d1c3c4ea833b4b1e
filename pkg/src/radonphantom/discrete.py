"""Rasterized phantoms and the ray-driven discrete Radon transform."""

from __future__ import annotations

import numpy as np

from .analytic import Sinogram, SinogramGrid
from .phantom import Phantom


def pixel_centers(n: int):
    """Coordinates of pixel centres as ``(x, y)`` arrays of shape (n, n).

    Row 0 is the top of the image (y close to 1); column 0 is the left edge.
    """
    if n < 2:
        raise ValueError("image side must be at least 2 pixels")
    c = -1.0 + (2 * np.arange(n) + 1) / n
    x = np.broadcast_to(c[None, :], (n, n))
    y = np.broadcast_to(-c[:, None], (n, n))
    return x, y


def rasterize(p: Phantom, n: int) -> np.ndarray:
    """Point-sample the phantom at pixel centres (no anti-aliasing)."""
    if int(n) != n or n < 2:
        raise ValueError(f"invalid image size {n!r}")
    x, y = pixel_centers(int(n))
    return p.attenuation(x, y)


def _padded(img: np.ndarray) -> np.ndarray:
    n = img.shape[0]
    padded = np.zeros((n + 2, n + 2))
    padded[1:-1, 1:-1] = img
    return padded


def _bilinear_padded(padded: np.ndarray, x, y):
    n = padded.shape[0] - 2
    col = (x + 1.0) * (n / 2) - 0.5
    row = (1.0 - y) * (n / 2) - 0.5
    outside = (col <= -1) | (col >= n) | (row <= -1) | (row >= n)
    # points far outside are parked on the zero border
    col = np.where(outside, -1.0, col)
    row = np.where(outside, -1.0, row)
    c0 = np.floor(col)
    r0 = np.floor(row)
    fc = col - c0
    fr = row - r0
    flat = (r0.astype(np.intp) + 1) * (n + 2) + (c0.astype(np.intp) + 1)
    v = padded.ravel()
    top = v[flat] * (1 - fc) + v[flat + 1] * fc
    bottom = v[flat + n + 2] * (1 - fc) + v[flat + n + 3] * fc
    return top * (1 - fr) + bottom * fr


def bilinear(img: np.ndarray, x, y):
    """Bilinear interpolation of ``img`` at normalized coordinates.

    The image is treated as zero beyond its outermost pixel centres.
    """
    img = np.asarray(img, dtype=float)
    return _bilinear_padded(_padded(img), np.asarray(x, dtype=float), np.asarray(y, dtype=float))


def forward_project(img: np.ndarray, grid: SinogramGrid) -> Sinogram:
    """Discrete Radon transform by sampling each ray through the image.

    Each ray is sampled at the midpoints of ``n`` steps of length
    ``h = 2/n`` spanning s in [-1, 1]; samples come from bilinear
    interpolation and the line integral is ``h`` times their sum.
    """
    img = np.asarray(img, dtype=float)
    n = img.shape[0]
    if img.ndim != 2 or img.shape[1] != n:
        raise ValueError("image must be square")
    h = 2.0 / n
    s = -1.0 + (2 * np.arange(n) + 1) / n
    t = grid.t_values
    padded = _padded(img)
    values = np.empty(grid.shape)
    for j, theta in enumerate(grid.theta_values):
        c, sn = np.cos(theta), np.sin(theta)
        x = t[:, None] * c - s[None, :] * sn
        y = t[:, None] * sn + s[None, :] * c
        values[:, j] = h * _bilinear_padded(padded, x, y).sum(axis=1)
    return Sinogram(grid, values)
