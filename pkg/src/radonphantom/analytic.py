"""Exact Radon transform of ellipses, rectangles and phantoms built from them.

A ray is addressed by its signed distance ``t`` from the origin and the
angle ``theta`` of its normal; the ray is parametrized as

    p(s) = (t cos(theta) - s sin(theta), t sin(theta) + s cos(theta)).

All functions broadcast over array-valued ``t`` and ``theta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .phantom import Ellipse, Figure, Phantom, Rectangle

# roundoff allowance below zero for the chord discriminant at grazing rays
TANGENT_TOL = 1e-14
# local direction component treated as zero (ray parallel to a band edge)
PARALLEL_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class SinogramGrid:
    """Detector offsets and projection angles of a parallel-beam scan."""

    t_values: np.ndarray
    theta_values: np.ndarray

    def __post_init__(self):
        t = np.array(self.t_values, dtype=float).reshape(-1)
        th = np.array(self.theta_values, dtype=float).reshape(-1)
        if t.size < 2:
            raise ValueError("need at least two detector offsets")
        if th.size < 1:
            raise ValueError("need at least one projection angle")
        if np.any(np.diff(t) <= 0):
            raise ValueError("detector offsets must be strictly increasing")
        if np.any(np.diff(th) <= 0):
            raise ValueError("angles must be strictly increasing")
        if th[0] < 0 or th[-1] >= 2 * math.pi:
            raise ValueError("angles must lie in [0, 2*pi)")
        t.flags.writeable = False
        th.flags.writeable = False
        object.__setattr__(self, "t_values", t)
        object.__setattr__(self, "theta_values", th)

    @classmethod
    def default(cls, n_t: int, n_theta: int, theta_max: float = 2 * math.pi) -> "SinogramGrid":
        """Pixel-centre aligned offsets on [-1, 1] and ``n_theta`` equispaced angles.

        ``t_k = -1 + (2k + 1)/n_t`` and ``theta_j = j * theta_max / n_theta``.
        """
        if n_t < 2:
            raise ValueError("n_t must be at least 2")
        if n_theta < 1:
            raise ValueError("n_theta must be at least 1")
        k = np.arange(n_t)
        t = -1.0 + (2 * k + 1) / n_t
        theta = np.arange(n_theta) * (theta_max / n_theta)
        return cls(t, theta)

    @property
    def n_t(self) -> int:
        return self.t_values.size

    @property
    def n_theta(self) -> int:
        return self.theta_values.size

    @property
    def dt(self) -> float:
        """Detector pitch (mean spacing of the offsets)."""
        return float((self.t_values[-1] - self.t_values[0]) / (self.n_t - 1))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_t, self.n_theta)


@dataclass(frozen=True, eq=False)
class Sinogram:
    """Radon values, rows indexed by detector offset and columns by angle."""

    grid: SinogramGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.grid.shape:
            raise ValueError(f"values shape {values.shape} does not match grid {self.grid.shape}")
        object.__setattr__(self, "values", values)

    @property
    def shape(self):
        return self.values.shape


def radon_ellipse(e: Ellipse, t, theta):
    th = np.subtract(theta, e.phi)
    t_hat = t - e.x0 * np.cos(theta) - e.y0 * np.sin(theta)
    D = e.b**2 * np.sin(th) ** 2 + e.a**2 * np.cos(th) ** 2
    q = D - t_hat**2
    q = np.where((q < 0) & (q >= -TANGENT_TOL), 0.0, q)
    inside = q >= 0
    chord = 2 * e.a * e.b * np.sqrt(np.where(inside, q, 0.0)) / D
    out = np.where(inside, e.delta * chord, 0.0)
    return out if out.ndim else float(out)


def _band_interval(offset, direction, half_width):
    """s-interval on which |offset + s*direction| <= half_width."""
    parallel = np.abs(direction) < PARALLEL_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        s1 = (-half_width - offset) / direction
        s2 = (half_width - offset) / direction
    lo = np.minimum(s1, s2)
    hi = np.maximum(s1, s2)
    inside_band = np.abs(offset) <= half_width
    lo = np.where(parallel, np.where(inside_band, -np.inf, np.inf), lo)
    hi = np.where(parallel, np.where(inside_band, np.inf, -np.inf), hi)
    return lo, hi


def radon_rectangle(r: Rectangle, t, theta):
    """Length of the ray inside the rectangle, times its attenuation.

    The rectangle is the intersection of two slabs in its local frame; the
    ray enters the rectangle at the later of the two slab entries and
    leaves at the earlier of the two exits.
    """
    th = np.subtract(theta, r.phi)
    c, s = math.cos(r.phi), math.sin(r.phi)
    cx = r.x0 * c + r.y0 * s
    cy = -r.x0 * s + r.y0 * c
    # ray in local coordinates: (x_off - s sin th, y_off + s cos th)
    x_off = t * np.cos(th) - cx
    y_off = t * np.sin(th) - cy
    lo_x, hi_x = _band_interval(x_off, -np.sin(th), 0.5 * r.wx)
    lo_y, hi_y = _band_interval(y_off, np.cos(th), 0.5 * r.wy)
    length = np.minimum(hi_x, hi_y) - np.maximum(lo_x, lo_y)
    out = r.delta * np.maximum(length, 0.0)
    return out if out.ndim else float(out)


def radon_figure(f: Figure, t, theta):
    if isinstance(f, Ellipse):
        return radon_ellipse(f, t, theta)
    if isinstance(f, Rectangle):
        return radon_rectangle(f, t, theta)
    raise TypeError(f"not a figure: {f!r}")


def analytic_sinogram(p: Phantom, grid: SinogramGrid) -> Sinogram:
    """Exact sinogram of a phantom, summing figures in list order."""
    t = grid.t_values[:, None]
    theta = grid.theta_values[None, :]
    values = np.zeros(grid.shape)
    for f in p.figures:
        values = values + radon_figure(f, t, theta)
    return Sinogram(grid, values)
