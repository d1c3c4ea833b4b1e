"""Brute-force chord lengths used to check the closed-form transforms.

Nothing here uses the closed-form chord expressions: the figure boundary is
treated as the zero set of an implicit function, crossings along the ray
are found by scanning for sign changes and refined by bisection.
"""

from __future__ import annotations

import math

import numpy as np

from .phantom import Ellipse, Figure, Rectangle

SCAN_STEP = 1e-4
SCAN_HALF_SPAN = 3.0
BISECT_TOL = 1e-13


def _level(f: Figure, x, y):
    """Negative or zero inside the figure, positive outside."""
    dx, dy = x - f.x0, y - f.y0
    c, s = math.cos(f.phi), math.sin(f.phi)
    u = c * dx + s * dy
    v = -s * dx + c * dy
    if isinstance(f, Ellipse):
        return (u / f.a) ** 2 + (v / f.b) ** 2 - 1.0
    if isinstance(f, Rectangle):
        return np.maximum(np.abs(u) / (0.5 * f.wx), np.abs(v) / (0.5 * f.wy)) - 1.0
    raise TypeError(f"not a figure: {f!r}")


def oracle_chord(f: Figure, t: float, theta: float) -> float:
    """Attenuation-weighted length of the ray (t, theta) inside ``f``."""
    ct, st = math.cos(theta), math.sin(theta)

    def inside(s):
        return _level(f, t * ct - s * st, t * st + s * ct) <= 0.0

    n = int(round(2 * SCAN_HALF_SPAN / SCAN_STEP)) + 1
    s = np.linspace(-SCAN_HALF_SPAN, SCAN_HALF_SPAN, n)
    flags = inside(s)
    idx = np.flatnonzero(flags[1:] != flags[:-1])
    if idx.size == 0:
        return 0.0
    lo = s[idx].copy()
    hi = s[idx + 1].copy()
    lo_flag = flags[idx]
    while np.max(hi - lo) > BISECT_TOL:
        mid = 0.5 * (lo + hi)
        same = inside(mid) == lo_flag
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    crossings = 0.5 * (lo + hi)
    # the scan starts outside, so crossings alternate entry/exit
    if crossings.size % 2:
        raise RuntimeError("unpaired boundary crossing; widen the scan span")
    length = np.sum(crossings[1::2] - crossings[0::2])
    return f.delta * float(length)
