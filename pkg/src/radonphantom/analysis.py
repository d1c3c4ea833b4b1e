"""Masked error metrics and the analytic-versus-discrete comparison."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .analytic import SinogramGrid, analytic_sinogram
from .discrete import forward_project, pixel_centers, rasterize
from .phantom import Phantom
from .reconstruction import FilterSpec, fbp


class ZeroReferenceError(ZeroDivisionError):
    """The reference image vanishes on the mask."""


class EmptyMaskError(ValueError):
    """Every pixel was excluded from the mask."""


def default_margin(n: int) -> int:
    return int(round(n / 100))


def relative_error(a: np.ndarray, b: np.ndarray, mask: np.ndarray | None = None) -> float:
    """||a - b|| / ||b|| in the 2-norm, restricted to ``mask`` when given."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    if mask is None:
        mask = np.ones(a.shape, dtype=bool)
    elif mask.shape != a.shape:
        raise ValueError(f"mask shape {mask.shape} does not match images {a.shape}")
    diff = (a - b)[mask]
    ref = b[mask]
    # correctly rounded sums keep regression values platform independent
    den = math.sqrt(math.fsum(ref * ref))
    if den == 0.0:
        raise ZeroReferenceError("reference image is zero on the mask")
    return math.sqrt(math.fsum(diff * diff)) / den


def region_labels(p: Phantom, n: int) -> np.ndarray:
    """Integer label per pixel; equal labels mean equal figure membership.

    In circle mode the outside of the unit disk is its own region.
    """
    x, y = pixel_centers(n)
    sig = p.signature(x, y)
    if p.circle:
        sig = np.concatenate([sig, (x**2 + y**2 > 1.0)[..., None]], axis=-1)
    if sig.shape[-1] == 0:
        return np.zeros((n, n), dtype=np.intp)
    _, labels = np.unique(sig.reshape(n * n, -1), axis=0, return_inverse=True)
    return labels.reshape(n, n)


def gibbs_mask(p: Phantom, n: int, margin: int) -> np.ndarray:
    """Pixels at Chebyshev distance > ``margin`` from every figure edge.

    A pixel is dropped when any pixel in the (2*margin + 1)^2 window around
    it belongs to a different set of figures. In circle mode the unit circle
    counts as an edge and pixels outside the disk are dropped too.
    """
    if margin < 0:
        raise ValueError("margin must be non-negative")
    labels = region_labels(p, n)
    size = 2 * int(margin) + 1
    lo = ndimage.minimum_filter(labels, size=size, mode="nearest")
    hi = ndimage.maximum_filter(labels, size=size, mode="nearest")
    mask = lo == hi
    if p.circle:
        x, y = pixel_centers(n)
        mask &= x**2 + y**2 <= 1.0
    if not mask.any():
        raise EmptyMaskError(f"margin {margin} excludes every pixel")
    return mask


@dataclass
class ComparisonReport:
    phantom: str
    n: int
    n_theta: int
    margin: int
    err_analytic: float
    err_discrete: float
    runtimes: dict = field(default_factory=dict, compare=False)

    def as_text(self) -> str:
        rows = [
            ("phantom", self.phantom),
            ("n", self.n),
            ("n_theta", self.n_theta),
            ("margin", self.margin),
            ("err_analytic", "%.17g" % self.err_analytic),
            ("err_discrete", "%.17g" % self.err_discrete),
        ]
        return "".join(f"{k}={v}\n" for k, v in rows)


def compare_pipelines(
    p: Phantom,
    n: int,
    grid: SinogramGrid,
    margin: int,
    name: str = "custom",
    spec: FilterSpec = FilterSpec(),
) -> ComparisonReport:
    """Reconstruct ``p`` from its exact and from its discrete sinogram.

    Both reconstructions are compared with the rasterized phantom on the
    Gibbs mask.
    """
    timings = {}
    tick = time.perf_counter()
    image = rasterize(p, n)
    mask = gibbs_mask(p, n, margin)
    timings["rasterize"] = time.perf_counter() - tick

    tick = time.perf_counter()
    rec_analytic = fbp(analytic_sinogram(p, grid), n, spec, circle=p.circle)
    timings["analytic"] = time.perf_counter() - tick

    tick = time.perf_counter()
    rec_discrete = fbp(forward_project(image, grid), n, spec, circle=p.circle)
    timings["discrete"] = time.perf_counter() - tick

    return ComparisonReport(
        phantom=name,
        n=n,
        n_theta=grid.n_theta,
        margin=margin,
        err_analytic=relative_error(rec_analytic, image, mask),
        err_discrete=relative_error(rec_discrete, image, mask),
        runtimes=timings,
    )
