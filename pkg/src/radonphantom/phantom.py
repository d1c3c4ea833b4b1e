"""Geometric figures, phantoms and the built-in phantom gallery.

All coordinates live on the normalized image domain [-1, 1]^2 with x
pointing right and y pointing up. Angles are in radians, counterclockwise
from the x-axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Union

import numpy as np

# slack for support-in-unit-disk checks
CIRCLE_TOL = 1e-12


class PhantomFormatError(ValueError):
    """Raised when a phantom file cannot be parsed."""


class UnknownGalleryError(KeyError):
    """Raised for a gallery name that is not shipped with the package."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


@dataclass(frozen=True)
class Ellipse:
    """Ellipse with semi-axes ``a`` (local x) and ``b`` (local y)."""

    x0: float
    y0: float
    a: float
    b: float
    phi: float = 0.0
    delta: float = 1.0

    def contains(self, x, y):
        return contains_ellipse(self, x, y)

    @property
    def area(self) -> float:
        return math.pi * self.a * self.b

    @property
    def radius(self) -> float:
        """Radius of the smallest origin-centred disk holding the support."""
        return math.hypot(self.x0, self.y0) + max(self.a, self.b)


@dataclass(frozen=True)
class Rectangle:
    """Rectangle with full side lengths ``wx``, ``wy`` along its local axes.

    A square is the special case ``wx == wy``.
    """

    x0: float
    y0: float
    wx: float
    wy: float
    phi: float = 0.0
    delta: float = 1.0

    @classmethod
    def square(cls, x0, y0, w, phi=0.0, delta=1.0) -> "Rectangle":
        return cls(x0, y0, w, w, phi, delta)

    def contains(self, x, y):
        return contains_rectangle(self, x, y)

    @property
    def area(self) -> float:
        return self.wx * self.wy

    def corners(self) -> np.ndarray:
        c, s = math.cos(self.phi), math.sin(self.phi)
        hx, hy = 0.5 * self.wx, 0.5 * self.wy
        local = np.array([[hx, hy], [-hx, hy], [-hx, -hy], [hx, -hy]])
        rot = np.array([[c, -s], [s, c]])
        return local @ rot.T + np.array([self.x0, self.y0])

    @property
    def radius(self) -> float:
        return float(np.max(np.hypot(*self.corners().T)))


Figure = Union[Ellipse, Rectangle]


def _local_coords(f: Figure, x, y):
    dx = np.subtract(x, f.x0)
    dy = np.subtract(y, f.y0)
    c, s = math.cos(f.phi), math.sin(f.phi)
    return dx * c + dy * s, dy * c - dx * s


def contains_ellipse(e: Ellipse, x, y):
    """Closed membership test; works elementwise on arrays."""
    xl, yl = _local_coords(e, x, y)
    return (xl / e.a) ** 2 + (yl / e.b) ** 2 <= 1.0


def contains_rectangle(r: Rectangle, x, y):
    """Closed membership test; works elementwise on arrays."""
    xl, yl = _local_coords(r, x, y)
    return (np.abs(xl) <= 0.5 * r.wx) & (np.abs(yl) <= 0.5 * r.wy)


def contains(f: Figure, x, y):
    if isinstance(f, Ellipse):
        return contains_ellipse(f, x, y)
    if isinstance(f, Rectangle):
        return contains_rectangle(f, x, y)
    raise TypeError(f"not a figure: {f!r}")


def figure_area(f: Figure) -> float:
    return f.area


@dataclass(frozen=True)
class Phantom:
    """Ordered collection of figures; attenuations add where figures overlap."""

    figures: tuple = field(default_factory=tuple)
    circle: bool = True

    def __post_init__(self):
        object.__setattr__(self, "figures", tuple(self.figures))

    def __len__(self):
        return len(self.figures)

    def __iter__(self):
        return iter(self.figures)

    def attenuation(self, x, y):
        """Summed attenuation at the given point(s)."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape)
        for f in self.figures:
            out = out + f.delta * contains(f, x, y)
        return out

    def signature(self, x, y) -> np.ndarray:
        """Boolean membership matrix, one trailing column per figure."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        cols = [np.broadcast_to(contains(f, x, y), np.broadcast(x, y).shape) for f in self.figures]
        if not cols:
            return np.zeros(np.broadcast(x, y).shape + (0,), dtype=bool)
        return np.stack(cols, axis=-1)

    def validate(self) -> list[str]:
        return validate(self)


def validate(p: Phantom) -> list[str]:
    """Check phantom invariants.

    Returns a list of human-readable violations; an empty list means the
    phantom is valid.
    """
    problems = []
    if len(p.figures) == 0:
        problems.append("phantom has no figures")
    for k, f in enumerate(p.figures):
        params = [getattr(f, name) for name in f.__dataclass_fields__]
        if not all(math.isfinite(v) for v in params):
            problems.append(f"figure {k}: parameters must be finite")
            continue
        if isinstance(f, Ellipse):
            if f.a <= 0 or f.b <= 0:
                problems.append(f"figure {k}: semi-axis must be positive")
                continue
        elif isinstance(f, Rectangle):
            if f.wx <= 0 or f.wy <= 0:
                problems.append(f"figure {k}: side length must be positive")
                continue
        else:
            problems.append(f"figure {k}: unsupported figure type {type(f).__name__}")
            continue
        if p.circle and f.radius > 1.0 + CIRCLE_TOL:
            problems.append(
                f"figure {k}: support reaches radius {f.radius:.6g}, outside the unit disk"
            )
    return problems


# -- phantom text files ---------------------------------------------------

_KIND_CODES = {"E": Ellipse, "R": Rectangle}
_CODE_OF = {Ellipse: "E", Rectangle: "R"}


def _fmt(v: float) -> str:
    return "%.17g" % v


def dumps_phantom(p: Phantom) -> str:
    lines = [f"phantom v1 circle={int(p.circle)}"]
    for f in p.figures:
        vals = [getattr(f, name) for name in f.__dataclass_fields__]
        lines.append(" ".join([_CODE_OF[type(f)]] + [_fmt(v) for v in vals]))
    return "\n".join(lines) + "\n"


def loads_phantom(text: str) -> Phantom:
    header = None
    figures = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if header is None:
            if len(tokens) != 3 or tokens[:2] != ["phantom", "v1"] or not tokens[2].startswith("circle="):
                raise PhantomFormatError(f"line {lineno}: expected 'phantom v1 circle=<0|1>' header")
            flag = tokens[2][len("circle="):]
            if flag not in ("0", "1"):
                raise PhantomFormatError(f"line {lineno}: circle flag must be 0 or 1")
            header = flag == "1"
            continue
        kind = _KIND_CODES.get(tokens[0])
        if kind is None:
            raise PhantomFormatError(f"line {lineno}: unknown figure code {tokens[0]!r}")
        if len(tokens) != 7:
            raise PhantomFormatError(f"line {lineno}: expected 6 numbers after {tokens[0]!r}")
        try:
            vals = [float(tok) for tok in tokens[1:]]
        except ValueError as err:
            raise PhantomFormatError(f"line {lineno}: {err}") from None
        figures.append(kind(*vals))
    if header is None:
        raise PhantomFormatError("missing 'phantom v1' header")
    return Phantom(figures, circle=header)


def read_phantom(path) -> Phantom:
    return loads_phantom(Path(path).read_text())


def write_phantom(p: Phantom, path) -> None:
    Path(path).write_text(dumps_phantom(p))


# -- gallery --------------------------------------------------------------

GALLERY_NAMES = ("shepp_logan", "modified_shepp_logan", "squares", "rectangles")
GALLERY_ALIASES = {"ellipses": "shepp_logan"}


def gallery(name: str) -> Phantom:
    """Load one of the default phantoms shipped with the package.

    Parameters
    ----------
    name : str
        One of ``shepp_logan``, ``modified_shepp_logan``, ``squares``,
        ``rectangles``; ``ellipses`` is accepted as an alias of
        ``shepp_logan``.
    """
    key = GALLERY_ALIASES.get(name, name)
    if key not in GALLERY_NAMES:
        valid = ", ".join(GALLERY_NAMES + tuple(GALLERY_ALIASES))
        raise UnknownGalleryError(f"unknown gallery phantom {name!r}; valid names: {valid}")
    text = resources.files("radonphantom").joinpath(f"data/{key}.phm").read_text()
    return loads_phantom(text)
