import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radonphantom.phantom import (
    GALLERY_NAMES,
    Ellipse,
    Phantom,
    PhantomFormatError,
    Rectangle,
    UnknownGalleryError,
    contains_ellipse,
    contains_rectangle,
    dumps_phantom,
    figure_area,
    gallery,
    loads_phantom,
    read_phantom,
    validate,
    write_phantom,
)
from radonphantom.discrete import rasterize

from conftest import random_figure


def test_contains_ellipse_unit_circle():
    c = Ellipse(0, 0, 1, 1)
    assert contains_ellipse(c, 0, 0)
    assert contains_ellipse(c, 1, 0)
    assert not contains_ellipse(c, 1.0001, 0)


def test_contains_rectangle():
    sq = Rectangle.square(0, 0, 1)
    assert contains_rectangle(sq, 0.5, 0.5)
    assert not contains_rectangle(sq, 0.51, 0)
    diamond = Rectangle.square(0, 0, 1, phi=math.pi / 4)
    assert contains_rectangle(diamond, 0.7, 0)
    assert not contains_rectangle(diamond, 0.71, 0)


@pytest.mark.parametrize(
    "fig, area",
    [
        (Ellipse(0, 0, 0.5, 0.2), 0.1 * math.pi),
        (Rectangle(0, 0, 0.4, 0.3), 0.12),
        (Rectangle.square(0, 0, 1), 1.0),
    ],
)
def test_figure_area(fig, area):
    assert figure_area(fig) == pytest.approx(area, rel=1e-15)


def test_validate_reports_violations():
    assert validate(Phantom([Ellipse(0, 0, -1, 0.5)])) == ["figure 0: semi-axis must be positive"]
    assert validate(gallery("shepp_logan")) == []
    far = Rectangle.square(0, 0, 1.2 * math.sqrt(2))  # corners at radius 1.2
    problems = validate(Phantom([far], circle=True))
    assert len(problems) == 1 and "unit disk" in problems[0]
    assert validate(Phantom([far], circle=False)) == []
    assert validate(Phantom([])) == ["phantom has no figures"]


@pytest.mark.parametrize("name", GALLERY_NAMES)
def test_gallery_validates(name):
    p = gallery(name)
    assert validate(p) == []
    assert p.circle


def test_gallery_contents():
    sl = gallery("shepp_logan")
    assert len(sl) == 10 and all(isinstance(f, Ellipse) for f in sl)
    assert len(gallery("modified_shepp_logan")) == 10
    for name in ("squares", "rectangles"):
        p = gallery(name)
        assert 4 <= len(p) <= 6
        assert all(isinstance(f, Rectangle) for f in p)
        assert len({round(f.phi, 12) for f in p}) > 1
    assert all(f.wx == f.wy for f in gallery("squares"))


def test_gallery_alias_and_unknown():
    assert dumps_phantom(gallery("ellipses")) == dumps_phantom(gallery("shepp_logan"))
    with pytest.raises(UnknownGalleryError, match="shepp_logan"):
        gallery("bogus")


def test_gallery_figures_overlap():
    for name in ("squares", "rectangles"):
        p = gallery(name)
        img = rasterize(p, 200)
        sig = p.signature(*np.meshgrid(np.linspace(-1, 1, 200), np.linspace(-1, 1, 200)))
        # some point is covered by at least two inserts besides the background plate
        assert np.any(sig[..., 1:].sum(axis=-1) >= 2), name
        assert np.isfinite(img).all()


# hand-picked pixel centres at n=300 and the canonical grey level of the
# region containing them: 2 skull, 1.02 brain, 1.0 ventricles, 1.03 tumours
SHEPP_LOGAN_PIXELS = [
    ((150, 150), 1.02),  # (0.0033, -0.0033) brain
    ((97, 150), 1.03),  # (0.0033, 0.35) large upper ellipse
    ((150, 182), 1.00),  # (0.2167, -0.0033) right ventricle
    ((150, 117), 1.00),  # (-0.2167, -0.0033) left ventricle
    ((14, 150), 2.00),  # (0.0033, 0.9033) skull
    ((0, 0), 0.0),  # image corner
    ((137, 150), 1.03),  # (0.0033, 0.0833) small upper disk
    ((164, 150), 1.03),  # (0.0033, -0.0967) small lower disk
    ((240, 149), 1.03),  # (-0.0033, -0.6033) middle of the bottom three
    ((150, 270), 0.0),  # (0.8033, -0.0033) outside the head
    ((75, 225), 1.02),  # (0.5033, 0.4967) brain
]


def test_shepp_logan_grey_levels():
    img = rasterize(gallery("shepp_logan"), 300)
    for (i, j), grey in SHEPP_LOGAN_PIXELS:
        assert img[i, j] == pytest.approx(grey, abs=1e-12), (i, j)


def test_attenuation_sums_over_overlaps():
    e = Ellipse(0.1, 0, 0.3, 0.2, 0.4, 0.7)
    r = Rectangle(0.1, 0.05, 0.2, 0.1, 0.1, 1.5)
    p = Phantom([e, r])
    assert p.attenuation(0.1, 0.05) == pytest.approx(2.2)
    assert p.attenuation(0.3, -0.05) == pytest.approx(0.7)
    assert p.attenuation(0.9, 0.9) == 0


def _rigid(x, y, angle, dx, dy):
    c, s = math.cos(angle), math.sin(angle)
    return c * x - s * y + dx, s * x + c * y + dy


@settings(max_examples=200, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    angle=st.floats(-math.pi, math.pi),
    dx=st.floats(-0.5, 0.5),
    dy=st.floats(-0.5, 0.5),
)
def test_containment_invariant_under_rigid_motion(seed, angle, dx, dy):
    rng = np.random.default_rng(seed)
    f = random_figure(rng)
    x, y = rng.uniform(-1, 1, size=(2, 200))
    x0, y0 = _rigid(f.x0, f.y0, angle, dx, dy)
    g = replace(f, x0=x0, y0=y0, phi=f.phi + angle)
    before = f.contains(x, y)
    after = g.contains(*_rigid(x, y, angle, dx, dy))
    # points within roundoff of the boundary may flip
    xl = (x - f.x0) * math.cos(f.phi) + (y - f.y0) * math.sin(f.phi)
    yl = (y - f.y0) * math.cos(f.phi) - (x - f.x0) * math.sin(f.phi)
    if isinstance(f, Ellipse):
        near = np.abs((xl / f.a) ** 2 + (yl / f.b) ** 2 - 1) < 1e-9
    else:
        near = (np.abs(np.abs(xl) - f.wx / 2) < 1e-9) | (np.abs(np.abs(yl) - f.wy / 2) < 1e-9)
    assert np.array_equal(before[~near], after[~near])


@pytest.mark.parametrize("kind", ["ellipse", "rectangle"])
def test_monte_carlo_area(kind):
    rng = np.random.default_rng(7 if kind == "ellipse" else 8)
    for _ in range(3):
        f = random_figure(rng, kind)
        r = f.radius
        x = rng.uniform(-r, r, 10**6)
        y = rng.uniform(-r, r, 10**6)
        box = (2 * r) ** 2
        hit = np.count_nonzero(f.contains(x, y)) / 10**6
        sigma = math.sqrt(hit * (1 - hit) / 10**6)
        assert abs(hit * box - figure_area(f)) <= 3 * sigma * box


def test_phantom_file_round_trip(tmp_path, rng):
    figs = [random_figure(rng) for _ in range(8)] + [Ellipse(-0.0, 1e-300, 0.1, 0.2, math.pi / 3, -0.5)]
    p = Phantom(figs, circle=False)
    path = tmp_path / "p.phm"
    write_phantom(p, path)
    q = read_phantom(path)
    assert q.circle is False
    for f, g in zip(p.figures, q.figures):
        assert type(f) is type(g)
        for k in f.__dataclass_fields__:
            assert np.float64(getattr(f, k)).tobytes() == np.float64(getattr(g, k)).tobytes()
    assert dumps_phantom(q) == path.read_text()


def test_phantom_file_parsing():
    text = """# a comment
phantom v1 circle=1
E 0 0 0.5 0.5 0 1   # trailing comment

R 0.1 0.1 0.2 0.3 0.5 -1
"""
    p = loads_phantom(text)
    assert p.circle and len(p) == 2
    assert p.figures[1] == Rectangle(0.1, 0.1, 0.2, 0.3, 0.5, -1.0)
    for bad in [
        "E 0 0 1 1 0 1\n",
        "phantom v2 circle=1\n",
        "phantom v1 circle=2\n",
        "phantom v1 circle=1\nT 0 0 1 1 0 1\n",
        "phantom v1 circle=1\nE 0 0 1 1 0\n",
        "phantom v1 circle=1\nE 0 0 1 x 0 1\n",
    ]:
        with pytest.raises(PhantomFormatError):
            loads_phantom(bad)
