"""Bit-exact file formats for images, sinograms, masks and reports.

Float grid layout::

    FGRID1
    rows=<r> cols=<c> kind=<image|sinogram|mask>
    t_values=<r decimals>          (sinograms only)
    theta_values=<c decimals>      (sinograms only)
    <r*c little-endian float64, row-major>
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .analysis import ComparisonReport
from .analytic import Sinogram, SinogramGrid

MAGIC = b"FGRID1\n"
KINDS = ("image", "sinogram", "mask")
CSV_FIELDS = ("phantom", "n", "n_theta", "margin", "err_analytic", "err_discrete")


class GridFormatError(ValueError):
    """Base class for unreadable float grid files."""


class MalformedHeaderError(GridFormatError):
    pass


class TruncatedPayloadError(GridFormatError):
    pass


class DimensionMismatchError(GridFormatError):
    pass


class InvalidReportError(ValueError):
    pass


def _fmt(v: float) -> str:
    return "%.17g" % v


def _header(rows: int, cols: int, kind: str) -> bytes:
    return MAGIC + f"rows={rows} cols={cols} kind={kind}\n".encode("ascii")


def encode_grid(data) -> bytes:
    """Serialize an image array, a boolean mask or a :class:`Sinogram`."""
    if isinstance(data, Sinogram):
        values = np.asarray(data.values, dtype="<f8")
        rows, cols = values.shape
        head = _header(rows, cols, "sinogram")
        head += ("t_values=" + " ".join(map(_fmt, data.grid.t_values)) + "\n").encode("ascii")
        head += ("theta_values=" + " ".join(map(_fmt, data.grid.theta_values)) + "\n").encode("ascii")
    else:
        arr = np.asarray(data)
        if arr.ndim != 2:
            raise ValueError("grid data must be two-dimensional")
        kind = "mask" if arr.dtype == bool else "image"
        values = arr.astype("<f8")
        rows, cols = values.shape
        head = _header(rows, cols, kind)
    return head + np.ascontiguousarray(values).tobytes()


def _readline(buf: bytes, pos: int) -> tuple[str, int]:
    end = buf.find(b"\n", pos)
    if end < 0:
        raise MalformedHeaderError("header line is not terminated")
    try:
        return buf[pos:end].decode("ascii"), end + 1
    except UnicodeDecodeError:
        raise MalformedHeaderError("header is not ASCII") from None


def _floats_line(line: str, key: str, count: int) -> np.ndarray:
    prefix = key + "="
    if not line.startswith(prefix):
        raise MalformedHeaderError(f"expected {prefix!r} header line")
    try:
        vals = np.array([float(tok) for tok in line[len(prefix):].split()])
    except ValueError:
        raise MalformedHeaderError(f"non-numeric entry in {key}") from None
    if vals.size != count:
        raise DimensionMismatchError(f"{key} has {vals.size} entries, header says {count}")
    return vals


def decode_grid(buf: bytes):
    if not buf.startswith(MAGIC):
        raise MalformedHeaderError("missing FGRID1 magic")
    line, pos = _readline(buf, len(MAGIC))
    fields = dict(tok.split("=", 1) for tok in line.split() if "=" in tok)
    if set(fields) != {"rows", "cols", "kind"} or len(line.split()) != 3:
        raise MalformedHeaderError(f"bad dimension line {line!r}")
    try:
        rows, cols = int(fields["rows"]), int(fields["cols"])
    except ValueError:
        raise MalformedHeaderError(f"bad dimension line {line!r}") from None
    kind = fields["kind"]
    if kind not in KINDS or rows < 1 or cols < 1:
        raise MalformedHeaderError(f"bad dimension line {line!r}")

    if kind == "sinogram":
        line, pos = _readline(buf, pos)
        t = _floats_line(line, "t_values", rows)
        line, pos = _readline(buf, pos)
        theta = _floats_line(line, "theta_values", cols)

    payload = buf[pos:]
    expected = rows * cols * 8
    if len(payload) < expected:
        raise TruncatedPayloadError(f"payload holds {len(payload)} bytes, expected {expected}")
    if len(payload) > expected:
        raise DimensionMismatchError(f"payload holds {len(payload)} bytes, expected {expected}")
    values = np.frombuffer(payload, dtype="<f8").reshape(rows, cols).astype(float)

    if kind == "sinogram":
        try:
            grid = SinogramGrid(t, theta)
        except ValueError as err:
            raise MalformedHeaderError(f"invalid sinogram grid: {err}") from None
        return Sinogram(grid, values)
    if kind == "mask":
        if not np.all((values == 0.0) | (values == 1.0)):
            raise GridFormatError("mask payload must hold only 0.0 and 1.0")
        return values == 1.0
    return values


def write_grid(path, data) -> None:
    Path(path).write_bytes(encode_grid(data))


def read_grid(path):
    return decode_grid(Path(path).read_bytes())


def encode_pgm(img: np.ndarray) -> bytes:
    img = np.asarray(img, dtype=float)
    if img.ndim != 2:
        raise ValueError("image must be two-dimensional")
    if not np.all(np.isfinite(img)):
        raise ValueError("image contains non-finite values")
    lo, hi = float(img.min()), float(img.max())
    if hi > lo:
        samples = np.rint((img - lo) / (hi - lo) * 65535.0)
    else:
        samples = np.zeros_like(img)
    rows, cols = img.shape
    head = f"P5\n# min={_fmt(lo)} max={_fmt(hi)}\n{cols} {rows}\n65535\n".encode("ascii")
    return head + samples.astype(">u2").tobytes()


def export_pgm(img: np.ndarray, path) -> None:
    """Write a 16-bit binary PGM, min-max scaled to the full range."""
    Path(path).write_bytes(encode_pgm(img))


def _report_row(r: ComparisonReport) -> list[str]:
    if not (math.isfinite(r.err_analytic) and math.isfinite(r.err_discrete)):
        raise InvalidReportError(f"report for {r.phantom!r} has non-finite errors")
    if r.err_analytic < 0 or r.err_discrete < 0:
        raise InvalidReportError(f"report for {r.phantom!r} has negative errors")
    return [r.phantom, str(r.n), str(r.n_theta), str(r.margin), _fmt(r.err_analytic), _fmt(r.err_discrete)]


def export_csv(reports, path, append: bool = False) -> None:
    """Write reports as CSV rows; with ``append`` the header is only written to a new file."""
    rows = [_report_row(r) for r in reports]
    path = Path(path)
    fresh = not (append and path.exists() and path.stat().st_size > 0)
    with open(path, "a" if append else "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if fresh:
            writer.writerow(CSV_FIELDS)
        writer.writerows(rows)
