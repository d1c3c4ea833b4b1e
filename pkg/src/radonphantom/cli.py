"""Command-line interface.

Exit codes: 0 on success, 1 on runtime or data errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import sys

from . import io
from .analysis import ComparisonReport, compare_pipelines, default_margin
from .analytic import SinogramGrid, analytic_sinogram
from .discrete import forward_project, rasterize
from .phantom import GALLERY_NAMES, Phantom, PhantomFormatError, gallery, read_phantom
from .reconstruction import FILTER_KINDS, FilterSpec, fbp


class CommandError(Exception):
    """Runtime failure reported to the user with exit code 1."""


def _int_at_least(lower):
    def parse(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
        if value < lower:
            raise argparse.ArgumentTypeError(f"must be at least {lower}, got {value}")
        return value

    return parse


def _add_source(parser, multiple=False):
    group = parser.add_mutually_exclusive_group(required=True)
    if multiple:
        group.add_argument("--gallery", nargs="+", metavar="NAME", help="gallery phantom name(s)")
    else:
        group.add_argument("--gallery", metavar="NAME", help="gallery phantom name")
    group.add_argument("--file", metavar="PATH", help="phantom file")


def _load_source(args) -> list[tuple[str, Phantom]]:
    if args.file is not None:
        try:
            p = read_phantom(args.file)
        except OSError as err:
            raise CommandError(f"cannot read phantom file: {err}") from None
        except PhantomFormatError as err:
            raise CommandError(f"{args.file}: {err}") from None
        name = args.file
        sources = [(name, p)]
    else:
        names = args.gallery if isinstance(args.gallery, list) else [args.gallery]
        sources = []
        for name in names:
            try:
                sources.append((name, gallery(name)))
            except KeyError as err:
                raise CommandError(str(err)) from None
    for name, p in sources:
        problems = p.validate()
        if problems:
            raise CommandError(f"invalid phantom {name}: " + "; ".join(problems))
    return sources


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="radonphantom",
        description="Exact and discrete sinograms of parametric phantoms, with FBP reconstruction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gallery", help="list the built-in phantoms")
    p.add_argument("--format", choices=("text", "csv"), default="text")

    p = sub.add_parser("phantom", help="rasterize a phantom")
    _add_source(p)
    p.add_argument("--n", type=_int_at_least(2), default=300, help="image side in pixels")
    p.add_argument("--out", required=True, help="output float grid file")
    p.add_argument("--pgm", help="also write a 16-bit PGM preview")

    p = sub.add_parser("sinogram", help="compute a sinogram")
    _add_source(p)
    p.add_argument("--n", type=_int_at_least(2), default=300, help="detector count (and raster size)")
    p.add_argument("--angles", type=_int_at_least(1), default=360, help="angle count over a full turn")
    p.add_argument("--method", choices=("analytic", "discrete"), default="analytic")
    p.add_argument("--out", required=True)

    p = sub.add_parser("reconstruct", help="filtered back-projection of a sinogram file")
    p.add_argument("--sinogram", required=True)
    p.add_argument("--n", type=_int_at_least(2), default=300)
    p.add_argument("--filter", choices=FILTER_KINDS, default="ramp")
    p.add_argument("--out", required=True)
    p.add_argument("--pgm")

    p = sub.add_parser("compare", help="analytic versus discrete reconstruction errors")
    _add_source(p, multiple=True)
    p.add_argument("--n", type=_int_at_least(2), default=300)
    p.add_argument("--angles", type=_int_at_least(1), default=360)
    p.add_argument("--margin", type=_int_at_least(0), default=None, help="mask margin in pixels (default n/100)")
    p.add_argument("--out-csv", help="CSV file to append report rows to")
    return parser


def cmd_gallery(args, out):
    rows = []
    for name in GALLERY_NAMES:
        p = gallery(name)
        kinds = sorted({type(f).__name__.lower() for f in p})
        rows.append((name, len(p), "+".join(kinds)))
    if args.format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(("name", "figures", "kinds"))
        writer.writerows(rows)
    else:
        for name, count, kinds in rows:
            out.write(f"{name:<22} {count:>3} {kinds}\n")


def cmd_phantom(args, out):
    [(_, p)] = _load_source(args)
    img = rasterize(p, args.n)
    io.write_grid(args.out, img)
    if args.pgm:
        io.export_pgm(img, args.pgm)
    out.write(f"wrote {args.n}x{args.n} image to {args.out}\n")


def cmd_sinogram(args, out):
    [(_, p)] = _load_source(args)
    grid = SinogramGrid.default(args.n, args.angles)
    if args.method == "analytic":
        sino = analytic_sinogram(p, grid)
    else:
        sino = forward_project(rasterize(p, args.n), grid)
    io.write_grid(args.out, sino)
    out.write(f"wrote {grid.n_t}x{grid.n_theta} {args.method} sinogram to {args.out}\n")


def cmd_reconstruct(args, out):
    try:
        sino = io.read_grid(args.sinogram)
    except OSError as err:
        raise CommandError(f"cannot read sinogram: {err}") from None
    except io.GridFormatError as err:
        raise CommandError(f"{args.sinogram}: {err}") from None
    if not isinstance(sino, io.Sinogram):
        raise CommandError(f"{args.sinogram} holds no sinogram")
    img = fbp(sino, args.n, FilterSpec(args.filter))
    io.write_grid(args.out, img)
    if args.pgm:
        io.export_pgm(img, args.pgm)
    out.write(f"wrote {args.n}x{args.n} reconstruction to {args.out}\n")


def cmd_compare(args, out):
    sources = _load_source(args)
    margin = default_margin(args.n) if args.margin is None else args.margin
    grid = SinogramGrid.default(args.n, args.angles)
    reports: list[ComparisonReport] = []
    for name, p in sources:
        try:
            report = compare_pipelines(p, args.n, grid, margin, name=name)
        except (ArithmeticError, ValueError) as err:
            raise CommandError(f"{name}: {err}") from None
        reports.append(report)
        out.write(report.as_text())
    if args.out_csv:
        io.export_csv(reports, args.out_csv, append=True)


COMMANDS = {
    "gallery": cmd_gallery,
    "phantom": cmd_phantom,
    "sinogram": cmd_sinogram,
    "reconstruct": cmd_reconstruct,
    "compare": cmd_compare,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args, sys.stdout)
    except CommandError as err:
        print(f"radonphantom: error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"radonphantom: error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
