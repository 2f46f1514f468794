"""Command-line renderer: result CSV in, figure file out."""

import argparse
import sys

from .figures import KINDS, build_figure, save_figure
from .io import EmptyDataError, SchemaError, read_rows

EXIT_OK = 0
EXIT_DATA = 3


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot-results",
        description="Render simulator result CSVs to figures.",
    )
    parser.add_argument("--input", required=True, help="result CSV to render")
    parser.add_argument("--kind", required=True, choices=KINDS, help="figure kind")
    parser.add_argument(
        "--output",
        required=True,
        help="figure path; .svg is the vector default, .png opts into raster",
    )
    parser.add_argument("--dpi", type=int, default=150, help="raster resolution")
    args = parser.parse_args(argv)
    try:
        rows = read_rows(args.input, args.kind)
        save_figure(build_figure(args.kind, rows), args.output, dpi=args.dpi)
    except (SchemaError, EmptyDataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
