"""Command-line figure rendering from solver output files."""
from __future__ import annotations

import argparse
import sys

from .figures import FigureKind, FigureSpec, plot
from .readers import InputFormatError, read_summary


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotviz",
        description="Render figures from slsv CSV time series and snapshots. "
                    "Colormap/levels defaults: viridis, 30 contour levels.")
    sub = parser.add_subparsers(dest="kind", required=True)

    def common(p):
        p.add_argument("--input", action="append", required=True,
                       help="input file (repeatable for overlays)")
        p.add_argument("--output", required=True, help="output image path")
        p.add_argument("--label", action="append", default=[],
                       help="legend label per input")
        p.add_argument("--title", default=None)

    p = sub.add_parser("edecay", help="semi-log field-norm decay")
    common(p)
    p.add_argument("--slope", type=float, default=None,
                   help="overlay a reference exponential rate")
    p.add_argument("--summary", default=None,
                   help="read the overlay rate from a run summary "
                        "(first fit_gamma_* key)")

    p = sub.add_parser("deviations", help="conserved-quantity quartet")
    common(p)

    p = sub.add_parser("contour", help="filled phase-space contours")
    common(p)

    p = sub.add_parser("cut", help="1D cut through a snapshot")
    common(p)
    p.add_argument("--axis", choices=("x", "y"), default="y",
                   help="coordinate held fixed by the cut")
    p.add_argument("--at", type=float, default=0.0, help="cut coordinate")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    kind = FigureKind(args.kind)
    slope = getattr(args, "slope", None)
    if getattr(args, "summary", None):
        summary = read_summary(args.summary)
        gammas = [v for k, v in summary.items() if k.startswith("fit_gamma")]
        if not gammas:
            print(f"plotviz: no fit_gamma_* entries in {args.summary}",
                  file=sys.stderr)
            return 1
        slope = gammas[0]
    spec = FigureSpec(
        kind=kind, inputs=args.input, output=args.output, labels=args.label,
        slope=slope, cut_axis=getattr(args, "axis", "y"),
        cut_value=getattr(args, "at", 0.0), title=args.title)
    try:
        plot(spec)
    except InputFormatError as exc:
        print(f"plotviz: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"plotviz: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
