"""figures <results_dir> <out_dir> [--formats png,svg]"""
from __future__ import annotations

import argparse
import sys

from .render import FigureInputError, render_all


def main(argv=None) -> int:
    p = argparse.ArgumentParser(
        prog="figures",
        description="Render mode, travel-time, occupancy, and detour figures "
                    "from a feedersim results directory.")
    p.add_argument("results_dir")
    p.add_argument("out_dir")
    p.add_argument("--formats", default="png",
                   help="comma-separated image formats (default png)")
    args = p.parse_args(argv)
    formats = [f.strip() for f in args.formats.split(",") if f.strip()]
    try:
        report = render_all(args.results_dir, args.out_dir, formats)
    except FigureInputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    for path in report["images"]:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
