"""Command line wrapper: socplots --kind witness --input a.csv b.txt --output f.svg"""
import argparse
import sys

from .errors import SocplotsError
from .render import KINDS, render


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="socplots", description="render figures from socnls output files")
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--input", required=True, nargs="+",
                        help="input file(s) in the order documented per kind")
    parser.add_argument("--output", required=True,
                        help="output image path (.svg or .png)")
    args = parser.parse_args(argv)
    try:
        render(args.kind, args.input, args.output)
    except (SocplotsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
