"""``ctx`` command-line interface.

Exit codes: 0 success, 2 invalid input, 3 basis-fit failure, 4 golden mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import ConfigError, load_config
from .constructions import BasisFitError
from .report import GoldenMismatch, SpecError, bounds_document, dump_weyl, render_weyl, run_report

EXIT_OK, EXIT_INVALID, EXIT_BASIS_FIT, EXIT_GOLDEN = 0, 2, 3, 4


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_report(args) -> int:
    _emit(run_report(args.target, args.format), args.out)
    return EXIT_OK


def _cmd_bounds(args) -> int:
    _emit(json.dumps(bounds_document(args.target), indent=2) + "\n", args.out)
    return EXIT_OK


def _cmd_weyl(args) -> int:
    _emit(render_weyl(dump_weyl(args.spec, args.dim, args.normalization), args.format), args.out)
    return EXIT_OK


def _cmd_validate(args) -> int:
    cfg = load_config(args.config)
    print(f"ok: {cfg['name']} ({len(cfg['rays'])} rays, dimension {cfg['dimension']})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ctx", description="Weyl-symbol contextuality reports.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", help="contextuality report for kcsb, peres-mermin, yu-oh or a config file")
    p.add_argument("target")
    p.add_argument("--format", choices=["table", "json", "csv"], default="table")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("bounds", help="classical-bound certificates by exhaustive enumeration")
    p.add_argument("target")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("weyl", help="Weyl symbol of an operator")
    p.add_argument("spec", help="identity, Pi1..Pi5, a qutrit state label, <construction>:<label> or a matrix file")
    p.add_argument("--dim", type=int, required=True, help="single-register dimension d")
    p.add_argument("--normalization", choices=["auto", "observable", "state"], default="auto",
                   help="auto uses the published tables' convention for built-in projectors and states")
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_weyl)

    p = sub.add_parser("validate", help="validate a construction config")
    p.add_argument("config")
    p.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        for err in exc.errors:
            print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID
    except (SpecError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except BasisFitError as exc:
        print(f"basis fit failed: {exc}", file=sys.stderr)
        return EXIT_BASIS_FIT
    except GoldenMismatch as exc:
        print(f"golden mismatch: {exc}", file=sys.stderr)
        return EXIT_GOLDEN


if __name__ == "__main__":
    sys.exit(main())
