"""Command-line interface.

    tmcopt cshape [--config FILE] [--out DIR] [--snapshots 0.2,0.5,1.0]
    tmcopt top    [--config FILE] --variant {linear,nonlinear,contact}

Exit codes: 0 success, 1 configuration error, 2 solver failure.
TMCOPT_OUTDIR sets the default output directory.
"""

import argparse
import os
import sys

from .config import RunConfig, parse_config
from .errors import ConfigError
from .runners import run_cshape, run_topopt
from .scenarios import TOP_VARIANTS

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with 2; config errors are 1
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _build_parser():
    parser = _Parser(prog="tmcopt", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", default=None, help="key=value parameter file")
        sp.add_argument("--out", default=None, help="output directory")
        sp.add_argument("--workers", type=int, default=1,
                        help="worker count (current kernels run serially)")

    sc = sub.add_parser("cshape", help="run the C-shape contact analysis")
    common(sc)
    sc.add_argument("--snapshots", default="",
                    help="comma-separated load multipliers to dump as VTK")

    st = sub.add_parser("top", help="run the end-compliance design loop")
    common(st)
    st.add_argument("--variant", required=True, choices=TOP_VARIANTS)
    return parser


def _parse_snapshots(text):
    vals = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            v = float(tok)
        except ValueError:
            raise ConfigError(f"bad snapshot value {tok!r}")
        if not (0.0 < v <= 1.0):
            raise ConfigError(f"snapshot multiplier {v} outside (0, 1]")
        vals.append(v)
    return vals


def main(argv=None):
    try:
        args = _build_parser().parse_args(argv)
        out = args.out or os.environ.get("TMCOPT_OUTDIR") or "tmcopt-out"
        if args.workers < 1:
            raise ConfigError("--workers must be >= 1")
        params = parse_config(args.config, args.command)
        if args.command == "cshape":
            cfg = RunConfig("cshape", params, out,
                            snapshots=_parse_snapshots(args.snapshots),
                            workers=args.workers)
            status, artifacts = run_cshape(cfg)
        else:
            cfg = RunConfig("top", params, out, variant=args.variant,
                            workers=args.workers)
            status, artifacts = run_topopt(cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    for name, path in sorted(artifacts.items()):
        print(f"{name}: {path}")
    return status


if __name__ == "__main__":
    sys.exit(main())
