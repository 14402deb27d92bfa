"""Command-line entry point.

    cremona-links verify <check-id> [--format json|md] [--seed N]
    cremona-links prove [--format json|md] [--seed N] [--verbosity summary|full-tree]

Exit codes: 0 on pass, 1 on verification failure, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys

from .report import (ReportConfig, VERIFY_TARGETS, build_prove_report,
                     build_verify_report, render)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cremona-links",
        description="Exact verifier for the non-conjugacy of the linear and "
                    "torus embeddings of S3 x Z2 into the plane Cremona group.")
    sub = p.add_subparsers(dest="command")

    def common(sp):
        sp.add_argument("--format", choices=("json", "md"), default="json")
        sp.add_argument("--seed", type=int, default=42)
        sp.add_argument("--verbosity", choices=("summary", "full-tree"),
                        default="summary")

    v = sub.add_parser("verify", help="run one registered verification")
    v.add_argument("check_id", metavar="check-id",
                   help="one of: " + ", ".join(sorted(VERIFY_TARGETS)))
    common(v)
    pr = sub.add_parser("prove", help="run the full unreachability search "
                                      "and the restriction contrast")
    common(pr)
    return p


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    if args.command is None:
        parser.print_help(sys.stderr)
        return 2
    config = ReportConfig(format=args.format, seed=args.seed,
                          verbosity=args.verbosity)
    if args.command == "verify":
        if args.check_id not in VERIFY_TARGETS:
            print(f"error: unknown check id {args.check_id!r}; known: "
                  f"{', '.join(sorted(VERIFY_TARGETS))}", file=sys.stderr)
            return 2
        ok, report = build_verify_report(args.check_id, config)
    else:
        ok, report = build_prove_report(config)
    sys.stdout.write(render(report, config))
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
