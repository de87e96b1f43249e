"""Command-line front end: ``scsphase scan | line | verify``.

Exit codes: 0 success, 1 validation error, 2 acceptance failure,
3 truncation failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .fock import TruncationError
from .scan import (
    GridSpec,
    LineSpec,
    line_from_manifest,
    parse_angle,
    parse_range,
    run_line,
    run_scan,
    scan_from_manifest,
)
from .states import Family

log = logging.getLogger("scsphase")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_ACCEPTANCE = 2
EXIT_TRUNCATION = 3

_STATE_CHOICES = [f.value for f in Family]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _float(text: str) -> float:
    try:
        return parse_angle(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _range(text: str):
    try:
        return parse_range(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _attach_negative_values(argv):
    """Rewrite ``--flag -1:1:3`` as ``--flag=-1:1:3`` so argparse does not read the value as an option."""
    out = []
    for tok in argv:
        if (out and out[-1].startswith("--") and "=" not in out[-1]
                and len(tok) > 1 and tok[0] == "-" and (tok[1].isdigit() or tok[1] in ".p")):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="scsphase", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, alpha_flags):
        sp.add_argument("--theta", type=_float, help="rotation angle in radians, e.g. pi/4")
        sp.add_argument("--lambda", dest="lam", type=_float, help="classical weight in [0, 1]")
        sp.add_argument("--r0", type=_float)
        sp.add_argument("--r1", type=_float)
        for flag in alpha_flags:
            sp.add_argument(flag, type=_range, help="start:stop:count, endpoints inclusive")
        sp.add_argument("--norm", choices=["corrected", "paper-literal"], default="corrected")
        sp.add_argument("--out", type=Path, help="CSV path")
        sp.add_argument("--json", type=Path, help="manifest path (default: CSV path with .json)")
        sp.add_argument("--from-manifest", type=Path, help="rerun exactly from a previous manifest")

    scan = sub.add_parser("scan", help="contour grid over (alpha0, alpha1)")
    common(scan, ["--alpha0", "--alpha1"])
    scan.add_argument("--state", choices=_STATE_CHOICES)
    scan.add_argument("--mode", choices=["analytic", "numeric", "both"], default="analytic")
    scan.add_argument("--r-ref", type=_float, default=None)
    scan.add_argument("--nmax", type=int, default=None, help="fixed cutoff (default: adaptive)")
    scan.add_argument("--buffer", type=int, default=10)
    scan.add_argument("--tail-tol", type=float, default=1e-12)
    scan.add_argument("--workers", type=int, default=None, help="threads for numeric points (default: all cores)")
    scan.add_argument("--force", action="store_true", help="allow numeric mode beyond |alpha|<=1.5, r<=0.5")

    line = sub.add_parser("line", help="moduli of the three phases along alpha0 = alpha1 = alpha")
    common(line, ["--alpha"])

    ver = sub.add_parser("verify", help="run verification suites")
    ver.add_argument("--suite", action="append", choices=["mehler", "overlap", "generator", "oracle", "claims", "all"])
    ver.add_argument("--tol", type=float, default=1e-5, help="oracle tolerance (mod 2 pi)")
    ver.add_argument("--json", type=Path, help="write the JSON report here")
    return p


def _require(args, names):
    missing = [n for n in names if getattr(args, n.lstrip("-").replace("-", "_")) is None]
    if missing:
        raise ValueError(f"missing required option(s): {', '.join(missing)}")


def _cmd_scan(args) -> int:
    if args.from_manifest:
        report = scan_from_manifest(args.from_manifest, workers=args.workers)
    else:
        _require(args, ["state", "theta", "lam", "r0", "r1", "alpha0", "alpha1"])
        grid = GridSpec(family=args.state, theta=args.theta, lam=args.lam, r0=args.r0, r1=args.r1,
                        alpha0=args.alpha0, alpha1=args.alpha1, mode=args.mode, r_ref=args.r_ref,
                        norm=args.norm.replace("-", "_"), nmax=args.nmax, buffer=args.buffer,
                        tail_tol=args.tail_tol, force=args.force)
        report = run_scan(grid, workers=args.workers)
    return _emit(report, args)


def _cmd_line(args) -> int:
    if args.from_manifest:
        report = line_from_manifest(args.from_manifest)
    else:
        _require(args, ["theta", "lam", "r0", "r1", "alpha"])
        report = run_line(LineSpec(theta=args.theta, lam=args.lam, r0=args.r0, r1=args.r1, alpha=args.alpha,
                                   norm=args.norm.replace("-", "_")))
    return _emit(report, args)


def _emit(report, args) -> int:
    if args.out is None:
        sys.stdout.write(report.csv_text())
        if args.json:
            with open(args.json, "w", encoding="utf-8", newline="\n") as fh:
                json.dump(report.manifest(None), fh, indent=2, sort_keys=True)
                fh.write("\n")
    else:
        manifest = report.write(args.out, args.json)
        log.info("wrote %s (%d rows) and %s", args.out, len(report.rows), manifest)
    if report.summary:
        log.info("summary: %s", report.summary)
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .verify import run_suites

    names = args.suite or ["all"]
    results = run_suites(names, tol=args.tol)
    report = {"suites": [r.to_dict() for r in results],
              "passed": all(r.passed for r in results if r.hard)}
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        kind = "" if r.hard else " (report only)"
        print(f"[{status}] {r.name}{kind} ({r.seconds:.1f}s)")
        for key, val in r.metrics.items():
            if key != "cases":
                print(f"    {key}: {val}")
        for finding in r.findings:
            print(f"    finding: {json.dumps(finding, default=float)}")
    if args.json:
        with open(args.json, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(report, fh, indent=2, default=float)
            fh.write("\n")
    return EXIT_OK if report["passed"] else EXIT_ACCEPTANCE


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(_attach_negative_values(sys.argv[1:] if argv is None else list(argv)))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_VALIDATION
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handlers = {"scan": _cmd_scan, "line": _cmd_line, "verify": _cmd_verify}
    try:
        return handlers[args.command](args)
    except TruncationError as exc:
        print(f"truncation failure: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
