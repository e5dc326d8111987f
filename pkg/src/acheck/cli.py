"""Command line: ``acheck check|check-poly|bench|oracle``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from collections import Counter

from . import __version__
from .bench import LoadOptions, exit_code, limit_memory, read_manifest, run_benchmark
from .config import Config
from .errors import AcheckError
from .oracle import DEFAULT_MAX_POINTS, OracleRefused, oracle
from .verdict import Category

EXIT_USAGE = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _outputs(text: str) -> tuple:
    return tuple(n.strip() for n in text.split(",") if n.strip())


def _load_args(p: argparse.ArgumentParser, r1cs: bool):
    if r1cs:
        p.add_argument("--sym", help="symbol file (default: <file>.sym when present)")
        p.add_argument("--r1cs-c-sign", choices=("neg", "pos"), default="neg",
                       help="rows mean A*B - C = 0 (neg, default) or A*B + C = 0 (pos)")
    p.add_argument("--prime", type=int, help="replace the modulus of the file")
    p.add_argument("--outputs", type=_outputs, help="comma separated output signal names")


def _check_args(p: argparse.ArgumentParser):
    p.add_argument("--timeout", type=float, default=Config.timeout, help="seconds per circuit")
    p.add_argument("--json", metavar="OUT", help="write the JSON report here ('-' for stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="acheck", description="Find under- and overconstrained arithmetic circuits.")
    ap.add_argument("--version", action="version", version=f"acheck {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="check a binary .r1cs file")
    c.add_argument("file")
    _load_args(c, r1cs=True)
    _check_args(c)

    cp = sub.add_parser("check-poly", help="check a PolyIR text file")
    cp.add_argument("file")
    _load_args(cp, r1cs=False)
    _check_args(cp)

    b = sub.add_parser("bench", help="check every circuit listed in a manifest")
    b.add_argument("manifest")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--text", metavar="OUT", help="also write the text table here")
    _load_args(b, r1cs=True)
    _check_args(b)

    o = sub.add_parser("oracle", help="ground truth by exhaustive enumeration (small fields)")
    o.add_argument("file")
    o.add_argument("--max-points", type=int, default=DEFAULT_MAX_POINTS)
    _load_args(o, r1cs=True)
    return ap


def _options(args) -> LoadOptions:
    return LoadOptions(
        sym=getattr(args, "sym", None),
        prime=args.prime,
        outputs=args.outputs,
        c_sign=getattr(args, "r1cs_c_sign", "neg"),
    )


def _dump(doc: dict, dest: str):
    text = json.dumps(doc, indent=2, sort_keys=False) + "\n"
    if dest == "-":
        sys.stdout.write(text)
    else:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)


def _setup_logging():
    level = os.environ.get("ACHECK_LOG", "WARNING").upper()
    if level.isdigit():
        level = int(level)
    try:
        logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    except ValueError:
        logging.basicConfig(level=logging.WARNING)
        logging.getLogger(__name__).warning("ignoring unknown ACHECK_LOG level %r", level)


def _cmd_check(args) -> int:
    config = Config(timeout=args.timeout)
    report = run_benchmark([args.file], config, 1, _options(args))
    row = report.rows[0]
    if row.error is not None:
        print(f"acheck: {row.error}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        _dump(report.to_json(), args.json)
    if args.json != "-":
        print(f"{row.name}: {row.category} ({row.circuit_class}, {row.seconds:.3f} s)")
        ev = row.evidence
        if "binding" in ev:
            print(f"  inputs: {ev['binding']}")
            print(f"  outputs that differ: {', '.join(ev['free_outputs'])}")
        if row.ledger:
            print(f"  assumed nonzero: {', '.join(row.ledger)}")
        if row.reason:
            print(f"  reason: {row.reason}")
    return report.exit_code()


def _cmd_bench(args) -> int:
    config = Config(timeout=args.timeout)
    try:
        manifest = read_manifest(args.manifest)
    except OSError as e:
        print(f"acheck: {e}", file=sys.stderr)
        return EXIT_USAGE
    report = run_benchmark(manifest, config, args.workers, _options(args))
    if args.json:
        _dump(report.to_json(), args.json)
    text = report.to_text()
    if args.text:
        with open(args.text, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.json != "-":
        sys.stdout.write(text)
    return report.exit_code()


def _cmd_oracle(args) -> int:
    from .bench import load_circuit

    try:
        system = load_circuit(args.file, _options(args))
        res = oracle(system, args.max_points)
    except OracleRefused as e:
        print(f"acheck: oracle refused: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, AcheckError, ValueError) as e:
        print(f"acheck: {e}", file=sys.stderr)
        return EXIT_USAGE
    counts = Counter(t.value for t in res.per_input.values())
    print(f"{system.name}: {res.label.value}")
    print(f"  per input assignment: {dict(sorted(counts.items()))}")
    bad = [k for k, t in res.per_input.items() if t is res.label and res.label.value != "exact"]
    if bad:
        names = [k.name for k in res.known]
        print(f"  first {res.label.value} input: {dict(zip(names, bad[0]))}")
    cat = {"under": Category.PRECISELY_UNDER, "over": Category.PRECISELY_OVER,
           "exact": Category.PRECISELY_EXACT}[res.label.value]
    return exit_code([cat])


def main(argv=None) -> int:
    """Entry point.  Run as a program (argv None), it also caps its own memory."""
    _setup_logging()
    args = build_parser().parse_args(argv)
    if argv is None and args.command in ("check", "check-poly"):
        limit_memory(Config.memory_limit)
    if args.command in ("check", "check-poly"):
        return _cmd_check(args)
    if args.command == "bench":
        return _cmd_bench(args)
    return _cmd_oracle(args)


if __name__ == "__main__":
    sys.exit(main())
