"""Command-line entry point: ``flagpath <subcommand> ...``.

Exit status is 0 on success, 1 when a domain error is raised (or ``verify``
finds a violation, or ``selfcheck`` fails), and 2 on malformed arguments.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import diagram, enumeration, flag, matroid, selfcheck
from .errors import FlagpathError, NotAPartition
from .lattice import BinSpec, StepSequence
from .partition import OrderedPartition


def _positive_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"bin sizes must be positive, got {text!r}")
    return values


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _read_text(arg: str) -> str:
    """Literal text, ``@path`` for a file, or ``-`` for stdin."""
    if arg == "-":
        return sys.stdin.read()
    if arg.startswith("@"):
        return Path(arg[1:]).read_text()
    return arg


class UsageError(Exception):
    pass


def _load_json(arg: str):
    try:
        return json.loads(_read_text(arg))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {arg!r}: {exc}") from None


def _dump(payload) -> str:
    return json.dumps(payload, separators=(", ", ": "))


def _emit(text: str, output: str | None):
    if output:
        Path(output).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text.rstrip("\n"))


def _spec(args) -> BinSpec:
    return BinSpec(args.l, args.n)


# -- subcommands -------------------------------------------------------------


def cmd_count(args) -> int:
    spec = _spec(args)
    if args.method == "dp":
        count = enumeration.count_configurations(spec)
    elif args.method == "filter":
        count = enumeration.count_by_filter(spec, args.limit)
    else:
        count = len(flag.reachable_configurations(spec, args.limit))
    payload = {"count": count}
    if args.bounds:
        report = enumeration.bounds(spec).to_json()
        payload.update((key, report[key]) for key in ("upper", "lower_hook", "lower_product"))
    _emit(_dump(payload), args.output)
    return 0


def cmd_diagram(args) -> int:
    spec = _spec(args)
    if args.method == "brute":
        D = diagram.brute_force_matrix(spec, args.limit)
    else:
        D = diagram.diagram_matrix(spec.l, spec.n, corrected=args.method == "corrected")
    if args.format == "json":
        text = _dump(D.to_json())
    elif args.format == "csv":
        text = D.to_csv()
    else:
        text = D.to_ascii()
    _emit(text, args.output)
    return 0


def cmd_verify(args) -> int:
    data = _load_json(args.input)
    try:
        family = flag.FlagBasisFamily.from_json(data)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"not a flag family document: {exc}") from None
    verdict = flag.is_flag_matroid(family, args.limit)
    _emit(_dump(verdict.to_json()), args.output)
    return 0 if verdict else 1


def _parse_partition(arg: str) -> OrderedPartition:
    data = _load_json(arg)
    if not isinstance(data, list) or not all(isinstance(b, list) for b in data):
        raise UsageError("a partition is a JSON array of arrays, e.g. [[5,6],[3,4],[1,2]]")
    try:
        return OrderedPartition.from_lists(data)
    except TypeError as exc:
        raise NotAPartition(str(exc)) from None


def cmd_realize(args) -> int:
    schedule = flag.realize(_spec(args), _parse_partition(args.partition))
    _emit(_dump(schedule.to_json()), args.output)
    return 0


def cmd_bases(args) -> int:
    try:
        path = StepSequence.parse(args.path, k=2)
    except ValueError as exc:
        if isinstance(exc, FlagpathError):
            raise
        raise UsageError(str(exc)) from None
    M = matroid.nested_from_path(path)
    if args.count:
        payload = {"count": M.count_bases()}
    else:
        payload = {"bases": [sorted(b) for b in sorted(M.bases(), key=sorted)]}
    _emit(_dump(payload), args.output)
    return 0


def cmd_bounds(args) -> int:
    report = enumeration.bounds(_spec(args), with_exact=args.exact)
    _emit(_dump(report.to_json()), args.output)
    return 0


def cmd_selfcheck(args) -> int:
    checks = selfcheck.run_checks()
    lines = []
    for c in checks:
        status = "PASS" if c.ok else ("FAIL" if c.gating else "INFO")
        lines.append(f"{status} {c.name}: {c.detail}")
    _emit("\n".join(lines), args.output)
    return 0 if all(c.ok for c in checks if c.gating) else 1


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flagpath", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec=True):
        if spec:
            p.add_argument("--l", type=_positive_list, required=True, help="bin sizes, e.g. 1,1,1")
            p.add_argument("--n", type=_positive_int, required=True, help="number of turns")
        p.add_argument("--limit", type=_positive_int, help="override brute-force size ceilings")
        p.add_argument("--output", help="write the payload to this file instead of stdout")

    p = sub.add_parser("count", help="exact number of n-configurations")
    common(p)
    p.add_argument("--method", choices=("dp", "filter", "bfs"), default="dp")
    p.add_argument("--bounds", action="store_true", help="also report the three bounds")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("diagram", help="matrix of minimum heights for k = 3")
    common(p)
    p.add_argument("--format", choices=("json", "csv", "ascii"), default="ascii")
    p.add_argument(
        "--method",
        choices=("literal", "corrected", "brute"),
        default="literal",
        help="plain block recursion, recursion with the corrected C block, or reachability",
    )
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("verify", help="check the flag-matroid axioms on a family")
    common(p, spec=False)
    p.add_argument("--input", required=True, help="family JSON: a file as @path, - for stdin, or literal")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("realize", help="move schedule producing a target configuration")
    common(p)
    p.add_argument("--partition", required=True, help="JSON array of blocks, or @path")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("bases", help="bases of the nested matroid of an N/E word")
    common(p, spec=False)
    p.add_argument("--path", required=True, help="bounding path, e.g. NNEEENNEEE")
    p.add_argument("--count", action="store_true", help="print only the number of bases")
    p.set_defaults(func=cmd_bases)

    p = sub.add_parser("bounds", help="upper and lower bounds on the count")
    common(p)
    p.add_argument("--exact", action="store_true", help="include the exact count")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("selfcheck", help="cross-check constructions against brute force")
    common(p, spec=False)
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except FlagpathError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
