"""Command-line entry point: ``entombed table|gen|verify|stats|conflicts``.

Exit codes: 0 success, 1 verification found violations, 2 usage or parse
error, 3 retries exhausted.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .generator import GenConfig, InvalidConfig, RetriesExhausted, generate, generate_until_clean
from .render_io import (
    MazeFormatError,
    export_obj,
    export_report_json,
    export_table_json,
    parse,
    render_ascii,
    render_pgm,
    serialize,
)
from .rules import builtin_rules, builtin_table, enumerate_conflicts
from .verifier import monte_carlo, verify

EXIT_OK, EXIT_VIOLATIONS, EXIT_USAGE, EXIT_RETRIES = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_size(text: str, dimension: int):
    try:
        parts = tuple(int(p) for p in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"bad --size {text!r}; expected WxH or VxUxZ") from None
    if len(parts) != dimension:
        raise UsageError(f"--size {text!r} has {len(parts)} parts; {dimension}D needs {dimension}")
    if any(p < 1 for p in parts):
        raise UsageError("sizes must be >= 1")
    return parts


def _write(out, payload) -> None:
    data = payload if isinstance(payload, bytes) else payload.encode("utf-8")
    if out in (None, "-"):
        sys.stdout.flush()
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        Path(out).write_bytes(data)


def _config(args) -> GenConfig:
    size = parse_size(args.size, args.dim) if args.size else ((8, 16) if args.dim == 2 else (5, 5, 5))
    try:
        return GenConfig(args.dim, size, args.seed if hasattr(args, "seed") else args.seed0,
                         args.boundary, getattr(args, "mirror", False))
    except InvalidConfig as exc:
        raise UsageError(str(exc)) from None


def cmd_table(args) -> int:
    _write(args.out, export_table_json(builtin_table(args.dim)))
    return EXIT_OK


def cmd_gen(args) -> int:
    cfg = _config(args)
    if args.render == "pgm" and args.dim != 2:
        raise UsageError("--render pgm needs --dim 2")
    if args.render == "obj" and args.dim != 3:
        raise UsageError("--render obj needs --dim 3")
    if args.max_retries > 0:
        try:
            maze, seed, retries = generate_until_clean(cfg, args.max_retries)
        except RetriesExhausted as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_RETRIES
    else:
        maze, seed, retries = generate(cfg), cfg.seed, 0
    print(f"seed {seed} retries {retries}", file=sys.stderr)
    if args.render == "text":
        payload = serialize(maze)
    elif args.render == "ascii":
        payload = render_ascii(maze) + "\n"
    elif args.render == "pgm":
        payload = render_pgm(maze, args.scale)
    else:
        payload = export_obj(maze)
    _write(args.out, payload)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        data = Path(args.file).read_bytes() if args.file != "-" else sys.stdin.buffer.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    try:
        maze = parse(data)
    except MazeFormatError as exc:
        print(f"error: {args.file}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = verify(maze, interior_only=args.interior_only)
    _write(None, export_report_json(report) if args.json else report.summary() + "\n")
    return EXIT_OK if report.clean else EXIT_VIOLATIONS


def cmd_stats(args) -> int:
    cfg = _config(args)
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    report = monte_carlo(cfg, args.trials, args.seed0, args.interior_only)
    _write(None, export_report_json(report) if args.json else report.summary() + "\n")
    return EXIT_OK


def cmd_conflicts(args) -> int:
    report = enumerate_conflicts(builtin_rules(args.dim), args.include_prevention)
    if args.json:
        _write(None, export_report_json(report))
        return EXIT_OK
    lines = [
        f"{args.dim}D rule set, {'all rules' if args.include_prevention else 'invariant rules only'}",
        f"conflicting contexts: {report.n_contexts} of {report.table_size}",
        f"clashing rule pairs (per context): {report.context_rule_pairs}",
        f"clashing rule pairs (by pattern): {len(report.pattern_pairs)}",
    ]
    for c in report.conflicts:
        tag = " [override]" if c.resolved_by_override else (" [prevention rule involved]" if c.involves_prevention else "")
        lines.append(f"  {c.pattern_string}{tag}: {', '.join(c.rules)}")
    lines.append(f"base conflicts: {report.n_base}, targeted by a prevention rule: {report.targeted}")
    if report.prevented_fraction is not None:
        lines.append(f"prevented: {report.prevented:.2f} ({report.prevented_fraction:.2%} of targeted, "
                     f"{report.prevented_fraction_all:.2%} of all base conflicts)")
    lines.append(f"residual violating contexts: {report.residual_contexts:.2f} "
                 f"({report.residual_fraction:.3%} of {report.table_size})")
    _write(None, "\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entombed", description="Lookup-table maze generation and analysis.")
    sub = parser.add_subparsers(dest="command", required=True)

    def dim_arg(p):
        p.add_argument("--dim", type=int, choices=(2, 3), default=2)

    p = sub.add_parser("table", help="emit a compiled builtin lookup table")
    dim_arg(p)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json",), default="json")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("gen", help="generate a maze")
    dim_arg(p)
    p.add_argument("--size", help="WxH (2D) or VxUxZ (3D)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--boundary", default=None, help="atari2d|solid|open|random or a digit string like 11RR1")
    p.add_argument("--mirror", action="store_true")
    p.add_argument("--max-retries", type=int, default=0)
    p.add_argument("--render", choices=("text", "ascii", "pgm", "obj"), default="text")
    p.add_argument("--scale", type=int, default=1, help="pixels per cell for pgm")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="check a maze file against the invariants")
    p.add_argument("file")
    p.add_argument("--interior-only", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stats", help="Monte Carlo statistics over many seeds")
    dim_arg(p)
    p.add_argument("--size")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed0", type=int, default=0)
    p.add_argument("--boundary", default=None)
    p.add_argument("--interior-only", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("conflicts", help="enumerate rule conflicts")
    dim_arg(p)
    p.add_argument("--include-prevention", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_conflicts)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
