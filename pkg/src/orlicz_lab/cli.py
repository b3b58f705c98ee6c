"""Command-line entry point ``orlicz-lab``.

Exit codes: 0 pass, 1 fail, 2 configuration error, 3 resource guard.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bessel import synthesize_kernel
from .errors import ConfigError, CostGuardError, DomainError
from .field import Grid, save_field
from .suites import SUITES, SuiteConfig, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_GUARD = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _family(text):
    kind, _, size = text.partition(":")
    try:
        return kind, int(size) if size else None
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad family {text!r}; expected kind:size") from exc


def build_parser():
    p = _Parser(prog="orlicz-lab", description="Orlicz-space potential theory checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run a verification suite")
    run.add_argument("suite")
    run.add_argument("--config", type=Path, help="JSON file with SuiteConfig fields")
    run.add_argument("--young")
    run.add_argument("--n", type=int)
    run.add_argument("--grid", dest="N", type=int)
    run.add_argument("--extent", dest="L", type=float)
    run.add_argument("--s", type=float)
    run.add_argument("--s2", type=float)
    run.add_argument("--q", type=float)
    run.add_argument("--levels", dest="K", type=int)
    run.add_argument("--imax", dest="I_max", type=int)
    run.add_argument("--m", type=int)
    run.add_argument("--family", type=_family)
    run.add_argument("--seed", type=int)
    run.add_argument("--alpha", type=float)
    run.add_argument("--gamma", type=float)
    run.add_argument("--ring-count", type=int)
    run.add_argument("--h-max", type=float)
    run.add_argument("--inner-cut", type=float)
    run.add_argument("--threads", type=int)
    run.add_argument("--out", required=True)

    sub.add_parser("list-suites", help="list suite names")

    ker = sub.add_parser("kernel", help="export a Bessel kernel in the field format")
    ker.add_argument("--s", type=float, required=True)
    ker.add_argument("--n", type=int, default=1)
    ker.add_argument("--grid", dest="N", type=int, default=1024)
    ker.add_argument("--extent", dest="L", type=float, default=16.0)
    ker.add_argument("--out", required=True)
    return p


def config_from_args(args):
    """Merge a ``--config`` file with command-line overrides."""
    values = {}
    if args.config is not None:
        try:
            values = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        if not isinstance(values, dict):
            raise ConfigError("config file must hold a JSON object")
    fields = set(SuiteConfig.__dataclass_fields__)
    unknown = set(values) - fields
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    for key in ("young", "n", "N", "L", "s", "s2", "q", "K", "I_max", "m", "seed", "alpha", "gamma", "threads"):
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    if args.family is not None:
        values["family"], size = args.family
        if size is not None:
            values["family_size"] = size
    quad = dict(values.get("quadrature") or {})
    for key in ("ring_count", "h_max", "inner_cut"):
        v = getattr(args, key)
        if v is not None:
            quad[key] = v
    values["quadrature"] = quad or None
    values["suite"] = args.suite
    values["out"] = args.out
    return SuiteConfig(**values)


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "list-suites":
        for name, text in SUITES.items():
            print(f"{name:18s} {text}")
        return EXIT_PASS
    try:
        if args.command == "kernel":
            k = synthesize_kernel(args.s, Grid(args.n, args.N, args.L))
            header, data = save_field(k.samples, args.out, {"s": args.s})
            print(f"wrote {header} and {data}")
            return EXIT_PASS
        rep = run_suite(config_from_args(args))
    except CostGuardError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    status = "PASS" if rep.passed else "FAIL"
    print(f"{rep.suite}: {status}  max_ratio={rep.max_ratio:.6g}  report in {args.out}")
    for name, ok in rep.checks.items():
        print(f"  [{'ok' if ok else 'FAIL'}] {name}")
    return EXIT_PASS if rep.passed else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
