"""Command line front end.

Exit codes: 0 when every checked claim holds, 1 when a check finds a
violation or a mismatch, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import __version__
from .checker import DESCENT, LEFT, SHUFFLE, flatten, hard_cap, run_check
from .perm_core import parse_permutation
from .reproduce import TABLE1, reproduce_paper
from .shuffles import ShuffleSet
from .stats import available, lookup

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_USAGE = 2

MODE_NAMES = {"shuffle": SHUFFLE, "left": LEFT, "descent": DESCENT}
DEFAULT_BOUNDS = {"shuffle": 8, "left": 6, "descent": 6}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    format: str = "text"
    output: Optional[str] = None
    jobs: int = 1
    timing: bool = False

    def __post_init__(self):
        if self.format not in ("text", "structured"):
            raise UsageError(f"unknown format {self.format!r}")
        if self.jobs < 1:
            raise UsageError(f"--jobs must be at least 1, got {self.jobs}")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "structured"], default="text",
                        help="human-readable text or JSON (default: text)")
    common.add_argument("--output", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1, metavar="N",
                        help="worker processes for the checks (default: available cores)")
    common.add_argument("--timing", action="store_true",
                        help="include wall-clock times (makes output run-dependent)")

    parser = argparse.ArgumentParser(
        prog="shufflecheck",
        description="Permutation statistics, shuffles and bounded shuffle-compatibility checks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stat", parents=[common], help="evaluate a statistic on a permutation")
    p.add_argument("stat", help=f"one of: {', '.join(available())}")
    p.add_argument("perm", help='e.g. 2413, or 12,9,40; "" is the empty permutation')

    p = sub.add_parser("shuffle", parents=[common], help="list the shuffles of two permutations")
    p.add_argument("sigma")
    p.add_argument("phi")
    p.add_argument("--left", action="store_true",
                   help="only shuffles starting with the first letter of sigma")

    for name, helptext in (("check", "run a bounded compatibility check"),
                           ("witness", "print only the first violation of a check")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("stat")
        p.add_argument("--mode", choices=list(MODE_NAMES), default="shuffle")
        p.add_argument("--bound", type=int, default=None,
                       help="size bound (default: shuffle 8, left 6, descent 6)")
        if name == "check":
            p.add_argument("--groups", action="store_true", help="also list every group")

    sub.add_parser("reproduce-paper", parents=[common],
                   help="recompute the published Psi results and compare")
    return parser


def _render(cfg: RunConfig, data: dict) -> str:
    if cfg.format == "structured":
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    return "\n".join(f"{k}: {v}" for k, v in flatten(data)) + "\n"


def _cmd_stat(args, cfg: RunConfig) -> tuple[int, str]:
    st = lookup(args.stat)
    p = parse_permutation(args.perm)
    value = st(p)
    if cfg.format == "structured":
        return EXIT_OK, _render(cfg, {"statistic": st.name, "perm": str(p), "value": str(value)})
    return EXIT_OK, f"{value}\n"


def _cmd_shuffle(args, cfg: RunConfig) -> tuple[int, str]:
    sigma, phi = parse_permutation(args.sigma), parse_permutation(args.phi)
    elements = ShuffleSet(sigma, phi, left=args.left).to_strings()
    if cfg.format == "structured":
        return EXIT_OK, _render(cfg, {"sigma": str(sigma), "phi": str(phi), "left": args.left,
                                      "shuffles": elements})
    return EXIT_OK, "".join(f"{e}\n" for e in elements)


def _bound(args) -> int:
    bound = DEFAULT_BOUNDS[args.mode] if args.bound is None else args.bound
    cap = hard_cap()
    if not 0 <= bound <= cap:
        raise UsageError(f"--bound must be between 0 and the hard cap {cap}, got {bound}")
    if args.mode == "descent" and bound < 1:
        raise UsageError("--bound must be at least 1 in descent mode")
    return bound


def _cmd_check(args, cfg: RunConfig) -> tuple[int, str]:
    st = lookup(args.stat)
    report = run_check(st, MODE_NAMES[args.mode], _bound(args), jobs=cfg.jobs)
    data = report.to_dict(include_groups=args.groups, include_timing=cfg.timing)
    return (EXIT_OK if report.compatible else EXIT_VIOLATED), _render(cfg, data)


def _cmd_witness(args, cfg: RunConfig) -> tuple[int, str]:
    st = lookup(args.stat)
    report = run_check(st, MODE_NAMES[args.mode], _bound(args), jobs=cfg.jobs)
    witness = None if report.witness is None else report.witness.to_dict()
    data = {"statistic": st.name, "mode": report.mode, "bound": report.bound, "witness": witness}
    return (EXIT_OK if witness is None else EXIT_VIOLATED), _render(cfg, data)


def _cmd_reproduce(args, cfg: RunConfig, table=TABLE1) -> tuple[int, str]:
    items = reproduce_paper(table, jobs=cfg.jobs)
    ok = all(item.passed for item in items)
    if cfg.format == "structured":
        data = {"items": [item.to_dict() for item in items],
                "passed": sum(item.passed for item in items), "total": len(items),
                "status": "pass" if ok else "fail"}
        if cfg.timing:
            for d, item in zip(data["items"], items):
                if item.report is not None:
                    d["report"]["wall_time_s"] = round(item.report.wall_time, 6)
        return (EXIT_OK if ok else EXIT_VIOLATED), _render(cfg, data)
    lines = []
    for item in items:
        lines.append(f"{'PASS' if item.passed else 'FAIL'} {item.name}: {item.claim}")
        for d in item.details:
            lines.append(f"    {d}")
        if item.report is not None:
            rep = item.report.to_dict(include_timing=cfg.timing)
            lines += [f"    {k}: {v}" for k, v in flatten(rep)]
    lines.append(f"{sum(i.passed for i in items)}/{len(items)} claims reproduced")
    return (EXIT_OK if ok else EXIT_VIOLATED), "\n".join(lines) + "\n"


COMMANDS = {
    "stat": _cmd_stat,
    "shuffle": _cmd_shuffle,
    "check": _cmd_check,
    "witness": _cmd_witness,
    "reproduce-paper": _cmd_reproduce,
}


def main(argv: Optional[Sequence[str]] = None, *, table=TABLE1) -> int:
    """Run the CLI and return the exit code.

    ``table`` replaces the embedded expected table for ``reproduce-paper``;
    it exists so the negative control can feed in a corrupted copy.
    """
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        cfg = RunConfig(args.command, args.format, args.output, args.jobs, args.timing)
        handler = COMMANDS[args.command]
        if args.command == "reproduce-paper":
            code, text = handler(args, cfg, table)
        else:
            code, text = handler(args, cfg)
    except (UsageError, ValueError, KeyError, OverflowError, MemoryError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"shufflecheck: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
