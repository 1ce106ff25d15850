"""Command-line front end.

    measureval evaluate REFERENCE.csv TEST.csv [--alpha A] [--criterion C ...]
    measureval simulate --table {1,2,3} [--seed S] [--reps R]
    measureval critical {t,f} --alpha A (--df D | --df1 D1 --df2 D2)

``evaluate`` exits 0 when every criterion accepts, 2 when any rejects and
1 on error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .criteria import Criterion, TailMode, Verdict, evaluate
from .descriptive import SampleSummary, summarize
from .distributions import f_quantile, student_t_quantile
from .exceptions import DataError, InsufficientDataError, MeasurevalError
from .simulation import (
    ReferenceMode,
    SimulationConfig,
    estimate_rejection_ratio,
    table_configs,
)
from .validation import check_alpha

EXIT_ACCEPT = 0
EXIT_ERROR = 1
EXIT_REJECT = 2


class _Parser(argparse.ArgumentParser):
    # Usage errors share exit status 1 with other failures; 2 means "rejected".
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def read_measurements(path) -> np.ndarray:
    """Read a one-column file of measurements.

    Blank lines and lines starting with '#' are skipped. Every other line
    must hold exactly one finite number.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataError(f"{path}: cannot read file ({exc.strerror or exc})") from None
    values = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        if fields and fields[-1] == "":
            fields.pop()
        if len(fields) != 1:
            raise DataError(f"{path}:{lineno}: expected one value per line, got {line!r}")
        try:
            value = float(fields[0])
        except ValueError:
            raise DataError(f"{path}:{lineno}: not a number: {fields[0]!r}") from None
        if not math.isfinite(value):
            raise DataError(f"{path}:{lineno}: value is not finite: {fields[0]!r}")
        values.append(value)
    return np.asarray(values, dtype=float)


def _load_summary(path) -> SampleSummary:
    values = read_measurements(path)
    if values.size < 2:
        raise InsufficientDataError(
            f"{path}: need at least 2 measurements, found {values.size}"
        )
    return summarize(values)


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _fmt_interval(v: Verdict) -> str:
    return f"[{v.interval.lower:.6f}, {v.interval.upper:.6f}]"


def _verdict_lines(v: Verdict, indent: str = "") -> list[str]:
    df = ",".join(str(d) for d in v.df)
    crit = ",".join(f"{c:.6f}" for c in v.critical)
    verdict = "ACCEPT" if v.accepted else "REJECT"
    lines = [
        f"{indent}{v.criterion.value:<10} {verdict:<7} alpha={v.alpha:g} "
        f"statistic={v.statistic:.6f} interval={_fmt_interval(v)} df={df} critical={crit}"
    ]
    if v.sd_interval is not None:
        lines.append(
            f"{indent}{'':<10} s_T bounds [{v.sd_interval.lower:.6f}, {v.sd_interval.upper:.6f}]"
        )
    for c in v.components:
        lines.extend(_verdict_lines(c, indent + "  "))
    return lines


def cmd_evaluate(args) -> int:
    alpha = check_alpha(args.alpha)
    ref = _load_summary(args.reference)
    test = _load_summary(args.test)
    names = args.criterion or [Criterion.REFERENCE_MEAN.value]
    selected = list(dict.fromkeys(Criterion(c) for c in names))
    verdicts = [
        evaluate(c, ref, test, alpha, TailMode(args.tail), mu_true=args.mu_true)
        for c in selected
    ]
    report = {
        "reference": ref.to_dict(),
        "test": test.to_dict(),
        "alpha": alpha,
        "tail": args.tail,
        "verdicts": [v.to_dict() for v in verdicts],
        "accepted": all(v.accepted for v in verdicts),
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    if args.json:
        text = json.dumps(report, indent=2) + "\n"
    else:
        lines = [
            f"reference: N={ref.count} mean={ref.mean:.6f} sd={ref.sd:.6f}",
            f"test:      n={test.count} mean={test.mean:.6f} sd={test.sd:.6f}",
        ]
        for v in verdicts:
            lines.extend(_verdict_lines(v))
        lines.append("overall: " + ("ACCEPT" if report["accepted"] else "REJECT"))
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_ACCEPT if report["accepted"] else EXIT_REJECT


def _simulation_configs(args) -> list[SimulationConfig]:
    if args.table is not None:
        return table_configs(args.table, seed=args.seed, replications=args.reps or 1_000_000)
    return [
        SimulationConfig(
            mu_test=args.mu_test,
            sigma_test=args.sigma_test,
            alpha=args.alpha,
            criterion=Criterion(args.criterion),
            tail=TailMode(args.tail),
            mu_ref=args.mu_ref,
            sigma_ref=args.sigma_ref,
            n_ref=args.n_ref,
            n_test=args.n_test,
            replications=args.reps or 100_000,
            seed=args.seed,
            reference_mode=ReferenceMode(args.reference_mode),
        )
    ]


def cmd_simulate(args) -> int:
    configs = _simulation_configs(args)
    estimates = [estimate_rejection_ratio(c) for c in configs]
    if args.json:
        doc = {
            "table": args.table,
            "rows": [
                {"config": c.to_dict(), "estimate": e.to_dict()}
                for c, e in zip(configs, estimates)
            ],
        }
        _emit(json.dumps(doc, indent=2) + "\n", args.output)
        return EXIT_ACCEPT
    digits = 6 if args.table == 3 else 5
    first = configs[0]
    title = f"Table {args.table}" if args.table else "Simulation"
    lines = [
        f"# {title}: criterion={first.criterion.value} mu_ref={first.mu_ref:g} "
        f"sigma_ref={first.sigma_ref:g} N={first.n_ref} n={first.n_test} "
        f"reps={first.replications} seed={first.seed}",
        f"{'mu_T':>8} {'sigma_T':>8} {'alpha':>8} {'rho_pt':>10} {'rho_lo':>10} {'rho_hi':>10}",
    ]
    for c, e in zip(configs, estimates):
        lines.append(
            f"{c.mu_test:>8g} {c.sigma_test:>8g} {c.alpha:>8g} "
            f"{e.point:>10.{digits}f} {e.lower:>10.{digits}f} {e.upper:>10.{digits}f}"
        )
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_ACCEPT


def cmd_critical(args) -> int:
    alpha = check_alpha(args.alpha)
    tail = args.tail or ("two-sided" if args.distribution == "t" else "upper")
    if args.distribution == "t":
        if args.df is None:
            raise DataError("critical t needs --df")
        if tail == "two-sided":
            values = [student_t_quantile(1.0 - alpha / 2.0, args.df)]
        elif tail == "upper":
            values = [student_t_quantile(1.0 - alpha, args.df)]
        else:
            values = [student_t_quantile(alpha, args.df)]
    else:
        if args.df1 is None or args.df2 is None:
            raise DataError("critical f needs --df1 and --df2")
        if tail == "two-sided":
            values = [
                f_quantile(alpha / 2.0, args.df1, args.df2),
                f_quantile(1.0 - alpha / 2.0, args.df1, args.df2),
            ]
        elif tail == "upper":
            values = [f_quantile(1.0 - alpha, args.df1, args.df2)]
        else:
            values = [f_quantile(alpha, args.df1, args.df2)]
    if args.json:
        text = json.dumps({"distribution": args.distribution, "alpha": alpha,
                           "tail": tail, "values": values}) + "\n"
    else:
        text = " ".join(f"{v:.6f}" for v in values) + "\n"
    _emit(text, args.output)
    return EXIT_ACCEPT


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="measureval", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_output(p):
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--output", metavar="PATH", help="write output to PATH instead of stdout")

    criteria_names = [c.value for c in Criterion]
    tails = [t.value for t in TailMode]

    ev = sub.add_parser("evaluate", help="judge a test run against a reference run")
    ev.add_argument("reference", help="reference measurements, one value per line")
    ev.add_argument("test", help="measurements under test, one value per line")
    ev.add_argument("--alpha", type=float, default=0.05)
    ev.add_argument("--criterion", action="append", choices=criteria_names,
                    help="criterion to apply; repeatable (default: mean)")
    ev.add_argument("--tail", choices=tails, default=TailMode.UPPER.value,
                    help="variance test tail (default: upper)")
    ev.add_argument("--mu-true", type=float, default=None,
                    help="known true value, required by the classical criterion")
    add_output(ev)
    ev.set_defaults(func=cmd_evaluate)

    sim = sub.add_parser("simulate", help="Monte Carlo rejection ratios")
    sim.add_argument("--table", type=int, choices=(1, 2, 3), default=None,
                     help="reproduce a published table (fixes all other parameters)")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--reps", type=int, default=None)
    sim.add_argument("--criterion", choices=criteria_names, default=Criterion.REFERENCE_MEAN.value)
    sim.add_argument("--tail", choices=tails, default=TailMode.UPPER.value)
    sim.add_argument("--mu-ref", type=float, default=21.35)
    sim.add_argument("--sigma-ref", type=float, default=0.01)
    sim.add_argument("--n-ref", type=int, default=10)
    sim.add_argument("--n-test", type=int, default=3)
    sim.add_argument("--mu-test", type=float, default=21.35)
    sim.add_argument("--sigma-test", type=float, default=0.01)
    sim.add_argument("--alpha", type=float, default=0.05)
    sim.add_argument("--reference-mode", choices=[m.value for m in ReferenceMode],
                     default=ReferenceMode.FRESH.value)
    add_output(sim)
    sim.set_defaults(func=cmd_simulate)

    cr = sub.add_parser("critical", help="critical values of t and F")
    cr.add_argument("distribution", choices=("t", "f"))
    cr.add_argument("--alpha", type=float, required=True)
    cr.add_argument("--df", type=int)
    cr.add_argument("--df1", type=int)
    cr.add_argument("--df2", type=int)
    tail = cr.add_mutually_exclusive_group()
    tail.add_argument("--two-sided", dest="tail", action="store_const", const="two-sided")
    tail.add_argument("--upper", dest="tail", action="store_const", const="upper")
    tail.add_argument("--lower", dest="tail", action="store_const", const="lower")
    add_output(cr)
    cr.set_defaults(func=cmd_critical)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (MeasurevalError, ValueError, ArithmeticError, OSError) as exc:
        print(f"measureval: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
