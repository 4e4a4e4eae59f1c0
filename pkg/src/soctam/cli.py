"""Command line front end: ``soctam <subcommand> ...``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

from soctam import render
from soctam.benchmark_io import (
    BenchmarkError,
    SocDesign,
    bundled_text,
    load_design,
    serialize_native,
)
from soctam.oracle import random_instance, validate
from soctam.rectangles import build_rectangles
from soctam.report import build_report, bundled_baselines, parse_baselines, render_report
from soctam.scheduler import Limits, SchedulingError, parse_schedule_export, schedule
from soctam.wrapper import tam_ranges

BUNDLED = {
    "d695": ("d695.soc", "d695.power"),
    "p93791": ("p93791_core6.soc", None),
}


@dataclass
class RunConfig:
    design: Optional[str]
    power: Optional[str] = None
    w_max: Optional[int] = None
    p_max: Optional[int] = None
    fmt: str = "text"
    baselines: bool = True
    seed: Optional[int] = None
    cores: int = 8

    def load(self) -> SocDesign:
        if self.design is None:
            if self.seed is None:
                raise BenchmarkError("either --design or --seed is required")
            return random_instance(self.seed, n_cores=self.cores)
        path = Path(self.design)
        if not path.exists() and self.design in BUNDLED:
            soc, power = BUNDLED[self.design]
            power_text = Path(self.power).read_text() if self.power else (bundled_text(power) if power else None)
            return load_design(bundled_text(soc), power_text)
        if not path.exists():
            raise BenchmarkError(f"design file not found: {self.design}")
        power_text = Path(self.power).read_text() if self.power else None
        return load_design(path.read_text(), power_text)


def _config(args) -> RunConfig:
    return RunConfig(
        design=args.design,
        power=getattr(args, "power", None),
        w_max=getattr(args, "wmax", None),
        p_max=getattr(args, "pmax", None),
        fmt=getattr(args, "format", "text"),
        seed=getattr(args, "seed", None),
        cores=getattr(args, "cores", 8),
    )


def _need_wmax(cfg: RunConfig) -> int:
    if cfg.w_max is None or cfg.w_max < 1:
        raise BenchmarkError("--wmax must be given and >= 1")
    return cfg.w_max


def cmd_parse(args) -> int:
    sys.stdout.write(serialize_native(_config(args).load()))
    return 0


def cmd_wrapper_table(args) -> int:
    cfg = _config(args)
    design = cfg.load()
    try:
        core = design.core(args.core)
    except KeyError:
        print(f"error: unknown core {args.core}", file=sys.stderr)
        return 1
    sys.stdout.write(render.wrapper_table(tam_ranges(core, _need_wmax(cfg))))
    return 0


def cmd_rects(args) -> int:
    cfg = _config(args)
    for rset in build_rectangles(cfg.load(), _need_wmax(cfg)):
        for p in rset.points:
            print(f"{rset.core_id} {p.tam_u} {p.test_time}")
    return 0


def cmd_schedule(args) -> int:
    cfg = _config(args)
    design = cfg.load()
    limits = Limits(_need_wmax(cfg), cfg.p_max)
    if cfg.p_max is not None and cfg.power is None and cfg.design not in BUNDLED and cfg.seed is None:
        print("warning: --pmax without --power; cores without power data count as 0 mW", file=sys.stderr)
    try:
        sched = schedule(design, limits)
    except SchedulingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if cfg.fmt == "svg":
        sys.stdout.write(render.svg_gantt(sched, limits.w_max, title=design.name))
    elif cfg.fmt == "tsv":
        sys.stdout.write(render.tsv(sched))
    else:
        sys.stdout.write(sched.export())
    if args.output:
        Path(args.output).write_text(sched.export())
    order = " ".join(str(c) for c in sched.order)
    print(f"makespan {sched.makespan}  tmin {sched.t_min}  order: {order}", file=sys.stderr)
    if args.gantt and cfg.fmt != "svg":
        sys.stderr.write(render.ascii_gantt(sched, limits.w_max))

    violations = validate(sched, design, limits)
    for v in violations:
        print(f"violation: {v}", file=sys.stderr)
    return 1 if violations else 0


def cmd_validate(args) -> int:
    cfg = _config(args)
    design = cfg.load()
    limits = Limits(_need_wmax(cfg), cfg.p_max)
    text = Path(args.schedule).read_text() if args.schedule and args.schedule != "-" else sys.stdin.read()
    try:
        sched = parse_schedule_export(text)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    violations = validate(sched, design, limits)
    for v in violations:
        print(v)
    if not violations:
        print(f"ok: {len(sched.rows)} cores, makespan {sched.makespan}")
    return 1 if violations else 0


def cmd_report(args) -> int:
    cfg = _config(args)
    if cfg.design is None and cfg.seed is None:
        cfg.design = "d695"
    design = cfg.load()
    if args.no_baselines:
        baselines = {}
    elif args.baseline:
        baselines = parse_baselines(Path(args.baseline).read_text())
    else:
        baselines = bundled_baselines()

    widths = args.wmax or sorted({w for w, _ in baselines}) or [16, 24, 32, 40, 48, 64]
    if args.pmax:
        powers: List[Optional[int]] = list(args.pmax)
    elif baselines:
        powers = sorted({p for _, p in baselines}, key=lambda p: (p is not None, p or 0))
    else:
        powers = [None]
    cells = [(w, p) for p in powers for w in widths if not baselines or (w, p) in baselines or args.wmax]
    if not baselines:
        print("notice: no baseline data; showing our results only", file=sys.stderr)
    sys.stdout.write(render_report(build_report(design, cells, baselines)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="soctam", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, wmax=True, pmax=False):
        p.add_argument("--design", help="ITC'02 .soc or native .core file, or a bundled name (d695, p93791)")
        p.add_argument("--power", help="power file with 'core_id power_mw' lines")
        p.add_argument("--seed", type=int, help="use a random instance with this seed instead of --design")
        p.add_argument("--cores", type=int, default=8, help="core count for --seed instances")
        if wmax:
            p.add_argument("--wmax", type=int, help="total TAM width")
        if pmax:
            p.add_argument("--pmax", type=int, help="power cap in mW")

    p = sub.add_parser("parse", help="print the design in native format")
    common(p, wmax=False)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("wrapper-table", help="TAM width / test time table of one core")
    common(p)
    p.add_argument("--core", type=int, required=True)
    p.set_defaults(func=cmd_wrapper_table)

    p = sub.add_parser("rects", help="rectangle sets, one 'core tam_u time' line per point")
    common(p)
    p.set_defaults(func=cmd_rects)

    p = sub.add_parser("schedule", help="build a test schedule")
    common(p, pmax=True)
    p.add_argument("--gantt", action="store_true", help="also draw the schedule (ASCII on stderr)")
    p.add_argument("--format", choices=("text", "svg", "tsv"), default="text")
    p.add_argument("--output", help="also write the schedule export to this file")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("validate", help="check a schedule export against the design")
    common(p, pmax=True)
    p.add_argument("--schedule", help="schedule export file (default: stdin)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("report", help="compare makespans with the published d695 results")
    p.add_argument("--design", help="design file or bundled name (default d695)")
    p.add_argument("--power", help="power file")
    p.add_argument("--seed", type=int)
    p.add_argument("--cores", type=int, default=8)
    p.add_argument("--wmax", type=int, action="append", help="width to report (repeatable)")
    p.add_argument("--pmax", type=int, action="append", help="power cap to report (repeatable)")
    p.add_argument("--baseline", help="baseline JSON file instead of the bundled one")
    p.add_argument("--no-baselines", action="store_true")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BenchmarkError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
