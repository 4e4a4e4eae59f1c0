"""Our makespans next to the published d695 numbers."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Dict, Iterable, List, Optional, Tuple

from soctam.benchmark_io import SocDesign
from soctam.scheduler import Limits, schedule

Cell = Tuple[int, Optional[int]]  # (w_max, p_max)


@dataclass(frozen=True)
class ReportRow:
    w_max: int
    p_max: Optional[int]
    ours: int
    published: Optional[int]
    others: Dict[str, int]

    @property
    def deviation_pct(self) -> Optional[float]:
        if not self.published:
            return None
        return 100.0 * (self.ours - self.published) / self.published


def parse_baselines(text: str) -> Dict[Cell, Dict[str, int]]:
    """Flatten a baseline JSON document into ``{(w_max, p_max): {approach: cycles}}``."""
    if not text.strip():
        return {}
    doc = json.loads(text)
    cells: Dict[Cell, Dict[str, int]] = {}
    for w, cols in doc.get("unconstrained", {}).items():
        cells[(int(w), None)] = {k: int(v) for k, v in cols.items()}
    for p, by_width in doc.get("power", {}).items():
        for w, cols in by_width.items():
            cells[(int(w), int(p))] = {k: int(v) for k, v in cols.items()}
    return cells


def bundled_baselines() -> Dict[Cell, Dict[str, int]]:
    return parse_baselines(resources.files("soctam").joinpath("data", "baselines.json").read_text(encoding="utf-8"))


def build_report(design: SocDesign, cells: Iterable[Cell],
                 baselines: Dict[Cell, Dict[str, int]]) -> List[ReportRow]:
    rows = []
    for w_max, p_max in cells:
        ours = schedule(design, Limits(w_max, p_max)).makespan
        cols = dict(baselines.get((w_max, p_max), {}))
        published = cols.pop("proposed", None)
        rows.append(ReportRow(w_max, p_max, ours, published, cols))
    return rows


def render_report(rows: List[ReportRow]) -> str:
    others = sorted({k for r in rows for k in r.others})
    head = f"{'p_max':>6} {'w_max':>5} " + "".join(f"{k:>8}" for k in others) + f" {'published':>10} {'ours':>8} {'dev%':>7}"
    lines = [head]
    for r in rows:
        p = "-" if r.p_max is None else str(r.p_max)
        cols = "".join(f"{r.others[k]:>8}" if k in r.others else f"{'':>8}" for k in others)
        pub = "" if r.published is None else str(r.published)
        dev = "" if r.deviation_pct is None else f"{r.deviation_pct:+.1f}"
        lines.append(f"{p:>6} {r.w_max:>5} {cols} {pub:>10} {r.ours:>8} {dev:>7}")
    return "\n".join(lines) + "\n"
