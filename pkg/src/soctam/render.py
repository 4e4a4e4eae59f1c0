"""Text tables and Gantt charts (ASCII and SVG) for schedules."""

from __future__ import annotations

from typing import Dict, List, Sequence, Tuple
from xml.sax.saxutils import escape

from soctam.scheduler import Schedule
from soctam.wrapper import TamRange

WIRE_PX = 12
PLOT_WIDTH_PX = 1000
MARGIN_PX = 40


def wrapper_table(rows: Sequence[TamRange]) -> str:
    lines = [f"{'tam_range':>10}  {'tam_u':>5}  {'longest_chain':>13}  {'test_time':>10}"]
    for r in rows:
        lines.append(f"{r.label:>10}  {r.tam_u:>5}  {r.longest_chain:>13}  {r.test_time:>10}")
    return "\n".join(lines) + "\n"


def assign_wires(sched: Schedule, w_max: int) -> Dict[int, List[Tuple[int, int]]]:
    """Give each core concrete wire indices for drawing.

    The scheduler only tracks wire counts, so wires are handed out lowest
    index first in start order. Returns per core a list of (first_wire,
    count) runs.
    """
    free_at = [0] * w_max
    runs: Dict[int, List[Tuple[int, int]]] = {}
    for cid, start, finish, width in sorted(sched.rows, key=lambda r: (r[1], r[0])):
        wires = [i for i in range(w_max) if free_at[i] <= start][:width]
        if len(wires) < width:
            # overfull schedule; draw the excess above the bin
            wires += list(range(w_max, w_max + width - len(wires)))
        for i in wires:
            if i < w_max:
                free_at[i] = finish
        merged: List[Tuple[int, int]] = []
        for i in wires:
            if merged and merged[-1][0] + merged[-1][1] == i:
                merged[-1] = (merged[-1][0], merged[-1][1] + 1)
            else:
                merged.append((i, 1))
        runs[cid] = merged
    return runs


def _label(cid: int) -> str:
    return f"c{cid}"


def ascii_gantt(sched: Schedule, w_max: int, columns: int = 72) -> str:
    span = sched.makespan or 1
    grid = [["." for _ in range(columns)] for _ in range(w_max)]
    for cid, runs in assign_wires(sched, w_max).items():
        _, start, finish, _ = sched.row(cid)
        c0 = start * columns // span
        c1 = max(c0 + 1, finish * columns // span)
        mark = str(cid % 36) if cid < 10 else chr(ord("a") + (cid - 10) % 26)
        for first, count in runs:
            for wire in range(first, min(first + count, w_max)):
                for col in range(c0, min(c1, columns)):
                    grid[wire][col] = mark
    lines = [f"wire {w_max - 1 - i:>3} |" + "".join(row) for i, row in enumerate(reversed(grid))]
    lines.append(" " * 9 + "+" + "-" * columns)
    lines.append(" " * 10 + f"0{'':>{columns - len(str(span)) - 1}}{span}")
    return "\n".join(lines) + "\n"


def svg_gantt(sched: Schedule, w_max: int, title: str = "") -> str:
    span = sched.makespan or 1
    height = w_max * WIRE_PX
    scale = PLOT_WIDTH_PX / span
    total_w = PLOT_WIDTH_PX + 2 * MARGIN_PX
    total_h = height + 2 * MARGIN_PX
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{total_w}" height="{total_h}">',
        f'<title>{escape(title or "test schedule")}</title>',
        f'<rect x="{MARGIN_PX}" y="{MARGIN_PX}" width="{PLOT_WIDTH_PX}" height="{height}" '
        'fill="white" stroke="black"/>',
    ]
    for cid, runs in sorted(assign_wires(sched, w_max).items()):
        _, start, finish, _ = sched.row(cid)
        x = MARGIN_PX + start * scale
        w = (finish - start) * scale
        for first, count in runs:
            y = MARGIN_PX + height - (first + count) * WIRE_PX
            out.append(f'<rect x="{x:.2f}" y="{y}" width="{w:.2f}" height="{count * WIRE_PX}" '
                       'fill="#9ecae1" stroke="#08519c"/>')
            out.append(f'<text x="{x + w / 2:.2f}" y="{y + count * WIRE_PX / 2 + 4:.1f}" '
                       f'font-size="10" text-anchor="middle">{_label(cid)}</text>')
    out.append(f'<text x="{MARGIN_PX}" y="{total_h - 12}" font-size="10">0</text>')
    out.append(f'<text x="{MARGIN_PX + PLOT_WIDTH_PX}" y="{total_h - 12}" font-size="10" '
               f'text-anchor="end">{span}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def tsv(sched: Schedule) -> str:
    lines = ["core\tstart\tfinish\twidth"]
    lines += [f"{c}\t{s}\t{f}\t{w}" for c, s, f, w in sched.rows]
    return "\n".join(lines) + "\n"
