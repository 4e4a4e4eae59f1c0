"""Greedy rectangle packing of core tests under a TAM-width cap and an optional power cap."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, List, Optional, Sequence, Tuple

from soctam.benchmark_io import SocDesign
from soctam.rectangles import RectangleSet, build_rectangles, compute_tmin, diagonal_key, sort_initial


class SchedulingError(RuntimeError):
    pass


class UnschedulableCore(SchedulingError):
    def __init__(self, core_id: int, reason: str):
        super().__init__(f"core {core_id} cannot be scheduled: {reason}")
        self.core_id = core_id


@dataclass(frozen=True)
class Limits:
    w_max: int
    p_max: Optional[int] = None

    def __post_init__(self):
        if self.w_max < 1:
            raise ValueError(f"w_max must be >= 1, got {self.w_max}")
        if self.p_max is not None and self.p_max < 0:
            raise ValueError(f"p_max must be >= 0, got {self.p_max}")


@dataclass
class ScheduleEntry:
    peak_tam: int
    power: int = 0
    width: int = 0
    start: int = 0
    finish: int = 0
    scheduled: bool = False
    complete: bool = False

    @property
    def active(self) -> bool:
        return self.scheduled and not self.complete


@dataclass
class ScheduleState:
    rects: Dict[int, RectangleSet]
    entries: Dict[int, ScheduleEntry]
    w_max: int
    w_avail: int
    initial: Deque[int]
    pending: Deque[int] = field(default_factory=deque)
    this_time: int = 0
    next_schedule_time: int = 0
    idle_flag: bool = False

    @classmethod
    def start(cls, rects: Sequence[RectangleSet], order: Sequence[int], w_max: int,
              power: Optional[Dict[int, int]] = None) -> "ScheduleState":
        power = power or {}
        entries = {r.core_id: ScheduleEntry(peak_tam=r.max_tam_u, power=power.get(r.core_id, 0)) for r in rects}
        return cls({r.core_id: r for r in rects}, entries, w_max, w_max, deque(order))

    def active_power(self) -> int:
        return sum(e.power for e in self.entries.values() if e.active)

    def unscheduled(self) -> bool:
        return any(not e.scheduled for e in self.entries.values())


def no_power_conflict(state: ScheduleState, candidate_power: int, limits: Limits) -> bool:
    if limits.p_max is None:
        return True
    return state.active_power() + candidate_power <= limits.p_max


def select_possible_tam(rset: RectangleSet, w_avail: int) -> Optional[int]:
    """Widest rectangle that fits in ``w_avail`` and is at least half the core's peak width."""
    for tam_u in rset.widths:
        if tam_u <= w_avail and 2 * tam_u >= rset.max_tam_u:
            return tam_u
    return None


def update(state: ScheduleState, core_id: int, w: int) -> None:
    entry = state.entries[core_id]
    assert not entry.scheduled, f"core {core_id} scheduled twice"
    assert w <= state.w_avail, f"core {core_id}: width {w} exceeds available {state.w_avail}"
    duration = state.rects[core_id].time_at(w)
    entry.start = state.this_time
    entry.scheduled = True
    entry.finish = state.this_time + duration
    entry.width = w
    state.w_avail -= w


def advance_time(state: ScheduleState) -> None:
    """Jump to the earliest pending finish and release the wires of every core ending there."""
    future = [e.finish for e in state.entries.values() if e.active and e.finish > state.this_time]
    if not future:
        raise SchedulingError(f"no future event after t={state.this_time}")
    state.next_schedule_time = min(future)
    state.this_time = state.next_schedule_time
    for e in state.entries.values():
        if e.active and e.finish == state.this_time:
            state.w_avail += e.width
            e.complete = True
    state.idle_flag = False


def _admit_pending(state: ScheduleState, limits: Limits) -> bool:
    """Start cores from the front of PENDING at their peak width; False once the front has to wait."""
    while state.pending:
        c = state.pending[0]
        entry = state.entries[c]
        if entry.peak_tam > state.w_avail or not no_power_conflict(state, entry.power, limits):
            return False
        update(state, c, entry.peak_tam)
        state.pending.popleft()
    return True


@dataclass(frozen=True)
class Schedule:
    """Final placement: ``rows`` holds (core_id, start, finish, width) ordered by core id."""

    rows: Tuple[Tuple[int, int, int, int], ...]
    t_min: Optional[int] = None
    order: Tuple[int, ...] = ()

    @property
    def makespan(self) -> int:
        return max((r[2] for r in self.rows), default=0)

    def row(self, core_id: int) -> Tuple[int, int, int, int]:
        for r in self.rows:
            if r[0] == core_id:
                return r
        raise KeyError(f"core {core_id} not in schedule")

    def export(self) -> str:
        lines = [f"{c} {s} {f} {w}" for c, s, f, w in self.rows]
        lines.append(f"makespan {self.makespan}")
        return "\n".join(lines) + "\n"


def makespan(sched: Schedule) -> int:
    return sched.makespan


def parse_schedule_export(text: str) -> Schedule:
    """Read back the text written by :meth:`Schedule.export` (``core start finish width`` lines)."""
    rows = []
    declared = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "makespan" and len(parts) == 2:
                declared = int(parts[1])
                continue
            if len(parts) != 4:
                raise ValueError
            rows.append(tuple(int(v) for v in parts))
        except ValueError:
            raise ValueError(f"line {lineno}: expected 'core start finish width', got {raw!r}") from None
    sched = Schedule(tuple(sorted(rows)))
    if declared is not None and declared != sched.makespan:
        raise ValueError(f"declared makespan {declared} does not match rows ({sched.makespan})")
    return sched


def plan(design: SocDesign, limits: Limits) -> Tuple[List[RectangleSet], int, List[int]]:
    """Rectangle sets, T_min and the initial diagonal-length order for ``design``."""
    rects = build_rectangles(design, limits.w_max)
    if not rects:
        return rects, 0, []
    t_min = compute_tmin(rects)
    order = sort_initial(diagonal_key(r, t_min) for r in rects)
    return rects, t_min, order


def schedule(design: SocDesign, limits: Limits) -> Schedule:
    if limits.p_max is not None:
        for c in design.cores:
            if c.power_mw > limits.p_max:
                raise UnschedulableCore(c.id, f"power {c.power_mw} mW exceeds P_max {limits.p_max} mW")
    rects, t_min, order = plan(design, limits)
    if not rects:
        return Schedule(())
    state = ScheduleState.start(rects, order, limits.w_max, {c.id: c.power_mw for c in design.cores})
    run(state, limits)
    rows = tuple(sorted((cid, e.start, e.finish, e.width) for cid, e in state.entries.items()))
    return Schedule(rows, t_min, tuple(order))


def run(state: ScheduleState, limits: Limits) -> ScheduleState:
    """Drive the packing loop until every core has been started."""
    while state.unscheduled():
        if state.w_avail > 0 and not state.idle_flag:
            if state.initial:
                c = state.initial.popleft()
                entry = state.entries[c]
                fits_power = no_power_conflict(state, entry.power, limits)
                if state.w_avail >= entry.peak_tam and fits_power:
                    update(state, c, entry.peak_tam)
                else:
                    w = select_possible_tam(state.rects[c], state.w_avail)
                    if w is not None and fits_power:
                        update(state, c, w)
                    else:
                        state.pending.append(c)
                _admit_pending(state, limits)
            elif not _admit_pending(state, limits):
                state.idle_flag = True
        else:
            advance_time(state)
    return state
