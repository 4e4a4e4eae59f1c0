"""Schedule validation, exact solvers for tiny instances and random instance generation."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from soctam.benchmark_io import CoreSpec, SocDesign
from soctam.rectangles import RectangleSet, build_rectangles
from soctam.scheduler import Limits, Schedule

VIOLATION_KINDS = (
    "width-overflow",
    "power-overflow",
    "bad-width",
    "bad-duration",
    "duplicate",
    "unscheduled",
    "unknown-core",
)


@dataclass(frozen=True)
class Violation:
    kind: str
    where: int  # time for overflow kinds, core id otherwise
    detail: str

    def __str__(self):
        return f"{self.kind} @ {self.where}: {self.detail}"


def validate(sched: Schedule, design: SocDesign, limits: Limits) -> List[Violation]:
    """Check ``sched`` against the width cap, the power cap and each core's rectangle set."""
    out: List[Violation] = []
    rects = {r.core_id: r for r in build_rectangles(design, limits.w_max)}
    power = {c.id: c.power_mw for c in design.cores}

    seen: Dict[int, int] = {}
    for cid, start, finish, width in sched.rows:
        seen[cid] = seen.get(cid, 0) + 1
        if cid not in rects:
            out.append(Violation("unknown-core", cid, f"core {cid} is not part of the design"))
            continue
        rset = rects[cid]
        if width not in rset.widths:
            out.append(Violation("bad-width", cid, f"width {width} is not a TAM_u of core {cid} ({rset.widths})"))
        elif width != rset.max_tam_u and 2 * width < rset.max_tam_u:
            out.append(Violation("bad-width", cid, f"width {width} is below half of peak {rset.max_tam_u}"))
        else:
            expected = rset.time_at(width)
            if start < 0 or finish - start != expected:
                out.append(Violation("bad-duration", cid,
                                     f"interval [{start}, {finish}) lasts {finish - start}, expected {expected} at width {width}"))
    for cid, n in sorted(seen.items()):
        if n > 1:
            out.append(Violation("duplicate", cid, f"core {cid} appears {n} times"))
    for cid in sorted(set(rects) - set(seen)):
        out.append(Violation("unscheduled", cid, f"core {cid} is missing from the schedule"))

    # sweep over [start, finish) intervals; releases sort before acquisitions at equal times
    events = []
    for cid, start, finish, width in sched.rows:
        if finish <= start:
            continue
        p = power.get(cid, 0)
        events.append((start, 1, width, p))
        events.append((finish, 0, -width, -p))
    events.sort(key=lambda e: (e[0], e[1]))
    wires = watts = 0
    prev_wires = prev_watts = 0
    for t, group in itertools.groupby(events, key=lambda e: e[0]):
        for _, _, dw, dp in group:
            wires += dw
            watts += dp
        if wires > limits.w_max and wires > prev_wires:
            out.append(Violation("width-overflow", t, f"{wires} wires in use, W_max is {limits.w_max}"))
        if limits.p_max is not None and watts > limits.p_max and watts > prev_watts:
            out.append(Violation("power-overflow", t, f"{watts} mW in use, P_max is {limits.p_max} mW"))
        prev_wires, prev_watts = wires, watts
    return out


# ---------------------------------------------------------------------------
# exact solvers

MAX_ORACLE_CORES = 5
MAX_ORACLE_POINTS = 4


class OracleTooLarge(ValueError):
    pass


def _oracle_rects(design: SocDesign, limits: Limits) -> List[RectangleSet]:
    if len(design.cores) > MAX_ORACLE_CORES:
        raise OracleTooLarge(f"instance too large for oracle: {len(design.cores)} cores")
    rects = build_rectangles(design, limits.w_max)
    for r in rects:
        if len(r.points) > MAX_ORACLE_POINTS:
            raise OracleTooLarge(f"instance too large for oracle: core {r.core_id} has {len(r.points)} rectangles")
    if limits.p_max is not None:
        for c in design.cores:
            if c.power_mw > limits.p_max:
                raise ValueError(f"core {c.id} exceeds P_max on its own")
    return rects


def brute_force_optimal(design: SocDesign, limits: Limits) -> int:
    """Minimum makespan over all rectangle choices and left-justified placements.

    Cores are placed in order of start time; a core starts at 0 or at the
    finish of a core placed before it. Any schedule can be shifted left into
    this form without growing, so the search is exact.
    """
    rects = _oracle_rects(design, limits)
    if not rects:
        return 0
    power = {c.id: c.power_mw for c in design.cores}
    items = [(r.core_id, [(p.tam_u, p.test_time) for p in r.points]) for r in rects]
    p_cap = limits.p_max
    # running everything back to back at the fastest width is always feasible
    best = [sum(min(t for _, t in opts) for _, opts in items) + 1]

    def feasible(placed, start, width, watts):
        load_w = width
        load_p = watts
        for s, f, w, p in placed:
            if s <= start < f:
                load_w += w
                load_p += p
        return load_w <= limits.w_max and (p_cap is None or load_p <= p_cap)

    def search(remaining, placed, last_start, span):
        if span >= best[0]:
            return
        if not remaining:
            best[0] = span
            return
        starts = sorted({0} | {f for _, f, _, _ in placed})
        for idx, (cid, opts) in enumerate(remaining):
            rest = remaining[:idx] + remaining[idx + 1:]
            for t in starts:
                if t < last_start:
                    continue
                for w, dur in opts:
                    if t + dur >= best[0]:
                        continue
                    if feasible(placed, t, w, power[cid]):
                        placed.append((t, t + dur, w, power[cid]))
                        search(rest, placed, t, max(span, t + dur))
                        placed.pop()

    search(items, [], 0, 0)
    return best[0]


def _earliest_start(profile: List[Tuple[int, int, int, int]], dur: int, width: int, watts: int,
                    w_max: int, p_max: Optional[int]) -> int:
    candidates = sorted({0} | {f for _, f, _, _ in profile})
    for t in candidates:
        ok = True
        # load only changes at interval starts, so checking t and every start inside [t, t+dur) suffices
        checkpoints = {t} | {s for s, _, _, _ in profile if t < s < t + dur}
        for x in checkpoints:
            w = width + sum(pw for s, f, pw, _ in profile if s <= x < f)
            p = watts + sum(pp for s, f, _, pp in profile if s <= x < f)
            if w > w_max or (p_max is not None and p > p_max):
                ok = False
                break
        if ok:
            return t
    raise AssertionError("no feasible start; unreachable once the last finish is a candidate")


def enumerate_optimal(design: SocDesign, limits: Limits) -> int:
    """Second exact solver: every width selection times every order, each placed as early as possible."""
    rects = _oracle_rects(design, limits)
    if not rects:
        return 0
    power = {c.id: c.power_mw for c in design.cores}
    best = None
    choices = [[(r.core_id, p.tam_u, p.test_time) for p in r.points] for r in rects]
    for selection in itertools.product(*choices):
        for perm in itertools.permutations(selection):
            profile: List[Tuple[int, int, int, int]] = []
            for cid, w, dur in perm:
                t = _earliest_start(profile, dur, w, power[cid], limits.w_max, limits.p_max)
                profile.append((t, t + dur, w, power[cid]))
            span = max(f for _, f, _, _ in profile)
            if best is None or span < best:
                best = span
    return best


# ---------------------------------------------------------------------------
# random instances


def random_instance(seed: int, n_cores: int = 5, max_chains: int = 8, max_len: int = 60,
                    max_patterns: int = 200, max_power: int = 1000, max_io: int = 40,
                    kind: str = "mixed") -> SocDesign:
    """Deterministic random SOC; ``kind`` is ``mixed``, ``combinational`` or ``sequential``."""
    if min(n_cores, max_chains, max_len, max_patterns) < 1 or max_power < 0 or max_io < 0:
        raise ValueError("bounds must be positive")
    rng = random.Random(seed)
    cores = []
    for cid in range(1, n_cores + 1):
        if kind == "combinational":
            sequential = False
        elif kind == "sequential":
            sequential = True
        else:
            sequential = rng.random() < 0.7
        chains = tuple(rng.randint(1, max_len) for _ in range(rng.randint(1, max_chains))) if sequential else ()
        n_in = rng.randint(0, max_io)
        n_out = rng.randint(0, max_io)
        bidirs = rng.randint(0, max_io // 4) if rng.random() < 0.3 else 0
        if not chains and n_in + n_out + bidirs == 0:
            n_in = 1
        cores.append(CoreSpec(
            id=cid,
            num_inputs=n_in,
            num_outputs=n_out,
            num_bidirs=bidirs,
            scan_chain_lengths=chains,
            num_patterns=rng.randint(1, max_patterns),
            power_mw=rng.randint(0, max_power),
        ))
    return SocDesign(f"random-{seed}", cores)


def oracle_instance(seed: int, n_cores: int) -> Tuple[SocDesign, Limits]:
    """Small random instance whose rectangle sets stay inside the oracle guard."""
    rng = random.Random(seed)
    design = random_instance(seed, n_cores=n_cores, max_chains=4, max_len=20, max_patterns=20,
                             max_power=100, max_io=6)
    w_max = rng.randint(1, MAX_ORACLE_POINTS)
    p_max = None
    if rng.random() < 0.5:
        p_max = rng.randint(max(c.power_mw for c in design.cores), 200)
    return design, Limits(w_max, p_max)
