"""Wrapper scan-chain design and the per-core TAM-width/test-time trade-off."""

from __future__ import annotations

import functools
import heapq
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from soctam.benchmark_io import CoreSpec


def test_time(p: int, s_in: int, s_out: int) -> int:
    """Cycles to apply ``p`` patterns through wrapper chains of scan depth ``s_in``/``s_out``.

    Loading of the next pattern overlaps with unloading of the previous
    response, so only the final unload of the shorter side is added.
    """
    return p * (1 + max(s_in, s_out)) + min(s_in, s_out)


test_time.__test__ = False  # keep pytest from collecting the re-export


@dataclass(frozen=True)
class WrapperChain:
    scan_lengths: Tuple[int, ...] = ()
    input_cells: int = 0
    output_cells: int = 0

    @property
    def scan_in(self) -> int:
        return sum(self.scan_lengths) + self.input_cells

    @property
    def scan_out(self) -> int:
        return sum(self.scan_lengths) + self.output_cells

    @property
    def empty(self) -> bool:
        return not self.scan_lengths and not self.input_cells and not self.output_cells


@dataclass(frozen=True)
class WrapperConfig:
    """One wrapper design. ``direct`` marks a combinational core whose terminals each get their own TAM bit."""

    chains: Tuple[WrapperChain, ...]
    tam_u: int
    s_in: int
    s_out: int
    test_time: int
    direct: bool = False

    @property
    def longest_chain(self) -> int:
        return max(self.s_in, self.s_out)


@dataclass(frozen=True)
class TamTimePoint:
    tam_u: int
    test_time: int
    longest_chain: int


@dataclass(frozen=True)
class TamRange:
    """Consecutive offered widths ``w_lo..w_hi`` that all produce the same wrapper."""

    w_lo: int
    w_hi: int
    tam_u: int
    longest_chain: int
    test_time: int

    @property
    def label(self) -> str:
        return str(self.w_lo) if self.w_lo == self.w_hi else f"{self.w_lo}-{self.w_hi}"


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _spread(total: int, parts: int) -> List[int]:
    base, extra = divmod(total, parts)
    return [base + 1 if i < extra else base for i in range(parts)]


def _finish(chains: Sequence[WrapperChain], patterns: int, direct: bool = False) -> WrapperConfig:
    chains = tuple(c for c in chains if not c.empty) or (WrapperChain(),)
    if direct:
        s_in = s_out = 0
    else:
        s_in = max(c.scan_in for c in chains)
        s_out = max(c.scan_out for c in chains)
    return WrapperConfig(chains, len(chains), s_in, s_out, test_time(patterns, s_in, s_out), direct)


def _combinational(w_max: int, core: CoreSpec) -> WrapperConfig:
    n_in = core.num_inputs + core.num_bidirs
    n_out = core.num_outputs + core.num_bidirs
    if n_in + n_out <= w_max:
        chains = [WrapperChain((), 1, 0)] * n_in + [WrapperChain((), 0, 1)] * n_out
        return _finish(chains, core.num_patterns, direct=True)
    # w_max chains; each carries an even share of the input cells and of the output cells
    ins = _spread(n_in, w_max)
    outs = _spread(n_out, w_max)
    return _finish([WrapperChain((), i, o) for i, o in zip(ins, outs)], core.num_patterns)


def _best_fit(lengths: Sequence[int], cap: int) -> List[List[int]]:
    bins: List[List[int]] = []
    sums: List[int] = []
    for length in lengths:
        best = -1
        for i, s in enumerate(sums):
            if s + length <= cap and (best < 0 or s > sums[best]):
                best = i
        if best < 0:
            bins.append([length])
            sums.append(length)
        else:
            bins[best].append(length)
            sums[best] += length
    return bins


def _first_chain_bound(lengths: Sequence[int], peak: int) -> int:
    """Length of a single wrapper chain filled greedily (descending) up to ``peak``."""
    filled = 0
    for length in lengths:
        if filled + length <= peak:
            filled += length
    return max(filled, lengths[0])


def _fill_cells(lengths: List[int], cells: List[int], count: int, w_max: int, ceiling: int) -> int:
    """Distribute ``count`` unit cells onto chains, shortest first.

    ``lengths`` holds the current lengths on the side being filled (scan-in
    or scan-out) and is updated in place; ``cells`` receives the per-chain
    cell counts. A new chain is opened instead of pushing the shortest chain
    above ``ceiling`` while fewer than ``w_max`` chains exist. Returns the new
    ceiling.
    """
    heap = [(length, i) for i, length in enumerate(lengths)]
    heapq.heapify(heap)
    for _ in range(count):
        length, i = heapq.heappop(heap)
        if length + 1 > ceiling and len(lengths) < w_max:
            heapq.heappush(heap, (length, i))
            lengths.append(0)
            cells.append(0)
            i, length = len(lengths) - 1, 0
        lengths[i] = length + 1
        cells[i] += 1
        heapq.heappush(heap, (length + 1, i))
        ceiling = max(ceiling, length + 1)
    return ceiling


def _sequential(w_max: int, core: CoreSpec) -> WrapperConfig:
    lengths = sorted(core.scan_chain_lengths, reverse=True)
    total = sum(lengths) + core.num_inputs + core.num_outputs + core.num_bidirs
    mid_lines = max(1, w_max // 2)
    peak = _ceil_div(total, mid_lines)

    # The first chain sets the bound that every other chain is balanced against.
    bound = _first_chain_bound(lengths, peak)
    bins = _best_fit(lengths, bound)
    while len(bins) > w_max:
        bins.sort(key=sum)
        shortest = bins.pop(0)
        bins[0].extend(shortest)
        bins.sort(key=sum, reverse=True)

    scan = [sum(b) for b in bins]
    ceiling = max(scan)
    base_in = list(scan)
    inputs = [0] * len(scan)
    ceiling = _fill_cells(base_in, inputs, core.num_inputs + core.num_bidirs, w_max, ceiling)
    scan += [0] * (len(base_in) - len(scan))
    base_out = list(scan)
    outputs = [0] * len(scan)
    _fill_cells(base_out, outputs, core.num_outputs + core.num_bidirs, w_max, ceiling)

    n = len(base_out)
    bins += [[] for _ in range(n - len(bins))]
    inputs += [0] * (n - len(inputs))
    chains = [WrapperChain(tuple(bins[i]), inputs[i], outputs[i]) for i in range(n)]
    return _finish(chains, core.num_patterns)


def design_wrapper(w_max: int, core: CoreSpec) -> WrapperConfig:
    """Build balanced wrapper scan chains for ``core`` using at most ``w_max`` TAM wires."""
    if w_max < 1:
        raise ValueError(f"w_max must be >= 1, got {w_max}")
    if core.is_combinational:
        return _combinational(w_max, core)
    return _sequential(w_max, core)


def tam_ranges(core: CoreSpec, w_max: int) -> List[TamRange]:
    """Sweep the offered width from ``w_max`` down to 1, merging widths with identical results."""
    rows: List[TamRange] = []
    for w in range(w_max, 0, -1):
        cfg = design_wrapper(w, core)
        if rows and (rows[-1].tam_u, rows[-1].test_time) == (cfg.tam_u, cfg.test_time):
            last = rows[-1]
            rows[-1] = TamRange(w, last.w_hi, last.tam_u, last.longest_chain, last.test_time)
        else:
            rows.append(TamRange(w, w, cfg.tam_u, cfg.longest_chain, cfg.test_time))
    return rows


def tam_time_table(core: CoreSpec, w_max: int) -> List[TamTimePoint]:
    """Distinct (TAM_u, time) points for widths 1..w_max, highest TAM_u first.

    A point whose time is not better than that of some narrower point is
    dropped, so time strictly decreases as TAM_u grows.
    """
    if w_max < 1:
        raise ValueError(f"w_max must be >= 1, got {w_max}")
    return list(_table(core, w_max))


@functools.lru_cache(maxsize=8192)
def _table(core: CoreSpec, w_max: int) -> Tuple[TamTimePoint, ...]:
    # cores are frozen, and the scheduler and validator both ask for the same tables
    best = {}
    for r in tam_ranges(core, w_max):
        if r.tam_u not in best or r.test_time < best[r.tam_u].test_time:
            best[r.tam_u] = TamTimePoint(r.tam_u, r.test_time, r.longest_chain)
    points: List[TamTimePoint] = []
    for tam_u in sorted(best):
        pt = best[tam_u]
        if points and pt.test_time >= points[-1].test_time:
            continue
        points.append(pt)
    return tuple(points[::-1])
