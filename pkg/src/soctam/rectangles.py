"""Per-core rectangle sets, time normalization and the diagonal-length ordering."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, List, Sequence, Tuple, Union

from soctam.benchmark_io import SocDesign
from soctam.wrapper import TamTimePoint, tam_time_table


@dataclass(frozen=True)
class RectangleSet:
    """Selectable rectangles of one core: height = TAM_u, width = test time."""

    core_id: int
    points: Tuple[TamTimePoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(sorted(self.points, key=lambda p: -p.tam_u)))
        if not self.points:
            raise ValueError(f"core {self.core_id}: empty rectangle set")

    @property
    def max_tam_u(self) -> int:
        return self.points[0].tam_u

    @property
    def widths(self) -> List[int]:
        return [p.tam_u for p in self.points]

    def time_at(self, tam_u: int) -> int:
        for p in self.points:
            if p.tam_u == tam_u:
                return p.test_time
        raise KeyError(f"core {self.core_id} has no rectangle of height {tam_u}")


def build_rectangles(design: SocDesign, w_max: int) -> List[RectangleSet]:
    if w_max < 1:
        raise ValueError(f"w_max must be >= 1, got {w_max}")
    return [RectangleSet(c.id, tuple(tam_time_table(c, w_max))) for c in design.cores]


def compute_tmin(sets: Sequence[RectangleSet]) -> int:
    """Shortest test time over all cores, each taken at its tallest rectangle."""
    if not sets:
        raise ValueError("cannot compute T_min of an empty design")
    return min(s.time_at(s.max_tam_u) for s in sets)


Number = Union[int, float, Fraction]


@dataclass(frozen=True)
class DiagonalKey:
    core_id: int
    height: int
    norm_width: Fraction

    @property
    def squared(self) -> Fraction:
        return self.height * self.height + self.norm_width * self.norm_width

    @property
    def diagonal(self) -> float:
        return math.hypot(self.height, float(self.norm_width))

    @classmethod
    def from_dims(cls, core_id: int, height: int, norm_width: Number) -> "DiagonalKey":
        if not isinstance(norm_width, Rational):
            norm_width = Fraction(norm_width)
        return cls(core_id, height, Fraction(norm_width))


def diagonal_key(rset: RectangleSet, t_min: int) -> DiagonalKey:
    if t_min <= 0:
        raise ValueError(f"t_min must be positive, got {t_min}")
    height = rset.max_tam_u
    return DiagonalKey(rset.core_id, height, Fraction(rset.time_at(height), t_min))


def sort_initial(keys: Iterable[DiagonalKey]) -> List[int]:
    """Core ids by descending diagonal; ties go to the taller rectangle, then the lower id."""
    return [k.core_id for k in sorted(keys, key=lambda k: (-k.squared, -k.height, k.core_id))]
