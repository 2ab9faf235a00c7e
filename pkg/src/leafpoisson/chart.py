"""Coordinate chart bookkeeping.

A chart carries 2s leaf coordinates x1..x{2s} followed by n fiber
coordinates y1..y{n}.  Variables are addressed by a single 0-based index
into that combined order, and the split leaf/fiber is fixed for the
lifetime of every object built over the chart.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UsageError


@dataclass(frozen=True)
class ChartSpec:
    """Half-dimension ``s`` of the leaf chart and fiber rank ``n``."""

    s: int
    n: int

    def __post_init__(self):
        if not isinstance(self.s, int) or isinstance(self.s, bool) or self.s < 1:
            raise UsageError(f"s must be a positive integer, got {self.s!r}")
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise UsageError(f"n must be a positive integer, got {self.n!r}")

    @property
    def leaf_dim(self) -> int:
        return 2 * self.s

    @property
    def dim(self) -> int:
        return 2 * self.s + self.n

    def leaf_indices(self) -> range:
        return range(self.leaf_dim)

    def fiber_indices(self) -> range:
        return range(self.leaf_dim, self.dim)

    def is_leaf(self, index: int) -> bool:
        return 0 <= index < self.leaf_dim

    def is_fiber(self, index: int) -> bool:
        return self.leaf_dim <= index < self.dim

    def check_index(self, index: int) -> int:
        if not isinstance(index, int) or not 0 <= index < self.dim:
            raise UsageError(f"variable index {index!r} out of range for {self}")
        return index

    def var_name(self, index: int) -> str:
        self.check_index(index)
        if index < self.leaf_dim:
            return f"x{index + 1}"
        return f"y{index - self.leaf_dim + 1}"

    def var_index(self, name: str) -> int:
        kind, _, digits = name[:1], name, name[1:]
        if kind not in ("x", "y") or not digits.isdigit():
            raise UsageError(f"unknown variable {name!r} on {self}")
        pos = int(digits)
        if kind == "x":
            if not 1 <= pos <= self.leaf_dim:
                raise UsageError(f"leaf variable {name!r} out of range on {self}")
            return pos - 1
        if not 1 <= pos <= self.n:
            raise UsageError(f"fiber variable {name!r} out of range on {self}")
        return self.leaf_dim + pos - 1

    def __str__(self) -> str:
        return f"chart(s={self.s}, n={self.n})"
