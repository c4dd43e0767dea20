"""Domain types for covering integer programs and set systems.

A covering ILP is  min c.x  s.t.  Ax >= b  with non-negative integer data
and variables.  Columns of A are stored sparse and canonical: sorted by
row, duplicate rows summed, zero entries dropped.  Instances are immutable
after construction and safe to share across workers.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence


class VariableKind(Enum):
    BINARY = "binary"
    INTEGER = "integer"


# A sparse column: ((row, coefficient), ...) sorted by row, coefficients > 0.
SparseColumn = tuple[tuple[int, int], ...]

# An assignment is a plain length-m vector of non-negative ints
# (0/1 when the instance has binary variables).
Assignment = Sequence[int]


def canonical_column(entries: Iterable[tuple[int, int]], n: int) -> SparseColumn:
    """Canonicalize raw (row, value) pairs: sum duplicates, drop zeros, sort.

    Rejects negative values and rows outside [0, n).
    """
    acc: dict[int, int] = {}
    for row, value in entries:
        row = int(row)
        value = int(value)
        if not 0 <= row < n:
            raise ValueError(f"row {row} out of range [0, {n})")
        if value < 0:
            raise ValueError(f"negative coefficient {value} in row {row}")
        acc[row] = acc.get(row, 0) + value
    return tuple(sorted((r, v) for r, v in acc.items() if v > 0))


def column_support(column: SparseColumn) -> frozenset[int]:
    return frozenset(row for row, _ in column)


@dataclass(frozen=True)
class CoveringInstance:
    """A covering ILP with n constraints (rows) and m variables (columns)."""

    n: int
    columns: tuple[SparseColumn, ...]
    b: tuple[int, ...]
    c: tuple[int, ...]
    variable_kind: VariableKind = VariableKind.BINARY
    # Bound used only for validation warnings ("entries should be poly(n)"),
    # never for algorithm logic.  None means max(n, 2)**3.
    poly_bound: int | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        object.__setattr__(
            self, "columns",
            tuple(canonical_column(col, self.n) for col in self.columns))
        object.__setattr__(self, "b", tuple(int(v) for v in self.b))
        object.__setattr__(self, "c", tuple(int(v) for v in self.c))
        if len(self.b) != self.n:
            raise ValueError(f"b has length {len(self.b)}, expected {self.n}")
        if len(self.c) != len(self.columns):
            raise ValueError("need one weight per column")
        if any(v < 0 for v in self.b):
            raise ValueError("negative demand")
        if any(v < 0 for v in self.c):
            raise ValueError("negative weight")
        bound = self.poly_bound if self.poly_bound is not None else max(self.n, 2) ** 3
        worst = max(self.a_max, self.b_max, self.c_max)
        if worst > bound:
            warnings.warn(
                f"instance entry {worst} exceeds the declared poly(n) bound {bound}",
                stacklevel=2)

    @property
    def m(self) -> int:
        return len(self.columns)

    @property
    def a_max(self) -> int:
        return max((v for col in self.columns for _, v in col), default=0)

    @property
    def b_max(self) -> int:
        return max(self.b, default=0)

    @property
    def c_max(self) -> int:
        return max(self.c, default=0)

    def events(self) -> list["ColumnEvent"]:
        """The instance as a stream of columns, in storage order."""
        return [ColumnEvent(i, col, w)
                for i, (col, w) in enumerate(zip(self.columns, self.c))]

    def with_demands(self, new_b: Sequence[int]) -> "CoveringInstance":
        """Same columns and weights, different demand vector."""
        return CoveringInstance(self.n, self.columns, tuple(new_b), self.c,
                                self.variable_kind, self.poly_bound)


@dataclass(frozen=True)
class SetSystem:
    """A universe [0, n) and a collection of subsets, optionally weighted."""

    n: int
    sets: tuple[frozenset[int], ...]
    weights: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))
        for i, s in enumerate(self.sets):
            for e in s:
                if not 0 <= e < self.n:
                    raise ValueError(f"set {i}: element {e} out of range [0, {self.n})")
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
            if len(self.weights) != len(self.sets):
                raise ValueError("need one weight per set")
            if any(w <= 0 for w in self.weights):
                raise ValueError("weights must be positive integers")

    @property
    def m(self) -> int:
        return len(self.sets)


@dataclass(frozen=True)
class ColumnEvent:
    """One stream element: a sparse column together with its weight."""

    index: int
    column: SparseColumn
    weight: int

    def __post_init__(self):
        if self.weight < 0:
            raise ValueError("negative weight")
        rows = [r for r, _ in self.column]
        if any(v <= 0 for _, v in self.column) or rows != sorted(set(rows)):
            raise ValueError("column must be canonical (sorted rows, positive values)")

    @property
    def support(self) -> frozenset[int]:
        return column_support(self.column)


def set_system_to_ilp(system: SetSystem) -> CoveringInstance:
    """Encode a set system as a covering ILP: a_{j,i} = 1 iff j in set i, b = 1."""
    columns = tuple(tuple((e, 1) for e in sorted(s)) for s in system.sets)
    weights = system.weights if system.weights is not None else (1,) * system.m
    return CoveringInstance(system.n, columns, (1,) * system.n, weights,
                            VariableKind.BINARY)


def ilp_to_set_system(inst: CoveringInstance) -> SetSystem:
    """Extract the set system of column supports (inverse of set_system_to_ilp)."""
    return SetSystem(inst.n, tuple(column_support(col) for col in inst.columns),
                     inst.c)


def check_feasible(inst: CoveringInstance, x: Assignment) -> bool:
    """True iff (Ax)_j >= b_j for every row j."""
    if len(x) != inst.m:
        raise ValueError(f"assignment has length {len(x)}, expected {inst.m}")
    if any(v < 0 for v in x):
        raise ValueError("assignment entries must be non-negative")
    coverage = [0] * inst.n
    for col, xi in zip(inst.columns, x):
        if xi == 0:
            continue
        for row, a in col:
            coverage[row] += a * xi
    return all(coverage[j] >= inst.b[j] for j in range(inst.n))


def objective_value(inst: CoveringInstance, x: Assignment) -> int:
    """The objective c.x."""
    if len(x) != inst.m:
        raise ValueError(f"assignment has length {len(x)}, expected {inst.m}")
    return sum(w * xi for w, xi in zip(inst.c, x))
