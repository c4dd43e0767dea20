"""Exact offline ground truth: optimal values, per-constraint costs, and the
one-pass dynamic program for the instance cost.

Everything here is desk-scale machinery: branch and bound with a configurable
column limit, plus a bitmask fast path for set-cover-shaped instances
(all demands <= 1).  Oracle calls are pure functions and safe to run
concurrently on shared instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .instances import (Assignment, ColumnEvent, CoveringInstance, SetSystem,
                        VariableKind, set_system_to_ilp)

INF = math.inf

DEFAULT_COLUMN_LIMIT = 24


class OracleLimitError(RuntimeError):
    """The instance exceeds the configured brute-force column limit."""


class InfeasibleError(RuntimeError):
    """No assignment satisfies the demands."""


def exact_opt(inst: CoveringInstance, limit: int = DEFAULT_COLUMN_LIMIT,
              cutoff: int | None = None,
              _force_generic: bool = False) -> tuple[int | float, list[int] | None]:
    """Optimal value and a witness assignment, or (inf, None) if infeasible.

    With `cutoff` set, the search is truncated: the result is exact whenever
    opt <= cutoff, and (inf, None) means only "no solution of value <= cutoff".
    """
    if inst.m > limit:
        raise OracleLimitError(f"{inst.m} columns exceeds the oracle limit {limit}")
    if all(v == 0 for v in inst.b):
        return 0, [0] * inst.m
    if inst.variable_kind is VariableKind.INTEGER:
        return _solve_integer(inst, cutoff)
    if inst.b_max <= 1 and not _force_generic:
        # Any positive coefficient satisfies a unit demand, so set-cover
        # branching applies even to weighted, non-0/1 columns.
        return _solve_setcover(inst, cutoff)
    return _solve_binary(inst, cutoff)


def exact_set_cover(system: SetSystem,
                    limit: int = DEFAULT_COLUMN_LIMIT,
                    cutoff: int | None = None) -> tuple[int | float, list[int] | None]:
    """Minimum cover of [0, n): (size, chosen set indices).

    With weights this is the cheapest cover and the value is its total weight.
    """
    value, x = exact_opt(set_system_to_ilp(system), limit, cutoff)
    if x is None:
        return INF, None
    chosen = [i for i, xi in enumerate(x) if xi]
    return value, chosen


# ---------------------------------------------------------------------------
# branch and bound

def _greedy_cover(needed: int, masks: list[int], weights: list[int]):
    """Cheapest-per-new-row greedy; incumbent only, no optimality claim."""
    covered = 0
    chosen = []
    cost = 0
    while needed & ~covered:
        best_i, best_score = -1, None
        for i, mask in enumerate(masks):
            gain = (mask & needed & ~covered).bit_count()
            if gain == 0:
                continue
            score = (weights[i] / gain, weights[i])
            if best_score is None or score < best_score:
                best_i, best_score = i, score
        if best_i < 0:
            return None, None
        covered |= masks[best_i]
        cost += weights[best_i]
        chosen.append(best_i)
    return cost, chosen


def _solve_setcover(inst: CoveringInstance, cutoff):
    """Weighted set cover by row branching on bitmasks.

    Branch on an uncovered row with the fewest usable columns; children pick
    one covering column each, excluding columns already rejected so no
    solution is enumerated twice.
    """
    n, m = inst.n, inst.m
    needed = 0
    for j in range(n):
        if inst.b[j] > 0:
            needed |= 1 << j
    masks = []
    for col in inst.columns:
        mask = 0
        for row, _ in col:
            mask |= 1 << row
        masks.append(mask)
    weights = list(inst.c)

    # Zero-weight columns are free: take them all up front.
    free = [i for i in range(m) if weights[i] == 0]
    base_covered = 0
    for i in free:
        base_covered |= masks[i]

    all_union = base_covered
    for mask in masks:
        all_union |= mask
    if needed & ~all_union:
        return INF, None

    best_cost = INF if cutoff is None else cutoff + 1
    best_sets: list[int] | None = None
    g_cost, g_sets = _greedy_cover(needed & ~base_covered, masks, weights)
    if g_cost is not None and g_cost < best_cost:
        best_cost, best_sets = g_cost, list(set(free) | set(g_sets))

    candidates_by_row = [[i for i in range(m) if masks[i] >> j & 1 and weights[i] > 0]
                         for j in range(n)]

    def descend(covered: int, cost: int, chosen: list[int], banned: int):
        nonlocal best_cost, best_sets
        missing = needed & ~covered
        if not missing:
            if cost < best_cost:
                best_cost, best_sets = cost, chosen + free
            return
        if cost >= best_cost:
            return
        # cheapest single column still needed for some uncovered row
        floor = 0
        branch_row, branch_cands = -1, None
        r = missing
        while r:
            j = (r & -r).bit_length() - 1
            r &= r - 1
            cands = [i for i in candidates_by_row[j] if not banned >> i & 1]
            if not cands:
                return
            floor = max(floor, min(weights[i] for i in cands))
            if branch_cands is None or len(cands) < len(branch_cands):
                branch_row, branch_cands = j, cands
        if cost + floor >= best_cost:
            return
        new_banned = banned
        for i in sorted(branch_cands, key=lambda i: (weights[i], -masks[i].bit_count())):
            descend(covered | masks[i], cost + weights[i], chosen + [i],
                    new_banned)
            new_banned |= 1 << i

    descend(base_covered, 0, [], 0)
    if best_sets is None or (cutoff is not None and best_cost > cutoff):
        return INF, None
    x = [0] * m
    for i in best_sets:
        x[i] = 1
    return best_cost, x


def _column_gain(col, residual):
    return sum(min(a, residual[row]) for row, a in col if residual[row] > 0)


def _solve_binary(inst: CoveringInstance, cutoff):
    """General demands, binary variables: take/skip search over columns."""
    n, m = inst.n, inst.m
    order = sorted(range(m),
                   key=lambda i: -_column_gain(inst.columns[i], inst.b)
                   / (inst.c[i] + 1e-9) if inst.columns[i] else 0)
    columns = [inst.columns[i] for i in order]
    weights = [inst.c[i] for i in order]

    # suffix_cover[t][j]: coverage of row j available from columns t..m-1
    suffix_cover = [[0] * n for _ in range(m + 1)]
    for t in range(m - 1, -1, -1):
        suffix_cover[t] = suffix_cover[t + 1][:]
        for row, a in columns[t]:
            suffix_cover[t][row] += a

    best_cost = INF if cutoff is None else cutoff + 1
    best_take: list[int] | None = None

    def descend(t: int, residual: list[int], cost: int, taken: list[int]):
        nonlocal best_cost, best_take
        if all(v <= 0 for v in residual):
            if cost < best_cost:
                best_cost, best_take = cost, taken[:]
            return
        if t == m or cost >= best_cost:
            return
        for j in range(n):
            if residual[j] > suffix_cover[t][j]:
                return
        col, w = columns[t], weights[t]
        gain = _column_gain(col, residual)
        if gain > 0:
            new_residual = residual[:]
            for row, a in col:
                new_residual[row] -= a
            taken.append(t)
            descend(t + 1, new_residual, cost + w, taken)
            taken.pop()
        descend(t + 1, residual, cost, taken)

    descend(0, list(inst.b), 0, [])
    if best_take is None or (cutoff is not None and best_cost > cutoff):
        return INF, None
    x = [0] * m
    for t in best_take:
        x[order[t]] = 1
    return best_cost, x


def _solve_integer(inst: CoveringInstance, cutoff):
    """Non-negative integer variables; no optimum needs x_i above b_max."""
    n, m = inst.n, inst.m
    b_max = inst.b_max
    caps = []
    for col in inst.columns:
        useful = max((-(-inst.b[row] // a) for row, a in col if inst.b[row] > 0),
                     default=0)
        caps.append(min(b_max, useful))
    order = sorted(range(m),
                   key=lambda i: -_column_gain(inst.columns[i], inst.b)
                   / (inst.c[i] + 1e-9) if caps[i] else 0)
    columns = [inst.columns[i] for i in order]
    weights = [inst.c[i] for i in order]
    caps = [caps[i] for i in order]

    suffix_cover = [[0] * n for _ in range(m + 1)]
    for t in range(m - 1, -1, -1):
        suffix_cover[t] = suffix_cover[t + 1][:]
        for row, a in columns[t]:
            suffix_cover[t][row] += a * caps[t]

    best_cost = INF if cutoff is None else cutoff + 1
    best_x: list[int] | None = None

    def descend(t: int, residual: list[int], cost: int, counts: list[int]):
        nonlocal best_cost, best_x
        if all(v <= 0 for v in residual):
            if cost < best_cost:
                best_cost, best_x = cost, counts[:]
            return
        if t == m or cost >= best_cost:
            return
        for j in range(n):
            if residual[j] > suffix_cover[t][j]:
                return
        col, w = columns[t], weights[t]
        need = max((-(-residual[row] // a) for row, a in col if residual[row] > 0),
                   default=0)
        top = min(caps[t], need)
        for mult in range(top, -1, -1):
            if w and cost + w * mult >= best_cost:
                continue
            new_residual = residual[:]
            for row, a in col:
                new_residual[row] -= a * mult
            counts.append(mult)
            descend(t + 1, new_residual, cost + w * mult, counts)
            counts.pop()

    descend(0, list(inst.b), 0, [])
    if best_x is None or (cutoff is not None and best_cost > cutoff):
        return INF, None
    x = [0] * m
    for t, mult in enumerate(best_x):
        x[order[t]] = mult
    return best_cost, x


# ---------------------------------------------------------------------------
# constraint costs

def cost_of_constraint(inst: CoveringInstance, j: int) -> int | float:
    """min c.x subject to the single row j; inf if the demand is unreachable."""
    if not 0 <= j < inst.n:
        raise ValueError(f"row {j} out of range [0, {inst.n})")
    demand = inst.b[j]
    if demand == 0:
        return 0
    entries = []  # (coefficient on row j, weight)
    for col, w in zip(inst.columns, inst.c):
        for row, a in col:
            if row == j:
                entries.append((a, w))
                break
    binary = inst.variable_kind is VariableKind.BINARY
    memo: dict[tuple[int, int], int | float] = {}

    def cheapest(t: int, remaining: int) -> int | float:
        if remaining <= 0:
            return 0
        if t == len(entries):
            return INF
        key = (t, remaining)
        if key in memo:
            return memo[key]
        a, w = entries[t]
        skip = cheapest(t + 1, remaining)
        if binary:
            take = w + cheapest(t + 1, remaining - a)
        else:
            take = w + cheapest(t, remaining - a)
        memo[key] = best = min(skip, take)
        return best

    return cheapest(0, demand)


def cost_of_instance(inst: CoveringInstance) -> int | float:
    """max over rows of the single-constraint cost; 0 when there are no rows."""
    return max((cost_of_constraint(inst, j) for j in range(inst.n)), default=0)


# ---------------------------------------------------------------------------
# streaming cost

class CostTable:
    """Per-row minimum-cost-for-coverage arrays, updated one column at a time.

    Row j keeps cost[y] for y in 0..b_j: the cheapest objective that achieves
    coverage y of constraint j using the columns seen so far.  Rows with zero
    demand are not stored.
    """

    def __init__(self, b, variable_kind: VariableKind = VariableKind.BINARY):
        self.b = tuple(int(v) for v in b)
        self.variable_kind = variable_kind
        self.rows: dict[int, list[int | float]] = {
            j: [0] + [INF] * demand
            for j, demand in enumerate(self.b) if demand > 0
        }

    def update(self, event: ColumnEvent) -> None:
        binary = self.variable_kind is VariableKind.BINARY
        w = event.weight
        for row, a in event.column:
            table = self.rows.get(row)
            if table is None:
                continue
            demand = self.b[row]
            if binary:
                ys = range(demand, 0, -1)
            else:
                ys = range(1, demand + 1)
            for y in ys:
                base = 0 if y - a <= 0 else table[y - a]
                if base + w < table[y]:
                    table[y] = base + w

    def row_cost(self, j: int) -> int | float:
        if self.b[j] == 0:
            return 0
        return self.rows[j][self.b[j]]

    def value(self) -> int | float:
        """Cost of the instance seen so far: max over rows, 0 with no demands."""
        return max((table[self.b[j]] for j, table in self.rows.items()), default=0)


def streaming_cost(events, b,
                   variable_kind: VariableKind = VariableKind.BINARY) -> int | float:
    """One-pass instance cost; equals cost_of_instance of the assembled input."""
    table = CostTable(b, variable_kind)
    for event in events:
        table.update(event)
    return table.value()
