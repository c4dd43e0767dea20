"""One-pass merge approximation: fold every alpha stream columns into one,
solve the merged problem offline, and expand the answer back through
recorded per-element witnesses.

The set-cover variant keeps, for each element of each merged set, the first
member column that covers it, so the output comes with a checkable
certificate.  The covering-ILP variant groups columns by weight and merges
by coordinate-wise sum, so selecting a merged column models selecting all
of its members.
"""

from __future__ import annotations

from dataclasses import dataclass

from .instances import ColumnEvent, CoveringInstance, SetSystem, VariableKind
from .oracle import DEFAULT_COLUMN_LIMIT, InfeasibleError, exact_opt, exact_set_cover


@dataclass
class CoverCertificate:
    """Chosen set indices plus, per element, the chosen set that covers it."""

    chosen: list[int]
    witness: dict[int, int]


def validate_certificate(system: SetSystem, cert: CoverCertificate) -> bool:
    chosen = set(cert.chosen)
    for e in range(system.n):
        i = cert.witness.get(e)
        if i is None or i not in chosen or e not in system.sets[i]:
            return False
    return True


class _Merge:
    __slots__ = ("covered", "witness")

    def __init__(self):
        self.covered: set[int] = set()
        self.witness: dict[int, int] = {}

    def absorb(self, event: ColumnEvent) -> None:
        for e in event.support:
            if e not in self.witness:
                self.witness[e] = event.index
        self.covered |= event.support


def merge_approx(events, n: int, alpha: int,
                 limit: int = DEFAULT_COLUMN_LIMIT) -> CoverCertificate:
    """Merge every alpha sets, cover offline, expand to original indices.

    The chosen indices form a cover of size at most alpha * opt; alpha = 1
    degenerates to an exact offline solve.
    """
    if alpha < 1:
        raise ValueError("alpha must be a positive integer")
    merges: list[_Merge] = []
    current = _Merge()
    filled = 0
    for event in events:
        current.absorb(event)
        filled += 1
        if filled == alpha:
            merges.append(current)
            current = _Merge()
            filled = 0
    if filled:
        merges.append(current)

    merged_system = SetSystem(n, tuple(frozenset(m.covered) for m in merges))
    size, picked = exact_set_cover(merged_system, limit=limit)
    if picked is None:
        raise InfeasibleError("some element is covered by no set")

    witness: dict[int, int] = {}
    for e in range(n):
        for g in picked:
            if e in merges[g].covered:
                witness[e] = merges[g].witness[e]
                break
    chosen = sorted(set(witness.values()))
    return CoverCertificate(chosen, witness)


def merge_approx_ilp(events, n: int, b, alpha: int,
                     limit: int = DEFAULT_COLUMN_LIMIT) -> list[int]:
    """Weighted covering-ILP variant: per-weight groups, batches of alpha
    merged by coordinate-wise sum; returns a feasible binary assignment of
    value at most alpha * opt.
    """
    if alpha < 1:
        raise ValueError("alpha must be a positive integer")
    b = tuple(int(v) for v in b)
    batches: dict[int, tuple[dict[int, int], list[int]]] = {}
    merged: list[tuple[dict[int, int], int, list[int]]] = []  # (col, weight, members)
    m_seen = 0

    def flush(weight: int) -> None:
        col, members = batches.pop(weight)
        merged.append((col, weight * len(members), members))

    for event in events:
        m_seen = max(m_seen, event.index + 1)
        col, members = batches.setdefault(event.weight, ({}, []))
        for row, a in event.column:
            col[row] = col.get(row, 0) + a
        members.append(event.index)
        if len(members) == alpha:
            flush(event.weight)
    for weight in list(batches):
        flush(weight)

    inst = CoveringInstance(
        n,
        tuple(tuple(sorted(col.items())) for col, _, _ in merged),
        b,
        tuple(w for _, w, _ in merged),
        VariableKind.BINARY,
        poly_bound=2**63)  # derived data; the advisory bound is for raw input
    value, picked = exact_opt(inst, limit=limit)
    if picked is None:
        raise InfeasibleError("demands cannot be met by any column subset")

    x = [0] * m_seen
    for g, take in enumerate(picked):
        if take:
            for i in merged[g][2]:
                x[i] = 1
    return x
