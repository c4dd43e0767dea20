import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from covstream.instances import CoveringInstance, SetSystem, VariableKind


def random_instance(rng: np.random.Generator, n_max=8, m_max=10, b_max=3,
                    c_max=7, a_max=3, density=0.45,
                    kind=VariableKind.BINARY) -> CoveringInstance:
    """A random covering ILP; feasibility is not guaranteed."""
    n = int(rng.integers(1, n_max + 1))
    m = int(rng.integers(0, m_max + 1))
    columns = []
    for _ in range(m):
        entries = [(j, int(rng.integers(1, a_max + 1)))
                   for j in range(n) if rng.random() < density]
        columns.append(tuple(entries))
    b = tuple(int(rng.integers(0, b_max + 1)) for _ in range(n))
    c = tuple(int(rng.integers(0, c_max + 1)) for _ in range(m))
    return CoveringInstance(n, tuple(columns), b, c, kind, poly_bound=10**9)


def random_feasible_instance(rng, **kwargs) -> CoveringInstance:
    """Random instance patched so every positive demand is reachable."""
    inst = random_instance(rng, **kwargs)
    if inst.m == 0:
        inst = random_instance(rng, **{**kwargs, "m_max": max(kwargs.get("m_max", 10), 1)})
        while inst.m == 0:
            inst = random_instance(rng, **kwargs)
    kind = inst.variable_kind
    columns = [dict(col) for col in inst.columns]
    for j in range(inst.n):
        if inst.b[j] == 0:
            continue
        reach = sum(a for col in columns for row, a in col.items() if row == j)
        if kind is VariableKind.INTEGER and reach > 0:
            continue  # one positive coefficient suffices with reuse
        while reach < inst.b[j]:
            i = int(rng.integers(inst.m))
            bump = int(rng.integers(1, 3))
            columns[i][j] = columns[i].get(j, 0) + bump
            reach += bump
    cols = tuple(tuple(sorted(col.items())) for col in columns)
    return CoveringInstance(inst.n, cols, inst.b, inst.c, kind, poly_bound=10**9)


def random_set_system(rng, n_max=10, m_max=12, weighted=False,
                      ensure_feasible=True) -> SetSystem:
    n = int(rng.integers(1, n_max + 1))
    m = int(rng.integers(1, m_max + 1))
    return exact_size_set_system(rng, n, m, weighted=weighted,
                                 ensure_feasible=ensure_feasible)


def exact_size_set_system(rng, n, m, weighted=False, density=0.4,
                          ensure_feasible=True) -> SetSystem:
    """A set system over exactly [0, n) with exactly m sets."""
    sets = [set(int(e) for e in np.flatnonzero(rng.random(n) < density))
            for _ in range(m)]
    if ensure_feasible:
        for e in range(n):
            if not any(e in s for s in sets):
                sets[int(rng.integers(m))].add(e)
    weights = tuple(int(rng.integers(1, 8)) for _ in range(m)) if weighted else None
    return SetSystem(n, tuple(frozenset(s) for s in sets), weights)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
