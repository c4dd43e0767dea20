"""Adversarial set-cover instance generators.

Each generator draws a planted instance family designed to be hard for
one-pass streaming algorithms: m uniform small sets plus one large set whose
complement hides the planted structure.  The hidden labels (planted index,
coin, special element, partitions) are returned separately so harness code
can keep them away from the algorithms under test.

All base-2 logarithms in the parameter formulas are rounded up, and the
divisibility requirements this creates are hard preconditions;
`nearest_valid_params` suggests the closest usable tuple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .instances import SetSystem
from .rng import spawn, subseed


def ceil_log2(x: int) -> int:
    if x < 1:
        raise ValueError("x must be positive")
    return (x - 1).bit_length()


@dataclass(frozen=True)
class HardInstance:
    """A generated set system (planted sets plus the final large set T) and
    the hidden metadata describing what was planted."""

    system: SetSystem
    kind: str  # "dapx" | "dest" | "dext" | "ddet"
    meta: dict

    @property
    def t_index(self) -> int:
        """Index of the large set T (always appended last)."""
        return self.system.m - 1


class ParameterError(ValueError):
    pass


def _uniform_subset(rng, n: int, size: int) -> frozenset[int]:
    return frozenset(int(e) for e in rng.choice(n, size=size, replace=False))


# ---------------------------------------------------------------------------
# parameter checks

def dapx_set_size(n: int, alpha: int) -> int:
    return n // (10 * alpha)


def dapx_hidden_size(m: int, alpha: int) -> int:
    return 2 * alpha * ceil_log2(m)


def check_dapx_params(n: int, m: int, alpha: int) -> None:
    if alpha < 1 or m < 2 or n < 1:
        raise ParameterError("need alpha >= 1, m >= 2, n >= 1")
    if n % (10 * alpha) != 0:
        raise ParameterError(f"n = {n} must be divisible by 10*alpha = {10 * alpha}")
    size = dapx_set_size(n, alpha)
    hidden = dapx_hidden_size(m, alpha)
    if hidden >= size:
        raise ParameterError(
            f"hidden-set size 2*alpha*ceil(log2 m) = {hidden} must be smaller "
            f"than the planted set size n/(10*alpha) = {size}")


def check_dest_params(n: int, m: int, alpha: int) -> None:
    if alpha < 1 or m < 2 or n < 1:
        raise ParameterError("need alpha >= 1, m >= 2, n >= 1")
    if n % (5 * alpha) != 0:
        raise ParameterError(f"n = {n} must be divisible by 5*alpha = {5 * alpha}")
    k = n // (5 * alpha)
    block = alpha * ceil_log2(m)
    if k % block != 0:
        raise ParameterError(
            f"the sampled-universe size n/(5*alpha) = {k} must be divisible "
            f"by the block size alpha*ceil(log2 m) = {block}")
    t = k // block
    if t % 2 != 0:
        raise ParameterError(f"the block count {t} must be even")


def check_ddet_params(n: int, m: int, alpha: int) -> None:
    if alpha < 1 or m < 1 or n < 1:
        raise ParameterError("need alpha >= 1, m >= 1, n >= 1")
    if n % (10 * alpha) != 0:
        raise ParameterError(f"n = {n} must be divisible by 10*alpha = {10 * alpha}")
    size = dapx_set_size(n, alpha)
    if size < 1 or size >= n:
        raise ParameterError(f"planted set size {size} must be in [1, n)")
    if math.comb(n, size) <= m:
        raise ParameterError("m must be smaller than the number of candidate sets")


_CHECKS = {
    "dapx": check_dapx_params,
    "dest": check_dest_params,
    "dext": check_dest_params,
    "ddet": check_ddet_params,
}


def nearest_valid_params(kind: str, n: int, m: int, alpha: int) -> tuple[int, int, int]:
    """Closest (n', m, alpha) accepted by the generator, adjusting n only."""
    check = _CHECKS[kind]
    if kind == "dapx":
        step = 10 * alpha
    elif kind in ("dest", "dext"):
        step = 10 * alpha * alpha * ceil_log2(m)
    else:
        step = 10 * alpha
    base = max(1, round(n / step))
    for offset in range(0, 10_000):
        for mult in (base + offset, base - offset):
            if mult < 1:
                continue
            cand = mult * step
            try:
                check(cand, m, alpha)
            except ParameterError:
                continue
            return cand, m, alpha
    raise ParameterError(f"no valid n near {n} for kind {kind}")


# ---------------------------------------------------------------------------
# generators

def gen_dapx(n: int, m: int, alpha: int, seed) -> HardInstance:
    """m uniform planted sets plus T, whose complement E has exactly one
    element outside the planted special set."""
    check_dapx_params(n, m, alpha)
    rng = spawn(seed, "dapx")
    size = dapx_set_size(n, alpha)
    hidden = dapx_hidden_size(m, alpha)
    sets = [_uniform_subset(rng, n, size) for _ in range(m)]
    i_star = int(rng.integers(m))
    special_pool = sorted(set(range(n)) - sets[i_star])
    e_star = int(rng.choice(special_pool))
    inside = rng.choice(sorted(sets[i_star]), size=hidden - 1, replace=False)
    hidden_set = frozenset(int(e) for e in inside) | {e_star}
    t_set = frozenset(range(n)) - hidden_set
    system = SetSystem(n, tuple(sets) + (t_set,))
    return HardInstance(system, "dapx", {
        "i_star": i_star,
        "e_star": e_star,
        "hidden_set": tuple(sorted(hidden_set)),
    })


def _random_partition(rng, n: int, k: int, t: int) -> list[frozenset[int]]:
    """k uniform universe elements split uniformly into t equal blocks."""
    chosen = rng.choice(n, size=k, replace=False)
    rng.shuffle(chosen)
    block = k // t
    return [frozenset(int(e) for e in chosen[i * block:(i + 1) * block])
            for i in range(t)]


def gen_dest(n: int, m: int, alpha: int, seed) -> HardInstance:
    """Partition formulation: each planted set is half the blocks of its own
    random partition; T's complement is one block of the special partition,
    inside the special set when the coin is 0 and outside it when 1."""
    check_dest_params(n, m, alpha)
    rng = spawn(seed, "dest")
    k = n // (5 * alpha)
    block = alpha * ceil_log2(m)
    t = k // block
    partitions = [_random_partition(rng, n, k, t) for _ in range(m)]
    chosen_blocks = [sorted(int(g) for g in rng.choice(t, size=t // 2, replace=False))
                     for _ in range(m)]
    sets = [frozenset().union(*(partitions[i][g] for g in chosen_blocks[i]))
            for i in range(m)]
    theta = int(rng.integers(2))
    i_star = int(rng.integers(m))
    inside = chosen_blocks[i_star]
    outside = [g for g in range(t) if g not in inside]
    pool = inside if theta == 0 else outside
    t_bar = partitions[i_star][int(rng.choice(pool))]
    t_set = frozenset(range(n)) - t_bar
    system = SetSystem(n, tuple(sets) + (t_set,))
    return HardInstance(system, "dest", {
        "theta": theta,
        "i_star": i_star,
        "partitions": tuple(tuple(tuple(sorted(blk)) for blk in p)
                            for p in partitions),
        "chosen_blocks": tuple(tuple(cb) for cb in chosen_blocks),
        "t_bar": tuple(sorted(t_bar)),
    })


def gen_dext(n: int, m: int, alpha: int, seed) -> HardInstance:
    """gen_dest plus an independent fair-coin side label (alice/bob) for each
    of the m + 1 sets, modelling a random split of the stream."""
    base = gen_dest(n, m, alpha, subseed(seed, "dext-instance"))
    rng = spawn(seed, "dext-sides")
    sides = tuple("alice" if rng.integers(2) == 0 else "bob"
                  for _ in range(m + 1))
    meta = dict(base.meta)
    meta["sides"] = sides
    return HardInstance(base.system, "dext", meta)


def gen_ddet(n: int, m: int, alpha: int, seed) -> HardInstance:
    """m pairwise-distinct uniform sets; with a fair coin T's complement is
    one of them, otherwise a fresh set distinct from all of them."""
    check_ddet_params(n, m, alpha)
    rng = spawn(seed, "ddet")
    size = dapx_set_size(n, alpha)
    sets: list[frozenset[int]] = []
    seen = set()
    while len(sets) < m:
        cand = _uniform_subset(rng, n, size)
        if cand not in seen:
            seen.add(cand)
            sets.append(cand)
    theta = int(rng.integers(2))
    if theta == 0:
        i_star = int(rng.integers(m))
        t_bar = sets[i_star]
    else:
        i_star = None
        while True:
            t_bar = _uniform_subset(rng, n, size)
            if t_bar not in seen:
                break
    t_set = frozenset(range(n)) - t_bar
    system = SetSystem(n, tuple(sets) + (t_set,))
    return HardInstance(system, "ddet", {
        "theta": theta,
        "i_star": i_star,
        "t_bar": tuple(sorted(t_bar)),
    })


GENERATORS = {
    "dapx": gen_dapx,
    "dest": gen_dest,
    "dext": gen_dext,
    "ddet": gen_ddet,
}


# ---------------------------------------------------------------------------
# cheap witnesses used by tests and the harness

def dapx_small_cover_witness(instance: HardInstance) -> list[int] | None:
    """A cover of size <= 3 for a dapx draw: T, the special set, and any other
    planted set containing the special element; None when no planted set
    covers it."""
    meta = instance.meta
    sets = instance.system.sets
    e_star, i_star = meta["e_star"], meta["i_star"]
    for i, s in enumerate(sets[:-1]):
        if i != i_star and e_star in s:
            return [i_star, instance.t_index, i]
    return None


def planted_pair_covers(instance: HardInstance) -> bool:
    """Whether the planted set and T together cover the whole universe."""
    i_star = instance.meta.get("i_star")
    if i_star is None:
        return False
    union = instance.system.sets[i_star] | instance.system.sets[instance.t_index]
    return len(union) == instance.system.n
