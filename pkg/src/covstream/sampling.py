"""Constraint sub-sampling and the empirical check of its guarantee.

Sampling keeps each demand b_j with probability p and zeroes it otherwise,
which is equivalent to dropping the constraint.  At rate p = 4 ln(n) / alpha
the sampled optimum plus the instance cost stays above opt / (8 alpha) with
probability at least 3/4; `verify_sampling_lemma` measures that frequency
with an exact oracle per trial.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .instances import CoveringInstance
from .oracle import DEFAULT_COLUMN_LIMIT, cost_of_instance, exact_opt
from .rng import as_generator, spawn


def sampling_rate(n: int, alpha: float, clamp: bool = False) -> float:
    """4 ln(n) / alpha, with n below 2 treated as 2 so the rate never hits 0."""
    p = 4.0 * math.log(max(n, 2)) / alpha
    return min(1.0, p) if clamp else p


@dataclass
class SamplingOutcome:
    """One sub-sampling trial, with the quantities the guarantee speaks about."""

    sampled_rows: tuple[int, ...]
    opt_sampled: int | float
    cost_full: int | float
    opt_full: int | float
    alpha: float

    @property
    def event_held(self) -> bool:
        return self.opt_sampled + self.cost_full >= self.opt_full / (8 * self.alpha)


def sample_constraints(inst: CoveringInstance, p: float, seed) -> CoveringInstance:
    """Keep each row's demand independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    rng = as_generator(seed)
    keep = rng.random(inst.n) < p
    new_b = tuple(bj if keep[j] else 0 for j, bj in enumerate(inst.b))
    return inst.with_demands(new_b)


def sampling_trials(inst: CoveringInstance, alpha: float, trials: int, seed,
                    limit: int = DEFAULT_COLUMN_LIMIT):
    """Yield one SamplingOutcome per independent trial at p = 4 ln(n) / alpha."""
    p = sampling_rate(inst.n, alpha)
    if p > 1.0:
        raise ValueError(
            f"sampling rate 4 ln({inst.n})/{alpha} = {p:.3f} exceeds 1; "
            "increase alpha")
    if alpha < 32 * math.log(max(inst.n, 2)):
        warnings.warn("alpha is below 32 ln(n); the 3/4 guarantee is not promised",
                      stacklevel=2)
    opt_full, _ = exact_opt(inst, limit)
    cost_full = cost_of_instance(inst)
    for t in range(trials):
        sub = sample_constraints(inst, p, spawn(seed, "lemma-trial", t))
        opt_sampled, _ = exact_opt(sub, limit)
        kept = tuple(j for j in range(inst.n) if sub.b[j] > 0)
        yield SamplingOutcome(kept, opt_sampled, cost_full, opt_full, alpha)


def verify_sampling_lemma(inst: CoveringInstance, alpha: float, trials: int,
                          seed, limit: int = DEFAULT_COLUMN_LIMIT) -> float:
    """Fraction of trials on which the sampled-optimum guarantee held."""
    held = sum(1 for out in sampling_trials(inst, alpha, trials, seed, limit)
               if out.event_held)
    return held / trials if trials else 1.0
