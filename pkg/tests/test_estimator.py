import math

import numpy as np
import pytest

from covstream.estimator import (EstimateReport, SpaceGuardError, TesterState,
                                 Verdict, binarize, ceil_log2,
                                 default_nnz_guard, estimate_opt,
                                 estimate_opt_unknown_cmax, guess_ladder,
                                 logical_space_bits, multicover_estimate,
                                 space_breakdown, tester_finalize, tester_init,
                                 tester_process, tester_subinstance)
from covstream.instances import (ColumnEvent, CoveringInstance, SetSystem,
                                 VariableKind, set_system_to_ilp)
from covstream.oracle import INF, InfeasibleError, exact_opt
from covstream.rng import spawn

from conftest import random_feasible_instance, random_set_system


def _unit_events(sets, n):
    return set_system_to_ilp(SetSystem(n, tuple(frozenset(s) for s in sets))).events()


# ---------------------------------------------------------------------------
# tester state machine

def test_init_clamps_rate_to_full_projection():
    state = tester_init(10, 4, [1] * 10, k=2, alpha=1, seed=0)
    assert state.sampled_rows == frozenset(range(10))


def test_init_with_huge_alpha_can_be_empty():
    state = tester_init(6, 2, [1] * 6, k=2, alpha=10_000, seed=3)
    assert state.sampled_rows <= frozenset(range(6))
    assert state.b_res == [1] * 6


def test_init_same_seed_same_rows():
    a = tester_init(40, 5, [1] * 40, k=2, alpha=30, seed=11)
    b = tester_init(40, 5, [1] * 40, k=8, alpha=30, seed=11)
    assert a.sampled_rows == b.sampled_rows


def test_process_skips_heavy_columns():
    state = tester_init(4, 2, [1] * 4, k=3, alpha=1, seed=0)
    before = (list(state.b_res), dict(state.tilde_c))
    assert tester_process(state, ColumnEvent(0, ((0, 1),), weight=4)) == "skipped"
    assert (state.b_res, state.tilde_c) == before


def test_process_retains_empty_projection_when_residual_spent():
    state = tester_init(3, 2, [1] * 3, k=5, alpha=1, seed=0)
    state.b_res = [0, 0, 0]
    assert tester_process(state, ColumnEvent(0, ((0, 1), (1, 1)), 1)) == "retained"
    assert state.tilde_a[0] == ()
    assert state.tilde_c[0] == 1


def test_process_prunes_at_exact_threshold():
    # threshold: ||u||_1 * alpha >= n * b_max, met with equality
    n, alpha = 6, 2
    state = tester_init(n, 2, [1] * n, k=5, alpha=alpha, seed=0)
    column = tuple((j, 1) for j in range(3))  # ||u||_1 = 3, 3*2 >= 6
    assert tester_process(state, ColumnEvent(0, column, 1)) == "pruned"
    assert state.b_res == [0, 0, 0, 1, 1, 1]
    assert state.pruned_count == 1 and state.pruned_weight_total == 1


def test_retained_columns_store_residual_clipped_values():
    # n*b_max = 8, clipped norm = min(2,3)+min(1,3)+min(0,3) = 3 < 8: retained,
    # and the stored entries are the clipped values, not the raw coefficients
    state = tester_init(4, 2, [2, 1, 0, 2], k=9, alpha=1, seed=0)
    outcome = tester_process(state, ColumnEvent(0, ((0, 3), (1, 3), (2, 3)), 2))
    assert outcome == "retained"
    assert state.sampled_rows == frozenset(range(4))  # rate clamped to 1
    assert state.tilde_a[0] == ((0, 2), (1, 1))
    assert state.b_res == [2, 1, 0, 2]


def test_prune_bound_respected_on_every_prefix():
    for seed in range(40):
        rng = np.random.default_rng(seed)
        inst = random_feasible_instance(rng, n_max=8, m_max=12, b_max=3, c_max=4)
        alpha = int(rng.integers(1, 5))
        state = tester_init(inst.n, inst.m, inst.b, k=max(inst.c_max, 1),
                            alpha=alpha, seed=seed)
        for event in inst.events():
            tester_process(state, event)
            assert state.pruned_count <= alpha


def test_pruned_weight_total_bounded_by_alpha_k(rng):
    for seed in range(30):
        inst = random_feasible_instance(np.random.default_rng(seed),
                                        n_max=6, m_max=10, b_max=2, c_max=5)
        alpha, k = 2, 4
        state = tester_init(inst.n, inst.m, inst.b, k=k, alpha=alpha, seed=seed)
        for event in inst.events():
            tester_process(state, event)
        assert state.pruned_weight_total <= alpha * k


def test_finalize_empty_sample_accepts():
    state = tester_init(6, 2, [1] * 6, k=1, alpha=10_000, seed=8)
    assert state.sampled_rows == frozenset()  # rate ~7e-4, fixed seed drew none
    assert tester_finalize(state) is Verdict.ACCEPT


def test_completeness_every_guess_at_least_opt_accepts():
    for seed in range(40):
        rng = np.random.default_rng(seed)
        inst = random_feasible_instance(rng, n_max=6, m_max=8, b_max=2, c_max=5)
        opt, _ = exact_opt(inst)
        if opt == INF or opt == 0:
            continue
        alpha = int(rng.integers(1, 4))
        for k in guess_ladder(inst.m, max(inst.c_max, 1)):
            if k < opt:
                continue
            for trial in range(3):
                state = tester_init(inst.n, inst.m, inst.b, k, alpha,
                                    seed=spawn(seed, "t", trial))
                for event in inst.events():
                    tester_process(state, event)
                assert tester_finalize(state) is Verdict.ACCEPT


def test_projection_equivalence_of_stored_variants():
    for seed in range(40):
        rng = np.random.default_rng(seed)
        inst = random_feasible_instance(rng, n_max=6, m_max=8, b_max=2, c_max=4)
        alpha = int(rng.integers(1, 4))
        k = max(1, inst.c_max)
        clipped = tester_init(inst.n, inst.m, inst.b, k, alpha, seed=seed)
        full = tester_init(inst.n, inst.m, inst.b, k, alpha, seed=seed,
                           store_full_projection=True)
        for event in inst.events():
            tester_process(clipped, event)
            tester_process(full, event)
        assert exact_opt(tester_subinstance(clipped))[0] \
            == exact_opt(tester_subinstance(full))[0]


def test_clone_is_a_pure_snapshot():
    state = tester_init(4, 3, [1] * 4, k=2, alpha=1, seed=0)
    tester_process(state, ColumnEvent(0, ((0, 1),), 1))
    twin = state.clone(k=8)
    tester_process(twin, ColumnEvent(1, ((1, 1),), 1))
    assert 1 not in state.tilde_a
    assert twin.k == 8 and state.k == 2
    assert twin.tilde_a[0] == state.tilde_a[0]


def test_space_guard_trips():
    state = tester_init(8, 2, [1] * 8, k=2, alpha=1, seed=0, nnz_guard=2)
    with pytest.raises(SpaceGuardError):
        tester_process(state, ColumnEvent(0, ((0, 1), (1, 1)), 1))
    assert default_nnz_guard(2048, 1, 16) == 8 * 2048 // 256


# ---------------------------------------------------------------------------
# space accounting

def test_space_bits_fresh_state():
    state = tester_init(8, 3, [1] * 8, k=1, alpha=1, seed=0)
    parts = space_breakdown(state)
    assert parts["b_res"] == 8  # one bit per unit demand
    assert parts["tilde_a"] == 0
    assert parts["tilde_c"] == 0  # no weights seen yet
    assert logical_space_bits(state) == sum(parts.values())


def test_space_bits_count_stored_nonzeros():
    state = tester_init(8, 2, [2] * 8, k=4, alpha=1, seed=0)
    tester_process(state, ColumnEvent(0, ((0, 2), (3, 1)), 3))
    parts = space_breakdown(state)
    assert parts["tilde_a"] == 2 * (3 + 2)  # two entries, 3 row bits + 2 value bits
    assert parts["tilde_c"] == 2 * 2        # m = 2 weights, width of 3


# ---------------------------------------------------------------------------
# ladders and estimation

def test_guess_ladder_covers_any_feasible_opt():
    ladder = guess_ladder(6, 5)
    assert ladder == sorted(ladder)
    assert ladder[-1] >= 6 * 5
    assert guess_ladder(1, 1) == [1]


def test_estimate_degenerate_single_set():
    events = _unit_events([range(8)], 8)
    for alpha in (1, 2):
        rep = estimate_opt(events, 8, [1] * 8, alpha, c_max=1, seed=0)
        assert rep.cost_value == 1
        assert rep.k_star in (1, 2)
        assert rep.estimate <= 64 * alpha


def test_estimate_zero_demand():
    rep = estimate_opt([], 4, [0] * 4, alpha=2, c_max=1, seed=0)
    assert rep.estimate == 0 and rep.k_star is None


def test_estimate_infeasible():
    events = _unit_events([{0}], 2)
    with pytest.raises(InfeasibleError):
        estimate_opt(events, 2, [1, 1], alpha=1, c_max=1, seed=0)
    with pytest.raises(InfeasibleError):
        estimate_opt_unknown_cmax(events, 2, [1, 1], alpha=1, seed=0)


def test_estimate_ceiling_on_random_instances():
    for seed in range(60):
        rng = np.random.default_rng(seed)
        inst = random_feasible_instance(rng, n_max=6, m_max=8, b_max=2, c_max=5)
        opt, _ = exact_opt(inst)
        alpha = int(rng.integers(1, 4))
        rep = estimate_opt(inst.events(), inst.n, inst.b, alpha, inst.c_max,
                           seed=seed)
        assert rep.estimate <= 64 * alpha * opt
        assert rep.k_star is None or rep.k_star >= rep.cost_value
        unk = estimate_opt_unknown_cmax(inst.events(), inst.n, inst.b, alpha,
                                        seed=seed)
        assert unk.estimate <= 64 * alpha * opt


def test_unknown_cmax_ladder_matches_known_mode():
    for seed in range(40):
        rng = np.random.default_rng(1000 + seed)
        inst = random_feasible_instance(rng, n_max=6, m_max=8, b_max=2, c_max=5)
        if all(v == 0 for v in inst.b):
            continue
        alpha = int(rng.integers(1, 4))
        known = estimate_opt(inst.events(), inst.n, inst.b, alpha, inst.c_max,
                             seed=seed, boost_copies=1)
        unknown = estimate_opt_unknown_cmax(inst.events(), inst.n, inst.b,
                                            alpha, seed=seed)
        assert known.verdicts == unknown.verdicts


def test_unknown_cmax_fallback_when_nothing_rejected():
    events = _unit_events([range(6)], 6)
    rep = estimate_opt_unknown_cmax(events, 6, [1] * 6, alpha=1, seed=0)
    assert all(v is Verdict.ACCEPT for v in rep.verdicts.values())
    assert rep.estimate == 32 * 1 * min(rep.verdicts)


def test_restart_determinism():
    rng = np.random.default_rng(77)
    inst = random_feasible_instance(rng, n_max=7, m_max=9, b_max=2, c_max=4)
    a = estimate_opt(inst.events(), inst.n, inst.b, 2, inst.c_max, seed=5)
    b = estimate_opt(inst.events(), inst.n, inst.b, 2, inst.c_max, seed=5)
    assert a == b


# ---------------------------------------------------------------------------
# reductions and variants

def test_binarize_identity_at_unit_demand():
    inst = CoveringInstance(2, (((0, 1), (1, 1)),), (1, 1), (3,),
                            VariableKind.INTEGER)
    out = binarize(inst)
    assert out.columns == inst.columns and out.c == inst.c
    assert out.variable_kind is VariableKind.BINARY


def test_binarize_expands_single_column():
    inst = CoveringInstance(1, (((0, 1),),), (3,), (1,), VariableKind.INTEGER)
    out = binarize(inst)
    assert out.columns == (((0, 1),), ((0, 2),))
    assert out.c == (1, 2)
    assert exact_opt(out)[0] == exact_opt(inst)[0] == 3


def test_binarize_preserves_optimum():
    for seed in range(50):
        rng = np.random.default_rng(seed)
        inst = random_feasible_instance(rng, n_max=5, m_max=5, b_max=7, c_max=4,
                                        kind=VariableKind.INTEGER)
        assert exact_opt(binarize(inst))[0] == exact_opt(inst)[0]


def test_binarize_requires_integer_kind(rng):
    inst = random_feasible_instance(rng, n_max=4, m_max=4)
    with pytest.raises(ValueError):
        binarize(inst)


def test_multicover_degenerate():
    events = _unit_events([range(6)], 6)
    rep = multicover_estimate(events, 6, [1] * 6, alpha=2, seed=0)
    assert rep.estimate >= 1
    assert rep.estimate <= 1 + 8 * 2 * (0 + 1)


def test_multicover_prune_counter_and_estimate():
    hold = 0
    runs = 0
    for seed in range(60):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 7))
        m = int(rng.integers(4, 10))
        cols = []
        for _ in range(m):
            support = [j for j in range(n) if rng.random() < 0.6]
            cols.append(tuple((j, 1) for j in support))
        b = tuple(int(rng.integers(0, 3)) for _ in range(n))
        inst = CoveringInstance(n, tuple(cols), b, (1,) * m)
        opt, _ = exact_opt(inst)
        if opt == INF:
            continue
        alpha = int(rng.integers(1, 4))
        rep = multicover_estimate(inst.events(), n, b, alpha, seed=seed)
        assert rep.pruned_count <= alpha * inst.b_max
        runs += 1
        hold += rep.estimate >= opt
    assert runs > 20
    assert hold / runs >= 0.95


def test_multicover_rejects_weights():
    events = [ColumnEvent(0, ((0, 1),), 2)]
    with pytest.raises(ValueError):
        multicover_estimate(events, 1, [1], alpha=1, seed=0)


def test_ceil_log2():
    assert [ceil_log2(x) for x in (1, 2, 3, 4, 63, 64, 65)] == [0, 1, 2, 2, 6, 6, 7]
