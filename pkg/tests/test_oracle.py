"""Brute-force finite-volume checks: trees, measures, consistency, enumeration."""

import itertools
import math

import numpy as np
import pytest

from ivtree import (
    TransferWeights,
    UVector,
    build_tree,
    couplings,
    field_form_from_pqrs,
    field_from_scalar,
    find_positive_fixed_points,
    finite_measure,
    hamiltonian,
    kolmogorov_consistency_check,
    verify_recurrence_by_enumeration,
)
from ivtree.oracle import (
    _spin_table,
    boundary_term,
    branch_sum,
    enumerated_semi_ball_sum,
    log_partition_factorized,
)

from conftest import NEGATIVE_T_POINT, THREE_ROOT_POINT, assert_close


def spin_index(cfg: np.ndarray) -> int:
    """Row index of a configuration in the enumeration table."""
    n = cfg.size
    return int(sum((1 << (n - 1 - v)) for v in range(n) if cfg[v] == -1))


# -------------------------------------------------------------------- trees


def test_tree_sizes():
    assert build_tree(1).n_vertices == 4
    assert build_tree(2).n_vertices == 13
    assert build_tree(3).n_vertices == 40


def test_tree_depth_validation():
    for bad in (0, 5, -1):
        with pytest.raises(ValueError):
            build_tree(bad)
    build_tree(4)  # upper edge is allowed


def test_levels_and_successors():
    t = build_tree(2)
    assert list(t.level(0)) == [0]
    assert list(t.level(1)) == [1, 2, 3]
    assert list(t.level(2)) == list(range(4, 13))
    assert t.successors(0) == (1, 2, 3)
    assert t.successors(2) == (7, 8, 9)
    for x in range(1, 13):
        assert x in t.successors(t.parent(x))


def test_pair_inventories():
    t2 = build_tree(2)
    ex, ey = t2.edge_pairs()
    assert ex.size == 12  # 3 + 9 edges inside V_2
    px, pz = t2.prolonged_pairs()
    assert px.size == 9   # root to each level-2 vertex
    assert np.all(px == 0)
    t3 = build_tree(3)
    assert t3.edge_pairs()[0].size == 39
    assert t3.prolonged_pairs()[0].size == 36  # 9 from the root + 27 below
    # every prolonged pair is grandparent-grandchild along successor chains
    px3, pz3 = t3.prolonged_pairs()
    for x, z in zip(px3, pz3):
        assert t3.parent(t3.parent(int(z))) == int(x)


def test_depth_one_tree_has_no_prolonged_pairs():
    px, pz = build_tree(1).prolonged_pairs()
    assert px.size == 0
    assert hamiltonian(np.ones(4), build_tree(1), couplings(0.0, 5.0, 1.0)) == 0.0


# -------------------------------------------------------------- Hamiltonian


def test_all_plus_energy_counts_the_pairs():
    J, Jp, T = THREE_ROOT_POINT
    t = build_tree(2)
    assert_close(
        hamiltonian(np.ones(13), t, couplings(J, Jp, T)),
        -12.0 * J - 9.0 * Jp, 1e-13, "all-plus energy",
    )


def test_zero_couplings_zero_energy():
    t = build_tree(2)
    rng = np.random.default_rng(3)
    for _ in range(5):
        cfg = rng.choice([-1, 1], size=13)
        assert hamiltonian(cfg, t, couplings(0.0, 0.0, 1.0)) == 0.0


def test_root_flip_energy_difference():
    J, Jp = 1.3, 0.7
    p = couplings(J, Jp, 1.0)
    t = build_tree(2)
    base = hamiltonian(np.ones(13), t, p)
    flipped = np.ones(13)
    flipped[0] = -1
    # the root sits on 3 edges and all 9 prolonged pairs
    assert_close(hamiltonian(flipped, t, p) - base, 2.0 * J * 3.0 + 2.0 * Jp * 9.0,
                 1e-13, "root flip")


def test_hamiltonian_rejects_wrong_size():
    with pytest.raises(ValueError):
        hamiltonian(np.ones(5), build_tree(2), couplings(1.0, 1.0, 1.0))


# ----------------------------------------------------------------- measures


def test_measure_normalization_depths_one_and_two(three_root_params):
    h = field_from_scalar(2.0)
    for depth in (1, 2):
        m = finite_measure(build_tree(depth), three_root_params, h)
        p = m.probabilities()
        assert np.all(p >= 0.0)
        assert abs(p.sum() - 1.0) < 1e-12


def test_zero_couplings_uniform_measure():
    p = couplings(0.0, 0.0, 1.0)
    h = field_form_from_pqrs(0.0, 0.0, 0.0, 0.0)
    m = finite_measure(build_tree(2), p, h)
    assert_close(m.probabilities(), np.full(2**13, 2.0**-13), 1e-12, "uniform")
    assert kolmogorov_consistency_check(p, h) < 1e-15


def test_gibbs_ratio_between_single_flip_pairs(three_root_params):
    """P(c1)/P(c2) = exp(-beta dH + d(boundary)) for any single-spin flip."""
    t = build_tree(2)
    h = field_from_scalar(0.7)
    m = finite_measure(t, three_root_params, h)
    probs = m.probabilities()
    rng = np.random.default_rng(11)
    for _ in range(20):
        cfg = rng.choice([-1, 1], size=13)
        flip = cfg.copy()
        v = rng.integers(0, 13)
        flip[v] = -flip[v]
        lhs = probs[spin_index(cfg)] / probs[spin_index(flip)]
        dH = hamiltonian(cfg, t, three_root_params) - hamiltonian(flip, t, three_root_params)
        dB = boundary_term(cfg, t, h) - boundary_term(flip, t, h)
        rhs = math.exp(-three_root_params.beta * dH + dB)
        assert_close(lhs, rhs, 1e-11, "single-flip ratio")


def test_depth_two_partition_function_factorizes(three_root_params):
    h = field_from_scalar(1.8)
    m = finite_measure(build_tree(2), three_root_params, h)
    assert abs(log_partition_factorized(2, three_root_params, h) - m.log_Z) < 1e-12


def test_depth_three_partition_function_against_semi_enumeration():
    """Independent route to log Z_3: enumerate the 2^13 inner spins exactly
    and close each of the nine outermost balls with its leaf sum."""
    for point, x in ((THREE_ROOT_POINT, 7.93), (NEGATIVE_T_POINT, 3.0)):
        p = couplings(*point)
        h = field_from_scalar(x)
        t2 = build_tree(2)
        spins = _spin_table(13)
        ex, ey = t2.edge_pairs()
        px, pz = t2.prolonged_pairs()
        energy = (-p.J * (spins[:, ex] * spins[:, ey]).sum(axis=1)
                  - p.Jp * (spins[:, px] * spins[:, pz]).sum(axis=1))
        logw = -p.beta * energy
        lookup = np.array([[math.log(branch_sum(i, j, p, h)) for j in (1, -1)]
                           for i in (1, -1)])
        for x_v in range(4, 13):
            par = (x_v - 1) // 3
            i_idx = ((1.0 - spins[:, par]) / 2.0).astype(int)
            j_idx = ((1.0 - spins[:, x_v]) / 2.0).astype(int)
            logw = logw + lookup[i_idx, j_idx]
        m = logw.max()
        semi = m + math.log(np.exp(logw - m).sum())
        assert abs(semi - log_partition_factorized(3, p, h)) < 1e-11


def test_depth_three_measure_is_implicit(three_root_params):
    h = field_from_scalar(2.0)
    m = finite_measure(build_tree(3), three_root_params, h)
    assert m.log_weights is None
    with pytest.raises(ValueError):
        m.probabilities()
    cfg = np.ones(40)
    assert 0.0 < m.probability(cfg) < 1.0


def test_finite_measure_depth_guard(three_root_params):
    with pytest.raises(ValueError):
        finite_measure(build_tree(4), three_root_params, field_from_scalar(1.0))


# -------------------------------------------------------------- consistency


def test_consistency_at_every_fixed_point(three_root_params):
    from ivtree import derive_weights

    w = derive_weights(three_root_params)
    for root in find_positive_fixed_points(w).roots:
        res = kolmogorov_consistency_check(three_root_params, field_from_scalar(root))
        assert res < 1e-10


def test_consistency_fails_for_generic_fields(three_root_params):
    rng = np.random.default_rng(17)
    from ivtree import BoundaryFieldVector

    for _ in range(3):
        h = BoundaryFieldVector(h=tuple(rng.uniform(-1.0, 1.0, 8)))
        assert kolmogorov_consistency_check(three_root_params, h) > 1e-3
    # the four-parameter family alone is not sufficient either
    h = field_form_from_pqrs(0.3, -0.2, 0.15, 0.4)
    assert kolmogorov_consistency_check(three_root_params, h) > 1e-3


# -------------------------------------------------------------- enumeration


def test_enumerated_sum_trivial_weights():
    w = TransferWeights.from_cd(1.0, 1.0)
    u = UVector.from_array(np.ones(8))
    assert enumerated_semi_ball_sum(1, (1, 1, 1), u, w) == 512.0


def test_enumerated_sum_is_permutation_invariant():
    rng = np.random.default_rng(23)
    w = TransferWeights.from_cd(0.7, 2.3)
    u = UVector.from_array(np.exp(rng.uniform(-1, 1, 8)))
    for jvec in itertools.permutations((1, 1, -1)):
        assert_close(
            enumerated_semi_ball_sum(-1, jvec, u, w),
            enumerated_semi_ball_sum(-1, (1, 1, -1), u, w),
            1e-14, "branch permutation",
        )


def test_recurrence_matches_enumeration_for_random_draws():
    rng = np.random.default_rng(29)
    for _ in range(25):
        w = TransferWeights.from_cd(rng.uniform(0.2, 5.0), rng.uniform(0.2, 5.0))
        u = UVector.from_array(np.exp(rng.uniform(-2, 2, 8)))
        assert np.all(verify_recurrence_by_enumeration(u, w) < 1e-12)


def test_branch_sum_equals_the_closed_bracket(three_root_params):
    from ivtree import derive_weights
    from ivtree.recurrence import log_branch_bracket

    w = derive_weights(three_root_params)
    h = field_from_scalar(1.3)
    log_u = np.log(h.u)
    for i in (1, -1):
        for j in (1, -1):
            assert_close(
                math.log(branch_sum(i, j, three_root_params, h)),
                log_branch_bracket(i, j, log_u, w),
                1e-12, f"bracket ({i},{j})",
            )
