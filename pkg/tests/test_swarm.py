import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forage.config import ScenarioConfig
from forage.graph import optimal_path_vertices
from forage.kernels import Dynamics, reward_diagonal, weight_step
from forage.meanfield import init_mean_field, mf_step, trajectory
from forage.scenario import build_scenario, lattice_fixture
from forage.swarm import (
    SwarmState,
    init_swarm,
    occupancy,
    run_swarm,
    step_uniforms,
    swarm_step,
)


def test_init_single_agent(strip5):
    s = init_swarm(strip5, 1, seed=3)
    q = occupancy(s, strip5.dim)
    assert q[strip5.s1] == 1.0 and q.sum() == 1.0
    assert not s.w.any()


def test_init_600_agents(strip5):
    q = occupancy(init_swarm(strip5, 600, seed=0), strip5.dim)
    assert q[strip5.s1] == 1.0


def test_init_rng_state_is_seed_determined(strip5):
    assert init_swarm(strip5, 5, 11).rng_state == init_swarm(strip5, 5, 11).rng_state
    assert init_swarm(strip5, 5, 11).rng_state != init_swarm(strip5, 5, 12).rng_state
    with pytest.raises(ValueError):
        init_swarm(strip5, 0, 0)


def test_occupancy_counts(strip5):
    s = SwarmState(0, np.array([1, 1, 2, 3]), np.zeros(strip5.dim), 0)
    q = occupancy(s, strip5.dim)
    assert (q[1], q[2], q[3]) == (0.5, 0.25, 0.25)
    assert q.sum() == 1.0


def test_uniforms_are_prefix_stable():
    # agent a always gets the a-th draw of block (seed, t)
    assert np.array_equal(step_uniforms(4, 9, 10), step_uniforms(4, 9, 1000)[:10])
    assert not np.array_equal(step_uniforms(4, 9, 10), step_uniforms(4, 10, 10))
    assert not np.array_equal(step_uniforms(4, 9, 10), step_uniforms(5, 9, 10))


def test_single_agent_moves_uniformly_under_pure_exploration(strip5):
    # one agent at S1, repeated independent seeded steps
    p = Dynamics(eps=1.0)
    nbrs = strip5.base.neighbors[strip5.s_vertex]
    draws = 100_000
    landing = np.empty(draws, dtype=np.int64)
    w = np.zeros(strip5.dim)
    start = np.array([strip5.s1])
    for t in range(draws):
        landing[t] = swarm_step(strip5, SwarmState(t, start, w, 17), p).positions[0]
    assert set(np.unique(landing)) == set(nbrs)
    prob = 1 / len(nbrs)
    sigma = np.sqrt(draws * prob * (1 - prob))
    for v in nbrs:
        assert abs((landing == v).sum() - draws * prob) <= 3 * sigma


def test_agents_land_only_on_neighbors(lattice3, table1):
    s = init_swarm(lattice3, 500, seed=1)
    s1 = swarm_step(lattice3, s, table1)
    landed = set(np.unique(s1.positions))
    assert landed <= set(lattice3.base.neighbors[lattice3.s_vertex])


def test_shared_vertex_reinforces_once(strip5, table1):
    w = np.zeros(strip5.dim)
    one = swarm_step(strip5, SwarmState(0, np.array([2]), w, 0), table1)
    two = swarm_step(strip5, SwarmState(0, np.array([2, 2]), w, 0), table1)
    assert np.array_equal(one.w, two.w)
    occ = np.zeros(strip5.dim)
    occ[2] = 1
    assert np.array_equal(one.w, weight_step(w, occ, reward_diagonal(strip5, w, table1.r, table1.lam), table1.rho))


def test_runs_are_reproducible(lattice3, table1):
    a = run_swarm(lattice3, table1, 40, 300, seed=5, stride=10)
    b = run_swarm(lattice3, table1, 40, 300, seed=5, stride=10)
    assert a.times == b.times == list(range(0, 301, 10))
    assert all(np.array_equal(x, y) for x, y in zip(a.occupancy, b.occupancy))
    assert all(np.array_equal(x, y) for x, y in zip(a.weights, b.weights))
    c = run_swarm(lattice3, table1, 40, 300, seed=6, stride=10)
    assert any(not np.array_equal(x, y) for x, y in zip(a.occupancy, c.occupancy))


def test_snapshot_times(strip5, table1):
    tr = run_swarm(strip5, table1, 3, 7, seed=0, stride=3)
    assert tr.times == [0, 3, 6, 7] and tr.final.t == 7
    tr = run_swarm(strip5, table1, 3, 7, seed=0, times=[2], keep_weights=False)
    assert tr.times == [2, 7] and tr.weights == []
    with pytest.raises(ValueError):
        run_swarm(strip5, table1, 3, 0, seed=0)


def test_agent_fuzz_never_on_removed_and_conserved(lattice3):
    # 2000 agents x 500 steps = 10^6 agent-steps
    for eps in (0.1, 1.0):
        p = Dynamics(eps=eps)
        s = init_swarm(lattice3, 2000, seed=99)
        removed = list(lattice3.removed)
        bound = (1 + p.r) / (1 - p.lam)
        for _ in range(250):
            s = swarm_step(lattice3, s, p)
            counts = s.counts(lattice3.dim)
            assert counts.sum() == 2000
            assert not counts[removed].any()
            assert s.w.max() <= bound


@given(st.integers(0, 2**31), st.sampled_from([0.05, 0.5, 1.0]))
@settings(max_examples=10, deadline=None)
def test_occupancy_is_a_probability_vector(seed, eps):
    dg = lattice_fixture(3, 4)
    tr = run_swarm(dg, Dynamics(eps=eps), 7, 60, seed=seed, stride=1)
    for q in tr.occupancy:
        assert q.sum() == pytest.approx(1.0, abs=1e-15)
        assert np.all(q * 7 == np.round(q * 7))


def test_large_swarm_tracks_mean_field(strip5, table1):
    y = trajectory(strip5, table1, 50)
    tr = run_swarm(strip5, table1, 100_000, 50, seed=0, stride=1)
    err = max(np.abs(q - y[t]).max() for t, q in zip(tr.times, tr.occupancy))
    assert err < 0.01


def test_finite_swarm_gathers_later_than_mean_field(table1):
    dg = build_scenario(ScenarioConfig(rows=20, cols=20, s_cell=(3, 3), t_cell=(16, 16)))
    _, on_path, _ = optimal_path_vertices(dg.base, dg.s_vertex, dg.t_vertex)
    idx = sorted(on_path) + [dg.V + v for v in on_path]
    horizon = 600

    def first_above_half(masses):
        hits = [t for t, m in enumerate(masses, start=1) if m > 0.5]
        return hits[0] if hits else horizon + 1

    mf, mf_mass = init_mean_field(dg), []
    for _ in range(horizon):
        mf = mf_step(dg, mf, table1)
        mf_mass.append(mf.y[idx].sum())
    tr = run_swarm(dg, table1, 600, horizon, seed=0, stride=1, keep_weights=False)
    sw_mass = [q[idx].sum() for q in tr.occupancy[1:]]
    assert first_above_half(mf_mass) < first_above_half(sw_mass)
