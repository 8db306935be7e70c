import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forage.graph import diameter
from forage.kernels import Dynamics, transition_operator
from forage.meanfield import init_mean_field, mf_step, occupied_indicator, run, trajectory
from forage.oracle import closed_form_w_inf

from oracles import dense_pf
from strategies import doubled_systems


def test_init(lattice3):
    st0 = init_mean_field(lattice3)
    assert st0.t == 0
    assert st0.y.sum() == 1.0 and np.count_nonzero(st0.y) == 1
    assert st0.y[lattice3.idx(1, lattice3.s_vertex)] == 1.0
    assert st0.w.shape == (lattice3.dim,) and not st0.w.any()


def test_init_with_w0_keeps_removed_images_at_zero(lattice3):
    w = init_mean_field(lattice3, w0=2.0).w
    assert np.all(w[lattice3.active] == 2.0)
    assert np.all(w[list(lattice3.removed)] == 0.0)


def test_first_step_spreads_over_neighbors_of_source(lattice3, table1):
    st1 = mf_step(lattice3, init_mean_field(lattice3), table1)
    assert st1.t == 1
    assert st1.y.sum() == pytest.approx(1.0, abs=1e-15)
    assert set(np.flatnonzero(st1.y)) == set(lattice3.base.neighbors[lattice3.s_vertex])


@given(doubled_systems(max_side=4))
@settings(max_examples=15, deadline=None)
def test_pure_exploration_matches_matrix_powers(dg):
    p = Dynamics(eps=1.0)
    Y = trajectory(dg, p, 40)
    P = dense_pf(dg.base, dg.s_vertex, dg.t_vertex, np.zeros(dg.dim), 1.0)
    y = np.zeros(dg.dim)
    y[dg.s1] = 1.0
    for t in range(41):
        assert np.allclose(Y[t], y, rtol=0, atol=1e-13)
        y = P @ y


def test_probability_conserved_for_10k_steps(lattice3, table1):
    Y = trajectory(lattice3, table1, 10_000)
    assert np.abs(Y.sum(axis=1) - 1.0).max() < 1e-12
    assert Y.min() >= 0
    assert np.all(Y[:, list(lattice3.removed)] == 0)


def test_all_active_entries_positive_after_twice_the_diameter(lattice3, table1):
    d_star = diameter(lattice3.base)
    Y = trajectory(lattice3, table1, 2 * d_star + 200)
    assert np.all(Y[2 * d_star + 1 :, lattice3.active] > 0)
    occ = occupied_indicator(Y[-1])
    assert np.array_equal(occ.astype(bool), lattice3.active)


def test_occupied_indicator():
    assert not occupied_indicator(np.zeros(4)).any()
    assert occupied_indicator(np.array([0, 1.0, 0, 0])).tolist() == [0, 1, 0, 0]
    assert occupied_indicator(np.array([1e-13, 1e-11])).tolist() == [0, 1]
    with pytest.raises(ValueError):
        occupied_indicator(np.zeros(2), tau=-1)


def test_small_fixture_converges(strip5):
    p = Dynamics(rho=0.05, eps=0.5)
    state, rep = run(strip5, p, max_t=10_000, tol=1e-10)
    assert rep.converged and rep.t_stop < 10_000
    assert state.y.sum() == pytest.approx(1.0, abs=1e-12)
    assert rep.y_residual >= 0 and rep.w_residual >= 0


def test_infinite_tolerance_stops_after_one_step(strip5, table1):
    state, rep = run(strip5, table1, max_t=100, tol=float("inf"))
    assert rep.converged and rep.t_stop == 1 and state.t == 1


def test_window_requires_consecutive_small_residuals(strip5, table1):
    _, rep = run(strip5, table1, max_t=100, tol=float("inf"), window=5)
    assert rep.t_stop == 5


def test_not_converged_is_a_flag(strip5, table1):
    state, rep = run(strip5, table1, max_t=10, tol=1e-10)
    assert not rep.converged and rep.t_stop == 10 == state.t


def test_bad_arguments(strip5, table1):
    with pytest.raises(ValueError):
        run(strip5, table1, max_t=0, tol=1.0)
    with pytest.raises(ValueError):
        run(strip5, table1, max_t=5, tol=0.0)


def test_callback_and_samples(strip5, table1):
    seen = []
    _, rep = run(strip5, table1, max_t=20, tol=1e-30, sample_every=5, callback=lambda s: seen.append(s.t))
    assert seen == list(range(21))
    assert [t for t, _, _ in rep.samples] == [5, 10, 15, 20]


def test_stationary_and_positive_at_convergence(lattice3, table1):
    tol = 1e-10
    state, rep = run(lattice3, table1, max_t=100_000, tol=tol)
    assert rep.converged
    P = transition_operator(lattice3, state.w, table1.eps)
    assert np.abs(P.matvec(state.y) - state.y).sum() < 10 * tol
    assert np.all(state.y[lattice3.active] > 0)


def test_weight_contraction_after_transient(strip5, table1):
    w_inf = closed_form_w_inf(strip5, table1.r, table1.lam)
    factor = 1 - table1.rho * (1 - table1.lam)
    state = init_mean_field(strip5)
    t0 = 2 * diameter(strip5.base)
    prev = None
    for _ in range(6000):
        state = mf_step(strip5, state, table1)
        z = np.abs(state.w - w_inf).max()
        if prev is not None and state.t > t0 + 1:
            assert z <= factor * prev + 1e-9
        prev = z


def test_runs_are_bit_identical(lattice3, table1):
    a = trajectory(lattice3, table1, 500)
    b = trajectory(lattice3, table1, 500)
    assert a.tobytes() == b.tobytes()
