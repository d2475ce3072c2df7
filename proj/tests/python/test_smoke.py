import math

import pytest

import effham


def test_grid_and_initial_state():
    g = effham.make_grid(1, 16)
    assert g.N == 16 and g.d == 1 and g.h == pytest.approx(1 / 16)
    st = effham.default_initial(g)
    assert st.M.shape == (16,)
    assert st.M.mean() == pytest.approx(1.0, abs=1e-13)
    assert abs(st.U.mean()) < 1e-13
    assert st.M.min() > 0


def test_discrete_hamiltonian_flat_profile():
    g = effham.make_grid(1, 8)
    spec = effham.HamiltonianSpec("minus_sin", [0.5])
    G = effham.discrete_hamiltonian(spec, g, [0.0] * 8)
    V = effham.potential_on_grid(spec, g)
    for i in range(8):
        assert G[i] == pytest.approx(0.125 + V[i], abs=1e-14)


def test_newton_solve_reaches_a_root():
    g = effham.make_grid(1, 16)
    spec = effham.HamiltonianSpec("minus_sin", [1.8])
    r = effham.newton_solve(effham.default_initial(g), spec, g, k=10.0)
    assert r.converged
    assert r.residual_history[-1] <= 1e-9
    fb = effham.F_bar(spec, g, r.state, 10.0)
    assert max(abs(fb)) <= 1e-8


def test_flow_conserves_mass_and_reaches_the_root():
    g = effham.make_grid(1, 16)
    spec = effham.HamiltonianSpec("minus_sin", [1.8])
    traj = effham.integrate_hrf(
        effham.default_initial(g), spec, g, k=10.0, T=20.0
    )
    assert traj.mass_series[-1] == pytest.approx(1.0, abs=1e-9)
    root = effham.newton_solve(effham.default_initial(g), spec, g, k=10.0)
    hb = effham.effective_H_estimate(spec, g, root.state, 10.0)
    assert traj.hbar_series[-1] == pytest.approx(hb, abs=1e-6)
    assert effham.lyapunov(traj.states[-1], root.state) < 1e-10


def test_reduced_solver_on_the_flat_part():
    g = effham.make_grid(1, 40)
    spec = effham.HamiltonianSpec("minus_sin", [0.0])
    r = effham.reduced_newton_solve([0.0] * 40, spec, g, k=1000.0)
    assert r.residual <= 1e-8
    assert r.hbar == pytest.approx(1.0 - math.log(40) / 1000.0, rel=1e-7)


def test_pendulum_references():
    assert effham.hbar_pendulum(0.5) == 1.0
    assert effham.hbar_pendulum(-2.0) == effham.hbar_pendulum(2.0)
    assert effham.hbar_separable_2d(1.5, 2.5) == pytest.approx(
        effham.hbar_pendulum(1.5) + effham.hbar_pendulum(2.5)
    )
    g = effham.make_grid(1, 64)
    u = effham.corrector_pendulum(2.0, g)
    assert abs(u.mean()) < 1e-10
    p0 = effham.adaptive_quadrature(
        lambda s: math.sqrt(2 * (math.sin(2 * math.pi * s) + 1)),
        0.0,
        1.0,
        1e-11,
    )
    assert p0 == pytest.approx(effham.pendulum_P0, abs=1e-9)


def test_positivity_guard_raises():
    g = effham.make_grid(1, 16)
    spec = effham.HamiltonianSpec("minus_sin", [0.5])
    with pytest.raises(RuntimeError):
        effham.newton_solve(effham.default_initial(g), spec, g, k=100.0)
