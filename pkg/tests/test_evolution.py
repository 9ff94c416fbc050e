import numpy as np
import pytest

from elphase.evolution import (SimState, StepConfig, System, run,
                               sound_speed_estimate, timestep,
                               upwind_face_values, wall_face_velocity)
from elphase.grid import Grid, dirichlet
from elphase.reactions import ReactionNetwork, empty_network
from elphase.thermo import Mixture, blended_modulus
from elphase.transport import MobilityMatrix


def two_species_system(n=64, delta=0.1, regime="uncoupled", x_hi=1.0,
                       charges=(0.0, 0.0), **mix_kw):
    mix = Mixture(masses=np.array([1.0, 2.0]),
                  charges=np.asarray(charges, dtype=float),
                  psi_ref=np.zeros(2), k_liquid=1.2, k_vapor=1.0, **mix_kw)
    return System(grid=Grid(n=n, x_lo=0.0, x_hi=x_hi), mixture=mix,
                  network=empty_network(mix.masses, mix.charges),
                  mobility=MobilityMatrix(np.array([[0.01]])),
                  gamma=2.0, tau=1.0, lam=1.0, eta=1.0, delta=delta,
                  regime=regime)


def uniform_state(sys, rho0=(0.4, 1.2), chi0=1.0):
    n = sys.grid.n
    rho = np.repeat(np.asarray(rho0)[:, None], n, axis=1)
    return SimState(rho=rho, mom=np.zeros(n), chi=np.full(n, chi0),
                    phi=np.zeros(n), t=0.0)


def test_system_validation():
    with pytest.raises(ValueError):
        two_species_system(delta=0.0)
    with pytest.raises(ValueError):
        two_species_system(delta=0.6)
    with pytest.raises(ValueError):
        two_species_system(regime="other")
    sys = two_species_system()
    assert sys.eps_scale == 1.0
    assert two_species_system(regime="coupled").eps_scale == 0.1

def test_state_validation():
    sys = two_species_system()
    state = uniform_state(sys)
    state.check(sys)
    bad = uniform_state(sys)
    bad.rho[0, 3] = -1.0
    with pytest.raises(ValueError):
        bad.check(sys)
    worse = uniform_state(sys)
    worse.chi[:] = 1.3   # beyond the overshoot monitor band
    with pytest.raises(ValueError):
        worse.check(sys)


def test_wall_face_velocity_and_upwind_values():
    v = np.array([1.0, -2.0, 3.0])
    vf = wall_face_velocity(v)
    assert vf[0] == 0.0 and vf[-1] == 0.0
    assert np.allclose(vf[1:-1], [-0.5, 0.5])
    cell = np.array([10.0, 20.0, 30.0])
    up = upwind_face_values(cell, vf)
    # vf[1] < 0 takes the right cell, vf[2] > 0 takes the left
    assert up[1] == 20.0 and up[2] == 20.0


def test_sound_speed_matches_closed_form():
    sys = two_species_system()
    rho = np.array([0.4, 1.2])
    for chi in (-1.0, 0.0, 1.0):
        c = sound_speed_estimate(sys.mixture, rho, chi)
        # frozen-composition oracle: c^2 = K(chi) * sum(y_a/m_a) / n_ref
        y = rho / rho.sum()
        expect = np.sqrt(blended_modulus(sys.mixture, chi)
                         * (y / sys.mixture.masses).sum())
        assert c == pytest.approx(float(expect), rel=1e-4)


def test_uniform_state_is_fixed_point():
    sys = two_species_system()
    state = uniform_state(sys)
    cfg = StepConfig(t_end=1.0, max_dt=5e-4)
    for _ in range(20):
        state, diag = timestep(sys, state, cfg)
    ref = uniform_state(sys)
    assert np.abs(state.rho - ref.rho).max() < 1e-12
    assert np.abs(state.mom).max() < 1e-12
    assert np.abs(state.chi - 1.0).max() < 1e-12

def test_timestep_diagnostics():
    sys = two_species_system()
    state = uniform_state(sys)
    state, diag = timestep(sys, state, StepConfig())
    assert diag.dt > 0.0
    assert diag.dt_limiter in {"max_dt", "advection", "mass_diffusion",
                               "viscosity", "phase_relaxation", "endpoint"}
    assert diag.floor_events == 0
    assert diag.chi_overshoot < 1e-12   # roundoff from the implicit solve

def test_dt_cap_endpoint_hit():
    sys = two_species_system()
    state = uniform_state(sys)
    state, diag = timestep(sys, state, StepConfig(), dt_cap=1e-5)
    assert diag.dt == pytest.approx(1e-5)

def test_dt_underflow_raises():
    sys = two_species_system()
    state = uniform_state(sys)
    with pytest.raises(RuntimeError):
        timestep(sys, state, StepConfig(), dt_cap=1e-14)


def test_run_records_snapshots_and_scalars():
    sys = two_species_system(n=32)
    state = uniform_state(sys)
    cfg = StepConfig(t_end=0.01, max_dt=1e-3, snapshot_interval=0.005)
    traj = run(sys, state, cfg)
    assert traj.snapshots[0].t == 0.0
    assert traj.snapshots[-1].t == pytest.approx(0.01, abs=1e-12)
    assert len(traj.snapshots) == 3
    assert traj.steps == len(traj.scalars) - 1
    for key in ("t", "energy", "tzeta_total", "total_mass", "total_charge"):
        assert key in traj.scalars[0]

def test_run_conserves_mass_with_interface():
    sys = two_species_system(n=64)
    x = sys.grid.centers
    chi = np.tanh(np.sqrt(2.0 / sys.gamma) * (x - 0.5) / sys.delta)
    rho = np.empty((2, 64))
    rho[0] = 0.5 + 0.05 * np.cos(np.pi * x)
    rho[1] = 1.0 - 0.05 * np.cos(np.pi * x)
    state = SimState(rho=rho, mom=np.zeros(64), chi=chi, phi=np.zeros(64), t=0.0)
    traj = run(sys, state, StepConfig(t_end=0.02, snapshot_interval=0.01))
    m0 = traj.scalars[0]["total_mass"]
    m1 = traj.scalars[-1]["total_mass"]
    assert abs(m1 - m0) < 1e-12 * abs(m0)
    assert traj.floor_events == 0

def test_charged_species_build_potential():
    sys = two_species_system(charges=(1.0, -1.0),
                             s_liquid=0.3, s_vapor=0.0)
    sys = System(grid=sys.grid, mixture=sys.mixture, network=sys.network,
                 mobility=sys.mobility, gamma=sys.gamma, tau=sys.tau,
                 lam=sys.lam, eta=sys.eta, delta=sys.delta, regime=sys.regime,
                 bc_phi_lo=dirichlet(0.0), bc_phi_hi=dirichlet(0.0))
    x = sys.grid.centers
    rho = np.empty((2, sys.grid.n))
    rho[0] = 0.5 + 0.1 * np.sin(2 * np.pi * x)   # local net charge
    rho[1] = 1.0
    chi = np.tanh(np.sqrt(2.0 / sys.gamma) * (x - 0.5) / sys.delta)
    state = SimState(rho=rho, mom=np.zeros(x.size), chi=chi,
                     phi=np.zeros(x.size), t=0.0)
    state, diag = timestep(sys, state, StepConfig())
    assert np.abs(state.phi).max() > 0.0
    assert diag.poisson_residual < 1e-8
