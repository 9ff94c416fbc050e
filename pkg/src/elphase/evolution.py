"""Operator-split time integration of the coupled 1D balance system.

State per cell: partial densities rho_a, momentum density rho v, order
parameter chi, potential phi (quasi-static, re-solved every step).  The
domain is a closed box: v = 0 on the walls, no species flux, no phase-field
flux; the potential carries its own Dirichlet/Neumann data.

Substeps per time step, each consuming the freshest fields:

    1. potential solve   eps_sc eps0 d/dx((1+s(chi)) dphi/dx) + n^F = 0
    2. phase field       dchi/dt + v dchi/dx = -(tau/(delta rho)) mu_chi
                         with mu_chi = W'/delta + d(rho f)/dchi
                                       - eps_sc (eps0/2) s' (dphi/dx)^2
                                       - gamma delta d2chi/dx2
                         (the d2chi/dx2 part is taken implicitly)
    3. species masses    drho_a/dt + d/dx(rho_a v + J_a) = r_a
                         J_a = -sum_b M_ab [d/dx(mu_b - mu_N) + zeta_b dphi/dx]
       total mass        drho/dt + d/dx(rho v) = 0,  rho_N = rho - sum rho_a
    4. momentum          d(rho v)/dt + d/dx(rho v v + Pi) = d/dx(sigma)
                         Pi = sum rho_a mu_a - rho f - W/delta
                              + (gamma delta/2) (dchi/dx)^2
                              - eps_sc eps0 (1+s) (dphi/dx)^2 / 2
                         sigma = delta^2 (lam + 2 eta) dv/dx

The regime parameter delta in (0, 1/2] sets the interface width; the
coupled regime additionally scales the permittivity prefactor eps_sc from
1 down to delta, which collapses bulk charge separation as delta -> 0.

Advection is first-order upwind on faces; diffusion and pressure use
central face differences; the phase-field Laplacian is solved implicitly
by a tridiagonal factorization, everything else is explicit under a CFL
bound assembled from sound speed, drift speeds and diffusion rates.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import solve_banded

from . import thermo
from .grid import BC, NOFLUX, Field, Grid, gradient as cell_gradient, neumann
from .poisson import potential_gradient, solve_potential
from .reactions import ReactionNetwork, mass_production
from .transport import MobilityMatrix, charge_factors
from .thermo import Mixture

DENSITY_FLOOR = 1.0e-10
DT_UNDERFLOW = 1.0e-12
CHI_OVERSHOOT_LIMIT = 0.1


@dataclass(frozen=True)
class System:
    """Grid, materials and regime constants of one simulation setup."""

    grid: Grid
    mixture: Mixture
    network: ReactionNetwork
    mobility: MobilityMatrix | None
    gamma: float            # phase-field gradient energy coefficient
    tau: float              # phase relaxation constant
    lam: float              # dilatational viscosity
    eta: float              # shear viscosity
    delta: float            # interface width parameter
    regime: str             # "uncoupled" | "coupled"
    bc_phi_lo: BC = NOFLUX
    bc_phi_hi: BC = NOFLUX

    def __post_init__(self):
        if not 0.0 < self.delta <= 0.5:
            raise ValueError("delta must lie in (0, 1/2]")
        if self.regime not in ("uncoupled", "coupled"):
            raise ValueError("regime must be 'uncoupled' or 'coupled'")
        if self.gamma <= 0.0 or self.tau <= 0.0:
            raise ValueError("gamma and tau must be positive")
        if self.eta < 0.0 or self.lam + 2.0 * self.eta / 3.0 < 0.0:
            raise ValueError("viscosities must give nonnegative dissipation")
        n = self.mixture.n_species
        if n > 1:
            if self.mobility is None or self.mobility.size != n - 1:
                raise ValueError("mobility must be (N-1) x (N-1)")
        elif self.mobility is not None:
            raise ValueError("single-species systems carry no mobility")

    @property
    def eps_scale(self) -> float:
        """Permittivity scaling: 1 in the uncoupled regime, delta in the coupled."""
        return 1.0 if self.regime == "uncoupled" else self.delta

    def zeta(self) -> np.ndarray:
        return charge_factors(self.mixture.masses, self.mixture.charges)


@dataclass
class SimState:
    rho: np.ndarray        # (N, n) partial densities
    mom: np.ndarray        # (n,) momentum density rho v
    chi: np.ndarray        # (n,)
    phi: np.ndarray        # (n,)
    t: float = 0.0

    def check(self, sys: System) -> None:
        n = sys.grid.n
        if self.rho.shape != (sys.mixture.n_species, n):
            raise ValueError("rho must be (n_species, n_cells)")
        for arr in (self.mom, self.chi, self.phi):
            if np.asarray(arr).shape != (n,):
                raise ValueError("cell fields must have length n_cells")
        if not (np.all(np.isfinite(self.rho)) and np.all(np.isfinite(self.mom))
                and np.all(np.isfinite(self.chi)) and np.all(np.isfinite(self.phi))):
            raise ValueError("state contains non-finite values")
        if np.any(self.rho <= 0.0):
            raise ValueError("partial densities must be positive")
        if np.any(np.abs(self.chi) > 1.0 + CHI_OVERSHOOT_LIMIT):
            raise ValueError("order parameter left the admissible band")

    @property
    def rho_total(self) -> np.ndarray:
        return self.rho.sum(axis=0)

    @property
    def velocity(self) -> np.ndarray:
        return self.mom / self.rho_total


@dataclass(frozen=True)
class StepConfig:
    cfl: float = 0.4
    max_dt: float = 1.0e-3
    t_end: float = 1.0
    snapshot_interval: float = 0.1
    max_steps: int = 2_000_000


@dataclass
class StepDiagnostics:
    dt: float
    dt_limiter: str
    poisson_residual: float
    floor_events: int
    chi_overshoot: float


@dataclass
class Trajectory:
    times: list[float] = field(default_factory=list)
    snapshots: list[SimState] = field(default_factory=list)
    scalars: list[dict] = field(default_factory=list)
    floor_events: int = 0
    max_chi_overshoot: float = 0.0
    steps: int = 0


# ----------------------------------------------------------------------
# helpers
# ----------------------------------------------------------------------

def wall_face_velocity(v: np.ndarray) -> np.ndarray:
    """Face velocities with v = 0 on both walls."""
    vf = np.empty(v.size + 1)
    vf[1:-1] = 0.5 * (v[:-1] + v[1:])
    vf[0] = 0.0
    vf[-1] = 0.0
    return vf


def upwind_face_values(cell: np.ndarray, v_face: np.ndarray) -> np.ndarray:
    """Upwind cell values on faces (species axis leading if 2d)."""
    lo = cell[..., :1]
    hi = cell[..., -1:]
    ext = np.concatenate([lo, cell, hi], axis=-1)
    return np.where(v_face >= 0.0, ext[..., :-1], ext[..., 1:])


def sound_speed_estimate(mix: Mixture, rho: np.ndarray, chi: np.ndarray) -> float:
    """max sqrt(dp/drho) over cells, finite differences at frozen composition."""
    h = 1.0e-6
    p_hi = thermo.pressure(mix, rho * (1.0 + h), chi)
    p_lo = thermo.pressure(mix, rho * (1.0 - h), chi)
    rho_tot = rho.sum(axis=0)
    dpdr = (p_hi - p_lo) / (2.0 * h * rho_tot)
    return float(np.sqrt(np.clip(dpdr, 0.0, None)).max())


def _solve_tridiag(lower, diag, upper, rhs):
    ab = np.vstack([np.concatenate(([0.0], upper[:-1])),
                    diag,
                    np.concatenate((lower[1:], [0.0]))])
    return solve_banded((1, 1), ab, rhs)


def _chi_mu(sys: System, rho, chi, grad_phi_cell, lap_chi=None):
    """Discrete phase-field potential mu_chi; lap_chi omitted for the implicit part."""
    _, dw, _ = thermo.double_well(chi)
    dfd = thermo.dfree_dchi(sys.mixture, rho, chi)
    _, ds = sys.mixture.susceptibility(chi)
    mu = dw / sys.delta + dfd \
        - sys.eps_scale * 0.5 * sys.mixture.eps0 * ds * grad_phi_cell**2
    if lap_chi is not None:
        mu = mu - sys.gamma * sys.delta * lap_chi
    return mu


def _upwind_gradient(grid: Grid, f: np.ndarray, v: np.ndarray) -> np.ndarray:
    """One-sided df/dx chosen by the sign of v, zero-gradient ghosts."""
    ext = np.concatenate(([f[0]], f, [f[-1]]))
    back = (ext[1:-1] - ext[:-2]) / grid.dx
    fwd = (ext[2:] - ext[1:-1]) / grid.dx
    return np.where(v > 0.0, back, fwd)


# ----------------------------------------------------------------------
# single step
# ----------------------------------------------------------------------

def timestep(sys: System, state: SimState, cfg: StepConfig,
             dt_cap: float | None = None) -> tuple[SimState, StepDiagnostics]:
    state.check(sys)
    grid = sys.grid
    mix = sys.mixture
    n, dx = grid.n, grid.dx
    nsp = mix.n_species
    rho = state.rho
    rho_tot = state.rho_total
    v = state.mom / rho_tot

    # --- 1. potential ---------------------------------------------------
    s, _ = mix.susceptibility(state.chi)
    perm = sys.eps_scale * mix.eps0 * (1.0 + s)
    nf = thermo.free_charge_density(mix, rho)
    pois = solve_potential(grid, perm, nf, sys.bc_phi_lo, sys.bc_phi_hi)
    phi = pois.phi
    grad_phi_cell = potential_gradient(grid, phi, sys.bc_phi_lo, sys.bc_phi_hi)
    grad_phi_face = (phi[1:] - phi[:-1]) / dx       # interior faces only

    # --- provisional fluxes for the step-size bounds ---------------------
    mu0 = thermo.chemical_potentials(mix, rho, state.chi)
    drift = 0.0
    diff_rate = 0.0
    if nsp > 1:
        mu_rel = mu0[:-1] - mu0[-1]
        forces = (mu_rel[:, 1:] - mu_rel[:, :-1]) / dx \
            + sys.zeta()[:, None] * grad_phi_face
        j_face = -sys.mobility.m @ forces
        rho_face = 0.5 * (rho[:, :-1] + rho[:, 1:])
        drift = float(np.abs(np.concatenate(
            [j_face, -j_face.sum(axis=0, keepdims=True)])
            / np.maximum(rho_face, DENSITY_FLOOR)).max()) if n > 1 else 0.0
        jac = thermo.mu_jacobian(mix, rho, state.chi)     # (n, N, N)
        gersh = np.abs(jac).sum(axis=2).max()
        diff_rate = float(np.linalg.norm(sys.mobility.m, 2) * gersh)

    c_snd = sound_speed_estimate(mix, rho, state.chi)
    speed = float(np.abs(v).max()) + c_snd + drift
    _, _, ddw = thermo.double_well(state.chi)
    ac_rate = sys.tau * max(8.0, float(np.abs(ddw).max())) \
        / (sys.delta**2 * float(rho_tot.min()))
    visc_rate = sys.delta**2 * (sys.lam + 2.0 * sys.eta) / float(rho_tot.min())

    limits = {"max_dt": cfg.max_dt}
    if speed > 0.0:
        limits["advection"] = cfg.cfl * dx / speed
    if diff_rate > 0.0:
        limits["mass_diffusion"] = cfg.cfl * 0.5 * dx**2 / diff_rate
    if visc_rate > 0.0:
        limits["viscosity"] = cfg.cfl * 0.5 * dx**2 / visc_rate
    limits["phase_relaxation"] = cfg.cfl / ac_rate
    if dt_cap is not None:
        limits["endpoint"] = dt_cap
    dt_limiter = min(limits, key=limits.get)
    dt = limits[dt_limiter]
    if dt < DT_UNDERFLOW:
        raise RuntimeError(
            f"time step underflow: dt = {dt:.3e} limited by {dt_limiter}")

    # --- 2. phase field ---------------------------------------------------
    relax = sys.tau / (sys.delta * rho_tot)
    mu_expl = _chi_mu(sys, rho, state.chi, grad_phi_cell)
    adv_chi = v * _upwind_gradient(grid, state.chi, v)
    rhs = state.chi + dt * (-adv_chi - relax * mu_expl)
    w = dt * relax * sys.gamma * sys.delta / dx**2
    lower = np.zeros(n)
    diag = np.ones(n)
    upper = np.zeros(n)
    # implicit Laplacian with zero-flux ends
    diag[0] += w[0]
    upper[0] = -w[0]
    diag[-1] += w[-1]
    lower[-1] = -w[-1]
    diag[1:-1] += 2.0 * w[1:-1]
    upper[1:-1] = -w[1:-1]
    lower[1:-1] = -w[1:-1]
    chi_new = _solve_tridiag(lower, diag, upper, rhs)
    overshoot = max(0.0, float(np.abs(chi_new).max()) - 1.0)

    # --- 3. species and total mass ----------------------------------------
    v_face = wall_face_velocity(v)
    mu = thermo.chemical_potentials(mix, rho, chi_new)
    rho_up = upwind_face_values(rho, v_face)
    floor_events = 0
    if nsp > 1:
        mu_rel = mu[:-1] - mu[-1]
        forces = (mu_rel[:, 1:] - mu_rel[:, :-1]) / dx \
            + sys.zeta()[:, None] * grad_phi_face
        j_ind = np.zeros((nsp - 1, n + 1))
        j_ind[:, 1:-1] = -sys.mobility.m @ forces   # walls: zero species flux
        flux_ind = rho_up[:-1] * v_face + j_ind
        r = mass_production(sys.network, mu)
        rho_ind = rho[:-1] - dt * (flux_ind[:, 1:] - flux_ind[:, :-1]) / dx \
            + dt * r[:-1]
    else:
        rho_ind = np.zeros((0, n))
    tot_flux = rho_up.sum(axis=0) * v_face
    rho_tot_new = rho_tot - dt * (tot_flux[1:] - tot_flux[:-1]) / dx
    clip = np.maximum(rho_ind, DENSITY_FLOOR)
    floor_events += int((clip != rho_ind).sum())
    rho_ind = clip
    rho_last = rho_tot_new - rho_ind.sum(axis=0)
    low = rho_last < DENSITY_FLOOR
    if np.any(low):
        floor_events += int(low.sum())
        rho_last = np.maximum(rho_last, DENSITY_FLOOR)
    rho_new = np.vstack([rho_ind, rho_last[None, :]])

    # --- 4. momentum -------------------------------------------------------
    s_new, _ = mix.susceptibility(chi_new)
    mu_new = thermo.chemical_potentials(mix, rho_new, chi_new)
    w_chi, _, _ = thermo.double_well(chi_new)
    chi_field = Field(chi_new, neumann(0.0), neumann(0.0))
    grad_chi = cell_gradient(grid, chi_field)
    pi = (rho_new * mu_new).sum(axis=0) \
        - thermo.free_energy_density(mix, rho_new, chi_new) \
        - w_chi / sys.delta \
        + 0.5 * sys.gamma * sys.delta * grad_chi**2 \
        - 0.5 * sys.eps_scale * mix.eps0 * (1.0 + s_new) * grad_phi_cell**2
    pi_face = np.empty(n + 1)
    pi_face[1:-1] = 0.5 * (pi[:-1] + pi[1:])
    pi_face[0] = pi[0]
    pi_face[-1] = pi[-1]
    mom_up = upwind_face_values(state.mom, v_face)
    visc_coeff = sys.delta**2 * (sys.lam + 2.0 * sys.eta)
    visc_face = np.empty(n + 1)
    visc_face[1:-1] = visc_coeff * (v[1:] - v[:-1]) / dx
    visc_face[0] = visc_coeff * v[0] / (0.5 * dx)       # no-slip wall
    visc_face[-1] = visc_coeff * (0.0 - v[-1]) / (0.5 * dx)
    mom_flux = mom_up * v_face + pi_face - visc_face
    mom_new = state.mom - dt * (mom_flux[1:] - mom_flux[:-1]) / dx

    new = SimState(rho_new, mom_new, chi_new, phi, state.t + dt)
    diag_out = StepDiagnostics(dt, dt_limiter, pois.residual_inf,
                               floor_events, overshoot)
    return new, diag_out


# ----------------------------------------------------------------------
# driver
# ----------------------------------------------------------------------

def run(sys: System, state: SimState, cfg: StepConfig) -> Trajectory:
    """Advance to t_end, recording snapshots and per-step scalar series."""
    from .energy import scalar_row

    traj = Trajectory()
    state = replace(state)
    # re-solve the potential so the recorded initial state is consistent
    s, _ = sys.mixture.susceptibility(state.chi)
    perm = sys.eps_scale * sys.mixture.eps0 * (1.0 + s)
    nf = thermo.free_charge_density(sys.mixture, state.rho)
    state.phi = solve_potential(sys.grid, perm, nf,
                                sys.bc_phi_lo, sys.bc_phi_hi).phi
    traj.times.append(state.t)
    traj.snapshots.append(state)
    traj.scalars.append(scalar_row(sys, state))
    next_snap = state.t + cfg.snapshot_interval

    while state.t < cfg.t_end - 1.0e-14:
        if traj.steps >= cfg.max_steps:
            raise RuntimeError("step budget exhausted before t_end")
        cap = cfg.t_end - state.t
        if cap < DT_UNDERFLOW:
            break
        state, diag = timestep(sys, state, cfg, dt_cap=cap)
        traj.steps += 1
        traj.floor_events += diag.floor_events
        traj.max_chi_overshoot = max(traj.max_chi_overshoot, diag.chi_overshoot)
        traj.scalars.append(scalar_row(sys, state))
        if state.t >= next_snap - 1.0e-12 or state.t >= cfg.t_end - 1.0e-14:
            traj.times.append(state.t)
            traj.snapshots.append(state)
            while next_snap <= state.t + 1.0e-12:
                next_snap += cfg.snapshot_interval
    return traj
