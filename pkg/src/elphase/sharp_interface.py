"""Sharp-interface limit toolkit: inner profiles, jump conditions, delta study.

Orientation conventions used throughout: the plus side is the liquid
(chi = +1), the minus side the vapour (chi = -1), the unit normal nu points
into the liquid, and [[f]] = f(plus) - f(minus).  The stretched coordinate
z runs along nu, so the transition profile is X0(z) = tanh(sqrt(2/gamma) z).

Pieces:

* phase_profile          X0 on a symmetric z-grid with a verified residual
                         of the layer equation W'(X0) - gamma X0'' = 0
* surface_tension_integral
                         I_sigma = int X0'^2 dz (closed form 4/3 sqrt(2/gamma))
* solve_inner_profiles   densities R_a(z) across the layer for a given
                         vapour-side state and mass flux j0, from
                         - mu_a - mu_N constant across the layer (a < N)
                         - mu_N + j0^2/(2 R^2) + (j0/tau) int X0'^2/R0
                           constant across the layer
                         solved by damped Newton per node inside a Picard
                         loop that freezes the integral term
* jump_residuals_*       pointwise evaluation of the interfacial balances
                         for measured or constructed bulk pairs
* delta_convergence_study
                         run a scenario at several delta, extract bulk
                         traces by linear extrapolation from beyond 5 delta,
                         and tabulate residual norms and empirical orders

The kinetic denominator in the layer relation defaults to the squared
total density (sum of R_a, then squared), which is the form consistent
with the far-field limit; kinetic_denominator="sum-of-squares" switches to
the sum of squared partial densities for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import thermo
from .evolution import SimState, StepConfig, System, Trajectory, run
from .thermo import Mixture
from .transport import MobilityMatrix, charge_factors

NODE_RESIDUAL_TOL = 1.0e-9
NEWTON_TOL = 1.0e-12
PICARD_TOL = 1.0e-10


# ----------------------------------------------------------------------
# transition profile
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PhaseProfile:
    gamma: float
    z: np.ndarray
    x0: np.ndarray
    residual_inf: float

    @property
    def dz(self) -> float:
        return float(self.z[1] - self.z[0])


def default_half_width(gamma: float) -> float:
    return max(10.0, 12.0 * np.sqrt(gamma / 2.0))


def phase_profile(gamma: float, nz: int = 8001,
                  z_max: float | None = None) -> PhaseProfile:
    """tanh layer profile with a fourth-order finite-difference residual check."""
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    if nz < 9 or nz % 2 == 0:
        raise ValueError("nz must be odd and at least 9")
    half = default_half_width(gamma) if z_max is None else float(z_max)
    z = np.linspace(-half, half, nz)
    a = np.sqrt(2.0 / gamma)
    x0 = np.tanh(a * z)
    h = z[1] - z[0]
    d2 = (-x0[:-4] + 16.0 * x0[1:-3] - 30.0 * x0[2:-2]
          + 16.0 * x0[3:-1] - x0[4:]) / (12.0 * h * h)
    _, dw, _ = thermo.double_well(x0[2:-2])
    residual = float(np.abs(dw - gamma * d2).max())
    return PhaseProfile(float(gamma), z, x0, residual)


def profile_slope(profile: PhaseProfile) -> np.ndarray:
    """dX0/dz by fourth-order central differences, one-sided order drop at ends."""
    x0, h = profile.x0, profile.dz
    d = np.empty_like(x0)
    d[2:-2] = (x0[:-4] - 8.0 * x0[1:-3] + 8.0 * x0[3:-1] - x0[4:]) / (12.0 * h)
    d[:2] = (x0[1:3] - x0[0:2]) / h      # tails: profile is flat to rounding
    d[-2:] = (x0[-2:] - x0[-3:-1]) / h
    return d


def surface_tension_integral(profile: PhaseProfile) -> float:
    """I_sigma = int X0'^2 dz by trapezoid on the stored profile."""
    slope = profile_slope(profile)
    return float(np.trapezoid(slope**2, profile.z))


def surface_tension_closed_form(gamma: float) -> float:
    return 4.0 / 3.0 * np.sqrt(2.0 / gamma)


# ----------------------------------------------------------------------
# inner profiles
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class InnerProfileSolution:
    profile: PhaseProfile
    r: np.ndarray              # (N, nz) densities across the layer
    j0: float
    tau: float
    kinetic_denominator: str
    i_sigma: float
    i_j: float                 # int X0'^2 / R0 dz
    picard_iterations: int
    max_node_residual: float

    @property
    def left_state(self) -> np.ndarray:
        return self.r[:, 0].copy()

    @property
    def right_state(self) -> np.ndarray:
        return self.r[:, -1].copy()


def _kinetic(r_tot2, j0):
    return 0.5 * j0 * j0 / r_tot2


def _denominator(r: np.ndarray, kind: str):
    """r is (N, m); returns (value, gradient wrt each R_a), both (m,) / (N, m)."""
    if kind == "sum-squared":
        tot = r.sum(axis=0)
        return tot * tot, 2.0 * np.broadcast_to(tot, r.shape)
    if kind == "sum-of-squares":
        return (r * r).sum(axis=0), 2.0 * r
    raise ValueError("kinetic_denominator must be 'sum-squared' or 'sum-of-squares'")


def _layer_residuals(mix: Mixture, r: np.ndarray, x0: np.ndarray, j0: float,
                     integral: np.ndarray, d_rel: np.ndarray, rhs_n: float,
                     denom_kind: str) -> np.ndarray:
    """Residuals (N, m) of the layer relations at each node; r must be positive."""
    mu = thermo.chemical_potentials(mix, r, x0)
    res = np.empty_like(r)
    if mix.n_species > 1:
        res[:-1] = (mu[:-1] - mu[-1]) - d_rel[:, None]
    denom, _ = _denominator(r, denom_kind)
    res[-1] = mu[-1] + _kinetic(denom, j0) + integral - rhs_n
    return res


def _layer_jacobian(mix: Mixture, r: np.ndarray, x0: np.ndarray, j0: float,
                    denom_kind: str) -> np.ndarray:
    """Jacobian (m, N, N) of the layer residuals wrt the node densities."""
    jac_mu = thermo.mu_jacobian(mix, r, x0)       # (m, N, N)
    jac = jac_mu.copy()
    if mix.n_species > 1:
        jac[:, :-1, :] -= jac_mu[:, -1:, :]
    denom, grad = _denominator(r, denom_kind)
    jac[:, -1, :] += (-j0 * j0 / (denom * denom))[:, None] * grad.T
    return jac


def _safe_residual_norm(mix, r, x0, j0, integral, d_rel, rhs_n, denom_kind):
    """Max-abs residual per node; nonpositive densities score +inf."""
    bad = (r <= 0.0).any(axis=0)
    r_eval = np.maximum(r, 1.0e-30)
    with np.errstate(all="ignore"):
        res = _layer_residuals(mix, r_eval, x0, j0, integral, d_rel,
                               rhs_n, denom_kind)
        norm = np.abs(res).max(axis=0)
    norm[~np.isfinite(norm)] = np.inf
    norm[bad] = np.inf
    return norm


def _newton_nodes(mix, r, x0, j0, integral, d_rel, rhs_n, denom_kind,
                  tol=NEWTON_TOL, max_iter=80):
    """Damped Newton on all nodes at once; returns (r, worst residual)."""
    r = r.copy()
    norm = _safe_residual_norm(mix, r, x0, j0, integral, d_rel, rhs_n, denom_kind)
    for _ in range(max_iter):
        active = norm > tol
        if not active.any():
            break
        res = _layer_residuals(mix, r, x0, j0, integral, d_rel, rhs_n, denom_kind)
        jac = _layer_jacobian(mix, r, x0, j0, denom_kind)
        step = np.linalg.solve(jac, res.T[..., None])[..., 0].T   # (N, m)
        alpha = np.where(active, 1.0, 0.0)
        for _ in range(60):
            r_try = r - alpha[None, :] * step
            norm_try = _safe_residual_norm(mix, r_try, x0, j0, integral,
                                           d_rel, rhs_n, denom_kind)
            worse = active & (norm_try > (1.0 - 1.0e-4 * alpha) * norm)
            if not worse.any():
                break
            alpha[worse] *= 0.5
        accept = active & (norm_try <= norm)
        r[:, accept] = r_try[:, accept]
        new_norm = norm.copy()
        new_norm[accept] = norm_try[accept]
        if np.array_equal(new_norm, norm):   # no progress anywhere
            break
        norm = new_norm
    return r, norm


def solve_inner_profiles(mix: Mixture, rho_minus, j0: float, gamma: float,
                         tau: float, *, kinetic_denominator: str = "sum-squared",
                         nz: int = 4001, max_picard: int = 100) -> InnerProfileSolution:
    """Densities across the transition layer for a vapour-side state and flux j0.

    The integral term is frozen per Picard sweep (initialized from the
    j0 = 0 solution) and each sweep solves the per-node algebraic systems
    by damped Newton, all nodes in parallel from the previous sweep; an
    initial marching pass is unnecessary because the potentials are a
    diffeomorphism of the densities, but failed nodes fall back to a
    z-marching pass before giving up.
    """
    rho_minus = np.asarray(rho_minus, dtype=float)
    if np.any(rho_minus <= 0.0):
        raise ValueError("vapour-side densities must be positive")
    if tau <= 0.0:
        raise ValueError("tau must be positive")
    profile = phase_profile(gamma, nz=nz)
    x0 = profile.x0
    slope2 = profile_slope(profile) ** 2
    dz = profile.dz

    mu_minus = thermo.chemical_potentials(mix, rho_minus, -1.0)
    d_rel = (mu_minus[:-1] - mu_minus[-1]) if mix.n_species > 1 \
        else np.zeros((0,))
    denom_minus, _ = _denominator(rho_minus[:, None], kinetic_denominator)
    rhs_n = float(mu_minus[-1] + _kinetic(denom_minus[0], j0))

    r = np.repeat(rho_minus[:, None], x0.size, axis=1)
    integral = np.zeros(x0.size)
    picard = 0
    for picard in range(1, max_picard + 1):
        r_new, norm = _newton_nodes(mix, r, x0, j0, integral, d_rel,
                                    rhs_n, kinetic_denominator)
        if norm.max() > NODE_RESIDUAL_TOL:
            r_new, norm = _march_failed_nodes(mix, r_new, norm, x0, j0, integral,
                                              d_rel, rhs_n, kinetic_denominator,
                                              rho_minus)
        if norm.max() > NODE_RESIDUAL_TOL:
            raise RuntimeError(
                f"inner profile solve failed: worst node residual {norm.max():.3e}")
        shift = float(np.abs(r_new - r).max())
        r = r_new
        if j0 == 0.0:
            break
        rho_tot = r.sum(axis=0)
        contrib = slope2 / rho_tot
        new_integral = (j0 / tau) * np.concatenate(
            ([0.0], np.cumsum(0.5 * (contrib[1:] + contrib[:-1]) * dz)))
        if shift < PICARD_TOL and picard > 1:
            integral = new_integral
            break
        integral = new_integral

    i_j = float(np.trapezoid(slope2 / r.sum(axis=0), profile.z))
    return InnerProfileSolution(
        profile=profile, r=r, j0=float(j0), tau=float(tau),
        kinetic_denominator=kinetic_denominator,
        i_sigma=surface_tension_integral(profile), i_j=i_j,
        picard_iterations=picard, max_node_residual=float(norm.max()))


def _march_failed_nodes(mix, r, norm, x0, j0, integral, d_rel, rhs_n,
                        denom_kind, rho_minus):
    """Sequential re-solve of unconverged nodes, seeded from the last good node."""
    last_good = rho_minus.copy()
    for k in range(x0.size):
        if norm[k] <= NODE_RESIDUAL_TOL:
            last_good = r[:, k]
            continue
        seed = last_good[:, None]
        rk, nk = _newton_nodes(mix, seed, x0[k:k + 1], j0, integral[k:k + 1],
                               d_rel, rhs_n, denom_kind, max_iter=200)
        r[:, k] = rk[:, 0]
        norm[k] = nk[0]
        if norm[k] <= NODE_RESIDUAL_TOL:
            last_good = r[:, k]
    return r, norm


# ----------------------------------------------------------------------
# jump conditions
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class BulkState:
    """One-sided bulk trace at the interface (values extrapolated to it)."""

    rho: np.ndarray
    v_n: float = 0.0
    v_t: float = 0.0
    phi: float = 0.0
    grad_phi_n: float = 0.0
    grad_phi_t: float = 0.0
    grad_mu_rel_n: np.ndarray | None = None   # d/dn of (mu_b - mu_N), b < N

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=float)
        if rho.ndim != 1 or np.any(rho <= 0.0):
            raise ValueError("bulk densities must be a positive vector")
        object.__setattr__(self, "rho", rho)
        g = self.grad_mu_rel_n
        g = np.zeros(rho.size - 1) if g is None else np.asarray(g, dtype=float)
        if g.shape != (rho.size - 1,):
            raise ValueError("grad_mu_rel_n needs one entry per independent species")
        object.__setattr__(self, "grad_mu_rel_n", g)

    @property
    def rho_total(self) -> float:
        return float(self.rho.sum())


@dataclass(frozen=True)
class InterfaceData:
    w_n: float = 0.0           # normal interface speed
    kappa: float = 0.0         # mean curvature (0 for planar)
    j0: float = 0.0            # relative mass flux rho (v_n - w_n)
    j0_mismatch: float = 0.0   # disagreement of the two one-sided values


def interface_from_pair(minus: BulkState, plus: BulkState,
                        w_n: float = 0.0, kappa: float = 0.0) -> InterfaceData:
    j_minus = minus.rho_total * (minus.v_n - w_n)
    j_plus = plus.rho_total * (plus.v_n - w_n)
    return InterfaceData(w_n=w_n, kappa=kappa,
                         j0=0.5 * (j_minus + j_plus),
                         j0_mismatch=abs(j_plus - j_minus))


def _species_flux_n(mix: Mixture, mob: MobilityMatrix | None, state: BulkState):
    """Normal species fluxes rho_a (v_n - w) part left to caller; diffusive part here."""
    if mix.n_species == 1 or mob is None:
        return np.zeros(mix.n_species - 1)
    zeta = charge_factors(mix.masses, mix.charges)
    forces = state.grad_mu_rel_n + zeta * state.grad_phi_n
    return mob.m @ forces


def jump_residuals_uncoupled(mix: Mixture, mob: MobilityMatrix | None,
                             minus: BulkState, plus: BulkState,
                             iface: InterfaceData, gamma: float, tau: float,
                             inner: InnerProfileSolution | None = None) -> dict:
    """Residuals of the interfacial balances in the regime with order-one
    permittivity; zero for data consistent with the limit model.

    Keys: i1 (array over b < N), i2, i2b (array), i3n, i3t, i4, i5, i6, i6b.
    """
    mu_m = thermo.chemical_potentials(mix, minus.rho, -1.0)
    mu_p = thermo.chemical_potentials(mix, plus.rho, 1.0)
    p_m = float(thermo.pressure(mix, minus.rho, -1.0))
    p_p = float(thermo.pressure(mix, plus.rho, 1.0))
    s_m, _ = mix.susceptibility(-1.0)
    s_p, _ = mix.susceptibility(1.0)
    j0 = iface.j0
    if inner is not None:
        i_sigma, i_j = inner.i_sigma, inner.i_j
    else:
        i_sigma = surface_tension_closed_form(gamma)
        if j0 != 0.0:
            raise ValueError("an inner profile solution is required when j0 != 0")
        i_j = 0.0

    out = {}
    out["i1"] = (mu_p[:-1] - mu_p[-1]) - (mu_m[:-1] - mu_m[-1])
    out["i2"] = plus.rho_total * (plus.v_n - iface.w_n) \
        - minus.rho_total * (minus.v_n - iface.w_n)
    adv = (plus.rho[:-1] * (plus.v_n - iface.w_n)
           - minus.rho[:-1] * (minus.v_n - iface.w_n))
    out["i2b"] = adv - (_species_flux_n(mix, mob, plus)
                        - _species_flux_n(mix, mob, minus))
    maxwell_p = 0.5 * mix.eps0 * (1.0 + s_p) \
        * (plus.grad_phi_t**2 - plus.grad_phi_n**2)
    maxwell_m = 0.5 * mix.eps0 * (1.0 + s_m) \
        * (minus.grad_phi_t**2 - minus.grad_phi_n**2)
    out["i3n"] = (j0**2 / plus.rho_total + p_p + maxwell_p) \
        - (j0**2 / minus.rho_total + p_m + maxwell_m) \
        - gamma * iface.kappa * i_sigma
    out["i3t"] = j0 * (plus.v_t - minus.v_t)
    out["i4"] = (0.5 * j0**2 / plus.rho_total**2 + mu_p[-1]) \
        - (0.5 * j0**2 / minus.rho_total**2 + mu_m[-1]) \
        + (j0 / tau) * i_j
    out["i5"] = (1.0 + s_p) * plus.grad_phi_n - (1.0 + s_m) * minus.grad_phi_n
    out["i6"] = plus.phi - minus.phi
    out["i6b"] = plus.grad_phi_t - minus.grad_phi_t
    return out


def jump_residuals_coupled(mix: Mixture, mob: MobilityMatrix | None,
                           minus: BulkState, plus: BulkState,
                           iface: InterfaceData, gamma: float, tau: float,
                           inner: InnerProfileSolution | None = None,
                           eps_scale: float | None = None) -> dict:
    """Residuals in the scaled-permittivity regime with electroneutral bulks.

    Differences from the other regime: no Maxwell contribution in the
    normal stress balance, bulk electroneutrality residuals per side
    (b5_minus / b5_plus), and the displacement jump balancing the layer
    charge: co_i5 = [[(1+s) dphi/dn]] + (e0/eps0) int sum (z_a/m_a) R_a dz
    (orientation: integrating the layer's own potential equation along nu).
    """
    out = jump_residuals_uncoupled(mix, mob, minus, plus, iface,
                                   gamma, tau, inner=inner)
    s_m, _ = mix.susceptibility(-1.0)
    s_p, _ = mix.susceptibility(1.0)
    j0 = iface.j0
    p_m = float(thermo.pressure(mix, minus.rho, -1.0))
    p_p = float(thermo.pressure(mix, plus.rho, 1.0))
    out.pop("i5")
    out.pop("i6b")
    out["i3n"] = (j0**2 / plus.rho_total + p_p) \
        - (j0**2 / minus.rho_total + p_m) \
        - gamma * iface.kappa * (inner.i_sigma if inner is not None
                                 else surface_tension_closed_form(gamma))
    zm = mix.charges / mix.masses
    out["b5_minus"] = float(zm @ minus.rho)
    out["b5_plus"] = float(zm @ plus.rho)
    if inner is not None:
        layer_charge = float(np.trapezoid((zm[:, None] * inner.r).sum(axis=0),
                                          inner.profile.z))
    else:
        layer_charge = 0.0
    out["co_i5"] = ((1.0 + s_p) * plus.grad_phi_n
                    - (1.0 + s_m) * minus.grad_phi_n) \
        + (mix.e0 / mix.eps0) * layer_charge
    out["co_i6"] = plus.phi - minus.phi
    zeta = charge_factors(mix.masses, mix.charges)
    cur_p = zeta @ _species_flux_n(mix, mob, plus) if mix.n_species > 1 else 0.0
    cur_m = zeta @ _species_flux_n(mix, mob, minus) if mix.n_species > 1 else 0.0
    out["charge_current"] = float(cur_p - cur_m)
    return out


# ----------------------------------------------------------------------
# delta convergence study
# ----------------------------------------------------------------------

@dataclass
class InterfaceMeasurement:
    x_star: float
    nu_sign: float             # +1 if liquid lies at larger x
    minus: BulkState
    plus: BulkState
    iface: InterfaceData


@dataclass
class StudyRow:
    delta: float
    residuals: dict
    orders: dict = field(default_factory=dict)
    j0: float = 0.0
    j0_converged: bool = True
    measurement: InterfaceMeasurement | None = None


def _crossing(x: np.ndarray, chi: np.ndarray) -> tuple[float, float]:
    """Interface position by linear interpolation of the chi = 0 crossing."""
    sign = np.sign(chi)
    idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    if idx.size == 0:
        raise RuntimeError("no interface: chi does not change sign")
    i = int(idx[0])
    x_star = x[i] + (x[i + 1] - x[i]) * (0.0 - chi[i]) / (chi[i + 1] - chi[i])
    nu_sign = 1.0 if chi[i + 1] > chi[i] else -1.0
    return float(x_star), nu_sign


def _band_fit(x: np.ndarray, values: np.ndarray, mask: np.ndarray,
              x_star: float) -> tuple[float, float]:
    """Least-squares line over the band; returns (value at x_star, slope)."""
    coeff = np.polyfit(x[mask] - x_star, values[mask], 1)
    return float(coeff[1]), float(coeff[0])


def measure_interface(sys: System, traj: Trajectory, *, band_lo: float = 5.0,
                      band_width: float = 3.0) -> InterfaceMeasurement:
    """Extract bulk traces by linear extrapolation from beyond band_lo*delta."""
    grid = sys.grid
    x = grid.centers
    state = traj.snapshots[-1]
    x_star, nu_sign = _crossing(x, state.chi)
    if len(traj.snapshots) >= 2:
        prev = traj.snapshots[-2]
        x_prev, _ = _crossing(x, prev.chi)
        dt = state.t - prev.t
        w_n = nu_sign * (x_star - x_prev) / dt if dt > 0.0 else 0.0
    else:
        w_n = 0.0

    d = nu_sign * (x - x_star)          # signed distance along nu
    lo = band_lo * sys.delta
    hi = (band_lo + band_width) * sys.delta
    bands = {}
    for side, mask in (("plus", (d >= lo) & (d <= hi)),
                       ("minus", (d <= -lo) & (d >= -hi))):
        if mask.sum() < 4:
            raise RuntimeError(
                f"trace band on the {side} side has {int(mask.sum())} cells; "
                "domain too small for this delta")
        bands[side] = mask

    mu = thermo.chemical_potentials(sys.mixture, state.rho, state.chi)
    v = state.velocity
    states = {}
    for side in ("plus", "minus"):
        mask = bands[side]
        rho_tr = np.array([_band_fit(x, state.rho[a], mask, x_star)[0]
                           for a in range(sys.mixture.n_species)])
        if np.any(rho_tr <= 0.0):
            raise RuntimeError("extrapolated trace densities are not positive")
        v_tr, _ = _band_fit(x, v, mask, x_star)
        phi_tr, phi_slope = _band_fit(x, state.phi, mask, x_star)
        if sys.mixture.n_species > 1:
            mu_rel = mu[:-1] - mu[-1]
            gmu = np.array([_band_fit(x, mu_rel[b], mask, x_star)[1]
                            for b in range(sys.mixture.n_species - 1)])
        else:
            gmu = np.zeros(0)
        states[side] = BulkState(
            rho=rho_tr, v_n=nu_sign * v_tr, phi=phi_tr,
            grad_phi_n=nu_sign * phi_slope,
            grad_mu_rel_n=nu_sign * gmu)
    iface = interface_from_pair(states["minus"], states["plus"], w_n=w_n)
    return InterfaceMeasurement(x_star, nu_sign, states["minus"],
                                states["plus"], iface)


def _residual_norms(res: dict) -> dict:
    out = {}
    for key, val in res.items():
        arr = np.atleast_1d(np.asarray(val, dtype=float))
        out[key] = float(np.abs(arr).max()) if arr.size else 0.0
    return out


def delta_convergence_study(case_factory, deltas, *, nz: int = 4001,
                            band_lo: float = 5.0, band_width: float = 3.0) -> list[StudyRow]:
    """Run case_factory(delta) -> (System, SimState, StepConfig) per delta,
    measure the interface and tabulate jump-condition residual norms with
    empirical orders between consecutive delta values.
    """
    deltas = list(deltas)
    if sorted(deltas, reverse=True) != deltas:
        raise ValueError("deltas must be strictly decreasing")
    rows: list[StudyRow] = []
    for delta in deltas:
        sys, state0, cfg = case_factory(delta)
        if sys.delta != delta:
            raise ValueError("case_factory returned a system with mismatched delta")
        traj = run(sys, state0, cfg)
        meas = measure_interface(sys, traj, band_lo=band_lo,
                                 band_width=band_width)
        j0 = meas.iface.j0
        converged = True
        try:
            inner = solve_inner_profiles(
                sys.mixture, meas.minus.rho, j0, sys.gamma, sys.tau, nz=nz)
        except RuntimeError:
            converged = False
            inner = solve_inner_profiles(
                sys.mixture, meas.minus.rho, 0.0, sys.gamma, sys.tau, nz=nz)
            meas.iface = InterfaceData(meas.iface.w_n, meas.iface.kappa,
                                       0.0, meas.iface.j0_mismatch)
        if sys.regime == "uncoupled":
            res = jump_residuals_uncoupled(sys.mixture, sys.mobility,
                                           meas.minus, meas.plus, meas.iface,
                                           sys.gamma, sys.tau, inner=inner)
        else:
            res = jump_residuals_coupled(sys.mixture, sys.mobility,
                                         meas.minus, meas.plus, meas.iface,
                                         sys.gamma, sys.tau, inner=inner)
        rows.append(StudyRow(delta=delta, residuals=_residual_norms(res),
                             j0=j0, j0_converged=converged, measurement=meas))
    for prev, cur in zip(rows[:-1], rows[1:]):
        ratio = np.log(prev.delta / cur.delta)
        for key in cur.residuals:
            r_prev, r_cur = prev.residuals[key], cur.residuals[key]
            if r_prev > 0.0 and r_cur > 0.0:
                cur.orders[key] = float(np.log(r_prev / r_cur) / ratio)
            else:
                cur.orders[key] = float("nan")
    return rows
