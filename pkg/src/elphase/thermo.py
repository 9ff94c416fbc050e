"""Bulk thermodynamics of a compressible N-species mixture with two phases.

The mixture carries partial mass densities rho_alpha (strictly positive),
particle masses m_alpha and signed charge numbers z_alpha.  A scalar order
parameter chi in [-1, 1] blends a liquid branch (chi = +1) and a vapour
branch (chi = -1) of the pure-phase free energy through a smooth
interpolant h.  Per phase P the free energy density is

    rho psi_P = sum_a rho_a psi_a^R
              + (K_P - p^R) (1 - n/n^R)
              + K_P (n/n^R) ln(n/n^R)
              + kT sum_a n_a ln(n_a/n)

with number densities n_a = rho_a / m_a and n = sum_a n_a: an isotropic
elastic response around the reference state n = n^R plus ideal entropy of
mixing.  Chemical potentials are mass-specific partial derivatives
mu_a = d(rho f)/d(rho_a); the pressure follows from the Euler relation
p = -rho f + sum_a rho_a mu_a and reduces to p^R + K(chi) (n/n^R - 1).

Notation
--------
rho   : array (N,) or (N, M) of partial densities, species along axis 0
chi   : scalar or array (M,) order parameter
h     : quintic interpolant, h(-1) = 0, h(+1) = 1, C^2 across the clamps
W     : quartic double well W(chi) = (chi^2 - 1)^2 with minima at +-1
s     : electric susceptibility blended as h s_L + (1 - h) s_V
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


# ----------------------------------------------------------------------
# double well and interpolant
# ----------------------------------------------------------------------

def double_well(chi):
    """Return (W, W', W'') of the quartic double well (chi^2 - 1)^2."""
    chi = np.asarray(chi, dtype=float)
    q = chi * chi - 1.0
    w = q * q
    dw = 4.0 * chi * q
    ddw = 4.0 * (3.0 * chi * chi - 1.0)
    return w, dw, ddw


def interpolation(chi):
    """Quintic smoothstep h and derivatives, clamped outside [-1, 1].

    h rises from 0 at chi = -1 to 1 at chi = +1 with h(0) = 1/2 and
    h' = h'' = 0 at both ends, so all chi-derivatives of blended
    quantities vanish identically in the pure phases.
    """
    chi = np.asarray(chi, dtype=float)
    u = np.clip(0.5 * (chi + 1.0), 0.0, 1.0)
    h = u * u * u * (10.0 + u * (-15.0 + 6.0 * u))
    dh = 15.0 * (u * (u - 1.0)) ** 2
    ddh = 15.0 * u * (u - 1.0) * (2.0 * u - 1.0)
    return h, dh, ddh


# ----------------------------------------------------------------------
# parameter container
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Mixture:
    """Material constants of the two-phase mixture (all nondimensional).

    masses, charges, psi_ref have one entry per species.  k_liquid and
    k_vapor are the bulk moduli of the elastic response, n_ref and p_ref
    the common reference number density and pressure, kT the thermal
    energy.  s_liquid / s_vapor are the electric susceptibilities of the
    pure phases, eps0 the vacuum permittivity and e0 the elementary
    charge in the chosen units.
    """

    masses: np.ndarray
    charges: np.ndarray
    psi_ref: np.ndarray
    k_liquid: float
    k_vapor: float
    n_ref: float = 1.0
    p_ref: float = 1.0
    kT: float = 1.0
    s_liquid: float = 0.0
    s_vapor: float = 0.0
    eps0: float = 1.0
    e0: float = 1.0

    def __post_init__(self):
        m = np.asarray(self.masses, dtype=float)
        z = np.asarray(self.charges, dtype=float)
        pr = np.asarray(self.psi_ref, dtype=float)
        if m.ndim != 1 or m.size == 0:
            raise ValueError("masses must be a nonempty 1d array")
        if z.shape != m.shape or pr.shape != m.shape:
            raise ValueError("charges and psi_ref must match masses in length")
        if np.any(m <= 0.0):
            raise ValueError("species masses must be positive")
        for name in ("k_liquid", "k_vapor", "n_ref", "kT", "eps0", "e0"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        if self.s_liquid <= -1.0 or self.s_vapor <= -1.0:
            raise ValueError("susceptibilities must keep 1 + s positive")
        object.__setattr__(self, "masses", m)
        object.__setattr__(self, "charges", z)
        object.__setattr__(self, "psi_ref", pr)

    @property
    def n_species(self) -> int:
        return self.masses.size

    def susceptibility(self, chi):
        """Blended susceptibility s(chi) and its derivative s'(chi)."""
        h, dh, _ = interpolation(chi)
        s = h * self.s_liquid + (1.0 - h) * self.s_vapor
        ds = dh * (self.s_liquid - self.s_vapor)
        return s, ds


def _col(vec: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Reshape a per-species vector to broadcast against rho (species axis 0)."""
    return vec.reshape((vec.size,) + (1,) * (rho.ndim - 1))


def _check_state(mix: Mixture, rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    if rho.shape[0] != mix.n_species:
        raise ValueError("rho must have one row per species")
    if np.any(rho <= 0.0):
        raise ValueError("partial densities must be strictly positive")
    return rho


# ----------------------------------------------------------------------
# free energy, chemical potentials, pressure
# ----------------------------------------------------------------------

def phase_free_energy(mix: Mixture, rho, phase: str):
    """Pure-phase free energy density rho psi_P for phase 'liquid' or 'vapor'."""
    rho = _check_state(mix, rho)
    if phase == "liquid":
        k = mix.k_liquid
    elif phase == "vapor":
        k = mix.k_vapor
    else:
        raise ValueError("phase must be 'liquid' or 'vapor'")
    m = _col(mix.masses, rho)
    n_a = rho / m
    n = n_a.sum(axis=0)
    x = n / mix.n_ref
    elastic = (k - mix.p_ref) * (1.0 - x) + k * x * np.log(x)
    mixing = mix.kT * (n_a * np.log(n_a / n)).sum(axis=0)
    return (rho * _col(mix.psi_ref, rho)).sum(axis=0) + elastic + mixing


def free_energy_density(mix: Mixture, rho, chi):
    """Interpolated bulk free energy rho f = h rho psi_L + (1 - h) rho psi_V."""
    h, _, _ = interpolation(chi)
    return (h * phase_free_energy(mix, rho, "liquid")
            + (1.0 - h) * phase_free_energy(mix, rho, "vapor"))


def blended_modulus(mix: Mixture, chi):
    """Interpolated bulk modulus K(chi) = h K_L + (1 - h) K_V."""
    h, _, _ = interpolation(chi)
    return h * mix.k_liquid + (1.0 - h) * mix.k_vapor


def chemical_potentials(mix: Mixture, rho, chi):
    """Mass-specific chemical potentials mu_a = d(rho f)/d(rho_a).

    Closed form for this free energy:

        mu_a = psi_a^R + (1/m_a) [ (p^R - K)/n^R
                                   + (K/n^R)(ln(n/n^R) + 1)
                                   + kT ln(n_a/n) ]

    with K = K(chi) the blended modulus.
    """
    rho = _check_state(mix, rho)
    m = _col(mix.masses, rho)
    n_a = rho / m
    n = n_a.sum(axis=0)
    k = blended_modulus(mix, chi)
    common = (mix.p_ref - k) / mix.n_ref + (k / mix.n_ref) * (np.log(n / mix.n_ref) + 1.0)
    return _col(mix.psi_ref, rho) + (common + mix.kT * np.log(n_a / n)) / m


def pressure(mix: Mixture, rho, chi):
    """Thermodynamic pressure by the Euler relation p = -rho f + sum rho_a mu_a."""
    rho = _check_state(mix, rho)
    mu = chemical_potentials(mix, rho, chi)
    return (rho * mu).sum(axis=0) - free_energy_density(mix, rho, chi)


def dfree_dchi(mix: Mixture, rho, chi):
    """Partial derivative of rho f with respect to chi at fixed densities."""
    _, dh, _ = interpolation(chi)
    return dh * (phase_free_energy(mix, rho, "liquid")
                 - phase_free_energy(mix, rho, "vapor"))


def free_charge_density(mix: Mixture, rho):
    """Free charge density n^F = e0 sum_a (z_a/m_a) rho_a."""
    rho = _check_state(mix, rho)
    zm = _col(mix.charges / mix.masses, rho)
    return mix.e0 * (zm * rho).sum(axis=0)


def mu_jacobian(mix: Mixture, rho, chi):
    """Jacobian d mu_a / d rho_b, shape (..., N, N), symmetric positive definite.

    For states rho of shape (N,) returns (N, N); for fields (N, M) returns
    (M, N, N) so batched linear solves can consume it directly.
    """
    rho = _check_state(mix, rho)
    m = mix.masses
    n_a = rho / _col(m, rho)
    n = n_a.sum(axis=0)
    k = blended_modulus(mix, chi)
    coeff = (k / mix.n_ref - mix.kT) / n          # scalar or (M,)
    inv_m = 1.0 / m
    outer = inv_m[:, None] * inv_m[None, :]       # (N, N)
    diag = mix.kT / (rho * _col(m, rho))          # (N,) or (N, M)
    if rho.ndim == 1:
        return coeff * outer + np.diag(diag)
    jac = coeff[:, None, None] * outer[None, :, :]
    idx = np.arange(mix.n_species)
    jac[:, idx, idx] += diag.T
    return jac
