"""Diffusive transport closure: mobility matrix, driving forces, fluxes.

Diffusion is driven, for each independent species b < N, by

    P_b = grad(mu_b - mu_N) + (z_b/m_b - z_N/m_N) grad(phi)

(species N is the eliminated reference; its flux balances the others).
Fluxes are J_a = - sum_b M_ab P_b with a symmetric positive definite
mobility matrix M of size (N-1) x (N-1).  Any admissible M factors as
B^T diag(Mtilde) B with Mtilde > 0, which is also the guaranteed-valid
construction route offered here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SYMMETRY_TOL = 1.0e-12


@dataclass(frozen=True)
class MobilityMatrix:
    """Symmetric positive definite mobility of size (N-1) x (N-1)."""

    m: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise ValueError("mobility must be a nonempty square matrix")
        scale = np.abs(m).max()
        if not np.all(np.abs(m - m.T) <= SYMMETRY_TOL * max(scale, 1.0)):
            raise ValueError("mobility must be symmetric")
        try:
            np.linalg.cholesky(m)
        except np.linalg.LinAlgError:
            raise ValueError("mobility must be positive definite") from None
        object.__setattr__(self, "m", 0.5 * (m + m.T))

    @property
    def size(self) -> int:
        return self.m.shape[0]


def mobility_from_factors(b, mtilde) -> MobilityMatrix:
    """Build M = B^T diag(Mtilde) B; positive definite iff all Mtilde > 0."""
    b = np.asarray(b, dtype=float)
    mtilde = np.asarray(mtilde, dtype=float)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError("factor B must be square")
    if mtilde.shape != (b.shape[0],) or np.any(mtilde < 0.0):
        raise ValueError("Mtilde must be a nonnegative vector matching B")
    return MobilityMatrix(b.T @ (mtilde[:, None] * b))


def diffusion_driving_forces(grad_mu_rel, zeta, grad_phi):
    """P_b = grad(mu_b - mu_N) + zeta_b grad(phi) for the N-1 independent species.

    grad_mu_rel has shape (N-1,) or (N-1, M); zeta holds the charge factors
    z_b/m_b - z_N/m_N; grad_phi a scalar or (M,) array.
    """
    grad_mu_rel = np.asarray(grad_mu_rel, dtype=float)
    zeta = np.asarray(zeta, dtype=float)
    if zeta.shape != (grad_mu_rel.shape[0],):
        raise ValueError("zeta must have one entry per independent species")
    cols = zeta.reshape((zeta.size,) + (1,) * (grad_mu_rel.ndim - 1))
    return grad_mu_rel + cols * np.asarray(grad_phi, dtype=float)


def charge_factors(masses, charges) -> np.ndarray:
    """zeta_b = z_b/m_b - z_N/m_N for b < N."""
    masses = np.asarray(masses, dtype=float)
    charges = np.asarray(charges, dtype=float)
    zm = charges / masses
    return zm[:-1] - zm[-1]


def diffusion_fluxes(mob: MobilityMatrix, forces):
    """All N species fluxes from the N-1 driving forces.

    Returns shape (N,) or (N, M): J_a = - sum_b M_ab P_b for a < N and
    J_N = - sum_{a<N} J_a, so the fluxes sum to zero identically.
    """
    forces = np.asarray(forces, dtype=float)
    if forces.shape[0] != mob.size:
        raise ValueError("forces must have one row per independent species")
    j_ind = -np.tensordot(mob.m, forces, axes=(1, 0))
    j_last = -j_ind.sum(axis=0, keepdims=True)
    return np.concatenate([j_ind, j_last], axis=0)


def diffusion_entropy_production(mob: MobilityMatrix, forces):
    """Quadratic form sum_ab M_ab P_a P_b >= 0, summed over species axes."""
    forces = np.asarray(forces, dtype=float)
    return np.einsum("ab,a...,b...->...", mob.m, forces, forces)
