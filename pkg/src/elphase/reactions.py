"""Mass-action chemistry with affinity-driven rates.

A reaction i converts reactants with stoichiometric coefficients a_a^i into
products with coefficients b_a^i; the signed net coefficients are
gamma_a^i = b_a^i - a_a^i.  Admissible networks conserve both charge and
mass per reaction:

    sum_a z_a gamma_a^i = 0        (exact, integer arithmetic)
    sum_a m_a gamma_a^i = 0        (within 1e-12)

The chemical affinity of reaction i at chemical potentials mu is
A_i = sum_b m_b gamma_b^i mu_b and the mass production of species a is

    r_a = sum_i m_a gamma_a^i M_r^i (1 - exp(A_i))

with positive rate constants M_r^i.  The associated entropy production
sum_i M_r^i (1 - exp(A_i)) (-A_i) is nonnegative term by term since
(1 - e^x) and -x share their sign.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# exp(A) overflows float64 well before this; reject instead of returning inf
AFFINITY_LIMIT = 500.0

MASS_BALANCE_TOL = 1.0e-12


@dataclass(frozen=True)
class ReactionNetwork:
    """Validated set of reactions over the species of a mixture.

    forward and backward hold nonnegative integer coefficients with shape
    (n_reactions, n_species); rates the positive constants M_r^i.  An empty
    network (zero rows) is allowed and produces no source terms.
    """

    forward: np.ndarray
    backward: np.ndarray
    rates: np.ndarray
    masses: np.ndarray
    charges: np.ndarray

    def __post_init__(self):
        fwd = np.asarray(self.forward, dtype=int)
        bwd = np.asarray(self.backward, dtype=int)
        rates = np.asarray(self.rates, dtype=float)
        m = np.asarray(self.masses, dtype=float)
        z = np.asarray(self.charges, dtype=float)
        if fwd.ndim != 2 or fwd.shape[1] != m.size:
            raise ValueError("forward coefficients must be (n_reactions, n_species)")
        if bwd.shape != fwd.shape:
            raise ValueError("backward coefficients must match forward in shape")
        if rates.shape != (fwd.shape[0],):
            raise ValueError("one rate constant per reaction required")
        if np.any(fwd < 0) or np.any(bwd < 0):
            raise ValueError("stoichiometric coefficients must be nonnegative")
        if np.any(rates <= 0.0):
            raise ValueError("rate constants must be positive")
        gamma = bwd - fwd
        # charge numbers are integers in admissible inputs: exact check
        charge_defect = gamma @ z
        if np.any(charge_defect != 0.0):
            raise ValueError(f"reaction does not conserve charge: {charge_defect}")
        mass_defect = gamma @ m
        if np.any(np.abs(mass_defect) > MASS_BALANCE_TOL):
            raise ValueError(f"reaction does not conserve mass: {mass_defect}")
        object.__setattr__(self, "forward", fwd)
        object.__setattr__(self, "backward", bwd)
        object.__setattr__(self, "rates", rates)
        object.__setattr__(self, "masses", m)
        object.__setattr__(self, "charges", z)

    @property
    def n_reactions(self) -> int:
        return self.forward.shape[0]

    @property
    def gamma(self) -> np.ndarray:
        return self.backward - self.forward


def empty_network(masses, charges) -> ReactionNetwork:
    n = np.asarray(masses).size
    zero = np.zeros((0, n), dtype=int)
    return ReactionNetwork(zero, zero.copy(), np.zeros(0), masses, charges)


def affinities(net: ReactionNetwork, mu):
    """A_i = sum_b m_b gamma_b^i mu_b, vectorized over trailing axes of mu."""
    mu = np.asarray(mu, dtype=float)
    weighted = net.gamma * net.masses[None, :]          # (R, N)
    return np.tensordot(weighted, mu, axes=(1, 0))      # (R,) or (R, M)


def mass_production(net: ReactionNetwork, mu):
    """Species mass sources r_a; shape matches mu.

    Raises on affinity overflow rather than silently saturating: an
    affinity beyond AFFINITY_LIMIT means the state is far outside the
    regime where exp(A_i) is representable.
    """
    mu = np.asarray(mu, dtype=float)
    if net.n_reactions == 0:
        return np.zeros_like(mu)
    aff = affinities(net, mu)
    if np.any(aff > AFFINITY_LIMIT):
        raise FloatingPointError("reaction affinity overflow")
    speed = net.rates.reshape((net.n_reactions,) + (1,) * (aff.ndim - 1)) \
        * (1.0 - np.exp(aff))                           # (R,) or (R, M)
    weighted = net.gamma * net.masses[None, :]          # (R, N)
    return np.tensordot(weighted.T, speed, axes=(1, 0))


def reaction_entropy_production(net: ReactionNetwork, mu):
    """sum_i M_r^i (1 - exp(A_i)) (-A_i), nonnegative for admissible states."""
    mu = np.asarray(mu, dtype=float)
    if net.n_reactions == 0:
        return np.zeros(mu.shape[1:])
    aff = affinities(net, mu)
    if np.any(aff > AFFINITY_LIMIT):
        raise FloatingPointError("reaction affinity overflow")
    rates = net.rates.reshape((net.n_reactions,) + (1,) * (aff.ndim - 1))
    return (rates * (1.0 - np.exp(aff)) * (-aff)).sum(axis=0)
