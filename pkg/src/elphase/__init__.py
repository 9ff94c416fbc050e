"""1d diffuse-interface model of a compressible, reacting electrolyte.

The package couples species transport, momentum balance, a phase order
parameter and the electrostatic potential on a staggered-free cell grid,
and ships a sharp-interface toolkit that solves the internal layer
profiles and checks the interfacial balances against resolved runs.
"""

from .config import ConfigError, PRESETS, build_simulation, load_config
from .evolution import SimState, StepConfig, System, run, timestep
from .grid import BC, Grid, dirichlet, neumann
from .reactions import ReactionNetwork, empty_network
from .sharp_interface import (delta_convergence_study, jump_residuals_coupled,
                              jump_residuals_uncoupled, phase_profile,
                              solve_inner_profiles)
from .thermo import Mixture, chemical_potentials, free_energy_density, pressure
from .transport import MobilityMatrix, mobility_from_factors

__version__ = "0.1.0"

__all__ = [
    "BC", "ConfigError", "Grid", "Mixture", "MobilityMatrix", "PRESETS",
    "ReactionNetwork", "SimState", "StepConfig", "System",
    "build_simulation", "chemical_potentials", "delta_convergence_study",
    "dirichlet", "empty_network", "free_energy_density",
    "jump_residuals_coupled", "jump_residuals_uncoupled", "load_config",
    "mobility_from_factors", "neumann", "phase_profile", "pressure", "run",
    "solve_inner_profiles", "timestep",
]
