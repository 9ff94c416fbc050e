"""Flat text configuration: parsing, presets, and simulation builders.

The format is one `key = value` pair per line, `#` comments, values either
scalars, comma-separated vectors, or semicolon-separated matrix rows.  Keys
are namespaced with dots; unknown keys are rejected so typos fail loudly.
The same dictionary drives single runs, the interface-width study (which
rescales the cell count to keep the layer resolution fixed) and the layer
profile solver.
"""

from __future__ import annotations

import numpy as np

from .evolution import SimState, StepConfig, System
from .grid import BC, NOFLUX, Grid, dirichlet, neumann
from .reactions import ReactionNetwork, empty_network
from .thermo import Mixture, interpolation
from .transport import MobilityMatrix, mobility_from_factors


class ConfigError(ValueError):
    """Malformed or inconsistent configuration (usage error, exit code 2)."""


# ----------------------------------------------------------------------
# parsing
# ----------------------------------------------------------------------

def parse_config(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key '{key}'")
        out[key] = value
    return out


def _get(cfg: dict, key: str, default=None, required=False) -> str | None:
    if key in cfg:
        return cfg[key]
    if required:
        raise ConfigError(f"missing required config key '{key}'")
    return default


def _float(cfg, key, default=None, required=False) -> float | None:
    raw = _get(cfg, key, default=None, required=required)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"config key '{key}': not a number: {raw!r}") from None


def _int(cfg, key, default=None, required=False) -> int | None:
    raw = _get(cfg, key, default=None, required=required)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"config key '{key}': not an integer: {raw!r}") from None


def _vec(cfg, key, default=None, required=False) -> np.ndarray | None:
    raw = _get(cfg, key, default=None, required=required)
    if raw is None:
        return default
    try:
        return np.array([float(tok) for tok in raw.split(",")])
    except ValueError:
        raise ConfigError(f"config key '{key}': not a number list: {raw!r}") from None


def _matrix(cfg, key) -> np.ndarray | None:
    raw = _get(cfg, key)
    if raw is None:
        return None
    try:
        rows = [[float(tok) for tok in row.split(",")] for row in raw.split(";")]
        return np.array(rows)
    except ValueError:
        raise ConfigError(f"config key '{key}': not a matrix: {raw!r}") from None


def _bc(cfg, key) -> BC:
    raw = _get(cfg, key, default="noflux")
    parts = raw.split()
    kind = parts[0]
    if kind == "noflux":
        return NOFLUX
    if kind in ("dirichlet", "neumann"):
        if len(parts) != 2:
            raise ConfigError(f"config key '{key}': expected '{kind} <value>'")
        try:
            value = float(parts[1])
        except ValueError:
            raise ConfigError(f"config key '{key}': bad value {parts[1]!r}") from None
        return dirichlet(value) if kind == "dirichlet" else neumann(value)
    raise ConfigError(f"config key '{key}': unknown boundary kind {kind!r}")


_KNOWN_PREFIXES = (
    "species.", "phase.", "phasefield.", "viscosity.", "regime.", "mobility.",
    "reactions.", "grid.", "bc.", "init.", "step.", "profile.", "study.",
    "output.",
)


def validate_keys(cfg: dict) -> None:
    for key in cfg:
        if not key.startswith(_KNOWN_PREFIXES):
            raise ConfigError(f"unknown config key '{key}'")


# ----------------------------------------------------------------------
# builders
# ----------------------------------------------------------------------

def build_mixture(cfg: dict) -> Mixture:
    masses = _vec(cfg, "species.masses", required=True)
    charges = _vec(cfg, "species.charges", required=True)
    psi_ref = _vec(cfg, "species.psi_ref",
                   default=np.zeros(masses.size))
    try:
        return Mixture(
            masses=masses, charges=charges, psi_ref=psi_ref,
            k_liquid=_float(cfg, "phase.k_liquid", required=True),
            k_vapor=_float(cfg, "phase.k_vapor", required=True),
            n_ref=_float(cfg, "phase.n_ref", 1.0),
            p_ref=_float(cfg, "phase.p_ref", 1.0),
            kT=_float(cfg, "phase.kT", 1.0),
            s_liquid=_float(cfg, "phase.s_liquid", 0.0),
            s_vapor=_float(cfg, "phase.s_vapor", 0.0),
            eps0=_float(cfg, "phase.eps0", 1.0),
            e0=_float(cfg, "phase.e0", 1.0))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def build_network(cfg: dict, mix: Mixture) -> ReactionNetwork:
    count = _int(cfg, "reactions.count", 0)
    if count == 0:
        return empty_network(mix.masses, mix.charges)
    fwd, bwd, rates = [], [], []
    for i in range(1, count + 1):
        fwd.append(_vec(cfg, f"reactions.{i}.forward", required=True))
        bwd.append(_vec(cfg, f"reactions.{i}.backward", required=True))
        rates.append(_float(cfg, f"reactions.{i}.rate", required=True))
    try:
        return ReactionNetwork(np.array(fwd), np.array(bwd), np.array(rates),
                               mix.masses, mix.charges)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def build_mobility(cfg: dict, mix: Mixture) -> MobilityMatrix | None:
    direct = _matrix(cfg, "mobility.matrix")
    b = _matrix(cfg, "mobility.factors_b")
    mtilde = _vec(cfg, "mobility.factors_mtilde")
    if mix.n_species == 1:
        if direct is not None or b is not None:
            raise ConfigError("mobility given for a single-species system")
        return None
    try:
        if direct is not None:
            if b is not None or mtilde is not None:
                raise ConfigError("give mobility.matrix or factors, not both")
            mob = MobilityMatrix(direct)
        elif b is not None and mtilde is not None:
            mob = mobility_from_factors(b, mtilde)
        else:
            raise ConfigError("mobility.matrix or mobility.factors_* required")
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if mob.size != mix.n_species - 1:
        raise ConfigError("mobility size must be n_species - 1")
    return mob


def build_system(cfg: dict, delta: float | None = None,
                 cells: int | None = None) -> System:
    mix = build_mixture(cfg)
    if delta is None:
        delta = _float(cfg, "regime.delta", required=True)
    if cells is None:
        cells = _int(cfg, "grid.cells", required=True)
    grid = Grid(n=cells,
                x_lo=_float(cfg, "grid.x_lo", 0.0),
                x_hi=_float(cfg, "grid.x_hi", 1.0))
    try:
        return System(
            grid=grid, mixture=mix,
            network=build_network(cfg, mix),
            mobility=build_mobility(cfg, mix),
            gamma=_float(cfg, "phasefield.gamma", 2.0),
            tau=_float(cfg, "phasefield.tau", 1.0),
            lam=_float(cfg, "viscosity.lam", 1.0),
            eta=_float(cfg, "viscosity.eta", 1.0),
            delta=delta,
            regime=_get(cfg, "regime.kind", "uncoupled"),
            bc_phi_lo=_bc(cfg, "bc.phi_lo"),
            bc_phi_hi=_bc(cfg, "bc.phi_hi"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def build_initial_state(cfg: dict, sys: System) -> SimState:
    kind = _get(cfg, "init.kind", required=True)
    x = sys.grid.centers
    n = sys.grid.n
    nsp = sys.mixture.n_species
    if kind == "uniform":
        rho0 = _vec(cfg, "init.rho", required=True)
        if rho0.size != nsp:
            raise ConfigError("init.rho needs one entry per species")
        chi0 = _float(cfg, "init.chi", 1.0)
        rho = np.repeat(rho0[:, None], n, axis=1)
        chi = np.full(n, chi0)
    elif kind == "interface":
        rho_liq = _vec(cfg, "init.rho_liquid", required=True)
        rho_vap = _vec(cfg, "init.rho_vapor", required=True)
        if rho_liq.size != nsp or rho_vap.size != nsp:
            raise ConfigError("init.rho_liquid/vapor need one entry per species")
        x_if = _float(cfg, "init.interface_x", required=True)
        a = np.sqrt(2.0 / sys.gamma)
        chi = np.tanh(a * (x - x_if) / sys.delta)
        h, _, _ = interpolation(chi)
        rho = h[None, :] * rho_liq[:, None] + (1.0 - h[None, :]) * rho_vap[:, None]
    else:
        raise ConfigError(f"init.kind must be 'uniform' or 'interface', got {kind!r}")
    if np.any(rho <= 0.0):
        raise ConfigError("initial densities must be positive")
    state = SimState(rho=rho, mom=np.zeros(n), chi=chi, phi=np.zeros(n), t=0.0)
    state.check(sys)
    return state


def build_step_config(cfg: dict) -> StepConfig:
    sc = StepConfig(
        cfl=_float(cfg, "step.cfl", 0.4),
        max_dt=_float(cfg, "step.max_dt", 1.0e-3),
        t_end=_float(cfg, "step.t_end", 1.0),
        snapshot_interval=_float(cfg, "step.snapshot_interval", 0.1),
        max_steps=_int(cfg, "step.max_steps", 2_000_000))
    if sc.cfl <= 0.0 or sc.cfl > 1.0:
        raise ConfigError("step.cfl must lie in (0, 1]")
    if sc.max_dt <= 0.0 or sc.t_end < 0.0 or sc.snapshot_interval <= 0.0:
        raise ConfigError("step.* time quantities must be positive")
    return sc


def build_simulation(cfg: dict):
    validate_keys(cfg)
    sys = build_system(cfg)
    return sys, build_initial_state(cfg, sys), build_step_config(cfg)


def build_case_factory(cfg: dict):
    """factory(delta) -> (System, SimState, StepConfig) for the width study.

    The cell count scales with 1/delta so the layer stays equally resolved;
    everything else (domain, materials, end time) is held fixed.
    """
    validate_keys(cfg)
    base_delta = _float(cfg, "regime.delta", required=True)
    base_cells = _int(cfg, "grid.cells", required=True)

    def factory(delta: float):
        cells = max(base_cells, int(round(base_cells * base_delta / delta)))
        sys = build_system(cfg, delta=delta, cells=cells)
        return sys, build_initial_state(cfg, sys), build_step_config(cfg)

    return factory


def study_deltas(cfg: dict, override: str | None = None) -> list[float]:
    if override is not None:
        try:
            deltas = [float(tok) for tok in override.split(",")]
        except ValueError:
            raise ConfigError(f"--deltas: not a number list: {override!r}") from None
    else:
        vec = _vec(cfg, "study.deltas", default=np.array([0.1, 0.05, 0.025]))
        deltas = [float(d) for d in vec]
    if len(deltas) < 2 or any(d <= 0.0 for d in deltas):
        raise ConfigError("study needs at least two positive deltas")
    if sorted(deltas, reverse=True) != deltas:
        raise ConfigError("deltas must be strictly decreasing")
    return deltas


def resolved_config(cfg: dict) -> dict[str, str]:
    """Configuration echo for meta.txt: inputs exactly as parsed."""
    return dict(sorted(cfg.items()))


# ----------------------------------------------------------------------
# presets
# ----------------------------------------------------------------------

PRESETS: dict[str, str] = {
    "uniform-equilibrium": """
# homogeneous two-species liquid at rest: exact discrete fixed point
species.masses = 1.0, 2.0
species.charges = 0, 0
phase.k_liquid = 1.2
phase.k_vapor = 1.0
regime.delta = 0.1
regime.kind = uncoupled
mobility.matrix = 0.01
grid.cells = 64
init.kind = uniform
init.chi = 1.0
init.rho = 0.4, 1.2
step.t_end = 0.02
step.max_dt = 2.0e-4
step.snapshot_interval = 0.01
""",
    "planar-interface-neutral": """
# uncharged liquid/vapour interface with a gentle composition imbalance;
# total number density starts at the reference value so no acoustics fire
species.masses = 1.0, 2.0
species.charges = 0, 0
phase.k_liquid = 4.0
phase.k_vapor = 1.0
regime.delta = 0.1
regime.kind = uncoupled
mobility.matrix = 0.01
grid.cells = 200
grid.x_hi = 2.0
init.kind = interface
init.interface_x = 1.0
init.rho_liquid = 0.4, 1.2
init.rho_vapor = 0.6, 0.8
step.t_end = 1.0
step.max_dt = 1.0e-3
step.snapshot_interval = 0.2
study.deltas = 0.1, 0.05, 0.025
""",
    "planar-interface-ions": """
# dissociating electrolyte across a liquid/vapour interface; the two ions
# carry different masses so a double layer forms at the transition
species.masses = 1.0, 2.0, 3.0
species.charges = 1, -1, 0
phase.k_liquid = 4.0
phase.k_vapor = 1.0
phase.s_liquid = 0.5
phase.s_vapor = 0.0
regime.delta = 0.1
regime.kind = coupled
mobility.matrix = 0.01, 0.0; 0.0, 0.005
reactions.count = 1
reactions.1.forward = 0, 0, 1
reactions.1.backward = 1, 1, 0
reactions.1.rate = 0.05
grid.cells = 200
grid.x_hi = 2.0
bc.phi_lo = dirichlet 0.0
bc.phi_hi = dirichlet 0.0
init.kind = interface
init.interface_x = 1.0
init.rho_liquid = 0.1, 0.2, 2.4
init.rho_vapor = 0.15, 0.3, 2.1
step.t_end = 1.0
step.max_dt = 1.0e-3
step.snapshot_interval = 0.2
study.deltas = 0.1, 0.05, 0.025
""",
    "capacitor": """
# two dielectric slabs between fixed-potential plates; no charges, no flow:
# checks the potential solve and the displacement continuity at the joint
species.masses = 1.0
species.charges = 0
phase.k_liquid = 1.0
phase.k_vapor = 1.0
phase.s_liquid = 2.0
phase.s_vapor = 0.0
regime.delta = 0.05
regime.kind = uncoupled
grid.cells = 128
bc.phi_lo = dirichlet 0.0
bc.phi_hi = dirichlet 1.0
init.kind = interface
init.interface_x = 0.5
init.rho_liquid = 1.0
init.rho_vapor = 1.0
step.t_end = 0.0
step.snapshot_interval = 1.0
""",
}


def load_config(source: str) -> dict[str, str]:
    """Resolve a preset name or read a config file; validates keys."""
    if source in PRESETS:
        cfg = parse_config(PRESETS[source])
    else:
        try:
            with open(source, encoding="utf-8") as f:
                text = f.read()
        except OSError as exc:
            raise ConfigError(
                f"config {source!r}: not a preset "
                f"({', '.join(sorted(PRESETS))}) and not a readable file: {exc}"
            ) from None
        cfg = parse_config(text)
    validate_keys(cfg)
    return cfg
