"""Deterministic CSV and metadata emission.

All numbers are written with 17 significant digits, enough to round-trip
float64 bit-exactly, so repeated runs of the same configuration produce
byte-identical files.
"""

from __future__ import annotations

import os

import numpy as np

from . import thermo
from .evolution import SimState, System, Trajectory
from .sharp_interface import InnerProfileSolution, StudyRow

FMT = "%.17g"


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return FMT % float(value)


def _write_csv(path: str, header: list[str], rows) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="ascii", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(_fmt(v) for v in row) + "\n")


def write_snapshots(outdir: str, sys: System, traj: Trajectory) -> list[str]:
    """One snapshots_XXXX.csv per stored state: x, rho_a, v, chi, phi, nF."""
    nsp = sys.mixture.n_species
    header = ["x"] + [f"rho_{a + 1}" for a in range(nsp)] + ["v", "chi", "phi", "nF"]
    x = sys.grid.centers
    paths = []
    for k, state in enumerate(traj.snapshots):
        nf = thermo.free_charge_density(sys.mixture, state.rho)
        cols = [x] + [state.rho[a] for a in range(nsp)] \
            + [state.velocity, state.chi, state.phi, nf]
        path = os.path.join(outdir, f"snapshots_{k:04d}.csv")
        _write_csv(path, header, zip(*cols))
        paths.append(path)
    return paths


def write_scalars(outdir: str, traj: Trajectory) -> str:
    header = ["t", "energy", "tzeta_viscous", "tzeta_diffusive",
              "tzeta_reactive", "tzeta_phase", "tzeta_total",
              "total_mass", "total_charge", "boundary_work"]
    rows = [[row[h] for h in header] for row in traj.scalars]
    path = os.path.join(outdir, "scalars.csv")
    _write_csv(path, header, rows)
    return path


def write_meta(outdir: str, resolved: dict, extra: dict | None = None) -> str:
    """Echo the resolved configuration (plus run facts) as key = value lines."""
    path = os.path.join(outdir, "meta.txt")
    os.makedirs(outdir or ".", exist_ok=True)
    with open(path, "w", encoding="ascii", newline="\n") as f:
        for key in sorted(resolved):
            f.write(f"{key} = {resolved[key]}\n")
        for key in sorted(extra or {}):
            f.write(f"{key} = {_fmt(extra[key])}\n")
    return path


def write_jump_residuals(outdir: str, rows: list[StudyRow]) -> str:
    """Study table: delta, per-condition residual norms, empirical orders."""
    if not rows:
        raise ValueError("no study rows to write")
    conditions = list(rows[0].residuals)
    header = ["delta"] + [f"res_{c}" for c in conditions] \
        + [f"order_{c}" for c in conditions] + ["j0", "j0_converged"]
    table = []
    for row in rows:
        rec = [row.delta]
        rec += [row.residuals[c] for c in conditions]
        rec += [row.orders.get(c, float("nan")) for c in conditions]
        rec += [row.j0, row.j0_converged]
        table.append(rec)
    path = os.path.join(outdir, "jump_residuals.csv")
    _write_csv(path, header, table)
    return path


def write_inner_profile(outdir: str, inner: InnerProfileSolution) -> str:
    nsp = inner.r.shape[0]
    header = ["z", "x0"] + [f"r_{a + 1}" for a in range(nsp)]
    cols = [inner.profile.z, inner.profile.x0] + [inner.r[a] for a in range(nsp)]
    path = os.path.join(outdir, "inner_profile.csv")
    _write_csv(path, header, zip(*cols))
    return path
