"""Uniform cell-centered 1D grid and conservative finite-volume operators.

Cells are centered at x_i = x_lo + (i + 1/2) dx; fluxes live on the n+1
faces.  Boundary conditions are attached to fields as tags:

    dirichlet(g) : field value g on the boundary face
    neumann(q)   : outward-axis derivative df/dx = q on the boundary face
    noflux       : zero normal flux (neumann(0) for gradients)

All difference operators are second order on smooth fields; divergence of
a face flux telescopes exactly, so integrals of divergences reduce to the
boundary fluxes in exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BC:
    kind: str  # "dirichlet" | "neumann" | "noflux"
    value: float = 0.0


def dirichlet(value: float) -> BC:
    return BC("dirichlet", float(value))


def neumann(value: float) -> BC:
    return BC("neumann", float(value))


NOFLUX = BC("noflux")


@dataclass(frozen=True)
class Grid:
    n: int
    x_lo: float = 0.0
    x_hi: float = 1.0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("grid needs at least two cells")
        if not self.x_hi > self.x_lo:
            raise ValueError("x_hi must exceed x_lo")

    @property
    def dx(self) -> float:
        return (self.x_hi - self.x_lo) / self.n

    @property
    def centers(self) -> np.ndarray:
        return self.x_lo + (np.arange(self.n) + 0.5) * self.dx

    @property
    def faces(self) -> np.ndarray:
        return self.x_lo + np.arange(self.n + 1) * self.dx


@dataclass
class Field:
    """Cell values plus boundary tags; length must match the grid."""

    values: np.ndarray
    bc_lo: BC = NOFLUX
    bc_hi: BC = NOFLUX

    def check(self, grid: Grid) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.shape != (grid.n,):
            raise ValueError("field length does not match grid")
        if not np.all(np.isfinite(v)):
            raise ValueError("field contains non-finite values")


def _ghosts(grid: Grid, f: Field):
    """Ghost-cell values one cell beyond each boundary, second order in dx."""
    v = f.values
    h = grid.dx
    if f.bc_lo.kind == "dirichlet":
        # quadratic through the face value and the first two cells
        lo = (8.0 * f.bc_lo.value - 6.0 * v[0] + v[1]) / 3.0
    else:
        q = f.bc_lo.value if f.bc_lo.kind == "neumann" else 0.0
        lo = v[0] - q * h
    if f.bc_hi.kind == "dirichlet":
        hi = (8.0 * f.bc_hi.value - 6.0 * v[-1] + v[-2]) / 3.0
    else:
        q = f.bc_hi.value if f.bc_hi.kind == "neumann" else 0.0
        hi = v[-1] + q * h
    return lo, hi


def gradient(grid: Grid, f: Field) -> np.ndarray:
    """Cell-centered df/dx, central in the interior, BC-consistent at the ends."""
    f.check(grid)
    v = f.values
    lo, hi = _ghosts(grid, f)
    ext = np.concatenate(([lo], v, [hi]))
    return (ext[2:] - ext[:-2]) / (2.0 * grid.dx)


def face_gradient(grid: Grid, f: Field) -> np.ndarray:
    """df/dx on the n+1 faces; boundary faces honor the BC tags."""
    f.check(grid)
    v = f.values
    h = grid.dx
    g = np.empty(grid.n + 1)
    g[1:-1] = (v[1:] - v[:-1]) / h
    for side, bc, vc in ((0, f.bc_lo, v[0]), (-1, f.bc_hi, v[-1])):
        if bc.kind == "dirichlet":
            # one-sided over the half cell between face and first center
            g[side] = (vc - bc.value) / (0.5 * h) if side == 0 else (bc.value - vc) / (0.5 * h)
        elif bc.kind == "neumann":
            g[side] = bc.value
        else:
            g[side] = 0.0
    return g


def divergence_of_flux(grid: Grid, face_flux: np.ndarray) -> np.ndarray:
    """d(flux)/dx per cell from n+1 face values; telescopes exactly."""
    face_flux = np.asarray(face_flux, dtype=float)
    if face_flux.shape[-1] != grid.n + 1:
        raise ValueError("face flux must have n + 1 entries")
    return (face_flux[..., 1:] - face_flux[..., :-1]) / grid.dx


def laplacian(grid: Grid, f: Field, coeff: np.ndarray | None = None) -> np.ndarray:
    """div(coeff grad f) with arithmetic-mean face coefficients.

    coeff is a positive cell array (defaults to ones).  Boundary faces use
    the adjacent cell coefficient and the field's BC tag.
    """
    f.check(grid)
    v = f.values
    h = grid.dx
    if coeff is None:
        coeff = np.ones(grid.n)
    coeff = np.asarray(coeff, dtype=float)
    if np.any(coeff <= 0.0):
        raise ValueError("laplacian coefficient must be positive")
    flux = np.empty(grid.n + 1)
    cf = 0.5 * (coeff[:-1] + coeff[1:])
    flux[1:-1] = cf * (v[1:] - v[:-1]) / h
    for side, bc, c, vc in ((0, f.bc_lo, coeff[0], v[0]),
                            (-1, f.bc_hi, coeff[-1], v[-1])):
        if bc.kind == "dirichlet":
            g = (vc - bc.value) / (0.5 * h) if side == 0 else (bc.value - vc) / (0.5 * h)
            flux[side] = c * g
        elif bc.kind == "neumann":
            flux[side] = c * bc.value
        else:
            flux[side] = 0.0
    return (flux[1:] - flux[:-1]) / h


def integrate(grid: Grid, values: np.ndarray):
    """Midpoint-rule integral over the domain, exact for cellwise constants."""
    return np.asarray(values, dtype=float).sum(axis=-1) * grid.dx


def upwind_advect(grid: Grid, f: Field, v_cell: np.ndarray,
                  v_face: np.ndarray | None = None) -> np.ndarray:
    """First-order upwind div(f v) per cell.

    Face velocities default to arithmetic means of the cells, with
    zero-gradient extrapolation at the boundary faces (callers with walls
    pass an explicit v_face carrying zeros there).
    """
    f.check(grid)
    v = f.values
    v_cell = np.asarray(v_cell, dtype=float)
    if v_face is None:
        v_face = np.empty(grid.n + 1)
        v_face[1:-1] = 0.5 * (v_cell[:-1] + v_cell[1:])
        v_face[0] = v_cell[0]
        v_face[-1] = v_cell[-1]
    ext = np.concatenate(([v[0]], v, [v[-1]]))  # zero-gradient ghosts
    up = np.where(v_face >= 0.0, ext[:-1], ext[1:])
    return divergence_of_flux(grid, up * v_face)
