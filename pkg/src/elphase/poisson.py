"""Quasi-static potential solve: div(perm grad phi) + rhs = 0 on the 1D grid.

The permittivity perm is a positive cell field; interior faces carry its
harmonic mean, which keeps the normal displacement perm dphi/dx continuous
across cellwise jumps (a two-layer stack with the jump on a face is solved
exactly).  Boundary conditions per face:

    dirichlet(g) : potential value g on the face
    neumann(q)   : normal displacement perm dphi/dx = q on the face

With Neumann data on both faces the problem is solvable only if
int rhs dx + q_hi - q_lo = 0; the solver checks this, removes the
(tolerated) incompatibility uniformly, and pins the additive gauge by
returning the zero-mean solution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .grid import BC, Grid

COMPATIBILITY_TOL = 1.0e-8
RESIDUAL_TOL = 1.0e-10


@dataclass(frozen=True)
class PoissonResult:
    phi: np.ndarray
    residual_inf: float
    incompatibility: float


def _face_perm(perm: np.ndarray) -> np.ndarray:
    """Harmonic mean on interior faces."""
    return 2.0 * perm[:-1] * perm[1:] / (perm[:-1] + perm[1:])


def solve_potential(grid: Grid, perm, rhs, bc_lo: BC, bc_hi: BC) -> PoissonResult:
    perm = np.asarray(perm, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    if perm.shape != (grid.n,) or rhs.shape != (grid.n,):
        raise ValueError("perm and rhs must be cell fields")
    if np.any(perm <= 0.0):
        raise ValueError("permittivity must be positive")
    if bc_lo.kind == "noflux":
        bc_lo = BC("neumann", 0.0)
    if bc_hi.kind == "noflux":
        bc_hi = BC("neumann", 0.0)

    n, h = grid.n, grid.dx
    w = _face_perm(perm) / h**2                      # interior face weights
    lower = np.zeros(n)
    diag = np.zeros(n)
    upper = np.zeros(n)
    diag[1:-1] = -(w[:-1] + w[1:])                   # -(w_i + w_{i+1})
    upper[1:] = w                                     # solve_banded layout
    lower[:-1] = w
    b = -rhs.copy()

    pure_neumann = bc_lo.kind == "neumann" and bc_hi.kind == "neumann"
    incompat = 0.0
    if pure_neumann:
        incompat = float(rhs.sum() * h + bc_hi.value - bc_lo.value)
        scale = max(1.0, float(np.abs(rhs).sum() * h),
                    abs(bc_lo.value), abs(bc_hi.value))
        if abs(incompat) > COMPATIBILITY_TOL * scale:
            raise ValueError(
                f"incompatible pure-Neumann data: defect {incompat:.3e}")
        b += incompat / (n * h)                      # remove defect uniformly

    if bc_lo.kind == "dirichlet":
        c = 2.0 * perm[0] / h**2
        diag[0] = -(w[0] + c)
        b[0] -= c * bc_lo.value
    else:
        diag[0] = -w[0]
        b[0] += bc_lo.value / h
    if bc_hi.kind == "dirichlet":
        c = 2.0 * perm[-1] / h**2
        diag[-1] = -(w[-1] + c)
        b[-1] -= c * bc_hi.value
    else:
        diag[-1] = -w[-1]
        b[-1] -= bc_hi.value / h

    if pure_neumann:
        # pin the gauge: the discarded first equation is implied by the rest
        diag0, upper1, b0 = diag[0], upper[1], b[0]
        diag[0] = 1.0
        upper[1] = 0.0
        b[0] = 0.0
        ab = np.vstack([upper, diag, lower])
        phi = solve_banded((1, 1), ab, b)
        phi -= phi.mean()
        diag[0], upper[1], b[0] = diag0, upper1, b0  # restore for residual
    else:
        ab = np.vstack([upper, diag, lower])
        phi = solve_banded((1, 1), ab, b)

    res = diag * phi
    res[:-1] += upper[1:] * phi[1:]
    res[1:] += lower[:-1] * phi[:-1]
    res -= b
    scale = max(1.0, float(np.abs(rhs).max()), float(np.abs(b).max()))
    residual_inf = float(np.abs(res).max())
    if residual_inf > RESIDUAL_TOL * scale:
        raise FloatingPointError(
            f"potential solve residual {residual_inf:.3e} exceeds tolerance")
    return PoissonResult(phi, residual_inf, incompat)


def displacement(grid: Grid, perm, phi, bc_lo: BC, bc_hi: BC) -> np.ndarray:
    """Normal displacement perm dphi/dx on the n+1 faces, BC-consistent."""
    perm = np.asarray(perm, dtype=float)
    phi = np.asarray(phi, dtype=float)
    h = grid.dx
    d = np.empty(grid.n + 1)
    d[1:-1] = _face_perm(perm) * (phi[1:] - phi[:-1]) / h
    if bc_lo.kind == "dirichlet":
        d[0] = perm[0] * (phi[0] - bc_lo.value) / (0.5 * h)
    else:
        d[0] = bc_lo.value if bc_lo.kind == "neumann" else 0.0
    if bc_hi.kind == "dirichlet":
        d[-1] = perm[-1] * (bc_hi.value - phi[-1]) / (0.5 * h)
    else:
        d[-1] = bc_hi.value if bc_hi.kind == "neumann" else 0.0
    return d


def potential_gradient(grid: Grid, phi, bc_lo: BC, bc_hi: BC) -> np.ndarray:
    """Cell-centered dphi/dx as the mean of the adjacent face gradients.

    Dirichlet faces use the half-cell one-sided difference; a Neumann tag
    carries a displacement value, which only fixes dphi/dx = 0 in the
    zero-flux case, so nonzero-Neumann faces fall back one-sidedly.
    """
    phi = np.asarray(phi, dtype=float)
    h = grid.dx
    g = np.empty(grid.n + 1)
    g[1:-1] = (phi[1:] - phi[:-1]) / h
    for side, bc, edge in ((0, bc_lo, phi[0] - bc_lo.value),
                           (-1, bc_hi, bc_hi.value - phi[-1])):
        if bc.kind == "dirichlet":
            g[side] = edge / (0.5 * h)
        elif bc.kind == "neumann" and bc.value == 0.0:
            g[side] = 0.0
        else:
            g[side] = g[1] if side == 0 else g[-2]
    return 0.5 * (g[:-1] + g[1:])
