"""Dirichlet solver for the regularized degenerate Monge-Ampere equation
det D2u = eta_eps(x1) on a rectangle.

Uses the 2D algebraic identity for convex functions,

    lap u = sqrt((u11 - u22)^2 + 4 u12^2 + 4 det D2u),

as a damped fixed point: each sweep solves a Poisson problem with the
right-hand side evaluated at the current iterate. At the discrete fixed point
the scheme enforces det_h u = f exactly, and d11, d22 >= 0 up to the
convergence slack, so discrete convexity comes for free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg as spla

from .analytic import RegularizerSpec, SectionSpec, eta_eps, phi_det_coefficient, phi_eval
from .grid import GridFunction, GridSpec
from .grushin import SolveReport, assemble_operator, boundary_array, section_node_mask

__all__ = ["MaConfig", "ma_solve_dirichlet", "ma_residual", "comparison_check"]


@dataclass(frozen=True)
class MaConfig:
    """Fixed-point iteration controls.

    Convergence requires both the applied sup-update <= fixed_point_tolerance
    and the identity residual sup |lap u - sqrt(...)| <= 10x that tolerance.
    Damping starts at ``damping``, halves whenever the fixed-point residual
    increases, and never drops below 0.125.
    """

    max_iterations: int = 3000
    fixed_point_tolerance: float = 1e-10
    damping: float = 1.0
    poisson_tolerance: float = 1e-10

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not (self.fixed_point_tolerance > 0 and self.poisson_tolerance > 0):
            raise ValueError("tolerances must be > 0")
        if not 0.0 < self.damping <= 1.0:
            raise ValueError("damping must lie in (0, 1]")


def _stencils(spec: GridSpec, u: np.ndarray):
    hx2, hy2 = spec.hx**2, spec.hy**2
    a11 = (u[2:, 1:-1] - 2.0 * u[1:-1, 1:-1] + u[:-2, 1:-1]) / hx2
    a22 = (u[1:-1, 2:] - 2.0 * u[1:-1, 1:-1] + u[1:-1, :-2]) / hy2
    a12 = (u[2:, 2:] - u[2:, :-2] - u[:-2, 2:] + u[:-2, :-2]) / (4.0 * spec.hx * spec.hy)
    return a11, a22, a12


def ma_solve_dirichlet(
    spec: GridSpec,
    alpha: float,
    g,
    eps: float | None = None,
    cfg: MaConfig | None = None,
) -> tuple[GridFunction, SolveReport]:
    """Solve det_h u = eta_eps(x1) with u = g on the boundary nodes.

    Warm start from lap P = 2 sqrt(f) (the Laplacian lower bound of convex
    solutions); eps defaults to 2 hx as in the degenerate-operator solver.
    """
    cfg = cfg or MaConfig()
    if eps is None:
        eps = 2.0 * spec.hx
    g_arr = boundary_array(spec, g)
    f = np.asarray(eta_eps(RegularizerSpec(alpha, eps), spec.x_nodes()[1:-1]), dtype=float)[:, None]
    f = np.broadcast_to(f, (spec.nx - 2, spec.ny - 2))

    lap = spla.splu(assemble_operator(spec, np.ones(spec.nx - 2)))
    bx = np.zeros((spec.nx - 2, spec.ny - 2))
    bx[0, :] += g_arr[0, 1:-1] / spec.hx**2
    bx[-1, :] += g_arr[-1, 1:-1] / spec.hx**2
    bx[:, 0] += g_arr[1:-1, 0] / spec.hy**2
    bx[:, -1] += g_arr[1:-1, -1] / spec.hy**2

    def poisson(rhs: np.ndarray) -> np.ndarray:
        # lap P = rhs with P = g on the boundary; assemble_operator is -lap.
        return lap.solve((bx - rhs).ravel()).reshape(spec.nx - 2, spec.ny - 2)

    u = np.array(g_arr)
    u[1:-1, 1:-1] = poisson(2.0 * np.sqrt(f))

    tol = cfg.fixed_point_tolerance
    damping = cfg.damping
    update_sup = np.inf
    fp_prev = np.inf
    streak = 0
    iterations = 0
    converged = False
    for iterations in range(1, cfg.max_iterations + 1):
        a11, a22, a12 = _stencils(spec, u)
        rhs = np.sqrt((a11 - a22) ** 2 + 4.0 * a12**2 + 4.0 * f)
        identity_residual = float(np.max(np.abs(a11 + a22 - rhs)))
        if update_sup <= tol and identity_residual <= 10.0 * tol:
            converged = True
            break
        p = poisson(rhs)
        delta = p - u[1:-1, 1:-1]
        fp_resid = float(np.max(np.abs(delta)))
        if fp_resid > fp_prev:
            damping = max(0.5 * damping, 0.125)
            streak = 0
        else:
            # recover from transient-induced halvings once the residual has
            # decreased monotonically for a sustained stretch
            streak += 1
            if streak >= 100 and damping < cfg.damping:
                damping = min(2.0 * damping, cfg.damping)
                streak = 0
        fp_prev = fp_resid
        u[1:-1, 1:-1] += damping * delta
        update_sup = damping * fp_resid

    a11, a22, a12 = _stencils(spec, u)
    rhs = np.sqrt((a11 - a22) ** 2 + 4.0 * a12**2 + 4.0 * f)
    det = a11 * a22 - a12**2
    bd = spec.boundary_mask()
    report = SolveReport(
        iterations=iterations,
        final_residual=float(update_sup if np.isfinite(update_sup) else np.inf),
        converged=converged,
        # convex solutions only bound the max by the boundary data
        max_principle_margin=float(np.max(g_arr[bd]) - np.max(u)),
        extras={
            "eps": float(eps),
            "alpha": float(alpha),
            "identity_residual": float(np.max(np.abs(a11 + a22 - rhs))),
            "det_residual": float(np.max(np.abs(det - f))),
            "min_d11": float(np.min(a11)),
            "min_d22": float(np.min(a22)),
            "min_det": float(np.min(det)),
            "damping": float(damping),
        },
    )
    return GridFunction(spec, u), report


def ma_residual(u: GridFunction, alpha: float, eps: float) -> np.ndarray:
    """Interior field d11 d22 - d12^2 - eta_eps(x1); NaN on the boundary ring."""
    spec = u.spec
    a11, a22, a12 = _stencils(spec, u.values)
    f = np.asarray(eta_eps(RegularizerSpec(alpha, eps), spec.x_nodes()[1:-1]), dtype=float)[:, None]
    out = np.full((spec.nx, spec.ny), np.nan)
    out[1:-1, 1:-1] = a11 * a22 - a12**2 - f
    return out


def comparison_check(
    u: GridFunction,
    alpha: float,
    tau: float,
    ustar_boundary_max: float,
    tol: float = 1e-9,
) -> bool:
    """Two-sided comparison bound inside the origin-centered section of height tau:

        0 <= u <= sqrt(1/c(alpha)) (phi - tau) + ustar_boundary_max

    checked at every grid node strictly inside the section, within ``tol``.
    """
    if not tau > 0:
        raise ValueError("tau must be > 0")
    section = SectionSpec(alpha, (0.0, 0.0), tau)
    mask = section_node_mask(u, section)  # raises if the section leaves the grid
    if not np.any(mask):
        raise ValueError("no grid nodes inside the comparison section")
    X1, X2 = u.spec.meshgrid()
    pts = np.stack([X1[mask], X2[mask]], axis=-1)
    upper = np.sqrt(1.0 / phi_det_coefficient(alpha)) * (phi_eval(alpha, pts) - tau) + ustar_boundary_max
    vals = u.values[mask]
    return bool(np.all(vals >= -tol) and np.all(vals <= upper + tol))
