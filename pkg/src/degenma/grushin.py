"""Dirichlet solver for the regularized degenerate operator
u_11 + eta_eps(x1) u_22 = 0 on a rectangle, with maximum-principle,
Harnack-quotient, Holder-ratio and interior-derivative diagnostics.

The five-point scheme produces an irreducibly diagonally dominant M-matrix,
so the discrete maximum principle holds up to the linear-solver tolerance;
the system is solved by sparse direct factorization.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .analytic import RegularizerSpec, SectionSpec, eta_eps, section_bbox, section_contains, section_sample_pairs
from .grid import GridFunction, GridSpec, holder_seminorm, sup_norm

__all__ = [
    "SolveReport",
    "HarnackReport",
    "solve_dirichlet",
    "harnack_quotient",
    "holder_estimate",
    "derivative_bound_scan",
    "boundary_array",
    "report_to_json",
    "section_node_mask",
]

DEFAULT_SOLVER_TOL = 1e-10


@dataclass(frozen=True)
class SolveReport:
    """Diagnostics of one Dirichlet solve.

    ``max_principle_margin`` is min(max g - max u, min u - min g) for the
    degenerate-elliptic solves (two-sided bound by the boundary data); the
    Monge-Ampere solver stores its one-sided analogue there.
    """

    iterations: int
    final_residual: float
    converged: bool
    max_principle_margin: float
    extras: dict = field(default_factory=dict)


@dataclass(frozen=True)
class HarnackReport:
    section: SectionSpec
    sup: float
    inf: float
    quotient: float


def report_to_json(report) -> str:
    return json.dumps(dataclasses.asdict(report), default=str, indent=2, sort_keys=True)


def boundary_array(spec: GridSpec, g) -> np.ndarray:
    """Normalize boundary data to a full (nx, ny) array (interior entries unused).

    Accepts a broadcastable callable g(x1, x2), a GridFunction on the same
    spec (its boundary ring is used), or a full array of values.
    """
    if isinstance(g, GridFunction):
        if g.spec != spec:
            raise ValueError("boundary GridFunction lives on a different grid")
        arr = np.array(g.values)
    elif callable(g):
        X1, X2 = spec.meshgrid()
        arr = np.broadcast_to(np.asarray(g(X1, X2), dtype=float), (spec.nx, spec.ny)).copy()
    else:
        arr = np.array(g, dtype=float)
        if arr.shape != (spec.nx, spec.ny):
            raise ValueError("boundary array must have shape (nx, ny)")
    if not np.all(np.isfinite(arr[spec.boundary_mask()])):
        raise ValueError("boundary data must be finite on all boundary nodes")
    return arr


def _second_difference_matrix(n: int, h: float) -> sp.csr_matrix:
    # Interior part of -d^2/ds^2 with Dirichlet ends: tridiag(-1, 2, -1)/h^2.
    main = np.full(n, 2.0 / h**2)
    off = np.full(n - 1, -1.0 / h**2)
    return sp.diags([off, main, off], [-1, 0, 1], format="csr")


def assemble_operator(spec: GridSpec, eta_interior: np.ndarray) -> sp.csc_matrix:
    """Negated five-point operator on interior nodes, x-index major ordering.

    Row (i, j): (2/hx^2 + 2 eta_i/hy^2) u_ij - (u at x-neighbors)/hx^2
    - eta_i (u at y-neighbors)/hy^2; symmetric positive definite M-matrix.
    """
    mx, my = spec.nx - 2, spec.ny - 2
    tx = _second_difference_matrix(mx, spec.hx)
    ty = _second_difference_matrix(my, spec.hy)
    a = sp.kron(tx, sp.identity(my, format="csr"), format="csc")
    a = a + sp.kron(sp.diags(eta_interior), ty, format="csc")
    return a


def _boundary_rhs(spec: GridSpec, g_arr: np.ndarray, eta_interior: np.ndarray) -> np.ndarray:
    mx, my = spec.nx - 2, spec.ny - 2
    b = np.zeros((mx, my))
    b[0, :] += g_arr[0, 1:-1] / spec.hx**2
    b[-1, :] += g_arr[-1, 1:-1] / spec.hx**2
    b[:, 0] += eta_interior / spec.hy**2 * g_arr[1:-1, 0]
    b[:, -1] += eta_interior / spec.hy**2 * g_arr[1:-1, -1]
    return b.ravel()


def _operator_residual(spec: GridSpec, u: np.ndarray, eta_interior: np.ndarray) -> float:
    lap_x = (u[2:, 1:-1] - 2.0 * u[1:-1, 1:-1] + u[:-2, 1:-1]) / spec.hx**2
    lap_y = (u[1:-1, 2:] - 2.0 * u[1:-1, 1:-1] + u[1:-1, :-2]) / spec.hy**2
    return float(np.max(np.abs(lap_x + eta_interior[:, None] * lap_y)))


def solve_dirichlet(
    spec: GridSpec,
    alpha: float,
    g,
    eps: float | None = None,
    tol: float = DEFAULT_SOLVER_TOL,
) -> tuple[GridFunction, SolveReport]:
    """Solve the five-point scheme for u_11 + eta_eps(x1) u_22 = 0 with u = g
    on the boundary nodes. ``eps`` defaults to 2 hx, tying the regularization
    plateau to what the grid can resolve."""
    if eps is None:
        eps = 2.0 * spec.hx
    g_arr = boundary_array(spec, g)
    eta_int = np.asarray(eta_eps(RegularizerSpec(alpha, eps), spec.x_nodes()[1:-1]), dtype=float)
    a = assemble_operator(spec, eta_int)
    b = _boundary_rhs(spec, g_arr, eta_int)
    u = np.array(g_arr)
    u[1:-1, 1:-1] = spla.splu(a).solve(b).reshape(spec.nx - 2, spec.ny - 2)
    residual = _operator_residual(spec, u, eta_int)
    bd = spec.boundary_mask()
    margin = float(min(np.max(g_arr[bd]) - np.max(u), np.min(u) - np.min(g_arr[bd])))
    report = SolveReport(
        iterations=1,
        final_residual=residual,
        converged=bool(residual <= tol),
        max_principle_margin=margin,
        extras={"eps": float(eps), "alpha": float(alpha)},
    )
    return GridFunction(spec, u), report


def section_node_mask(u: GridFunction, section: SectionSpec) -> np.ndarray:
    """Boolean mask of grid nodes strictly inside the section; the section must
    fit inside the grid."""
    x_lo, x_hi, y_lo, y_hi = section_bbox(section)
    s = u.spec
    slack = 1e-9
    if (
        x_lo < s.x_lo - slack
        or x_hi > s.x_hi + slack
        or y_lo < s.y_lo - slack
        or y_hi > s.y_hi + slack
    ):
        raise ValueError("section is not contained in the grid")
    X1, X2 = s.meshgrid()
    return section_contains(section, np.stack([X1, X2], axis=-1))


def harnack_quotient(u: GridFunction, section: SectionSpec) -> HarnackReport:
    """sup/inf of u over the nodes strictly inside the section (u must be > 0 there)."""
    mask = section_node_mask(u, section)
    if not np.any(mask):
        raise ValueError("no grid nodes inside the section")
    vals = u.values[mask]
    lo = float(np.min(vals))
    if lo <= 0:
        raise ValueError("quotient needs u > 0 on the section")
    hi = float(np.max(vals))
    return HarnackReport(section=section, sup=hi, inf=lo, quotient=hi / lo)


def holder_estimate(
    u: GridFunction,
    gamma: float,
    inner: SectionSpec,
    outer: SectionSpec,
    n_pairs: int = 2000,
    seed: int = 0,
) -> float:
    """Empirical ratio (Holder seminorm over the inner section) / (sup over the
    outer section); returns 0 for u identically zero on the outer section."""
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0, 1)")
    ib, ob = section_bbox(inner), section_bbox(outer)
    if not (ib[0] >= ob[0] and ib[1] <= ob[1] and ib[2] >= ob[2] and ib[3] <= ob[3]):
        raise ValueError("inner section must sit inside the outer section")
    denom = sup_norm(u, section_node_mask(u, outer))
    if denom == 0.0:
        return 0.0
    pairs = section_sample_pairs(inner, n_pairs, np.random.default_rng(seed))
    return holder_seminorm(u, gamma, pairs) / denom


def derivative_bound_scan(
    spec: GridSpec,
    alpha: float,
    g,
    eps_list,
    tol: float = DEFAULT_SOLVER_TOL,
) -> list[tuple[float, float]]:
    """For each eps, solve and report sup |D2 u| over the centered half-size
    sub-rectangle divided by sup |g| on the boundary. The column must stay
    bounded as eps decreases."""
    eps_list = [float(e) for e in eps_list]
    if any(e <= 0 for e in eps_list):
        raise ValueError("eps values must be positive")
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("eps values must be strictly decreasing")
    g_arr = boundary_array(spec, g)
    sup_g = float(np.max(np.abs(g_arr[spec.boundary_mask()])))
    xc = 0.5 * (spec.x_lo + spec.x_hi)
    yc = 0.5 * (spec.y_lo + spec.y_hi)
    qx = 0.25 * (spec.x_hi - spec.x_lo)
    qy = 0.25 * (spec.y_hi - spec.y_lo)
    X1, X2 = spec.meshgrid()
    inner = (np.abs(X1 - xc) <= qx) & (np.abs(X2 - yc) <= qy)
    inner[:, 0] = inner[:, -1] = False  # centered D2 needs y-interior nodes
    rows = []
    for eps in eps_list:
        u, _ = solve_dirichlet(spec, alpha, g_arr, eps=eps, tol=tol)
        d2 = np.zeros_like(u.values)
        d2[:, 1:-1] = (u.values[:, 2:] - u.values[:, :-2]) / (2.0 * spec.hy)
        ratio = 0.0 if sup_g == 0.0 else float(np.max(np.abs(d2[inner]))) / sup_g
        rows.append((eps, ratio))
    return rows
