"""Uniform rectangular 2D grids, grid functions, finite-difference stencils,
norms and bilinear interpolation shared by all solvers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "GridSpec",
    "GridFunction",
    "sample",
    "d11",
    "d22",
    "d12",
    "interior_slice",
    "sup_norm",
    "holder_seminorm",
    "interp_bilinear",
    "write_csv",
    "read_csv",
]

interior_slice = np.s_[1:-1, 1:-1]


@dataclass(frozen=True)
class GridSpec:
    """Node-centered uniform grid on [x_lo, x_hi] x [y_lo, y_hi].

    Both endpoints are nodes: node (i, j) sits at (x_lo + i*hx, y_lo + j*hy),
    so Dirichlet data lives on nodes.
    """

    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.x_lo < self.x_hi and self.y_lo < self.y_hi):
            raise ValueError("grid ranges must be non-degenerate")
        if self.nx < 3 or self.ny < 3:
            raise ValueError("grids need at least 3 nodes per direction")

    @property
    def hx(self) -> float:
        return (self.x_hi - self.x_lo) / (self.nx - 1)

    @property
    def hy(self) -> float:
        return (self.y_hi - self.y_lo) / (self.ny - 1)

    def x_nodes(self) -> np.ndarray:
        return np.linspace(self.x_lo, self.x_hi, self.nx)

    def y_nodes(self) -> np.ndarray:
        return np.linspace(self.y_lo, self.y_hi, self.ny)

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x_nodes(), self.y_nodes(), indexing="ij")

    def boundary_mask(self) -> np.ndarray:
        m = np.zeros((self.nx, self.ny), dtype=bool)
        m[0, :] = m[-1, :] = m[:, 0] = m[:, -1] = True
        return m

    # Flat layout contract: x1 varies fastest, i.e. flat = j*nx + i.
    def flat_index(self, i: int, j: int) -> int:
        return j * self.nx + i

    def from_flat(self, k: int) -> tuple[int, int]:
        return k % self.nx, k // self.nx


@dataclass(frozen=True)
class GridFunction:
    """Scalar field on a GridSpec; values indexed [i, j] = (x index, y index)."""

    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.spec.nx, self.spec.ny):
            raise ValueError(f"values shape {v.shape} != (nx, ny) = {(self.spec.nx, self.spec.ny)}")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid function values must be finite")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def flat(self) -> np.ndarray:
        """Values in the flat layout (x1 fastest)."""
        return self.values.T.ravel()


def sample(spec: GridSpec, f) -> GridFunction:
    """Sample a callable f(x1, x2) (numpy-broadcastable) at the nodes."""
    X1, X2 = spec.meshgrid()
    return GridFunction(spec, np.broadcast_to(np.asarray(f(X1, X2), dtype=float), (spec.nx, spec.ny)))


def d11(u: GridFunction) -> np.ndarray:
    """Centered second difference in x1; boundary ring is NaN (invalid)."""
    v = u.values
    out = np.full_like(v, np.nan)
    out[1:-1, 1:-1] = (v[2:, 1:-1] - 2.0 * v[1:-1, 1:-1] + v[:-2, 1:-1]) / u.spec.hx**2
    return out


def d22(u: GridFunction) -> np.ndarray:
    """Centered second difference in x2; boundary ring is NaN (invalid)."""
    v = u.values
    out = np.full_like(v, np.nan)
    out[1:-1, 1:-1] = (v[1:-1, 2:] - 2.0 * v[1:-1, 1:-1] + v[1:-1, :-2]) / u.spec.hy**2
    return out


def d12(u: GridFunction) -> np.ndarray:
    """4-point cross stencil for the mixed second derivative; NaN boundary ring."""
    v = u.values
    out = np.full_like(v, np.nan)
    out[1:-1, 1:-1] = (v[2:, 2:] - v[2:, :-2] - v[:-2, 2:] + v[:-2, :-2]) / (4.0 * u.spec.hx * u.spec.hy)
    return out


def sup_norm(u: GridFunction, mask: np.ndarray | None = None) -> float:
    """Sup of |u| over all nodes, or over a boolean node mask."""
    v = u.values
    if mask is not None:
        if not np.any(mask):
            raise ValueError("empty mask")
        v = v[mask]
    return float(np.max(np.abs(v)))


def holder_seminorm(u: GridFunction, gamma: float, pairs: np.ndarray) -> float:
    """Max of |u(x) - u(y)| / |x - y|^gamma over sampled point pairs.

    ``pairs`` has shape (m, 2, 2): m pairs of 2D points inside the grid.
    Values between nodes come from bilinear interpolation.
    """
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0, 1)")
    pairs = np.asarray(pairs, dtype=float)
    if pairs.ndim != 3 or pairs.shape[1:] != (2, 2) or pairs.shape[0] == 0:
        raise ValueError("pairs must have shape (m, 2, 2) with m >= 1")
    va = interp_bilinear(u, pairs[:, 0, :])
    vb = interp_bilinear(u, pairs[:, 1, :])
    dist = np.hypot(pairs[:, 0, 0] - pairs[:, 1, 0], pairs[:, 0, 1] - pairs[:, 1, 1])
    ok = dist > 0
    if not np.any(ok):
        raise ValueError("all sampled pairs are degenerate")
    return float(np.max(np.abs(va[ok] - vb[ok]) / dist[ok] ** gamma))


def interp_bilinear(u: GridFunction, points) -> np.ndarray | float:
    """Bilinear interpolation at points of shape (..., 2); exact on the
    c0 + c1*x1 + c2*x2 + c3*x1*x2 class. Out-of-range points are an error."""
    spec = u.spec
    pts = np.asarray(points, dtype=float)
    scalar = pts.ndim == 1
    pts = np.atleast_2d(pts)
    x1, x2 = pts[..., 0], pts[..., 1]
    # Tolerate roundoff-level overshoot at the outer boundary.
    tol_x = 1e-12 * (spec.x_hi - spec.x_lo)
    tol_y = 1e-12 * (spec.y_hi - spec.y_lo)
    if np.any(x1 < spec.x_lo - tol_x) or np.any(x1 > spec.x_hi + tol_x) or np.any(
        x2 < spec.y_lo - tol_y
    ) or np.any(x2 > spec.y_hi + tol_y):
        raise ValueError("interpolation point outside the grid")
    i = np.clip(((x1 - spec.x_lo) / spec.hx).astype(int), 0, spec.nx - 2)
    j = np.clip(((x2 - spec.y_lo) / spec.hy).astype(int), 0, spec.ny - 2)
    tx = (x1 - (spec.x_lo + i * spec.hx)) / spec.hx
    ty = (x2 - (spec.y_lo + j * spec.hy)) / spec.hy
    v = u.values
    out = (
        (1 - tx) * (1 - ty) * v[i, j]
        + tx * (1 - ty) * v[i + 1, j]
        + (1 - tx) * ty * v[i, j + 1]
        + tx * ty * v[i + 1, j + 1]
    )
    return float(out[0]) if scalar else out


def write_csv(u: GridFunction, path, header: tuple[str, str, str] = ("x1", "x2", "value")) -> None:
    """Serialize as CSV, one row per node, x1 varying fastest, 17 significant digits."""
    spec = u.spec
    xs, ys, v = spec.x_nodes(), spec.y_nodes(), u.values
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for j in range(spec.ny):
            for i in range(spec.nx):
                fh.write(f"{xs[i]:.17g},{ys[j]:.17g},{v[i, j]:.17g}\n")


def read_csv(path) -> GridFunction:
    """Inverse of :func:`write_csv` (expects the exact node layout it writes)."""
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    if data.ndim != 2 or data.shape[1] != 3:
        raise ValueError("expected three CSV columns")
    x1, x2, vals = data[:, 0], data[:, 1], data[:, 2]
    nx = int(np.argmax(x2 != x2[0])) or len(x2)
    if len(vals) % nx != 0:
        raise ValueError("rows do not form a full rectangular grid")
    ny = len(vals) // nx
    spec = GridSpec(float(x1[0]), float(x1[nx - 1]), float(x2[0]), float(x2[-1]), nx, ny)
    return GridFunction(spec, vals.reshape(ny, nx).T)
