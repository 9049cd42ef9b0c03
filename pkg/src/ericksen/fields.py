"""Uniform Cartesian grids, the (s, n) state, differential operators, signed distance.

Scalars and directors are collocated at cell centers.  Gradients use central
differences in the interior and second-order one-sided stencils at
non-periodic boundaries; each axis operator is kept as a sparse matrix so the
exact adjoint (needed by the discrete variational gradient) is just its
transpose.  2D grids still carry 3-component directors, and all gradients are
padded to three spatial columns, so every curl/wedge expression stays defined.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
import scipy.sparse as sp

__all__ = [
    "Grid",
    "FaceKind",
    "FaceBC",
    "BoundaryData",
    "FieldState",
    "SignedDistanceField",
    "gradient",
    "jacobian",
    "div_curl",
    "project_unit",
    "signed_distance",
    "signed_distance_polyline",
    "write_vtk",
]


def _diff_matrix(n: int, h: float, periodic: bool) -> sp.csr_matrix:
    if n < 3:
        raise ValueError("need at least 3 cells per axis for second-order stencils")
    d = sp.lil_matrix((n, n))
    inv2h = 1.0 / (2.0 * h)
    for i in range(1, n - 1):
        d[i, i - 1] = -inv2h
        d[i, i + 1] = inv2h
    if periodic:
        d[0, n - 1] = -inv2h
        d[0, 1] = inv2h
        d[n - 1, n - 2] = -inv2h
        d[n - 1, 0] = inv2h
    else:
        d[0, 0], d[0, 1], d[0, 2] = -3 * inv2h, 4 * inv2h, -inv2h
        d[n - 1, n - 1], d[n - 1, n - 2], d[n - 1, n - 3] = 3 * inv2h, -4 * inv2h, inv2h
    return d.tocsr()


@dataclass(frozen=True)
class Grid:
    """Uniform cell-centered grid on a box; 2 or 3 axes."""

    shape: tuple
    h: float
    origin: tuple = None
    periodic: tuple = None

    def __post_init__(self):
        shape = tuple(int(n) for n in self.shape)
        object.__setattr__(self, "shape", shape)
        if len(shape) not in (2, 3):
            raise ValueError("grid must be 2D or 3D")
        if any(n < 8 for n in shape):
            raise ValueError("need at least 8 cells per axis")
        if self.h <= 0:
            raise ValueError("spacing must be positive")
        origin = self.origin if self.origin is not None else (0.0,) * len(shape)
        periodic = self.periodic if self.periodic is not None else (False,) * len(shape)
        object.__setattr__(self, "origin", tuple(float(v) for v in origin))
        object.__setattr__(self, "periodic", tuple(bool(v) for v in periodic))
        if len(self.origin) != len(shape) or len(self.periodic) != len(shape):
            raise ValueError("origin/periodic must match the number of axes")
        ops = tuple(_diff_matrix(n, self.h, p) for n, p in zip(shape, self.periodic))
        object.__setattr__(self, "_ops", ops)
        object.__setattr__(self, "_ops_t", tuple(op.T.tocsr() for op in ops))

    @property
    def dims(self) -> int:
        return len(self.shape)

    @property
    def cell_volume(self) -> float:
        return self.h ** self.dims

    def axis_centers(self, axis: int) -> np.ndarray:
        return self.origin[axis] + (np.arange(self.shape[axis]) + 0.5) * self.h

    def centers(self) -> np.ndarray:
        """Cell-center coordinates, shape (*shape, dims)."""
        axes = [self.axis_centers(k) for k in range(self.dims)]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)

    def extent(self, axis: int) -> float:
        return self.shape[axis] * self.h

    def apply_diff(self, f: np.ndarray, axis: int) -> np.ndarray:
        """d/dx_axis by the per-axis stencil; works on trailing component axes."""
        return self._apply(self._ops[axis], f, axis)

    def apply_diff_adjoint(self, f: np.ndarray, axis: int) -> np.ndarray:
        """Exact transpose of apply_diff (matrix adjoint, including boundary rows)."""
        return self._apply(self._ops_t[axis], f, axis)

    @staticmethod
    def _apply(op: sp.csr_matrix, f: np.ndarray, axis: int) -> np.ndarray:
        moved = np.moveaxis(f, axis, 0)
        flat = moved.reshape(moved.shape[0], -1)
        out = op @ flat
        return np.moveaxis(out.reshape(moved.shape), 0, axis)


def gradient(f: np.ndarray, grid: Grid) -> np.ndarray:
    """Per-cell gradient of a scalar field, padded to 3 components (*shape, 3)."""
    g = np.zeros(f.shape + (3,))
    for k in range(grid.dims):
        g[..., k] = grid.apply_diff(f, k)
    return g


def jacobian(n: np.ndarray, grid: Grid) -> np.ndarray:
    """Full 3x3 Jacobian J[i, j] = d n_i / d x_j, zero column for the missing axis in 2D."""
    J = np.zeros(n.shape[:-1] + (3, 3))
    for k in range(grid.dims):
        J[..., :, k] = grid.apply_diff(n, k)
    return J


def div_curl(n: np.ndarray, grid: Grid):
    """(div n, curl n) per cell from the componentwise stencils."""
    J = jacobian(n, grid)
    div = J[..., 0, 0] + J[..., 1, 1] + J[..., 2, 2]
    curl = np.stack(
        [
            J[..., 2, 1] - J[..., 1, 2],
            J[..., 0, 2] - J[..., 2, 0],
            J[..., 1, 0] - J[..., 0, 1],
        ],
        axis=-1,
    )
    return div, curl


def project_unit(n: np.ndarray) -> np.ndarray:
    """Renormalize a director field; raises on near-zero vectors (director collapse)."""
    norm = np.linalg.norm(n, axis=-1, keepdims=True)
    if np.any(norm < 1e-8):
        raise FloatingPointError("director collapse: near-zero vector before projection")
    return n / norm


class FaceKind(str, Enum):
    DIRICHLET_PAIR = "dirichlet_pair"
    FREE = "free"
    PERIODIC = "periodic"


@dataclass
class FaceBC:
    """Boundary condition on one face (axis, side); side 0 = low, 1 = high.

    For dirichlet_pair, t_eps is the scalar trace and g_eps the unit director
    trace on the face cell layer (face-shaped arrays, g_eps with a trailing 3).
    """

    kind: FaceKind
    t_eps: Optional[np.ndarray] = None
    g_eps: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind == FaceKind.DIRICHLET_PAIR:
            if self.t_eps is None or self.g_eps is None:
                raise ValueError("dirichlet_pair face needs both traces")
            norms = np.linalg.norm(self.g_eps, axis=-1)
            if np.max(np.abs(norms - 1.0)) > 1e-10:
                raise ValueError("director trace must be unit length")


@dataclass
class BoundaryData:
    """Per-face boundary conditions plus the discrete trace-transition set Sigma0."""

    faces: dict = field(default_factory=dict)   # (axis, side) -> FaceBC
    sigma0: Optional[np.ndarray] = None         # points where the scalar trace transitions

    def face(self, axis: int, side: int) -> FaceBC:
        return self.faces.get((axis, side), FaceBC(FaceKind.FREE))

    @staticmethod
    def all_periodic(dims: int) -> "BoundaryData":
        faces = {(a, s): FaceBC(FaceKind.PERIODIC) for a in range(dims) for s in (0, 1)}
        return BoundaryData(faces=faces)


@dataclass
class FieldState:
    """Discretized pair (s, n) on a grid with boundary data."""

    grid: Grid
    s: np.ndarray
    n: np.ndarray
    bc: BoundaryData = field(default_factory=BoundaryData)

    def validate(self, barrier_active: bool = False) -> None:
        if self.s.shape != self.grid.shape:
            raise ValueError("s shape mismatch")
        if self.n.shape != self.grid.shape + (3,):
            raise ValueError("n shape mismatch")
        norms = np.linalg.norm(self.n, axis=-1)
        if np.max(np.abs(norms - 1.0)) > 1e-10:
            raise ValueError("director must be unit length everywhere")
        if barrier_active:
            if np.any(self.s < -0.5 + 1e-9) or np.any(self.s > 1.0 - 1e-9):
                raise ValueError("s out of the physical range for the barrier potential")

    def copy(self) -> "FieldState":
        return FieldState(self.grid, self.s.copy(), self.n.copy(), self.bc)


@dataclass(frozen=True)
class SignedDistanceField:
    """Grid-aligned signed distance to an interface; negative on the isotropic side."""

    grid: Grid
    d: np.ndarray

    def eikonal_residual(self, exclusion: Optional[np.ndarray] = None) -> float:
        """max | |grad d| - 1 | over cells, optionally masking the medial axis."""
        g = gradient(self.d, self.grid)
        mag = np.linalg.norm(g, axis=-1)
        res = np.abs(mag - 1.0)
        if exclusion is not None:
            res = res[~exclusion]
        return float(np.max(res))


def signed_distance(interface, grid: Grid, nematic_inside: bool = True) -> SignedDistanceField:
    """Signed distance to a closed interface on the grid.

    interface : callable d(points) -> distances (already signed), or an
        (m, 2) polyline of vertices describing a closed curve in 2D.
    """
    if callable(interface):
        pts = grid.centers().reshape(-1, grid.dims)
        d = np.asarray(interface(pts), dtype=float).reshape(grid.shape)
        return SignedDistanceField(grid, d)
    verts = np.asarray(interface, dtype=float)
    if verts.ndim != 2 or verts.shape[1] != grid.dims:
        raise ValueError("polyline vertices must be (m, dims)")
    if verts.shape[0] < 3:
        raise ValueError("interface is empty or degenerate")
    if grid.dims != 2:
        raise ValueError("polyline input is 2D; use a callable for 3D interfaces")
    return signed_distance_polyline(verts, grid, nematic_inside)


def signed_distance_polyline(verts: np.ndarray, grid: Grid, nematic_inside: bool = True) -> SignedDistanceField:
    """Brute-force min distance to the segments of a closed polyline, sign by crossing parity."""
    a = verts
    b = np.roll(verts, -1, axis=0)
    ab = b - a
    ab2 = np.maximum(np.einsum("ij,ij->i", ab, ab), 1e-300)

    pts = grid.centers().reshape(-1, 2)
    dmin = np.full(pts.shape[0], np.inf)
    chunk = 65536
    for lo in range(0, pts.shape[0], chunk):
        p = pts[lo:lo + chunk]
        ap = p[:, None, :] - a[None, :, :]
        t = np.clip(np.einsum("pij,ij->pi", ap, ab) / ab2, 0.0, 1.0)
        closest = a[None, :, :] + t[..., None] * ab[None, :, :]
        d2 = np.sum((p[:, None, :] - closest) ** 2, axis=-1)
        dmin[lo:lo + chunk] = np.sqrt(np.min(d2, axis=1))

    # crossing-number parity for "inside"
    inside = np.zeros(pts.shape[0], dtype=bool)
    x, y = pts[:, 0], pts[:, 1]
    for (ax, ay), (bx, by) in zip(a, b):
        cond = (ay > y) != (by > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = ax + (y - ay) * (bx - ax) / (by - ay)
        inside ^= cond & (x < xint)

    sign = np.where(inside, 1.0, -1.0)
    if not nematic_inside:
        sign = -sign
    return SignedDistanceField(grid, (sign * dmin).reshape(grid.shape))


def write_vtk(path, grid: Grid, s: np.ndarray, n: Optional[np.ndarray] = None, name: str = "state") -> None:
    """Legacy ASCII VTK structured points: s as SCALARS, n as VECTORS (cell-center lattice)."""
    shape3 = tuple(grid.shape) + (1,) * (3 - grid.dims)
    origin3 = tuple(o + 0.5 * grid.h for o in grid.origin) + (0.0,) * (3 - grid.dims)
    with open(path, "w") as f:
        f.write("# vtk DataFile Version 3.0\n")
        f.write(f"{name}\nASCII\nDATASET STRUCTURED_POINTS\n")
        f.write(f"DIMENSIONS {shape3[0]} {shape3[1]} {shape3[2]}\n")
        f.write(f"ORIGIN {origin3[0]} {origin3[1]} {origin3[2]}\n")
        f.write(f"SPACING {grid.h} {grid.h} {grid.h}\n")
        f.write(f"POINT_DATA {int(np.prod(shape3))}\n")
        f.write("SCALARS s double 1\nLOOKUP_TABLE default\n")
        flat = s.reshape(grid.shape + (1,) * (3 - grid.dims))
        for v in flat.ravel(order="F"):
            f.write(f"{float(v)!r}\n")
        if n is not None:
            f.write("VECTORS n double\n")
            nn = n.reshape(grid.shape + (1,) * (3 - grid.dims) + (3,))
            flatn = np.moveaxis(nn, -1, 0)
            stacked = np.stack([flatn[i].ravel(order="F") for i in range(3)], axis=-1)
            for row in stacked:
                f.write(f"{float(row[0])!r} {float(row[1])!r} {float(row[2])!r}\n")
