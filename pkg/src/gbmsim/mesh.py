"""Structured triangulation of a rectangle and mass-lumped P1 operators.

The mesh splits every grid cell along the same diagonal, which keeps all
triangles right (nonobtuse) and makes the stiffness matrix an M-matrix for
constant diffusivity.  The stiffness sparsity pattern is computed once per
mesh; only the values are refreshed when the diffusivity field changes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .errors import MeshError

__all__ = [
    "StructuredTriMesh",
    "build_mesh",
    "lumped_mass",
    "assemble_stiffness",
    "lumped_integral",
]


@dataclass
class _AssemblyPattern:
    """Precomputed stiffness structure for one mesh.

    ``grad_products[k, 3*i + j]`` holds area_k * grad(phi_i) . grad(phi_j) on
    triangle k, so the assembled entry values are linear in the per-triangle
    diffusivity.  ``slot`` maps each of the 9 local entries per triangle to
    its position in the canonical CSR data array.
    """

    grad_products: np.ndarray
    slot: np.ndarray
    indices: np.ndarray
    indptr: np.ndarray
    diag_slots: np.ndarray
    nnz: int


@dataclass
class StructuredTriMesh:
    """Uniform triangulation of [xmin, xmax] x [ymin, ymax].

    (n_sub + 1)^2 vertices, 2 * n_sub^2 triangles, all with positive signed
    area.  ``lumped_weights`` are the per-vertex lumped mass entries; they
    partition the domain area.  ``diagonal`` records which cell diagonal the
    split uses ("main" is the default orientation, "anti" its mirror image,
    used by the chirality-aware symmetry tests).
    """

    xmin: float
    xmax: float
    ymin: float
    ymax: float
    n_sub: int
    vertices: np.ndarray
    triangles: np.ndarray
    lumped_weights: np.ndarray
    diagonal: str = "main"
    _pattern: _AssemblyPattern | None = field(
        default=None, repr=False, compare=False
    )

    @property
    def num_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def num_triangles(self) -> int:
        return self.triangles.shape[0]

    @property
    def area(self) -> float:
        return (self.xmax - self.xmin) * (self.ymax - self.ymin)

    @property
    def cell_edge(self) -> float:
        """Longest axis-aligned edge of a grid cell."""
        return max(
            (self.xmax - self.xmin) / self.n_sub,
            (self.ymax - self.ymin) / self.n_sub,
        )

    def vertex_index(self, ix: int, iy: int) -> int:
        """Flat index of the grid vertex in column ix, row iy."""
        return iy * (self.n_sub + 1) + ix


def _grid_coordinates(lo: float, hi: float, n: int) -> np.ndarray:
    # Convex combination keeps a symmetric grid exactly symmetric in floats.
    k = np.arange(n + 1, dtype=float)
    return (lo * (n - k) + hi * k) / n


def build_mesh(bounds, n_sub: int, diagonal: str = "main") -> StructuredTriMesh:
    """Build the structured triangulation of a rectangle.

    Parameters
    ----------
    bounds : (xmin, xmax, ymin, ymax)
        Nondegenerate rectangle.
    n_sub : int
        Subintervals per edge (>= 1).
    diagonal : "main" or "anti"
        Cell-splitting diagonal; every cell uses the same one.
    """
    xmin, xmax, ymin, ymax = (float(b) for b in bounds)
    if n_sub < 1:
        raise MeshError(f"n_sub must be >= 1, got {n_sub}")
    if not (xmax > xmin and ymax > ymin):
        raise MeshError(f"degenerate bounds {bounds!r}")
    if diagonal not in ("main", "anti"):
        raise MeshError(f"diagonal must be 'main' or 'anti', got {diagonal!r}")

    xs = _grid_coordinates(xmin, xmax, n_sub)
    ys = _grid_coordinates(ymin, ymax, n_sub)
    gx, gy = np.meshgrid(xs, ys)
    vertices = np.column_stack([gx.ravel(), gy.ravel()])

    n = n_sub
    ix, iy = np.meshgrid(np.arange(n), np.arange(n))
    ix = ix.ravel()
    iy = iy.ravel()
    v00 = iy * (n + 1) + ix
    v10 = v00 + 1
    v01 = v00 + (n + 1)
    v11 = v01 + 1
    if diagonal == "main":
        lower = np.column_stack([v00, v10, v11])
        upper = np.column_stack([v00, v11, v01])
    else:
        lower = np.column_stack([v00, v10, v01])
        upper = np.column_stack([v10, v11, v01])
    triangles = np.empty((2 * n * n, 3), dtype=np.int64)
    triangles[0::2] = lower
    triangles[1::2] = upper

    mesh = StructuredTriMesh(
        xmin=xmin,
        xmax=xmax,
        ymin=ymin,
        ymax=ymax,
        n_sub=n_sub,
        vertices=vertices,
        triangles=triangles,
        lumped_weights=np.empty(0),
        diagonal=diagonal,
    )
    mesh.lumped_weights = lumped_mass(mesh)
    return mesh


def _signed_areas(mesh: StructuredTriMesh) -> np.ndarray:
    p = mesh.vertices[mesh.triangles]
    e1 = p[:, 1] - p[:, 0]
    e2 = p[:, 2] - p[:, 0]
    return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])


def lumped_mass(mesh: StructuredTriMesh) -> np.ndarray:
    """Per-vertex lumped mass weights: one third of the adjacent triangle areas.

    Strictly positive; sums to the domain area.
    """
    areas = _signed_areas(mesh)
    if np.any(areas <= 0.0):
        raise MeshError("mesh contains a nonpositively oriented triangle")
    contrib = np.repeat(areas / 3.0, 3)
    return np.bincount(
        mesh.triangles.ravel(), weights=contrib, minlength=mesh.num_vertices
    )


def _assembly_pattern(mesh: StructuredTriMesh) -> _AssemblyPattern:
    if mesh._pattern is not None:
        return mesh._pattern

    tri = mesh.triangles
    nv = mesh.num_vertices
    p = mesh.vertices[tri]
    areas = _signed_areas(mesh)

    # Constant P1 gradients: grad(phi_i) = (y_j - y_k, x_k - x_j) / (2 area)
    # for (i, j, k) cyclic.
    x = p[..., 0]
    y = p[..., 1]
    bx = np.stack(
        [y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], axis=1
    )
    by = np.stack(
        [x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1
    )
    inv2a = 1.0 / (2.0 * areas)
    bx *= inv2a[:, None]
    by *= inv2a[:, None]

    grad_products = (
        bx[:, :, None] * bx[:, None, :] + by[:, :, None] * by[:, None, :]
    ) * areas[:, None, None]
    grad_products = grad_products.reshape(-1, 9)

    rows = np.repeat(tri, 3, axis=1).ravel()
    cols = np.tile(tri, (1, 3)).ravel()
    keys = rows.astype(np.int64) * nv + cols
    unique_keys, slot = np.unique(keys, return_inverse=True)

    indices = (unique_keys % nv).astype(np.int32)
    row_of_slot = unique_keys // nv
    counts = np.bincount(row_of_slot, minlength=nv)
    indptr = np.zeros(nv + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])

    diag_keys = np.arange(nv, dtype=np.int64) * (nv + 1)
    diag_slots = np.searchsorted(unique_keys, diag_keys)

    pattern = _AssemblyPattern(
        grad_products=grad_products,
        slot=slot,
        indices=indices,
        indptr=indptr,
        diag_slots=diag_slots,
        nnz=unique_keys.size,
    )
    mesh._pattern = pattern
    return pattern


def assemble_stiffness(mesh: StructuredTriMesh, diffusivity) -> sparse.csr_matrix:
    """Assemble the variable-coefficient stiffness matrix.

    The per-triangle diffusivity is the arithmetic mean of the three vertex
    values, which preserves symmetry and is exact for constant fields.  The
    zero-flux boundary condition is natural: no rows are modified and the
    matrix annihilates constants.
    """
    diffusivity = np.asarray(diffusivity, dtype=float)
    if diffusivity.shape != (mesh.num_vertices,):
        raise MeshError(
            f"diffusivity has length {diffusivity.size}, "
            f"mesh has {mesh.num_vertices} vertices"
        )
    pattern = _assembly_pattern(mesh)
    d_tri = diffusivity[mesh.triangles].sum(axis=1) / 3.0
    entries = (pattern.grad_products * d_tri[:, None]).ravel()
    data = np.bincount(pattern.slot, weights=entries, minlength=pattern.nnz)
    return sparse.csr_matrix(
        (data, pattern.indices, pattern.indptr),
        shape=(mesh.num_vertices, mesh.num_vertices),
    )


def stiffness_diag_slots(mesh: StructuredTriMesh) -> np.ndarray:
    """Positions of the diagonal entries inside the assembled CSR data array.

    The solver adds its lumped mass and reaction coefficients there without
    re-deriving the pattern.
    """
    return _assembly_pattern(mesh).diag_slots


def lumped_integral(mesh: StructuredTriMesh, field_values) -> float:
    """Lumped quadrature of a vertex field: sum of weight(v) * field(v)."""
    field_values = np.asarray(field_values, dtype=float)
    if field_values.shape != (mesh.num_vertices,):
        raise MeshError(
            f"field has length {field_values.size}, "
            f"mesh has {mesh.num_vertices} vertices"
        )
    return float(np.dot(mesh.lumped_weights, field_values))
