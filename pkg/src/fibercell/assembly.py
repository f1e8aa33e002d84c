"""P1 finite-element assembly with material-dependent coefficients.

Element matrices use the exact closed P1 formulas (no quadrature):
stiffness entries (b_i b_j + c_i c_j) / (4A) from the barycentric gradient
components, mass A/12 * [[2,1,1],[1,2,1],[1,1,2]].  Per-element weights are
chosen by the fiber/matrix tag, which is what encodes the high-contrast
coefficients of the mode problem.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .mesh import FIBER, TriMesh, signed_areas


@dataclass(frozen=True)
class ModePencil:
    """Generalized pencil (K, M) of one vertical mode.

    K = stiffness(1, eps^-2) + gamma * mass(eps^2, 1), M = mass(1, 1), where
    the weight pairs are (fiber, matrix).
    """

    K: sp.csr_matrix
    M: sp.csr_matrix
    eps: float
    gamma: float
    mesh: TriMesh


def _element_geometry(mesh: TriMesh):
    p = mesh.vertices[mesh.triangles]
    areas = signed_areas(mesh.vertices, mesh.triangles)
    if np.any(areas <= 0.0):
        raise ValueError("mesh contains a degenerate or inverted triangle")
    # b_i = y_j - y_k, c_i = x_k - x_j, cyclic
    x = p[..., 0]
    y = p[..., 1]
    b = np.stack([y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], axis=1)
    c = np.stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1)
    return areas, b, c


def _material_weights(mesh: TriMesh, w_fiber: float, w_matrix: float) -> np.ndarray:
    if w_fiber <= 0 or w_matrix <= 0:
        raise ValueError("material weights must be positive")
    return np.where(mesh.tags == FIBER, float(w_fiber), float(w_matrix))


def _scatter(mesh: TriMesh, local: np.ndarray) -> sp.csr_matrix:
    n = len(mesh.vertices)
    tri = mesh.triangles
    rows = np.repeat(tri, 3, axis=1).ravel()
    cols = np.tile(tri, (1, 3)).ravel()
    mat = sp.coo_matrix((local.ravel(), (rows, cols)), shape=(n, n))
    out = mat.tocsr()
    out.sum_duplicates()
    return out


def assemble_weighted_stiffness(mesh: TriMesh, w_fiber: float,
                                w_matrix: float) -> sp.csr_matrix:
    """sum_T w(tag_T) int_T grad(phi_i).grad(phi_j)."""
    areas, b, c = _element_geometry(mesh)
    w = _material_weights(mesh, w_fiber, w_matrix)
    coef = (w / (4.0 * areas))[:, None, None]
    local = coef * (b[:, :, None] * b[:, None, :] + c[:, :, None] * c[:, None, :])
    return _scatter(mesh, local)


def assemble_weighted_mass(mesh: TriMesh, w_fiber: float,
                           w_matrix: float) -> sp.csr_matrix:
    """sum_T w(tag_T) int_T phi_i phi_j with the exact P1 mass template."""
    areas, _, _ = _element_geometry(mesh)
    w = _material_weights(mesh, w_fiber, w_matrix)
    template = (np.ones((3, 3)) + np.eye(3)) / 12.0
    local = (w * areas)[:, None, None] * template[None, :, :]
    return _scatter(mesh, local)


def assemble_mode_pencil(mesh: TriMesh, eps: float, gamma: float) -> ModePencil:
    """Pencil of the 2D problem obtained by separating one vertical mode.

    Parameters
    ----------
    eps : float in (0, 1]
        Contrast parameter.
    gamma : float > 0
        Vertical eigenvalue (j pi / L)^2 of the separated mode; gamma <= 0
        would lose positive definiteness under the natural lateral boundary.
    """
    if not (0.0 < eps <= 1.0):
        raise ValueError(f"eps must lie in (0, 1], got {eps}")
    if gamma <= 0.0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    K = (assemble_weighted_stiffness(mesh, 1.0, eps ** -2)
         + gamma * assemble_weighted_mass(mesh, eps ** 2, 1.0)).tocsr()
    M = assemble_weighted_mass(mesh, 1.0, 1.0)
    return ModePencil(K=K, M=M, eps=float(eps), gamma=float(gamma), mesh=mesh)


def assemble_dirichlet_disk(mesh: TriMesh):
    """Unit-weight stiffness/mass over the fiber triangles, restricted to
    nodes strictly inside the disk (interface nodes carry the homogeneous
    Dirichlet condition).

    Returns
    -------
    (K_D, M_D, interior) where ``interior`` maps reduced indices to mesh
    vertex indices.
    """
    fiber_tris = mesh.triangles[mesh.tags == FIBER]
    if len(fiber_tris) == 0:
        raise ValueError("mesh has no fiber triangles")
    used = np.unique(fiber_tris)
    on_interface = np.zeros(len(mesh.vertices), dtype=bool)
    on_interface[mesh.interface_nodes] = True
    interior = used[~on_interface[used]]
    if len(interior) == 0:
        raise ValueError("no interior disk nodes; mesh too coarse")

    sub = TriMesh(vertices=mesh.vertices, triangles=fiber_tris,
                  tags=np.full(len(fiber_tris), FIBER),
                  interface_nodes=mesh.interface_nodes,
                  boundary_nodes=mesh.boundary_nodes,
                  geometry=mesh.geometry, h=mesh.h)
    K = assemble_weighted_stiffness(sub, 1.0, 1.0)
    M = assemble_weighted_mass(sub, 1.0, 1.0)
    K_D = K[interior][:, interior].tocsr()
    M_D = M[interior][:, interior].tocsr()
    return K_D, M_D, interior


def assemble_1d(n: int, L: float):
    """P1 matrices of -d^2/dx^2 on (0, L), Dirichlet rows eliminated.

    Returns the (n-1) x (n-1) tridiagonal pair
    K1 = (1/h) tridiag(-1, 2, -1), M1 = (h/6) tridiag(1, 4, 1).
    """
    if n < 2:
        raise ValueError(f"need at least 2 intervals, got {n}")
    h = L / n
    m = n - 1
    main = np.full(m, 2.0 / h)
    off = np.full(m - 1, -1.0 / h)
    K1 = sp.diags([off, main, off], [-1, 0, 1], format="csr")
    main_m = np.full(m, 2.0 * h / 3.0)
    off_m = np.full(m - 1, h / 6.0)
    M1 = sp.diags([off_m, main_m, off_m], [-1, 0, 1], format="csr")
    return K1, M1


def export_matrix(A: sp.spmatrix, path) -> None:
    """Coordinate text export of the upper triangle: header ``n nnz`` then
    one ``i j value`` line per stored entry."""
    coo = sp.triu(A.tocsr(), k=0).tocoo()
    order = np.lexsort((coo.col, coo.row))
    with open(path, "w") as fh:
        fh.write(f"{A.shape[0]} {coo.nnz}\n")
        for i, j, v in zip(coo.row[order], coo.col[order], coo.data[order]):
            fh.write(f"{i} {j} {v:.17g}\n")
