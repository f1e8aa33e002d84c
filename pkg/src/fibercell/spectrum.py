"""Spectrum of the contrast problem: mode merge, 3D oracle, convergence.

Coefficients depend only on the cross-section and the vertical boundary
condition is Dirichlet, so separated fields w(y) sin(j pi x3 / L) decouple
the 3D problem into one 2D pencil per vertical mode; the 3D spectrum is the
sorted merge over modes.  At the discrete level the same identity is exact
with the Kronecker-assembled tensor pencil and the *discrete* vertical
eigenvalues, which gives the validation oracle.  Convergence machinery
pairs merged eigenvalues with limit roots by mode label and measures the
bound slack, the limit gap and the eigenvector structure errors.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import __version__ as _pkg_version
from .assembly import (assemble_1d, assemble_dirichlet_disk, assemble_mode_pencil,
                       assemble_weighted_mass, assemble_weighted_stiffness)
from .eigensolve import (EigenPair, dense_eigen_oracle, smallest_eigenpairs,
                         DENSE_ORACLE_MAX_N)
from .geometry import CellGeometry
from .limit import (DispersionParams, LimitRoot, limit_eigenvalues, u0_eval)
from .mesh import FIBER, MATRIX, TriMesh, generate_mesh, signed_areas


@dataclass
class ModeSpectrum:
    """Eigenpairs of one vertical mode's 2D pencil."""

    eps: float
    j: int
    gamma: float
    pairs: list[EigenPair]
    mesh: TriMesh

    @property
    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.pairs])


@dataclass
class MergedEigenvalue:
    """One entry of the merged spectrum with its mode label."""

    value: float
    j: int
    rank: int  # 1-based rank within mode j
    pair: EigenPair


@dataclass
class ReportRow:
    eps: float
    k: int
    j: int
    rank: int
    lambda_eps: float
    bound: float
    slack: float
    lambda_limit: float
    gap: float
    e_fiber: float
    e_matrix: float


@dataclass
class ConvergenceReport:
    """Rows of the epsilon sweep plus the shared mesh/limit metadata."""

    rows: list[ReportRow]
    geometry: CellGeometry
    n_div: int
    mu1_exact: float
    mu1_discrete: float
    c_h: float
    roots: list[LimitRoot]
    mesh_hash: str = ""
    eig_tol: float = 1e-9
    reorderings: list = field(default_factory=list)

    def write_csv(self, path, config_hash: str = "") -> None:
        with open(path, "w", newline="") as fh:
            if config_hash:
                fh.write(f"# config_hash={config_hash}\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["eps", "k", "j", "lambda_eps", "bound", "slack",
                             "lambda_limit", "gap", "e_F", "e_M"])
            for row in self.rows:
                writer.writerow([f"{row.eps:.17g}", row.k, row.j,
                                 f"{row.lambda_eps:.17g}", f"{row.bound:.17g}",
                                 f"{row.slack:.17g}", f"{row.lambda_limit:.17g}",
                                 f"{row.gap:.17g}", f"{row.e_fiber:.17g}",
                                 f"{row.e_matrix:.17g}"])

    def write_json(self, path, config_hash: str = "") -> None:
        payload = {
            "config_hash": config_hash,
            "version": _pkg_version,
            "mesh_hash": self.mesh_hash,
            "n_div": self.n_div,
            "mu1_exact": self.mu1_exact,
            "mu1_discrete": self.mu1_discrete,
            "c_h": self.c_h,
            "eig_tol": self.eig_tol,
            "reorderings": self.reorderings,
            "rows": [{"eps": r.eps, "k": r.k, "j": r.j, "rank": r.rank,
                      "lambda_eps": r.lambda_eps, "bound": r.bound,
                      "slack": r.slack, "lambda_limit": r.lambda_limit,
                      "gap": r.gap, "e_F": r.e_fiber, "e_M": r.e_matrix}
                     for r in self.rows],
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def mode_spectrum(mesh: TriMesh, eps: float, j: int, L: float, k: int,
                  tol: float = 1e-9) -> ModeSpectrum:
    """k smallest eigenpairs of the pencil of vertical mode j."""
    if j < 1:
        raise ValueError("mode index j must be >= 1")
    gamma = (j * math.pi / L) ** 2
    pencil = assemble_mode_pencil(mesh, eps, gamma)
    pairs = smallest_eigenpairs(pencil.K, pencil.M, k, tol=tol)
    return ModeSpectrum(eps=eps, j=j, gamma=gamma, pairs=pairs, mesh=mesh)


def merged_spectrum(mesh: TriMesh, eps: float, j_max: int, k_total: int,
                    L: float = None, tol: float = 1e-9,
                    threads: int = 1) -> list[MergedEigenvalue]:
    """Globally sorted merge of the per-mode spectra.

    Ties break by (value, j).  Raises if j_max is too small for the merge
    to be provably complete: the last merged value must not exceed the
    smallest eigenvalue of mode j_max (mode pencils increase with j).
    """
    if L is None:
        L = mesh.geometry.height
    if j_max < 1 or k_total < 1:
        raise ValueError("j_max and k_total must be >= 1")

    def solve(j):
        return mode_spectrum(mesh, eps, j, L, k_total, tol=tol)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            spectra = list(pool.map(solve, range(1, j_max + 1)))
    else:
        spectra = [solve(j) for j in range(1, j_max + 1)]

    entries = []
    for spec in spectra:
        for rank, pair in enumerate(spec.pairs, start=1):
            entries.append(MergedEigenvalue(value=pair.value, j=spec.j,
                                            rank=rank, pair=pair))
    entries.sort(key=lambda e: (e.value, e.j, e.rank))
    merged = entries[:k_total]

    min_last_mode = spectra[j_max - 1].pairs[0].value
    if merged[-1].value > min_last_mode * (1 + 1e-12):
        raise ValueError(
            f"j_max={j_max} insufficient: merged value {merged[-1].value:.6g} "
            f"exceeds the smallest eigenvalue {min_last_mode:.6g} of mode "
            f"{j_max}; raise j_max")
    return merged


def kron_3d_oracle(mesh: TriMesh, n1d: int, eps: float, L: float,
                   k: int, tol: float = 1e-9) -> np.ndarray:
    """k smallest eigenvalues of the unseparated tensor-product pencil

        K3 = K2(1, eps^-2) x M1 + M2(eps^2, 1) x K1,   M3 = M2(1,1) x M1.

    Dense when the product size allows it, Lanczos otherwise.
    """
    if mesh.n_div and mesh.n_div > 40:
        raise ValueError("3D oracle is restricted to coarse meshes (n_div <= 40)")
    if n1d > 32:
        raise ValueError("3D oracle is restricted to n1d <= 32")
    K1, M1 = assemble_1d(n1d, L)
    K2s = assemble_weighted_stiffness(mesh, 1.0, eps ** -2)
    M2g = assemble_weighted_mass(mesh, eps ** 2, 1.0)
    M2 = assemble_weighted_mass(mesh, 1.0, 1.0)
    K3 = (sp.kron(K2s, M1) + sp.kron(M2g, K1)).tocsr()
    M3 = sp.kron(M2, M1).tocsr()
    n = K3.shape[0]
    if n <= DENSE_ORACLE_MAX_N:
        values, _ = dense_eigen_oracle(K3, M3)
        return values[:k]
    pairs = smallest_eigenpairs(K3, M3, k, tol=tol)
    return np.array([p.value for p in pairs])


def discrete_mode_merge(mesh: TriMesh, n1d: int, eps: float, L: float,
                        k: int, tol: float = 1e-9) -> np.ndarray:
    """Merge of 2D pencil spectra over the *discrete* vertical eigenvalues
    of (K1, M1); equals the 3D tensor spectrum exactly in exact arithmetic."""
    K1, M1 = assemble_1d(n1d, L)
    gammas, _ = dense_eigen_oracle(K1, M1)
    per_mode = min(k, len(mesh.vertices))
    values = []
    for gamma in gammas:
        pencil = assemble_mode_pencil(mesh, eps, float(gamma))
        n = pencil.K.shape[0]
        if n <= DENSE_ORACLE_MAX_N:
            vals, _ = dense_eigen_oracle(pencil.K, pencil.M)
            values.extend(vals[:per_mode])
        else:
            pairs = smallest_eigenpairs(pencil.K, pencil.M, per_mode, tol=tol)
            values.extend(p.value for p in pairs)
    values.sort()
    return np.array(values[:k])


def eigenvector_error(pair: EigenPair, j: int, root: LimitRoot, mesh: TriMesh,
                      L: float = None):
    """L2 errors of the separated FEM field against the limit eigenvector.

    The FEM pair is scale/sign-aligned to the limit field by the full-cell
    L2 inner product; the vertical factors sin(j pi x3/L) are shared and
    normalized, so both errors reduce to 2D integrals evaluated with the
    edge-midpoint rule (exact for quadratics):

    * e_F: relative L2(fiber) error of alpha*w against lam*u0 + 1,
    * e_M: relative L2(matrix) error of alpha*w against the constant 1.
    """
    if root.j != j:
        raise ValueError(f"mode label mismatch: pair from mode {j}, root mode {root.j}")
    geometry = mesh.geometry
    center = np.asarray(geometry.center)
    r = geometry.radius
    lam = root.lam

    areas = signed_areas(mesh.vertices, mesh.triangles)
    w = pair.vector

    verts = mesh.vertices[mesh.triangles]          # (nt, 3, 2)
    wloc = w[mesh.triangles]                       # (nt, 3)
    mids = 0.5 * (verts + np.roll(verts, -1, axis=1))
    wmid = 0.5 * (wloc + np.roll(wloc, -1, axis=1))

    rho = np.hypot(mids[..., 0] - center[0], mids[..., 1] - center[1])
    fiber = mesh.tags == FIBER
    g = np.ones_like(wmid)
    g[fiber] = lam * u0_eval(lam, np.clip(rho[fiber], 0.0, r), r) + 1.0

    wq = areas[:, None] / 3.0                      # midpoint-rule weights

    num = float(np.sum(wq * wmid * g))
    den = float(np.sum(wq * wmid * wmid))
    alpha = num / den

    diff2 = (alpha * wmid - g) ** 2
    err_f = float(np.sqrt(np.sum((wq * diff2)[fiber])))
    ref_f = float(np.sqrt(np.sum((wq * g * g)[fiber])))
    matrix = mesh.tags == MATRIX
    err_m = float(np.sqrt(np.sum((wq * diff2)[matrix])))
    ref_m = float(np.sqrt(np.sum((wq * g * g)[matrix])))
    return err_f / ref_f, err_m / ref_m


def discrete_disk_mu1(mesh: TriMesh, tol: float = 1e-9) -> float:
    """First Dirichlet eigenvalue of the fitted disk on this mesh."""
    K_D, M_D, _ = assemble_dirichlet_disk(mesh)
    if K_D.shape[0] <= DENSE_ORACLE_MAX_N:
        values, _ = dense_eigen_oracle(K_D, M_D)
        return float(values[0])
    return smallest_eigenpairs(K_D, M_D, 1, tol=tol)[0].value


def convergence_sweep(geometry: CellGeometry, eps_list, n_div: int,
                      j_max: int, k_total: int, n_terms: int = 500,
                      eig_tol: float = 1e-9, threads: int = 1,
                      mesh: TriMesh = None) -> ConvergenceReport:
    """Full epsilon sweep against the limit spectrum.

    Merged eigenvalues pair with the limit root of the same mode label j.
    The bound column is mu1 + eps^2 (k pi / L)^2 with the k-th *merged*
    rank, the slack subtracts lambda_eps, and c_h reports the same-mesh
    overestimate of mu1 so the h-effect can be separated from the
    eps-effect.
    """
    eps_list = list(eps_list)
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("eps_list must be strictly decreasing")
    if mesh is None:
        mesh = generate_mesh(geometry, n_div)
    params = DispersionParams(geometry=geometry, n_terms=n_terms)
    roots = {root.j: root for root in limit_eigenvalues(params, j_max)}
    mu1_h = discrete_disk_mu1(mesh, tol=eig_tol)
    c_h = mu1_h - params.mu1
    L = geometry.height

    rows = []
    reorderings = []
    for eps in eps_list:
        merged = merged_spectrum(mesh, eps, j_max, k_total, L=L, tol=eig_tol,
                                 threads=threads)
        for k, entry in enumerate(merged, start=1):
            lam0_k = (k * math.pi / L) ** 2
            bound = params.mu1 + eps ** 2 * lam0_k
            root = roots[entry.j]
            err_f, err_m = eigenvector_error(entry.pair, entry.j, root, mesh, L)
            rows.append(ReportRow(
                eps=eps, k=k, j=entry.j, rank=entry.rank,
                lambda_eps=entry.value, bound=bound,
                slack=bound - entry.value, lambda_limit=root.lam,
                gap=abs(entry.value - root.lam),
                e_fiber=err_f, e_matrix=err_m))
            if entry.rank == 1 and entry.j != k:
                reorderings.append({"eps": eps, "k": k, "j": entry.j})

    return ConvergenceReport(rows=rows, geometry=geometry, n_div=n_div,
                             mu1_exact=params.mu1, mu1_discrete=mu1_h,
                             c_h=c_h, roots=list(roots.values()),
                             mesh_hash=mesh.content_hash(), eig_tol=eig_tol,
                             reorderings=reorderings)
