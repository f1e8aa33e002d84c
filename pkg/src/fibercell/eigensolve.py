"""Smallest eigenpairs of symmetric positive definite pencils (K, M).

The production path runs Lanczos on K^-1 M in the M-inner product (largest
Ritz values of K^-1 M are the reciprocals of the smallest pencil
eigenvalues) with full reorthogonalization, a deterministic all-ones start
vector, and restarts against locked converged vectors.  A dense
reduce-and-QR oracle covers every pencil small enough to afford it and
cross-checks the iterative path in the validation suite.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import splu

logger = logging.getLogger(__name__)

DENSE_ORACLE_MAX_N = 2000
_CLUSTER_REL_GAP = 1e-10


class NotSPDError(np.linalg.LinAlgError):
    """Matrix passed as SPD has a non-positive pivot."""


class EigenConvergenceError(RuntimeError):
    """Lanczos failed to reach the residual tolerance."""


@dataclass
class EigenPair:
    """One accepted pencil eigenpair: M-normalized vector and the relative
    residual ||K v - value M v|| / ||K v||."""

    value: float
    vector: np.ndarray
    residual: float


class SPDFactor:
    """Sparse symmetric factorization of an SPD matrix.

    SuperLU in symmetric mode with the diagonal-pivot threshold at zero
    performs an LDL^t-like elimination on a fill-reducing (minimum degree)
    ordering, so the diagonal of U carries the pivots: any non-positive
    pivot certifies the matrix is not SPD.
    """

    def __init__(self, K: sp.spmatrix):
        K = K.tocsc()
        if K.shape[0] != K.shape[1]:
            raise ValueError("matrix must be square")
        try:
            self._lu = splu(K, permc_spec="MMD_AT_PLUS_A",
                            diag_pivot_thresh=0.0,
                            options=dict(SymmetricMode=True))
        except RuntimeError as exc:  # exactly singular pivot
            raise NotSPDError(f"factorization failed: {exc}") from exc
        pivots = self._lu.U.diagonal()
        if np.any(pivots <= 0.0) or np.any(~np.isfinite(pivots)):
            raise NotSPDError("non-positive pivot: matrix is not SPD "
                              "(check gamma > 0 or the assembly)")
        self.pivots = pivots
        self.n = K.shape[0]

    def solve(self, b: np.ndarray) -> np.ndarray:
        return self._lu.solve(b)


def factorize_spd(K: sp.spmatrix) -> SPDFactor:
    """Factor an SPD sparse matrix; raises NotSPDError otherwise."""
    return SPDFactor(K)


def dense_eigen_oracle(K, M):
    """Full spectrum of the pencil by dense Cholesky reduction plus the
    symmetric QR algorithm (LAPACK).  Brute-force reference for any pencil
    with at most ``DENSE_ORACLE_MAX_N`` unknowns.

    Returns
    -------
    (values, vectors): ascending eigenvalues and M-orthonormal columns.
    """
    Kd = K.toarray() if sp.issparse(K) else np.asarray(K, dtype=float)
    Md = M.toarray() if sp.issparse(M) else np.asarray(M, dtype=float)
    n = Kd.shape[0]
    if n > DENSE_ORACLE_MAX_N:
        raise ValueError(f"dense oracle limited to n <= {DENSE_ORACLE_MAX_N}, got {n}")
    try:
        np.linalg.cholesky(Md)
    except np.linalg.LinAlgError as exc:
        raise NotSPDError("mass matrix is not SPD") from exc
    values, vectors = scipy.linalg.eigh(Kd, Md)
    return values, vectors


def _m_dot(M, x, y):
    return float(x @ (M @ y))


def smallest_eigenpairs(K, M, k: int, tol: float = 1e-9,
                        max_restarts: int = 6) -> list[EigenPair]:
    """k smallest eigenpairs of the SPD pencil (K, M), ascending.

    Lanczos on K^-1 M in the M-inner product with full (twice-repeated)
    reorthogonalization.  The start vector is the M-normalized all-ones
    vector; restarts fall back to a seeded pseudo-random start orthogonal
    to everything already locked.  Accepted pairs satisfy
    ``||K v - value M v|| / ||K v|| <= tol`` and are pairwise M-orthonormal.
    """
    n = K.shape[0]
    if k < 1:
        raise ValueError("k must be >= 1")
    if k >= n:
        raise ValueError(f"k={k} must be smaller than the pencil size {n}")
    factor = factorize_spd(K)
    M = M.tocsr() if sp.issparse(M) else sp.csr_matrix(M)

    rng = np.random.default_rng(20240817)
    locked_vecs: list[np.ndarray] = []
    locked_vals: list[float] = []

    start = np.ones(n)
    for restart in range(max_restarts):
        pairs = _lanczos_pass(factor, K, M, k - len(locked_vals), tol, start,
                              locked_vecs)
        for val, vec, res in pairs:
            locked_vals.append(val)
            locked_vecs.append(vec)
        if len(locked_vals) >= k:
            break
        start = rng.standard_normal(n)
    if len(locked_vals) < k:
        raise EigenConvergenceError(
            f"only {len(locked_vals)} of {k} eigenpairs converged")

    # A single Krylov space carries one vector per eigenspace, so degenerate
    # copies (symmetry doubles) can be skipped entirely.  Probe the
    # M-orthogonal complement of everything locked with seeded random starts
    # until no new eigenvalue appears below the current k-th value.
    for _ in range(6):
        kth = sorted(locked_vals)[k - 1]
        extra = min(max(2, k // 2), n - len(locked_vals))
        if extra < 1:
            break
        probe = rng.standard_normal(n)
        pairs = _lanczos_pass(factor, K, M, extra, tol, probe, locked_vecs)
        new_below = [(val, vec, res) for val, vec, res in pairs
                     if val < kth * (1 + 1e-8)]
        if not new_below:
            break
        for val, vec, res in new_below:
            locked_vals.append(val)
            locked_vecs.append(vec)

    order = np.argsort(locked_vals)[:k]
    values = [locked_vals[i] for i in order]
    vectors = [locked_vecs[i] for i in order]
    values, vectors = _orthonormalize_clusters(M, values, vectors)
    out = []
    for val, vec in zip(values, vectors):
        vec = _fix_sign(vec)
        r = K @ vec - val * (M @ vec)
        res = float(np.linalg.norm(r) / np.linalg.norm(K @ vec))
        if res > max(tol, 1e-8):
            raise EigenConvergenceError(
                f"residual {res:.2e} above tolerance after orthonormalization")
        out.append(EigenPair(value=float(val), vector=vec, residual=res))
    return out


def _lanczos_pass(factor, K, M, k, tol, start, locked):
    """One Lanczos build from ``start``, M-orthogonal to ``locked``.

    Returns converged (value, vector, residual) triples, at most k.
    """
    n = factor.n
    max_basis = int(min(n, max(2 * k + 40, 60)))
    Q = np.zeros((n, max_basis + 1))
    MQ = np.zeros((n, max_basis + 1))
    alphas = []
    betas = []

    q = start.astype(float).copy()
    q = _orthogonalize(q, M, Q[:, :0], MQ[:, :0], locked)
    nrm = np.sqrt(_m_dot(M, q, q))
    if nrm <= 0:
        return []
    q /= nrm
    Q[:, 0] = q
    MQ[:, 0] = M @ q

    converged: list[tuple[float, np.ndarray, float]] = []
    for j in range(max_basis):
        z = factor.solve(MQ[:, j])
        alpha = float(z @ MQ[:, j])
        z -= alpha * Q[:, j]
        if j > 0:
            z -= betas[-1] * Q[:, j - 1]
        z = _orthogonalize(z, M, Q[:, :j + 1], MQ[:, :j + 1], locked)
        beta = np.sqrt(max(_m_dot(M, z, z), 0.0))
        alphas.append(alpha)

        finished = False
        if beta <= 1e-14 * max(1.0, abs(alpha)):
            finished = True  # invariant subspace
        m = j + 1
        if finished or m >= k:
            theta, Y = scipy.linalg.eigh_tridiagonal(
                np.array(alphas), np.array(betas[:m - 1]))
            idx = np.argsort(theta)[::-1][:k]  # largest theta <-> smallest lambda
            # cheap Lanczos bound first, explicit residual to accept
            bound = beta * np.abs(Y[m - 1, idx]) if not finished else np.zeros(len(idx))
            if logger.isEnabledFor(logging.DEBUG):
                logger.debug("iter %d residual %.3e ritz_min %.16g", m,
                             float(bound.max(initial=0.0)),
                             1.0 / float(theta[idx[0]]) if theta[idx[0]] > 0 else np.nan)
            if finished or np.all(bound <= 0.1 * tol * np.abs(theta[idx])):
                cands = []
                all_pass = True
                for i in idx:
                    if theta[i] <= 0:
                        all_pass = False
                        continue
                    lam = 1.0 / theta[i]
                    v = Q[:, :m] @ Y[:, i]
                    r = K @ v - lam * (M @ v)
                    res = float(np.linalg.norm(r) / np.linalg.norm(K @ v))
                    if res > tol:
                        all_pass = False
                        continue
                    cands.append((lam, v, res))
                if all_pass and len(cands) == k:
                    converged = cands
                    break
                if finished and cands:
                    # exact invariant subspace smaller than k: take what it
                    # holds, the outer restart supplies the complement
                    converged = cands
                    break
        if finished:
            break
        betas.append(beta)
        Q[:, j + 1] = z / beta
        MQ[:, j + 1] = M @ Q[:, j + 1]
    return converged


def _orthogonalize(z, M, Q, MQ, locked):
    """Twice-repeated classical Gram-Schmidt in the M-inner product against
    the current basis and all locked vectors."""
    for _ in range(2):
        if Q.shape[1]:
            z -= Q @ (MQ.T @ z)
        for v in locked:
            z -= _m_dot(M, z, v) * v
    return z


def _orthonormalize_clusters(M, values, vectors):
    """M-re-orthonormalize within near-degenerate clusters and order each
    cluster by the vectors' lexicographic signature (deterministic ties)."""
    values = list(values)
    vectors = [v.copy() for v in vectors]
    i = 0
    while i < len(values):
        j = i + 1
        while (j < len(values)
               and abs(values[j] - values[i]) <= _CLUSTER_REL_GAP
               * max(1.0, abs(values[i]))):
            j += 1
        if j - i > 1:
            block = vectors[i:j]
            for a in range(len(block)):
                for b in range(a):
                    block[a] -= _m_dot(M, block[a], block[b]) * block[b]
                block[a] /= np.sqrt(_m_dot(M, block[a], block[a]))
            keyed = sorted(
                ((tuple(np.round(_fix_sign(v), 12)), idx) for idx, v in enumerate(block)))
            vectors[i:j] = [block[idx] for _, idx in keyed]
        else:
            vectors[i] /= np.sqrt(_m_dot(M, vectors[i], vectors[i]))
        i = j
    return values, vectors


def _fix_sign(v: np.ndarray) -> np.ndarray:
    idx = int(np.argmax(np.abs(v)))
    return -v if v[idx] < 0 else v


def cluster_widths(values, rel_gap: float = 1e-6) -> list[int]:
    """Sizes of near-degenerate clusters in an ascending eigenvalue list."""
    widths = []
    i = 0
    values = list(values)
    while i < len(values):
        j = i + 1
        while (j < len(values)
               and abs(values[j] - values[j - 1]) <= rel_gap * max(1.0, abs(values[j]))):
            j += 1
        widths.append(j - i)
        i = j
    return widths
