"""Truncated SVD of rectangular matrices and row-clustering routines.

Community structure is recovered from the top-K right singular vectors
of a rectangular slice of the adjacency matrix: k-means on the raw
rows for the plain block model, and k-median on the row-normalized
("spherical") rows for the degree-corrected model, whose row norms
carry the node-activeness information.
"""

from __future__ import annotations

import logging
from typing import NamedTuple

import numpy as np

logger = logging.getLogger(__name__)

# Above this size the dense decomposition gives way to deflated power
# iteration on M^T M.
DENSE_SVD_LIMIT = 2000

_ZERO_ROW_TOL = 1e-12


class SingularBasis(NamedTuple):
    U: np.ndarray      # n x K, orthonormal columns (top right singular vectors)
    sigma: np.ndarray  # K singular values, nonincreasing


class ClusterResult(NamedTuple):
    labels: np.ndarray   # length n, values in 1..K
    centers: np.ndarray  # K x d
    objective: float


def _fix_signs(U: np.ndarray) -> np.ndarray:
    """Flip column signs so the largest-magnitude entry of each column is positive."""
    for j in range(U.shape[1]):
        i = int(np.argmax(np.abs(U[:, j])))
        if U[i, j] < 0:
            U[:, j] = -U[:, j]
    return U


def _power_iteration_svd(M: np.ndarray, k: int, tol: float = 1e-10, max_iter: int = 300):
    """Top-k right singular pairs by deflated power iteration on M^T M.

    Initialization is drawn from a fixed-seed generator, so the result
    is deterministic given M.
    """
    n = M.shape[1]
    rng = np.random.default_rng(0)
    V = np.zeros((n, k))
    sigma = np.zeros(k)
    for j in range(k):
        v = rng.standard_normal(n)
        v -= V[:, :j] @ (V[:, :j].T @ v)
        v /= np.linalg.norm(v)
        for _ in range(max_iter):
            w = M.T @ (M @ v)
            w -= V[:, :j] @ (V[:, :j].T @ w)
            norm_w = np.linalg.norm(w)
            if norm_w == 0.0:
                # v lies in the null space; any deflated unit vector will do
                break
            v_new = w / norm_w
            delta = min(np.linalg.norm(v_new - v), np.linalg.norm(v_new + v))
            v = v_new
            if delta < tol:
                break
        V[:, j] = v
        sigma[j] = np.linalg.norm(M @ v)
    order = np.argsort(-sigma, kind="stable")
    return V[:, order], sigma[order]


def top_k_right_singular(M: np.ndarray, k: int) -> SingularBasis:
    """Top-k right singular vectors and values of a rectangular matrix.

    Dense decomposition when min(M.shape) <= DENSE_SVD_LIMIT, deflated
    power iteration beyond that.  Column signs follow a fixed
    convention (largest-magnitude entry positive) for reproducibility.
    """
    M = np.asarray(M, dtype=float)
    if k < 1 or k > min(M.shape):
        raise ValueError(f"need 1 <= k <= min(M.shape), got k={k}, shape={M.shape}")
    if min(M.shape) <= DENSE_SVD_LIMIT:
        _, s, Vt = np.linalg.svd(M, full_matrices=False)
        U = Vt[:k].T.copy()
        sigma = s[:k].copy()
    else:
        U, sigma = _power_iteration_svd(M, k)
    return SingularBasis(_fix_signs(U), sigma)


def _seed_centers(X: np.ndarray, k: int, rng: np.random.Generator, squared: bool) -> np.ndarray:
    """k-means++ style seeding; distance weights are squared for k-means,
    plain for k-median."""
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]))
    centers[0] = X[int(rng.integers(n))]
    if k == 1:
        return centers
    dmin = np.linalg.norm(X - centers[0], axis=1)
    for c in range(1, k):
        w = dmin**2 if squared else dmin
        total = w.sum()
        if total > 0.0:
            idx = int(rng.choice(n, p=w / total))
        else:
            idx = int(rng.integers(n))
        centers[c] = X[idx]
        dmin = np.minimum(dmin, np.linalg.norm(X - centers[c], axis=1))
    return centers


def _assign(X: np.ndarray, centers: np.ndarray):
    """Nearest-center labels (0-based; ties to the lowest index) and distances."""
    d = np.linalg.norm(X[:, None, :] - centers[None, :, :], axis=2)
    labels = np.argmin(d, axis=1)
    return labels, d[np.arange(X.shape[0]), labels]

def _repair_empty(X, centers, labels, dist, k):
    """Reseed each empty cluster at the point farthest from its current center."""
    counts = np.bincount(labels, minlength=k)
    empties = np.nonzero(counts == 0)[0]
    if empties.size == 0:
        return False
    d = dist.copy()
    for c in empties:
        idx = int(np.argmax(d))
        centers[c] = X[idx]
        d[idx] = -1.0
    logger.debug("reseeded %d empty cluster(s)", empties.size)
    return True


def _lloyd(X: np.ndarray, centers: np.ndarray, max_iter: int = 100):
    """Lloyd iterations for k-means.  Returns labels, centers, objective and
    the per-iteration objective trace (nonincreasing)."""
    k = centers.shape[0]
    centers = centers.copy()
    labels = None
    trace = []
    for _ in range(max_iter):
        new_labels, dist = _assign(X, centers)
        trace.append(float(np.sum(dist**2)))
        repaired = _repair_empty(X, centers, new_labels, dist, k)
        if not repaired and labels is not None and np.array_equal(new_labels, labels):
            labels = new_labels
            break
        labels = new_labels
        for c in range(k):
            mask = labels == c
            if mask.any():
                centers[c] = X[mask].mean(axis=0)
    _, dist = _assign(X, centers)
    return labels, centers, float(np.sum(dist**2)), trace


def kmeans(X: np.ndarray, k: int, rng: np.random.Generator,
           restarts: int = 10, max_iter: int = 100) -> ClusterResult:
    """k-means with k-means++ seeding, Lloyd iterations and restarts.

    The best objective (sum of squared distances to assigned centers)
    over ``restarts`` runs is kept.  Deterministic given the generator.
    Empty clusters are reseeded at the point farthest from its current
    center; if the data cannot fill k clusters, the result may leave
    some labels unused.
    """
    X = np.asarray(X, dtype=float)
    if X.shape[0] < k:
        raise ValueError(f"need at least k={k} rows, got {X.shape[0]}")
    best = None
    for _ in range(restarts):
        centers0 = _seed_centers(X, k, rng, squared=True)
        labels, centers, obj, _ = _lloyd(X, centers0, max_iter)
        if best is None or obj < best[2]:
            best = (labels, centers, obj)
    return ClusterResult(best[0] + 1, best[1], best[2])


def geometric_median(P: np.ndarray, tol: float = 1e-8, max_iter: int = 500) -> np.ndarray:
    """Geometric median by Weiszfeld iteration with the Vardi-Zhang correction
    for iterates that coincide with a data point."""
    P = np.asarray(P, dtype=float)
    y = P.mean(axis=0)
    for _ in range(max_iter):
        d = np.linalg.norm(P - y, axis=1)
        on_point = d < _ZERO_ROW_TOL
        if on_point.all():
            return y
        w = 1.0 / d[~on_point]
        T = (P[~on_point] * w[:, None]).sum(axis=0) / w.sum()
        eta = int(on_point.sum())
        if eta == 0:
            y_new = T
        else:
            r = np.linalg.norm((T - y) * w.sum())
            if r <= eta:
                return y
            step = eta / r
            y_new = (1.0 - step) * T + step * y
        if np.linalg.norm(y_new - y) < tol:
            return y_new
        y = y_new
    return y


def _kmedian_once(X: np.ndarray, centers: np.ndarray, max_iter: int = 100):
    """Alternating assignment / geometric-median updates.  Returns labels,
    centers, objective (sum of plain distances) and the objective trace."""
    k = centers.shape[0]
    centers = centers.copy()
    labels = None
    trace = []
    for _ in range(max_iter):
        new_labels, dist = _assign(X, centers)
        trace.append(float(dist.sum()))
        repaired = _repair_empty(X, centers, new_labels, dist, k)
        if not repaired and labels is not None and np.array_equal(new_labels, labels):
            labels = new_labels
            break
        labels = new_labels
        for c in range(k):
            mask = labels == c
            if mask.any():
                centers[c] = geometric_median(X[mask])
    _, dist = _assign(X, centers)
    return labels, centers, float(dist.sum()), trace


def kmedian_spherical(X: np.ndarray, k: int, rng: np.random.Generator,
                      restarts: int = 10, max_iter: int = 100) -> ClusterResult:
    """k-median clustering: centers are geometric medians, the objective is
    the sum of Euclidean (not squared) distances to assigned centers.
    Intended for row-normalized singular-vector rows."""
    X = np.asarray(X, dtype=float)
    if X.shape[0] < k:
        raise ValueError(f"need at least k={k} rows, got {X.shape[0]}")
    best = None
    for _ in range(restarts):
        centers0 = _seed_centers(X, k, rng, squared=False)
        labels, centers, obj, _ = _kmedian_once(X, centers0, max_iter)
        if best is None or obj < best[2]:
            best = (labels, centers, obj)
    return ClusterResult(best[0] + 1, best[1], best[2])


def spherical_embed(U: np.ndarray):
    """Scale each row of U to unit norm.

    Returns (rows, rownorms, zero_rows): the normalized matrix (rows of
    norm < 1e-12 are left as zeros), the original row norms, and the
    indices of the zero rows.
    """
    U = np.asarray(U, dtype=float)
    norms = np.linalg.norm(U, axis=1)
    zero_rows = np.nonzero(norms < _ZERO_ROW_TOL)[0]
    rows = U.copy()
    nonzero = norms >= _ZERO_ROW_TOL
    rows[nonzero] /= norms[nonzero, None]
    return rows, norms, zero_rows


def spectral_cluster_rect(Arect: np.ndarray, k: int, rng: np.random.Generator,
                          basis: SingularBasis | None = None) -> np.ndarray:
    """Membership for all n nodes from an n1 x n rectangular slice:
    k-means on the rows of the top-k right singular vectors.

    A precomputed SingularBasis for Arect may be passed to avoid
    repeating the decomposition across candidate values of k.
    """
    if basis is None:
        basis = top_k_right_singular(Arect, k)
    return kmeans(basis.U[:, :k], k, rng).labels


def spherical_spectral_cluster_rect(Arect: np.ndarray, k: int, rng: np.random.Generator,
                                    basis: SingularBasis | None = None):
    """Degree-robust membership from a rectangular slice.

    Rows of the top-k right singular vectors are scaled to unit norm
    and clustered with k-median; zero rows are assigned to the largest
    estimated cluster.  Also returns the row norms, which estimate the
    community-normalized node activeness.
    """
    if basis is None:
        basis = top_k_right_singular(Arect, k)
    U = basis.U[:, :k]
    rows, rownorms, zero_rows = spherical_embed(U)
    nonzero = np.setdiff1d(np.arange(U.shape[0]), zero_rows)
    if nonzero.size < k:
        raise ValueError(f"only {nonzero.size} nonzero rows for k={k} clusters")
    result = kmedian_spherical(rows[nonzero], k, rng)
    labels = np.empty(U.shape[0], dtype=np.int64)
    labels[nonzero] = result.labels
    if zero_rows.size:
        counts = np.bincount(result.labels, minlength=k + 1)
        labels[zero_rows] = int(np.argmax(counts[1:])) + 1
        logger.debug("assigned %d zero row(s) to the largest cluster", zero_rows.size)
    return labels, rownorms
