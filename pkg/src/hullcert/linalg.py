"""Dense symmetric linear algebra with explicit rank tolerances.

Everything downstream (kernel intersections, face spans, rounding
subspaces) goes through these helpers so that a single declared rank
tolerance governs every verdict.
"""

import numpy as np

# Relative rank tolerance used for every kernel / nullspace decision.
RANK_TOL = 1e-8


class SubspaceBasis:
    """Orthonormal basis of a linear subspace of R^dim.

    ``basis`` has shape (dim, k); k may be zero for the trivial subspace.
    """

    def __init__(self, dim, basis=None):
        self.dim = int(dim)
        if basis is None:
            basis = np.zeros((self.dim, 0))
        basis = np.atleast_2d(np.asarray(basis, dtype=float))
        if basis.shape[0] != self.dim:
            raise ValueError(f"basis rows {basis.shape[0]} != ambient dim {self.dim}")
        if basis.shape[1] > 0:
            gram = basis.T @ basis
            if not np.allclose(gram, np.eye(basis.shape[1]), atol=1e-10):
                raise ValueError("basis columns are not orthonormal")
        self.basis = basis

    @property
    def rank(self):
        return self.basis.shape[1]

    def is_trivial(self, ):
        return self.rank == 0

    def projector(self):
        return self.basis @ self.basis.T

    def contains(self, v, tol=1e-8):
        v = np.asarray(v, dtype=float)
        resid = v - self.basis @ (self.basis.T @ v)
        return np.linalg.norm(resid) <= tol * max(1.0, np.linalg.norm(v))

    def orthogonal_complement(self):
        full = np.eye(self.dim)
        resid = full - self.basis @ (self.basis.T @ full)
        return from_spanning_vectors(resid.T, self.dim)

    def __repr__(self):
        return f"SubspaceBasis(dim={self.dim}, rank={self.rank})"


def from_spanning_vectors(vectors, dim, tol=RANK_TOL):
    """Orthonormal basis for the span of the given (row) vectors."""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
    if vectors.size == 0:
        return SubspaceBasis(dim)
    if vectors.shape[1] != dim:
        raise ValueError("vector length does not match ambient dimension")
    u, sv, _ = np.linalg.svd(vectors.T, full_matrices=False)
    if sv.size == 0:
        return SubspaceBasis(dim)
    rank = int(np.sum(sv > tol * max(1.0, sv[0])))
    return SubspaceBasis(dim, u[:, :rank])


def _check_symmetric(M, tol=1e-10):
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("matrix is not square")
    defect = np.linalg.norm(M - M.T)
    if defect > tol * max(1.0, np.linalg.norm(M)):
        raise ValueError(f"matrix is not symmetric (defect {defect:.3e})")
    return 0.5 * (M + M.T)


def sym_eig(M):
    """Eigendecomposition of a symmetric matrix.

    Returns (eigenvalues ascending, orthonormal eigenvectors as columns).
    """
    M = _check_symmetric(M)
    w, V = np.linalg.eigh(M)
    return w, V


def min_eig(M):
    M = _check_symmetric(M)
    return float(np.linalg.eigvalsh(M)[0])


def spectral_norm(M):
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def is_psd(M, tol=RANK_TOL):
    """True iff min_eig(M) >= -tol * max(1, ||M||_2)."""
    return min_eig(M) >= -tol * max(1.0, spectral_norm(M))


def kernel(M, tol=RANK_TOL):
    """Span of eigenvectors of symmetric M with |eigenvalue| <= tol * max(1, ||M||_2)."""
    w, V = sym_eig(M)
    cutoff = tol * max(1.0, np.max(np.abs(w)) if w.size else 0.0)
    mask = np.abs(w) <= cutoff
    return SubspaceBasis(M.shape[0], V[:, mask])


def linear_nullspace(rows, dim=None, tol=RANK_TOL):
    """Orthonormal basis of {z : <row, z> = 0 for all rows}.

    ``rows`` is an iterable of vectors; an empty iterable yields the full
    space (``dim`` must then be given).
    """
    rows = [np.asarray(r, dtype=float) for r in rows]
    if not rows:
        if dim is None:
            raise ValueError("dim required when rows is empty")
        return SubspaceBasis(dim, np.eye(dim))
    A = np.vstack(rows)
    if dim is not None and A.shape[1] != dim:
        raise ValueError("row length does not match ambient dimension")
    d = A.shape[1]
    u, sv, vt = np.linalg.svd(A, full_matrices=True)
    cutoff = tol * max(1.0, sv[0] if sv.size else 0.0)
    rank = int(np.sum(sv > cutoff))
    return SubspaceBasis(d, vt[rank:].T)


def intersect(s1, s2, tol=RANK_TOL):
    """Intersection of two subspaces, via the nullspace of stacked complements."""
    if s1.dim != s2.dim:
        raise ValueError("ambient dimensions differ")
    rows = []
    for s in (s1, s2):
        comp = s.orthogonal_complement()
        if comp.rank:
            rows.extend(comp.basis.T)
    return linear_nullspace(rows, dim=s1.dim, tol=tol)
