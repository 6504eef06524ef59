"""Numerically hardened subspace calculus over complex matrices.

Subspaces are stored as matrices with orthonormal columns; every operation
makes its rank decision through an SVD with an explicit relative threshold,
so downstream verdicts do not depend on basis choices or input conditioning.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DimensionError, ValidationError

DEFAULT_TOL = 1e-10

__all__ = [
    "DEFAULT_TOL",
    "Subspace",
    "as_matrix",
    "orthonormalize",
    "zero_subspace",
    "full_subspace",
    "intersect",
    "complement",
    "reducing_residual",
    "principal_angles",
    "subspace_distance",
    "operator_norm",
    "kernel",
    "pivoted_cholesky",
]


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite complex128 2-D array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise ValidationError(f"{name} must be 2-D, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{name} contains non-finite entries")
    return m


@dataclass(frozen=True)
class Subspace:
    """A subspace of C^n held as an orthonormal column basis.

    Attributes
    ----------
    basis : ndarray, shape (ambient_dim, dim)
        Orthonormal columns. A zero-dimensional subspace has shape (n, 0).
    tol : float
        The rank threshold the subspace was constructed with; inherited by
        derived subspaces.
    """

    basis: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        q = self.basis
        if q.ndim != 2:
            raise ValidationError("subspace basis must be 2-D")
        if q.shape[1] > 0:
            defect = np.linalg.norm(q.conj().T @ q - np.eye(q.shape[1]))
            if defect > 1e-12 * max(1.0, q.shape[1]):
                raise ValidationError(
                    f"basis columns not orthonormal (defect {defect:.3e})"
                )

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def project(self, v: np.ndarray) -> np.ndarray:
        return self.basis @ (self.basis.conj().T @ v)


def orthonormalize(m, tol: float = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the column span of ``m``.

    Columns whose singular value falls at or below ``tol`` times the largest
    singular value are discarded, so the result is well defined for
    rank-deficient input. The zero matrix yields the zero subspace.
    """
    a = as_matrix(m)
    if a.shape[1] == 0 or not np.any(a):
        return Subspace(np.zeros((a.shape[0], 0), dtype=np.complex128), tol)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    rank = int(np.sum(s > tol * s[0]))
    return Subspace(np.ascontiguousarray(u[:, :rank]), tol)


def zero_subspace(n: int, tol: float = DEFAULT_TOL) -> Subspace:
    return Subspace(np.zeros((n, 0), dtype=np.complex128), tol)


def full_subspace(n: int, tol: float = DEFAULT_TOL) -> Subspace:
    return Subspace(np.eye(n, dtype=np.complex128), tol)


def _check_same_ambient(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(
            f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}"
        )


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection of two subspaces of the same ambient space.

    Principal vectors whose cosine (singular value of a^H b) reaches
    ``1 - tol`` are kept, where ``tol`` is the larger of the two construction
    tolerances. The result is re-orthonormalized.
    """
    _check_same_ambient(a, b)
    tol = max(a.tol, b.tol)
    if a.dim == 0 or b.dim == 0:
        return zero_subspace(a.ambient_dim, tol)
    u, s, _ = np.linalg.svd(a.basis.conj().T @ b.basis)
    k = int(np.sum(s >= 1.0 - tol))
    if k == 0:
        return zero_subspace(a.ambient_dim, tol)
    return orthonormalize(a.basis @ u[:, :k], tol)


def complement(s: Subspace) -> Subspace:
    """Orthogonal complement within the ambient space."""
    n = s.ambient_dim
    if s.dim == 0:
        return full_subspace(n, s.tol)
    if s.dim == n:
        return zero_subspace(n, s.tol)
    # Left null space of the basis via full SVD; exact orthogonality to s.
    u, _, _ = np.linalg.svd(s.basis, full_matrices=True)
    return Subspace(np.ascontiguousarray(u[:, s.dim:]), s.tol)


def reducing_residual(t, s: Subspace) -> tuple[float, float]:
    """How far ``s`` is from reducing the square operator ``t``.

    Returns ``(||(I-P) T P||, ||P T (I-P)||)`` in operator norm, where P
    projects onto ``s``. Both vanish iff s and its complement are invariant.
    """
    m = as_matrix(t)
    if m.shape[0] != m.shape[1]:
        raise DimensionError("reducing_residual needs a square operator")
    if m.shape[0] != s.ambient_dim:
        raise DimensionError("operator and subspace ambient dimensions differ")
    if s.dim == 0 or s.dim == s.ambient_dim:
        return (0.0, 0.0)
    q = s.basis
    qc = complement(s).basis
    low = operator_norm(qc.conj().T @ (m @ q))
    up = operator_norm(q.conj().T @ (m @ qc))
    return (low, up)


def principal_angles(a: Subspace, b: Subspace) -> np.ndarray:
    """Principal angles between two subspaces, ascending, in [0, pi/2].

    The cosines are the singular values of a^H b clamped to [0, 1]; the
    number of angles is min(dim a, dim b).
    """
    _check_same_ambient(a, b)
    k = min(a.dim, b.dim)
    if k == 0:
        return np.zeros(0)
    s = np.linalg.svd(a.basis.conj().T @ b.basis, compute_uv=False)
    return np.arccos(np.clip(s[:k], 0.0, 1.0))


def subspace_distance(a: Subspace, b: Subspace) -> float:
    """Operator-norm distance of the orthogonal projectors."""
    _check_same_ambient(a, b)
    return operator_norm(a.projector() - b.projector())


def operator_norm(m) -> float:
    """Largest singular value; 0.0 for an empty matrix."""
    a = np.asarray(m, dtype=np.complex128)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def kernel(m, tol: float = DEFAULT_TOL) -> Subspace:
    """Null space of ``m`` with an absolute-plus-relative threshold.

    Singular values at or below ``tol * max(1, s_max)`` count as zero; the
    absolute floor keeps kernels of nearly-zero matrices well defined.
    """
    a = as_matrix(m)
    n = a.shape[1]
    if n == 0:
        return zero_subspace(0, tol)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    cutoff = tol * max(1.0, s[0] if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    if rank == n:
        return zero_subspace(n, tol)
    return Subspace(np.ascontiguousarray(vh[rank:].conj().T), tol)


def pivoted_cholesky(gram, cutoff: float = 1e-12) -> np.ndarray:
    """Rank-revealing factor C (r x n) of a Hermitian PSD matrix, C^H C = gram.

    Greedy diagonal pivoting; stops when the largest remaining diagonal
    residual is at or below ``cutoff``. Small negative residuals (roundoff,
    down to -1e-10) are tolerated; anything worse raises.

    Returns the factor whose column j holds the coordinates of the j-th
    input vector in an orthonormal basis of the span.
    """
    g = as_matrix(gram, "gram")
    n = g.shape[0]
    if g.shape[0] != g.shape[1]:
        raise DimensionError("gram matrix must be square")
    if operator_norm(g - g.conj().T) > 1e-10 * max(1.0, operator_norm(g)):
        raise ValidationError("gram matrix is not Hermitian")
    d = np.real(np.diag(g)).copy()
    rows = np.zeros((n, n), dtype=np.complex128)
    order: list[int] = []
    for step in range(n):
        p = int(np.argmax(d))
        if d[p] <= cutoff:
            if d.min() < -1e-10:
                raise ValidationError(
                    f"gram matrix indefinite (diagonal residual {d.min():.3e})"
                )
            break
        piv = np.sqrt(d[p])
        row = (g[p, :] - (rows[:step, p].conj() @ rows[:step, :])) / piv
        # Row p of the factor is exactly the pivot scale; clean it up.
        row[p] = piv
        for q in order:
            row[q] = 0.0
        rows[step, :] = row
        d -= np.abs(row) ** 2
        d[p] = 0.0
        order.append(p)
    return rows[: len(order), :]
