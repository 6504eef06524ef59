"""Canonical and Wold-type decompositions of contractions and isometries.

A contraction splits orthogonally into a unitary part and a completely
nonunitary part; an isometry splits further into a unitary part plus copies
of a shift stacked over its wandering subspace. Both splits are computed
here on finite coordinate models, and every structural claim is returned
with a residual instead of being assumed: ladder orthogonality,
decomposition completeness, and reducing defects are all measured.

The finite model cannot hold an honest infinite intersection, so the
hyper-range of a plain matrix means exactly what the matrix says (an
invertible matrix has full hyper-range), while graded operators shrink
their trusted window as powers accumulate and fail loudly when the window
runs out before the ranges stabilize.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, PrecisionError, ValidationError
from .hardy import GradedOperator, TruncatedSpace, abstract_space
from .linalg import (
    Subspace,
    as_matrix,
    complement,
    full_subspace,
    intersect,
    kernel,
    operator_norm,
    orthonormalize,
    reducing_residual,
    subspace_distance,
    zero_subspace,
)

__all__ = [
    "CanonicalDecomposition",
    "WoldDecomposition",
    "unitary_part",
    "hyper_range",
    "wold_split",
    "shimorin_condition",
    "cnu_eigenvector_span_residual",
    "as_graded",
]


@dataclass(frozen=True)
class CanonicalDecomposition:
    """Split of a contraction into unitary and completely nonunitary parts.

    ``unitary_part`` and ``cnu_part`` are complementary subspaces;
    ``unitary_block`` is the compression of the contraction to the unitary
    part in its basis. ``reducing_defect`` holds the two off-diagonal block
    norms and ``unitarity_defect`` the deviation of the block from a
    unitary, so the caller can audit the split instead of trusting it.
    """

    unitary_part: Subspace
    cnu_part: Subspace
    unitary_block: np.ndarray
    reducing_defect: tuple[float, float]
    unitarity_defect: float


@dataclass(frozen=True)
class WoldDecomposition:
    """Wandering-subspace ladder of an isometric window.

    ``ladder[n]`` spans the image of the wandering subspace under n
    applications; ``hyper_range`` is what remains of the window after the
    ladder is removed. ``ladder_orthogonality`` is the largest inner
    product between distinct rungs, and ``completeness_residual`` the worst
    reconstruction error of a window coordinate from the rungs plus the
    hyper-range.
    """

    hyper_range: Subspace
    wandering: Subspace
    ladder: list
    completeness_residual: float
    ladder_orthogonality: float


def as_graded(t) -> GradedOperator:
    """Wrap a square matrix as an ungraded operator exact everywhere."""
    if isinstance(t, GradedOperator):
        return t
    m = as_matrix(t, "operator")
    if m.shape[0] != m.shape[1]:
        raise DomainError(f"square matrix required, got shape {m.shape}")
    sp = abstract_space(m.shape[0])
    return GradedOperator(matrix=m, domain=sp, codomain=sp, growth=0, window=0)


def _preimage(t: np.ndarray, s: Subspace, tol: float) -> Subspace:
    """Vectors mapped into ``s`` by ``t``, with no inversion of ``t``."""
    perp = complement(s)
    if perp.dim == 0:
        return full_subspace(t.shape[1])
    return complement(orthonormalize(t.conj().T @ perp.basis, tol))


def unitary_part(t, tol: float = 1e-10) -> CanonicalDecomposition:
    """Largest subspace on which a contraction acts unitarily.

    Starts from the vectors where both ``I - T^H T`` and ``I - T T^H``
    vanish and repeatedly intersects with the preimages under the operator
    and its adjoint until the subspace stabilizes. The completely
    nonunitary part is the orthogonal complement.

    Parameters
    ----------
    t : array_like
        Square contraction (operator norm at most 1 + 1e-10).
    tol : float
        Rank and stabilization tolerance.

    Raises
    ------
    DomainError
        If the input is not square or not a contraction; the message names
        the offending norm.
    """
    m = as_matrix(t, "contraction")
    if m.shape[0] != m.shape[1]:
        raise DomainError(f"square matrix required, got shape {m.shape}")
    norm = operator_norm(m)
    if norm > 1.0 + 1e-10:
        raise DomainError(f"not a contraction: operator norm {norm:.12g}")
    n = m.shape[0]
    eye = np.eye(n)
    cur = intersect(kernel(eye - m.conj().T @ m, tol),
                    kernel(eye - m @ m.conj().T, tol))
    for _ in range(n + 1):
        if cur.dim == 0:
            break
        nxt = intersect(cur, _preimage(m, cur, tol))
        nxt = intersect(nxt, _preimage(m.conj().T, cur, tol))
        if nxt.dim == cur.dim and subspace_distance(nxt, cur) <= tol:
            cur = nxt
            break
        cur = nxt
    cnu = complement(cur)
    if cur.dim:
        block = cur.basis.conj().T @ m @ cur.basis
        eye_u = np.eye(cur.dim)
        unit_defect = max(
            float(np.linalg.norm(block.conj().T @ block - eye_u, 2)),
            float(np.linalg.norm(block @ block.conj().T - eye_u, 2)),
        )
    else:
        block = np.zeros((0, 0), dtype=np.complex128)
        unit_defect = 0.0
    return CanonicalDecomposition(
        unitary_part=cur,
        cnu_part=cnu,
        unitary_block=block,
        reducing_defect=reducing_residual(m, cur),
        unitarity_defect=unit_defect,
    )


def _window_subspace(space: TruncatedSpace, window: int) -> Subspace:
    mask = space.degrees_array() <= window
    basis = np.eye(space.dim)[:, mask]
    return Subspace(basis=basis.astype(np.complex128))


def hyper_range(t, n_max: int | None = None, tol: float = 1e-10) -> Subspace:
    """Common range of all powers.

    For a square matrix this is the limit of the nested ranges of T^n,
    n = 1..n_max, with early exit once two consecutive ranges agree to
    within ``tol`` in subspace distance; the matrix is taken at face value,
    so invertible inputs return the full space. For a graded operator each
    power burns ``growth`` degrees of the trusted window, and the ranges
    are intersected with the shrinking window.

    Raises
    ------
    PrecisionError
        Graded path only: the window was exhausted before the ranges
        stabilized; the message reports the deepest reliable level.
    """
    if isinstance(t, GradedOperator):
        return _hyper_range_graded(t, n_max, tol)
    m = as_matrix(t, "operator")
    if m.shape[0] != m.shape[1]:
        raise DomainError(f"square matrix required, got shape {m.shape}")
    cap = m.shape[0] + 1 if n_max is None else n_max
    if cap < 1:
        raise ValidationError("n_max must be at least 1")
    cur = orthonormalize(m, tol)
    for _ in range(cap - 1):
        nxt = orthonormalize(m @ cur.basis, tol)
        if nxt.dim == cur.dim and subspace_distance(nxt, cur) <= tol:
            return nxt
        cur = nxt
    return cur


def _hyper_range_graded(op: GradedOperator, n_max: int | None,
                        tol: float) -> Subspace:
    if op.domain.dim != op.codomain.dim:
        raise DomainError("graded hyper-range needs a square compression")
    growth = max(op.growth, 1)
    w = op.window
    cap = (w // growth + 1) if n_max is None else n_max
    cur = _window_subspace(op.domain, w)
    level = 0
    for _ in range(cap):
        if w - growth < 0:
            raise PrecisionError(
                f"window exhausted at level {level} (dim {cur.dim}) before "
                f"the ranges stabilized; rebuild at a higher degree"
            )
        image = orthonormalize(op.matrix @ cur.basis, tol)
        w -= growth
        nxt = intersect(image, _window_subspace(op.codomain, w))
        level += 1
        reference = intersect(cur, _window_subspace(op.domain, w))
        if nxt.dim == reference.dim and subspace_distance(nxt, reference) <= tol:
            return nxt
        cur = nxt
    return cur


def wold_split(s, n_max: int) -> WoldDecomposition:
    """Wandering ladder and residual hyper-range of an isometric window.

    The wandering subspace is read off the near-idempotent defect
    ``I - S S^H`` (eigenvalues above one half), the ladder applies the
    operator ``n_max`` times, and the hyper-range is the orthogonal
    complement of the ladder inside the trusted window. Truncation shows up
    in the reported residuals rather than being silently absorbed: an
    ``n_max`` too small to exhaust the window simply produces a visible
    completeness residual.

    Raises
    ------
    DomainError
        If the operator is not isometric on its window within 1e-10.
    """
    op = as_graded(s)
    if op.domain.dim != op.codomain.dim:
        raise DomainError("wold_split needs a square compression")
    if n_max < 0:
        raise ValidationError("n_max must be nonnegative")
    restricted = op.restricted()
    if restricted.shape[1]:
        gram = restricted.conj().T @ restricted
        defect = float(np.linalg.norm(gram - np.eye(gram.shape[0]), 2))
        if defect > 1e-10:
            raise DomainError(
                f"operator is not isometric on its window: defect {defect:.3e}"
            )
    n = op.domain.dim
    flat = np.eye(n) - op.matrix @ op.matrix.conj().T
    vals, vecs = np.linalg.eigh((flat + flat.conj().T) / 2.0)
    wandering = orthonormalize(vecs[:, vals >= 0.5])
    ladder = [wandering]
    rung = wandering.basis
    for _ in range(n_max):
        rung = op.matrix @ rung
        step = orthonormalize(rung)
        if step.dim == 0:
            break
        ladder.append(step)
    cross = 0.0
    for i in range(len(ladder)):
        for j in range(i + 1, len(ladder)):
            if ladder[i].dim and ladder[j].dim:
                cross = max(cross, operator_norm(
                    ladder[i].basis.conj().T @ ladder[j].basis))
    window_sub = _window_subspace(op.domain, op.window)
    if wandering.dim:
        span = orthonormalize(np.hstack([r.basis for r in ladder if r.dim]))
        residual_dirs = complement(span)
        hyper = intersect(residual_dirs, window_sub)
    else:
        span = zero_subspace(n)
        hyper = window_sub
    p_h = hyper.projector()
    rung_projs = [r.projector() for r in ladder if r.dim]
    worst = 0.0
    for idx in np.flatnonzero(op.domain.degrees_array() <= op.window):
        h = np.zeros(n, dtype=np.complex128)
        h[idx] = 1.0
        rec = p_h @ h
        for p in rung_projs:
            rec = rec + p @ h
        worst = max(worst, float(np.linalg.norm(h - rec)))
    return WoldDecomposition(
        hyper_range=hyper,
        wandering=wandering,
        ladder=ladder,
        completeness_residual=worst,
        ladder_orthogonality=cross,
    )


def shimorin_condition(t) -> tuple[bool, float]:
    """Concavity-type test ``T T^H + (T^H T)^(-1) <= 2 I``.

    Returns ``(verdict, mu)`` where ``mu`` is the most negative eigenvalue
    of ``2I - T T^H - (T^H T)^(-1)`` and the verdict asks ``mu >= -1e-10``.

    Raises
    ------
    DomainError
        If the smallest singular value is at most 1e-10, in which case the
        inverse above is meaningless.
    """
    m = as_matrix(t, "operator")
    if m.shape[0] != m.shape[1]:
        raise DomainError(f"square matrix required, got shape {m.shape}")
    smin = float(np.linalg.svd(m, compute_uv=False)[-1]) if m.size else 0.0
    if smin <= 1e-10:
        raise DomainError(f"operator is numerically singular: sigma_min {smin:.3e}")
    gram = m.conj().T @ m
    slack = 2.0 * np.eye(m.shape[0]) - m @ m.conj().T - np.linalg.inv(gram)
    mu = float(np.min(np.linalg.eigvalsh((slack + slack.conj().T) / 2.0)))
    return (mu >= -1e-10, mu)


def cnu_eigenvector_span_residual(s, grid) -> float:
    """Leakage of adjoint-eigenvector sections outside the shift-type part.

    For each grid point w in the open disc the (approximate) adjoint
    eigenvector is taken as the smallest singular direction of
    ``S^H - conj(w) I``; for shift-like operators these are the kernel
    sections. The result is the largest distance from such a section to the
    completely nonunitary window part. With an empty grid there is nothing
    to span and the norm of the cnu projector is returned, which makes the
    degenerate answer 1.0 whenever a cnu part exists at all.
    """
    op = as_graded(s)
    if op.domain.dim != op.codomain.dim:
        raise DomainError("square compression required")
    n = op.domain.dim
    hyper = hyper_range(op.matrix)
    cnu = intersect(complement(hyper), _window_subspace(op.domain, op.window))
    p_cnu = cnu.projector()
    pts = list(grid)
    if not pts:
        return operator_norm(p_cnu)
    worst = 0.0
    eye = np.eye(n)
    for w in pts:
        if abs(w) >= 1.0:
            raise DomainError(f"grid point outside the open disc: |w|={abs(w)}")
        _, _, vh = np.linalg.svd(op.matrix.conj().T - np.conj(w) * eye)
        section = vh[-1].conj()
        worst = max(worst, float(np.linalg.norm(section - p_cnu @ section)))
    return worst
