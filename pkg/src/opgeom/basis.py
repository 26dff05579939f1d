"""Greedy deflation basis on which an operator preserves orthogonality.

Pick a unit vector where ``||Tx||`` is largest, restrict ``T`` to the
orthogonal complement of everything picked so far, and repeat. In a
Euclidean space every step is a top singular vector of the restricted
operator, so the images of the resulting orthonormal basis are mutually
orthogonal and their norms are the singular values of ``T``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import subspace_angles

from ._linalg import EPS, canonical_basis, orth_complement
from .attain import from_white, to_white, whitened
from .errors import DimensionMismatch, HypothesisViolation

GROUP_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class BasisResult:
    vectors: np.ndarray
    """Basis vectors as rows, in the domain's original coordinates."""
    image_norms: np.ndarray
    image_gram: np.ndarray

    def to_dict(self):
        return {
            "vectors": self.vectors.tolist(),
            "image_norms": self.image_norms.tolist(),
            "image_gram": self.image_gram.tolist(),
        }


def _require_hilbert(op):
    if not op.is_hilbert:
        raise HypothesisViolation("deflation basis needs euclidean domain and codomain")


def _pick(m, q):
    """Top right-singular direction of ``m`` restricted to ``span(q)``, tie-broken."""
    mq = m @ q
    _, s, vt = np.linalg.svd(mq)
    # vt is square; rows past len(s) carry singular value zero
    sigma = np.zeros(q.shape[1])
    sigma[:len(s)] = s
    # relative band: scaling T must not change which directions tie
    g = int(np.sum(sigma >= sigma[0] * (1 - GROUP_RTOL)))
    # vt has q.shape[1] rows; the group of maximizers spans the leading g rows
    group = q @ vt[:g].T
    return canonical_basis(group)[:, 0]


def greedy_orthogonal_basis(op, seed=0):
    """Deflation basis of ``op`` (euclidean domain and codomain).

    ``seed`` is accepted for interface symmetry; the construction is fully
    deterministic, ties between maximizers being broken by coordinate pattern.
    """
    _require_hilbert(op)
    m = whitened(op)
    n = op.domain.dim
    q = np.eye(n)
    picked = []
    for _ in range(n):
        u = _pick(m, q)
        picked.append(u)
        c = q.T @ u
        q = q @ orth_complement(c / np.linalg.norm(c))
    u = np.array(picked)
    images = u @ m.T
    norms = np.linalg.norm(images, axis=1)
    # restricting to smaller subspaces can only lower the maximum; undo rounding jitter
    if np.any(np.diff(norms) > 1e-12 * max(norms[0], 1.0)):
        raise AssertionError("deflation produced increasing image norms")
    norms = np.minimum.accumulate(norms)
    return BasisResult(from_white(op.domain, u), norms, images @ images.T)


def basis_result_from_vectors(op, vectors):
    """``BasisResult`` for a caller-supplied basis (rows), in the given order."""
    _require_hilbert(op)
    vectors = np.asarray(vectors, dtype=float)
    if vectors.shape != (op.domain.dim, op.domain.dim):
        raise DimensionMismatch("expected one basis vector per domain dimension")
    images = to_white(op.domain, vectors) @ whitened(op).T
    return BasisResult(vectors, np.linalg.norm(images, axis=1), images @ images.T)


def normalized_offdiagonal(result):
    g = result.image_gram
    off = g - np.diag(np.diag(g))
    scale = result.image_norms[0] ** 2 + EPS if len(result.image_norms) else EPS
    return float(np.max(np.abs(off)) / scale) if off.size else 0.0


def verify_orthogonality_on_basis(op, result, tol=1e-8):
    """True when the images of the basis are pairwise orthogonal.

    Off-diagonal Gram entries are measured relative to the largest squared
    image norm.
    """
    if result.image_gram.shape != (op.domain.dim, op.domain.dim):
        raise DimensionMismatch("basis result does not match the operator")
    return normalized_offdiagonal(result) <= tol


def compare_with_svd(op, result=None, tol=1e-8):
    """Cross-check a deflation basis against the singular value decomposition.

    Returns a dict with the singular values, the largest gap between image
    norms and singular values, the largest principal angle between each group
    of greedy vectors and the matching singular subspace (groups are runs of
    equal singular values), and a rank-deficiency flag.
    """
    _require_hilbert(op)
    if result is None:
        result = greedy_orthogonal_basis(op)
    m = whitened(op)
    n = op.domain.dim
    _, s, vt = np.linalg.svd(m)
    sv = np.zeros(n)
    sv[:len(s)] = s
    gap = float(np.max(np.abs(result.image_norms - sv)))
    u = to_white(op.domain, result.vectors)
    scale = max(sv[0], 1.0)
    angles = []
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and abs(sv[stop] - sv[start]) <= tol * scale:
            stop += 1
        a = subspace_angles(u[start:stop].T, vt[start:stop].T)
        angles.append({"sigma": float(sv[start]), "size": stop - start, "max_angle": float(np.max(a))})
        start = stop
    rank = int(np.sum(sv > tol * scale))
    return {
        "singular_values": sv.tolist(),
        "max_value_gap": gap,
        "subspace_angles": angles,
        "rank": rank,
        "rank_deficient": rank < n,
        "images_form_basis": rank == n and op.codomain.dim == n,
    }
