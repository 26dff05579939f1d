"""Small dense linear-algebra helpers shared by the operator modules."""

import numpy as np
from scipy.linalg import null_space

EPS = np.finfo(float).eps
COORD_TOL = 1e-10


def canonical_sign(v, tol=1e-12):
    """Flip ``v`` so its first coordinate with ``|v_i| > tol`` is positive."""
    v = np.asarray(v, dtype=float)
    nz = np.flatnonzero(np.abs(v) > tol)
    if len(nz) and v[nz[0]] < 0:
        return -v
    return v.copy()


def canonical_basis(b, tol=COORD_TOL):
    """Deterministic orthonormal basis of ``span(b)``; ``b`` has orthonormal columns.

    Picks, one vector at a time, the unit vector of the remaining subspace with
    the lexicographically largest pattern of absolute coordinates (the
    normalized projection of the first coordinate axis that is not
    orthogonal to the subspace), first nonzero coordinate positive.
    """
    b = np.asarray(b, dtype=float)
    n, g = b.shape
    out = []
    while b.shape[1]:
        rows = np.linalg.norm(b, axis=1)
        j = int(np.flatnonzero(rows > tol)[0]) if np.any(rows > tol) else int(np.argmax(rows))
        c = b[j] / np.linalg.norm(b[j])
        v = canonical_sign(b @ c)
        v /= np.linalg.norm(v)
        out.append(v)
        rest = null_space(c[None, :]) if b.shape[1] > 1 else np.zeros((b.shape[1], 0))
        b = b @ rest
        if b.shape[1]:
            # re-orthonormalize against drift
            b, _ = np.linalg.qr(b)
    return np.column_stack(out) if out else np.zeros((n, 0))


def orth_complement(u):
    """Orthonormal basis (columns) of the orthogonal complement of the unit vector ``u``."""
    u = np.asarray(u, dtype=float)
    if len(u) == 1:
        return np.zeros((1, 0))
    return null_space(u[None, :])


def unit_null_vectors(rows):
    """Orthonormal basis of ``{w : rows @ w = 0}``."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    if rows.shape[0] == 0:
        return np.eye(rows.shape[1])
    return null_space(rows)
