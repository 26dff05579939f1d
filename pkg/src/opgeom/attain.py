"""Operator norms and norm attainment sets.

For ``T : X -> Y`` the norm attainment set is the set of unit vectors ``x``
with ``||Tx|| = ||T||``. Three routes compute ``||T||``:

``spectral``
    both spaces euclidean; largest singular value after whitening the Gram
    matrices.
``vertex``
    polyhedral domain (l_1, l_inf, polygon); maximum over the finitely many
    extreme points of the domain ball. Exact.
``multistart``
    anything else; projected ascent on the unit sphere from many seeded
    starting points. Gives a lower bound only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import space as sp
from ._linalg import EPS, canonical_basis, canonical_sign, orth_complement
from .bjorth import bj_orthogonal
from .errors import DimensionMismatch, HypothesisViolation, MultistartFailure, ValidationError

METHODS = ("auto", "spectral", "vertex", "multistart")
DEFAULT_RESTARTS = 50


@dataclass(frozen=True, eq=False)
class OperatorSpec:
    matrix: np.ndarray
    domain: sp.SpaceSpec
    codomain: sp.SpaceSpec

    def __post_init__(self):
        try:
            m = np.array(self.matrix, dtype=float)
        except (TypeError, ValueError):
            raise DimensionMismatch("matrix must be a rectangular array of numbers") from None
        if m.ndim == 1 and self.codomain.dim == 1:
            m = m[None, :]
        if m.shape != (self.codomain.dim, self.domain.dim):
            raise DimensionMismatch(
                f"matrix shape {m.shape} does not match codomain x domain "
                f"({self.codomain.dim}, {self.domain.dim})"
            )
        if not np.all(np.isfinite(m)):
            raise ValidationError("matrix entries must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def is_square(self):
        return self.domain.dim == self.codomain.dim

    @property
    def is_hilbert(self):
        return self.domain.kind == "euclidean" and self.codomain.kind == "euclidean"

    def apply(self, x):
        return np.asarray(x, dtype=float) @ self.matrix.T

    def with_matrix(self, matrix):
        return OperatorSpec(matrix, self.domain, self.codomain)

    def to_dict(self):
        return {
            "matrix": self.matrix.tolist(),
            "domain": sp.to_dict(self.domain),
            "codomain": sp.to_dict(self.codomain),
        }


def operator(matrix, domain, codomain=None):
    """Build an ``OperatorSpec``; ``codomain`` defaults to ``domain``."""
    return OperatorSpec(matrix, domain, domain if codomain is None else codomain)


def operator_from_dict(d):
    if not isinstance(d, dict) or "matrix" not in d:
        raise ValidationError("operator must be an object with a 'matrix' field")
    m = d["matrix"]
    try:
        arr = np.array(m, dtype=float)
    except (TypeError, ValueError):
        raise DimensionMismatch("matrix must be a rectangular array of numbers") from None
    if arr.ndim != 2:
        raise DimensionMismatch("matrix must be two-dimensional")
    if "domain" in d:
        domain = sp.from_dict(d["domain"])
    else:
        domain = sp.euclidean(arr.shape[1])
    codomain = sp.from_dict(d["codomain"]) if "codomain" in d else domain
    return OperatorSpec(arr, domain, codomain)


# -- whitening ---------------------------------------------------------------

def whitened(op):
    """Matrix of ``op`` in orthonormal coordinates of both euclidean spaces."""
    if not op.is_hilbert:
        raise HypothesisViolation("whitening needs euclidean domain and codomain")
    m = op.matrix
    if op.codomain.gram is not None:
        m = op.codomain.chol.T @ m
    if op.domain.gram is not None:
        m = np.linalg.solve(op.domain.chol, m.T).T
    return m


def to_white(space, x):
    x = np.asarray(x, dtype=float)
    return x if space.gram is None else x @ space.chol


def from_white(space, u):
    u = np.asarray(u, dtype=float)
    if space.gram is None:
        return u.copy()
    return np.linalg.solve(space.chol.T, u.T).T


def unwhiten_operator(op, m):
    """Inverse of ``whitened``: matrix in original coordinates."""
    if op.codomain.gram is not None:
        m = np.linalg.solve(op.codomain.chol.T, m)
    if op.domain.gram is not None:
        m = m @ op.domain.chol.T
    return m


# -- operator norm -------------------------------------------------------------

@dataclass(frozen=True)
class NormResult:
    value: float
    argmax: np.ndarray
    method: str
    certified: bool

    def __iter__(self):
        return iter((self.value, self.argmax))

    def to_dict(self):
        return {
            "value": self.value,
            "argmax": self.argmax.tolist(),
            "method": self.method,
            "certified": self.certified,
        }


def _resolve_method(op, method):
    if method not in METHODS:
        raise ValidationError(f"unknown method {method!r}; expected one of {METHODS}")
    if method == "auto":
        if op.is_hilbert:
            return "spectral"
        if op.domain.is_polyhedral:
            return "vertex"
        return "multistart"
    if method == "spectral" and not op.is_hilbert:
        raise HypothesisViolation("spectral method needs euclidean domain and codomain")
    if method == "vertex" and not op.domain.is_polyhedral:
        raise HypothesisViolation("vertex method needs a polyhedral domain")
    return method


def _spectral(op):
    m = whitened(op)
    _, s, vt = np.linalg.svd(m)
    if len(s) == 0:
        return 0.0, from_white(op.domain, np.eye(op.domain.dim)[0])
    v = canonical_sign(vt[0])
    return float(s[0]), from_white(op.domain, v)


def _vertex(op):
    pts = sp.unit_ball_extreme_points(op.domain)
    vals = np.atleast_1d(sp.norm(op.codomain, op.apply(pts)))
    i = int(np.argmax(vals))
    return float(vals[i]), np.array(pts[i])


def _norm_grads(space, v):
    """Row-wise norming functionals (see ``space.support_functional``)."""
    nv = np.atleast_1d(sp.norm(space, v))
    safe = np.where(nv > 0, nv, 1.0)[:, None]
    if space.kind == "euclidean":
        gv = v if space.gram is None else v @ space.gram
        g = gv / safe
    elif space.kind == "lp" and space.p == math.inf:
        g = np.zeros_like(v)
        idx = np.argmax(np.abs(v), axis=1)
        rows = np.arange(len(v))
        g[rows, idx] = np.sign(v[rows, idx])
    elif space.kind == "lp" and space.p == 1.0:
        g = np.sign(v)
    elif space.kind == "lp":
        g = np.sign(v) * (np.abs(v) / safe) ** (space.p - 1)
    else:
        j = np.argmax(v @ space.facets.T, axis=1)
        g = np.array(space.facets)[j]
    g[nv == 0] = 0.0
    return g


def multistart_ascent(op, rng, restarts=DEFAULT_RESTARTS, max_iter=3000, min_step=1e-13):
    """Maximize ``||Tx||`` over the unit sphere from ``restarts`` random starts.

    All restarts run together. Each iteration tries a normalized gradient step,
    the signed coordinate directions and two shared random directions, each
    followed by radial projection back to the sphere; the best improving
    candidate is accepted and the step doubles, otherwise it halves. A restart
    stops when its step falls below ``min_step``.

    Returns ``(values, points)`` with one row per restart.
    """
    n = op.domain.dim
    x = sp.sphere_sample(op.domain, rng, restarts)
    h = np.full(restarts, 0.25)
    fx = np.atleast_1d(sp.norm(op.codomain, op.apply(x)))
    eye = np.eye(n)
    fixed = np.concatenate([eye, -eye])
    for _ in range(max_iter):
        live = h >= min_step
        if not np.any(live):
            break
        xl, hl, fl = x[live], h[live], fx[live]
        g = _norm_grads(op.codomain, op.apply(xl)) @ op.matrix
        gn = np.linalg.norm(g, axis=1, keepdims=True)
        g = np.where(gn > 0, g / np.where(gn > 0, gn, 1.0), 0.0)
        rnd = rng.standard_normal((2, n))
        rnd /= np.linalg.norm(rnd, axis=1, keepdims=True)
        dirs = np.concatenate(
            [g[:, None, :], np.broadcast_to(np.concatenate([fixed, rnd]), (len(xl), 2 * n + 2, n))],
            axis=1,
        )
        cand = xl[:, None, :] + hl[:, None, None] * dirs
        cn = np.atleast_1d(sp.norm(op.domain, cand.reshape(-1, n))).reshape(cand.shape[:2])
        cn = np.where(cn > 0, cn, np.inf)
        cand = cand / cn[..., None]
        cf = np.atleast_1d(sp.norm(op.codomain, op.apply(cand.reshape(-1, n)))).reshape(cn.shape)
        best = np.argmax(cf, axis=1)
        bf = cf[np.arange(len(xl)), best]
        better = bf > fl
        idx = np.flatnonzero(live)
        up = idx[better]
        x[up] = cand[better, best[better]]
        fx[up] = bf[better]
        h[up] = np.minimum(2 * h[up], 0.5)
        h[idx[~better]] /= 2
    return fx, x


def _best_restart(values, points, tol=1e-12):
    """Largest value; among near-ties the lexicographically smallest canonical point."""
    pts = np.array([canonical_sign(p) for p in points])
    top = values.max()
    cands = np.flatnonzero(values >= top - tol * max(1.0, abs(top)))
    order = sorted(cands, key=lambda i: tuple(pts[i]))
    i = order[0]
    return float(values[i]), pts[i]


def operator_norm(op, method="auto", seed=0, restarts=DEFAULT_RESTARTS):
    """``||T||`` and a unit vector attaining it (see the module docstring)."""
    method = _resolve_method(op, method)
    if method == "spectral":
        value, x = _spectral(op)
        return NormResult(value, x, method, True)
    if method == "vertex":
        value, x = _vertex(op)
        return NormResult(value, x, method, True)
    rng = np.random.default_rng(seed)
    values, points = multistart_ascent(op, rng, restarts)
    value, x = _best_restart(values, points)
    if value <= 0 and np.any(op.matrix != 0):
        raise MultistartFailure(f"multistart ascent did not leave 0 after {restarts} restarts")
    return NormResult(value, x, method, False)


# -- attainment sets -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AttainmentSet:
    """Description of the norm attainment set.

    ``points`` always attain the norm within ``tol``. ``euclidean_subspace``
    (columns, orthonormal in the domain inner product) is given for
    euclidean-to-euclidean operators: the attainment set is then exactly its
    unit sphere. ``segments`` lists polygon edges lying entirely in the set.
    """

    op_norm: float
    points: np.ndarray
    method: str
    exhaustive: bool
    euclidean_subspace: np.ndarray | None = None
    segments: list = field(default_factory=list)
    degenerate: bool = False

    def to_dict(self):
        return {
            "op_norm": self.op_norm,
            "points": self.points.tolist(),
            "method": self.method,
            "exhaustive": self.exhaustive,
            "euclidean_subspace": None if self.euclidean_subspace is None
            else self.euclidean_subspace.T.tolist(),
            "segments": [[a.tolist(), b.tolist()] for a, b in self.segments],
            "degenerate": self.degenerate,
        }


def _plus_minus(vectors):
    out = []
    for v in vectors:
        out.append(v)
        out.append(-v)
    return np.array(out)


def _dedupe(points, tol=1e-6):
    kept = []
    for p in points:
        if all(np.linalg.norm(p - q) > tol for q in kept):
            kept.append(p)
    return kept


def norm_attainment_set(op, tol=1e-8, seed=0, restarts=DEFAULT_RESTARTS):
    n = op.domain.dim
    if not np.any(op.matrix != 0):
        if op.domain.kind == "euclidean":
            basis = from_white(op.domain, np.eye(n)).T
            pts = _plus_minus(basis.T)
            return AttainmentSet(0.0, pts, "zero", True, basis, [], True)
        ext = sp.unit_ball_extreme_points(op.domain)
        if ext is sp.ALL_OF_SPHERE:
            e = np.eye(n)
            ext = e / np.atleast_1d(sp.norm(op.domain, e))[:, None]
            ext = _plus_minus(ext)
        return AttainmentSet(0.0, np.array(ext), "zero", True, None, [], True)

    method = _resolve_method(op, "auto")
    if method == "spectral":
        m = whitened(op)
        _, s, vt = np.linalg.svd(m)
        g = int(np.sum(s >= s[0] - tol))
        top = canonical_basis(vt[:g].T)
        basis = from_white(op.domain, top.T).T
        return AttainmentSet(float(s[0]), _plus_minus(basis.T), method, True, basis)

    if method == "vertex":
        value, _ = _vertex(op)
        ext = sp.unit_ball_extreme_points(op.domain)
        vals = np.atleast_1d(sp.norm(op.codomain, op.apply(ext)))
        hit = vals >= value - tol
        segments = []
        if n == 2:
            poly = np.asarray(op.domain.polygon)
            for a, b in zip(poly, np.roll(poly, -1, axis=0)):
                ends = sp.norm(op.codomain, op.apply(np.array([a, b])))
                mid = sp.norm(op.codomain, op.apply((a + b) / 2))
                # along an edge ||Tx|| is convex and bounded by the norm, so
                # attaining at both ends and the midpoint forces the whole edge
                if np.all(ends >= value - tol) and mid >= value - tol:
                    segments.append((a.copy(), b.copy()))
        return AttainmentSet(value, np.array(ext[hit]), method, n == 2, None, segments)

    rng = np.random.default_rng(seed)
    values, points = multistart_ascent(op, rng, restarts)
    value, _ = _best_restart(values, points)
    if value <= 0:
        raise MultistartFailure(f"multistart ascent did not leave 0 after {restarts} restarts")
    good = [canonical_sign(p) for p, v in zip(points, values) if v >= value - tol]
    good = sorted(_dedupe(good), key=tuple)
    return AttainmentSet(value, _plus_minus(good), method, False)


# -- characterization on Hilbert spaces --------------------------------------------

@dataclass(frozen=True)
class AttainmentConditions:
    """Both conditions of the Hilbert-space characterization at one unit vector.

    (i) ``<x, y> = 0`` implies ``<Tx, Ty> = 0``; checked on an orthonormal basis
    of the orthogonal complement of ``x``.
    (ii) ``sup{||Ty|| : ||y|| = 1, <x, y> = 0} <= ||Tx||``.
    """

    cond_i_holds: bool
    cond_i_max_violation: float
    cond_ii_holds: bool
    complement_sup: float
    image_norm: float
    op_norm: float
    attains: bool

    @property
    def member(self):
        return self.cond_i_holds and self.cond_ii_holds

    def to_dict(self):
        return {
            "cond_i_holds": self.cond_i_holds,
            "cond_i_max_violation": self.cond_i_max_violation,
            "cond_ii_holds": self.cond_ii_holds,
            "complement_sup": self.complement_sup,
            "image_norm": self.image_norm,
            "op_norm": self.op_norm,
            "member": self.member,
            "attains": self.attains,
        }


def check_attainment_conditions(op, x, tol=1e-8):
    if not op.is_hilbert:
        raise HypothesisViolation("the attainment characterization holds on Hilbert spaces only")
    x = np.asarray(x, dtype=float)
    nx = sp.norm(op.domain, x)
    if abs(nx - 1) > tol:
        raise HypothesisViolation(f"x must be a unit vector, got norm {nx!r}")
    m = whitened(op)
    u = to_white(op.domain, x)
    h = orth_complement(u / np.linalg.norm(u))
    tx = m @ u
    th = m @ h
    image_norm = float(np.linalg.norm(tx))
    if h.shape[1]:
        col_norms = np.linalg.norm(th, axis=0)
        ips = np.abs(tx @ th)
        violation = float(ips.max() / (image_norm * col_norms.max() + EPS))
        complement_sup = float(np.linalg.svd(th, compute_uv=False)[0])
    else:
        violation = 0.0
        complement_sup = 0.0
    op_norm = float(np.linalg.svd(m, compute_uv=False)[0])
    return AttainmentConditions(
        cond_i_holds=violation <= tol,
        cond_i_max_violation=violation,
        cond_ii_holds=complement_sup <= image_norm + tol,
        complement_sup=complement_sup,
        image_norm=image_norm,
        op_norm=op_norm,
        attains=image_norm >= op_norm - tol,
    )


def preserves_orthogonality_at(op, x, samples=50, seed=0, tol=1e-8):
    """Sampled check that ``x _|_B y`` if and only if ``Tx _|_B Ty``.

    Both spaces must be smooth, where the Birkhoff-James orthogonal vectors
    of ``v`` are exactly the kernel of the norming functional at ``v``. Forward
    samples ``y`` come from the kernel at ``x``; backward samples from the
    kernel of the codomain functional at ``Tx`` pulled back through ``T``.
    """
    if not (op.domain.is_smooth and op.codomain.is_smooth):
        raise HypothesisViolation("orthogonality preservation is checked for smooth spaces only")
    x = np.asarray(x, dtype=float)
    nx = sp.norm(op.domain, x)
    if abs(nx - 1) > tol:
        raise HypothesisViolation(f"x must be a unit vector, got norm {nx!r}")
    rng = np.random.default_rng(seed)
    n = op.domain.dim
    tx = op.apply(x)
    tx_zero = sp.norm(op.codomain, tx) <= tol

    def kernel(f):
        if np.linalg.norm(f) == 0:
            return np.eye(n)
        return orth_complement(f / np.linalg.norm(f))

    fwd = kernel(sp.support_functional(op.domain, x))
    back = np.eye(n) if tx_zero else kernel(sp.support_functional(op.codomain, tx) @ op.matrix)
    for basis, forward in ((fwd, True), (back, False)):
        if basis.shape[1] == 0:
            continue
        for _ in range(samples):
            y = basis @ rng.standard_normal(basis.shape[1])
            if np.linalg.norm(y) == 0:
                continue
            if forward:
                ty = op.apply(y)
                if tx_zero or sp.norm(op.codomain, ty) == 0:
                    continue
                ok = bj_orthogonal(op.codomain, tx, ty, tol).orthogonal
            else:
                ok = bj_orthogonal(op.domain, x, y, tol).orthogonal
            if not ok:
                return False
    return True


# name used by the published interface
check_theorem21 = check_attainment_conditions
