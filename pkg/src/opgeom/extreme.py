"""Extreme contractions.

An operator ``T`` with ``||T|| <= 1`` is an extreme contraction when it is not
the midpoint of two distinct contractions. This module

* certifies extremeness from norm attainment: ``||T|| = 1`` attained at ``n``
  linearly independent unit vectors whose images are extreme points of the
  codomain ball (automatic for strictly convex codomains),
* classifies operators on Euclidean spaces, where the extreme contractions
  are exactly the isometries, returning an explicit pair ``T1 != T2`` of norm
  one with ``T = (T1 + T2) / 2`` whenever ``T`` is not extreme,
* builds a non-isometric extreme contraction on any plane whose unit sphere
  contains a segment, and searches for one on strictly convex non-Euclidean
  planes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import space as sp
from ._linalg import canonical_basis, unit_null_vectors
from .attain import (
    OperatorSpec,
    from_white,
    norm_attainment_set,
    operator,
    operator_norm,
    unwhiten_operator,
    whitened,
)
from .basis import BasisResult, greedy_orthogonal_basis
from .bjorth import golden_section
from .errors import (
    DimensionMismatch,
    HypothesisViolation,
    IsometryHasNoWitness,
    NotContraction,
    NotNormOne,
    NumericalFailure,
    StrictlyConvex,
)

INDEPENDENCE_MARGIN = 1e-6
WITNESS_NORM_TOL = 1e-8
ISOMETRY_SAMPLES = 500


def _mat(a):
    return np.asarray(a, dtype=float).tolist()


# -- isometries ----------------------------------------------------------------

@dataclass(frozen=True)
class IsometryReport:
    isometry: bool
    residual: float
    method: str
    probabilistic: bool

    def to_dict(self):
        return {
            "isometry": self.isometry,
            "residual": self.residual,
            "method": self.method,
            "probabilistic": self.probabilistic,
        }


def isometry_report(op, tol=1e-8, seed=0):
    """Decide whether ``||Tx|| = ||x||`` for every ``x``.

    * euclidean to euclidean: ``M^T M = I`` entrywise for the whitened matrix;
    * square operators: ``||T|| = 1`` and ``||T^{-1}|| = 1``, computed by the
      exact routes where available (``method="norms"``);
    * otherwise ``| ||Tv|| - 1 |`` on domain extreme points and seeded sphere
      samples (``probabilistic=True``).
    """
    if op.is_hilbert:
        m = whitened(op)
        res = float(np.max(np.abs(m.T @ m - np.eye(op.domain.dim))))
        return IsometryReport(res <= tol, res, "gram", False)

    n = op.domain.dim
    if n > op.codomain.dim:
        return IsometryReport(False, 1.0, "rank", False)
    if op.is_square:
        s = np.linalg.svd(op.matrix, compute_uv=False)
        if s[-1] <= 1e-12 * max(s[0], 1.0):
            return IsometryReport(False, 1.0, "rank", False)
        fwd = operator_norm(op, seed=seed)
        inv = operator_norm(OperatorSpec(np.linalg.inv(op.matrix), op.codomain, op.domain), seed=seed)
        res = max(abs(fwd.value - 1), abs(inv.value - 1))
        certified = fwd.certified and inv.certified
        if certified:
            return IsometryReport(res <= tol, float(res), "norms", False)
    else:
        res = 0.0
    pts = sp.sphere_sample(op.domain, seed, ISOMETRY_SAMPLES)
    ext = sp.unit_ball_extreme_points(op.domain)
    if ext is not sp.ALL_OF_SPHERE:
        pts = np.concatenate([ext, pts])
    sampled = float(np.max(np.abs(np.atleast_1d(sp.norm(op.codomain, op.apply(pts))) - 1)))
    res = max(res, sampled)
    return IsometryReport(res <= tol, float(res), "sampled", True)


def is_isometry(op, tol=1e-8, seed=0):
    return isometry_report(op, tol, seed).isometry


# -- certificates from attainment ------------------------------------------------

@dataclass(frozen=True, eq=False)
class ExtremeCertificate:
    """Unit vectors (rows) where ``T`` attains norm one, spanning the domain."""

    attainment_vectors: np.ndarray
    image_extreme_flags: list
    basis_condition_number: float
    independence_margin: float
    rule: str

    def to_dict(self):
        return {
            "attainment_vectors": _mat(self.attainment_vectors),
            "image_extreme_flags": list(self.image_extreme_flags),
            "basis_condition_number": self.basis_condition_number,
            "independence_margin": self.independence_margin,
            "rule": self.rule,
        }


def _select_independent(points, n):
    """Greedy column pivoting: indices of up to ``n`` well-separated points."""
    points = np.asarray(points, dtype=float)
    chosen = []
    resid = points.copy()
    for _ in range(n):
        r = np.linalg.norm(resid, axis=1)
        if len(chosen):
            r[chosen] = -1
        i = int(np.argmax(r))
        if r[i] <= 1e-12:
            break
        chosen.append(i)
        q = resid[i] / r[i]
        resid = resid - np.outer(resid @ q, q)
    return chosen


def certificate_from_vectors(op, vectors, tol=1e-8):
    """Build a certificate from given attaining vectors, or ``None`` if they do not qualify."""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
    n = op.domain.dim
    if vectors.shape != (n, n):
        return None
    images = op.apply(vectors)
    if np.any(np.abs(np.atleast_1d(sp.norm(op.codomain, images)) - 1) > tol):
        return None
    if sp.is_strictly_convex(op.codomain):
        flags = [True] * n
        rule = "strictly_convex_codomain"
    else:
        flags = [sp.is_extreme_point(op.codomain, v, tol) for v in images]
        rule = "extreme_images"
    s = np.linalg.svd(vectors, compute_uv=False)
    if not all(flags) or s[-1] < INDEPENDENCE_MARGIN:
        return None
    return ExtremeCertificate(vectors, flags, float(s[0] / s[-1]), float(s[-1]), rule)


def sufficient_extreme_check(op, tol=1e-8, seed=0):
    """Certificate of extremeness from norm attainment, or ``None``.

    ``None`` is not a proof that ``T`` fails to be extreme.
    """
    value = operator_norm(op, seed=seed).value
    if abs(value - 1) > tol:
        raise NotNormOne(f"certificates need ||T|| = 1, got {value!r}")
    aset = norm_attainment_set(op, tol, seed)
    pts = np.asarray(aset.points)
    if not len(pts):
        return None
    images = op.apply(pts)
    if not sp.is_strictly_convex(op.codomain):
        keep = [i for i, v in enumerate(images)
                if abs(sp.norm(op.codomain, v) - 1) <= tol and sp.is_extreme_point(op.codomain, v, tol)]
        pts = pts[keep]
    idx = _select_independent(pts, op.domain.dim)
    if len(idx) < op.domain.dim:
        return None
    return certificate_from_vectors(op, pts[idx], tol)


# -- witnesses of non-extremeness ----------------------------------------------

@dataclass(frozen=True, eq=False)
class WitnessPair:
    """Contractions ``T1 != T2`` with ``T = (T1 + T2) / 2``.

    ``case_tag`` is ``"I"`` (images of the non-attaining basis vectors scaled by
    ``1 +- epsilon``), ``"II"`` (the first vanishing image replaced by
    ``+-w/2``) or ``"interior"`` (``||T|| < 1``).
    """

    T1: np.ndarray
    T2: np.ndarray
    case_tag: str
    epsilon: float | None = None
    k: int | None = None
    w: np.ndarray | None = None
    basis_used: BasisResult | None = None
    norms: tuple = ()

    def to_dict(self):
        return {
            "case": self.case_tag,
            "epsilon": self.epsilon,
            "k": self.k,
            "w": None if self.w is None else _mat(self.w),
            "T1": _mat(self.T1),
            "T2": _mat(self.T2),
            "norms": list(self.norms),
            "basis": None if self.basis_used is None else self.basis_used.to_dict(),
        }


def witness_residuals(op, pair):
    """Midpoint error and the two operator norms of a witness pair."""
    mid = float(np.max(np.abs((pair.T1 + pair.T2) / 2 - op.matrix)))
    n1 = operator_norm(op.with_matrix(pair.T1)).value
    n2 = operator_norm(op.with_matrix(pair.T2)).value
    dist = float(np.max(np.abs(pair.T1 - pair.T2)))
    return {"midpoint_error": mid, "norm_T1": n1, "norm_T2": n2, "distance": dist}


def _require_square_hilbert(op):
    if not (op.is_hilbert and op.is_square):
        raise HypothesisViolation("needs a square operator between euclidean spaces")


def _spectral_norm(op, m):
    return float(np.linalg.svd(whitened(op.with_matrix(m)), compute_uv=False)[0])


def _checked_pair(op, d, **fields):
    t1 = op.matrix + d
    t2 = op.matrix - d
    n1, n2 = _spectral_norm(op, t1), _spectral_norm(op, t2)
    if abs(n1 - 1) > WITNESS_NORM_TOL or abs(n2 - 1) > WITNESS_NORM_TOL:
        raise NumericalFailure(f"witness operators have norms {n1!r}, {n2!r}; expected 1")
    return WitnessPair(t1, t2, norms=(n1, n2), **fields)


def nonextreme_witness(op, tol=1e-8, seed=0):
    """Two norm-one operators whose midpoint is ``op`` (square euclidean, ``||T|| = 1``).

    Builds the deflation basis ``x_1..x_n`` and lets ``k`` count the ``x_i`` with
    ``||Tx_i|| >= 1 - tol``. If ``s = ||Tx_{k+1}|| > tol`` the images of
    ``x_{k+1}..x_n`` are scaled by ``1 +- eps`` with
    ``eps = min(1/2, (1/s - 1)/2)``. Otherwise ``x_{k+1}`` is sent to ``+-w/2`` for
    a unit ``w`` orthogonal to ``Tx_1..Tx_k``.
    """
    _require_square_hilbert(op)
    m = whitened(op)
    n = op.domain.dim
    top = float(np.linalg.svd(m, compute_uv=False)[0])
    if abs(top - 1) > tol:
        raise NotNormOne(f"witness construction needs ||T|| = 1, got {top!r}")
    basis = greedy_orthogonal_basis(op, seed)
    u = basis.vectors if op.domain.gram is None else (basis.vectors @ op.domain.chol)
    norms = basis.image_norms
    k = int(np.sum(norms >= 1 - tol))
    if k == n:
        raise IsometryHasNoWitness("an isometry is an extreme contraction; no witness exists")
    s = float(norms[k])
    if s > tol:
        eps = min(0.5, 0.5 * (1 / s - 1))
        rest = u[k:]
        d = eps * (m @ rest.T @ rest)
        return _checked_pair(op, unwhiten_operator(op, d), case_tag="I", epsilon=eps, k=k,
                             basis_used=basis)
    images = u[:k] @ m.T
    w = canonical_basis(unit_null_vectors(images))[:, 0]
    d = 0.5 * np.outer(w, u[k])
    return _checked_pair(op, unwhiten_operator(op, d), case_tag="II", k=k,
                         w=from_white(op.codomain, w), basis_used=basis)


def _interior_witness_hilbert(op):
    m = whitened(op)
    uu, s, vt = np.linalg.svd(m)
    if len(s) >= 2:
        d = (1 - s[0]) * np.outer(uu[:, 0], vt[0]) - (1 - s[1]) * np.outer(uu[:, 1], vt[1])
        return _checked_pair(op, unwhiten_operator(op, d), case_tag="interior")
    d = (1 - s[0]) * np.outer(uu[:, 0], vt[0])
    t1, t2 = op.matrix + unwhiten_operator(op, d), op.matrix - unwhiten_operator(op, d)
    return WitnessPair(t1, t2, "interior", norms=(_spectral_norm(op, t1), _spectral_norm(op, t2)))


def _interior_witness(op, value):
    if value == 0:
        x0 = sp.sphere_sample(op.domain, 0, 1)[0]
        f = sp.support_functional(op.domain, x0)
        y0 = sp.sphere_sample(op.codomain, 1, 1)[0]
        r = np.outer(y0, f)
        return WitnessPair(r, -r, "interior", norms=(1.0, 1.0))
    t1 = op.matrix / value
    t2 = 2 * op.matrix - t1
    return WitnessPair(t1, t2, "interior", norms=(1.0, abs(2 * value - 1)))


# -- classification ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ExtremenessVerdict:
    status: str  # "extreme" | "not_extreme" | "inconclusive"
    certificate: ExtremeCertificate | None = None
    isometry: IsometryReport | None = None
    witness: WitnessPair | None = None
    report: dict = field(default_factory=dict)

    def to_dict(self):
        d = {"status": self.status}
        if self.isometry is not None:
            d["isometry"] = self.isometry.to_dict()
        if self.certificate is not None:
            d["certificate"] = self.certificate.to_dict()
        if self.witness is not None:
            d.update(self.witness.to_dict())
        if self.report:
            d["report"] = self.report
        return d


def hilbert_extreme_classify(op, tol=1e-8, seed=0):
    """Extreme if and only if isometry, for square operators on a Euclidean space."""
    _require_square_hilbert(op)
    value = float(np.linalg.svd(whitened(op), compute_uv=False)[0])
    if value > 1 + tol:
        raise NotContraction(f"||T|| = {value!r} exceeds 1")
    if value < 1 - tol:
        return ExtremenessVerdict("not_extreme", witness=_interior_witness_hilbert(op),
                                  report={"op_norm": value})
    iso = isometry_report(op, tol)
    if iso.isometry:
        return ExtremenessVerdict("extreme", isometry=iso, report={"op_norm": value})
    return ExtremenessVerdict("not_extreme", isometry=iso, witness=nonextreme_witness(op, tol, seed),
                              report={"op_norm": value})


def classify(op, tol=1e-8, seed=0):
    """Extremeness verdict for any operator.

    Square Euclidean operators get a complete answer. Elsewhere an attainment
    certificate proves extremeness, a certified norm below one proves the
    opposite, and anything else is inconclusive.
    """
    if op.is_hilbert and op.is_square:
        return hilbert_extreme_classify(op, tol, seed)
    res = operator_norm(op, seed=seed)
    report = {"op_norm": res.value, "norm_method": res.method, "norm_certified": res.certified}
    if res.value > 1 + tol:
        raise NotContraction(f"||T|| >= {res.value!r} exceeds 1")
    if res.value < 1 - tol:
        if res.certified:
            return ExtremenessVerdict("not_extreme", witness=_interior_witness(op, res.value), report=report)
        report["reason"] = "multistart norm below one is only a lower bound"
        return ExtremenessVerdict("inconclusive", report=report)
    cert = sufficient_extreme_check(op, tol, seed)
    if cert is not None:
        return ExtremenessVerdict("extreme", certificate=cert, report=report)
    report["reason"] = "no attainment certificate; this does not show T is not extreme"
    return ExtremenessVerdict("inconclusive", report=report)


# -- planes with flat spheres --------------------------------------------------

@dataclass(frozen=True, eq=False)
class FlatSegmentExtreme:
    op: OperatorSpec
    certificate: ExtremeCertificate
    not_isometry_proof: np.ndarray
    segment: sp.SegmentDescriptor
    w: np.ndarray
    op_norm: float

    def to_dict(self):
        ty = self.op.apply(self.not_isometry_proof)
        return {
            "operator": self.op.to_dict(),
            "op_norm": self.op_norm,
            "segment": {
                "x": _mat(self.segment.x),
                "y": _mat(self.segment.y),
                "lambda1": self.segment.lambda1,
                "lambda2": self.segment.lambda2,
                "endpoints": [_mat(e) for e in self.segment.endpoints],
            },
            "w": _mat(self.w),
            "certificate": self.certificate.to_dict(),
            "not_isometry_proof": {
                "y": _mat(self.not_isometry_proof),
                "norm_y": sp.norm(self.op.domain, self.not_isometry_proof),
                "norm_Ty": sp.norm(self.op.codomain, ty),
                "reading": "||Ty|| = 0 differs from ||y|| = 1",
            },
        }


def flat_segment_extreme(space, seed=0, tol=1e-8):
    """Extreme contraction that is not an isometry, on a plane with a flat sphere.

    With a sphere segment ``{x + lam*y : lambda1 <= lam <= lambda2}`` and an
    extreme point ``w``, the operator ``Tx = w, Ty = 0`` has norm one, attains it
    at both (independent) segment endpoints whose common image ``w`` is extreme,
    and kills the unit vector ``y``.
    """
    if space.dim != 2:
        raise DimensionMismatch("needs a two-dimensional space")
    if sp.is_strictly_convex(space):
        raise StrictlyConvex(f"{space!r} is strictly convex; its sphere has no segment")
    seg = sp.find_flat_segment(space)
    w = np.array(sp.unit_ball_extreme_points(space)[0])
    b = np.column_stack([seg.x, seg.y])
    images = np.column_stack([w, np.zeros(2)])
    t = np.linalg.solve(b.T, images.T).T
    op = operator(t, space)
    value = operator_norm(op, method="vertex").value
    if abs(value - 1) > 1e-12:
        raise NumericalFailure(f"constructed operator has norm {value!r}")
    cert = certificate_from_vectors(op, np.array(seg.endpoints), tol)
    if cert is None:
        raise NumericalFailure("segment endpoints do not certify extremeness")
    return FlatSegmentExtreme(op, cert, seg.y, seg, w, value)


# -- search on strictly convex planes ------------------------------------------

@dataclass(frozen=True, eq=False)
class SearchResult:
    op: OperatorSpec
    certificate: ExtremeCertificate
    not_isometry_proof: np.ndarray
    restart: int
    multistart_norm: float

    def to_dict(self):
        v = self.not_isometry_proof
        return {
            "found": True,
            "restart": self.restart,
            "operator": self.op.to_dict(),
            "multistart_norm": self.multistart_norm,
            "certificate": self.certificate.to_dict(),
            "not_isometry_proof": {
                "v": _mat(v),
                "norm_v": sp.norm(self.op.domain, v),
                "norm_Tv": sp.norm(self.op.codomain, self.op.apply(v)),
            },
        }


GRID = 720


def _is_euclidean_like(space):
    return space.kind == "euclidean" or (space.kind == "lp" and space.p == 2.0)


def search_extreme_nonisometry(space, seed=0, budget=10_000, tol=1e-8):
    """Random search for a norm-one ``T`` attaining its norm at two independent points.

    On a strictly convex plane such a ``T`` is an extreme contraction; if it is
    not an isometry it is returned with its certificate. Each restart draws a
    perturbed rotation, locates the two highest local maxima of ``||Tx||`` on
    the unit circle, balances them by rescaling ``T`` along one of the two
    directions, normalizes and verifies. ``None`` after ``budget`` restarts is
    not evidence that no such operator exists.
    """
    if space.dim != 2:
        raise DimensionMismatch("search runs on two-dimensional spaces")
    if not sp.is_strictly_convex(space):
        raise HypothesisViolation(f"{space!r} is not strictly convex; use flat_segment_extreme")
    if _is_euclidean_like(space):
        raise HypothesisViolation("on a Euclidean plane every extreme contraction is an isometry; search refused")

    rng = np.random.default_rng(seed)
    step = math.pi / GRID
    theta = np.arange(GRID) * step

    def circle(t):
        d = np.stack([np.cos(t), np.sin(t)], axis=-1)
        return d / np.asarray(sp.norm(space, d))[..., None]

    xs = circle(theta)

    for restart in range(budget):
        t = _draw(rng)
        found = _refine(space, t, xs, theta, step, circle, tol)
        if found is None:
            continue
        op, u, v_low = found
        ms = operator_norm(op, method="multistart", seed=restart).value
        if ms > 1 + 1e-6:
            continue
        cert = certificate_from_vectors(op, u, tol)
        if cert is None or cert.independence_margin < 1e-3:
            continue
        if is_isometry(op, tol, seed=restart):
            continue
        return SearchResult(op, cert, v_low, restart, ms)
    return None


def _draw(rng):
    phi = rng.uniform(0, math.pi / 2)
    rot = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
    return rot @ (np.eye(2) + rng.uniform(0, 0.5) * rng.standard_normal((2, 2)))


def _local_max(space, t, circle, center, half):
    def neg(a):
        return -sp.norm(space, circle(np.array(a)) @ t.T)
    a, v = golden_section(neg, center - half, center + half)
    return a, -v


def _refine(space, t, xs, theta, step, circle, tol):
    g = np.atleast_1d(sp.norm(space, xs @ t.T))
    prev, nxt = np.roll(g, 1), np.roll(g, -1)
    peaks = np.flatnonzero((g >= prev) & (g > nxt))
    if len(peaks) < 2:
        return None
    order = peaks[np.argsort(-g[peaks], kind="stable")]
    i1, i2 = order[0], order[1]
    a1, g1 = _local_max(space, t, circle, theta[i1], step)
    a2, g2 = _local_max(space, t, circle, theta[i2], step)
    u1, u2 = circle(np.array(a1)), circle(np.array(a2))
    b = np.column_stack([u1, u2])
    if abs(np.linalg.det(b)) < 1e-3:
        return None
    f = np.linalg.inv(b)[0]
    p = np.outer(u1, f)

    def shifted(s):
        return t @ (np.eye(2) + s * p)

    def gap(s):
        ts = shifted(s)
        return _local_max(space, ts, circle, a1, 2 * step)[1] - _local_max(space, ts, circle, a2, 2 * step)[1]

    s = 0.0
    if g1 - g2 > 1e-14 * g1:
        lo = -0.5 * (g1 - g2) / g1
        while gap(lo) > 0 and lo > -0.9:
            lo *= 2
        if gap(lo) > 0:
            return None
        s = brentq(gap, lo, 0.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    ts = shifted(s)
    a1, v1 = _local_max(space, ts, circle, a1, 2 * step)
    a2, v2 = _local_max(space, ts, circle, a2, 2 * step)
    value = max(v1, v2)
    ts = ts / value
    u = np.array([circle(np.array(a1)), circle(np.array(a2))])
    vals = np.atleast_1d(sp.norm(space, xs @ ts.T))
    if vals.max() > 1 + 1e-9 or np.any(np.abs(np.atleast_1d(sp.norm(space, u @ ts.T)) - 1) > tol):
        return None
    low = int(np.argmin(vals))
    if vals[low] > 1 - 1e-6:
        return None
    return operator(ts, space), u, xs[low]


# name used by the published interface
lemma21_construct = flat_segment_extreme
