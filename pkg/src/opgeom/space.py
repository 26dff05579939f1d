"""Finite-dimensional real normed spaces.

Three families are supported:

* ``euclidean`` -- R^n with an inner product ``<u, v> = u^T G v`` (``G`` is
  the identity unless a Gram matrix is given),
* ``lp`` -- R^n with the l_p norm, ``1 <= p <= inf``,
* ``polyhedral2d`` -- R^2 normed by the Minkowski gauge of a centrally
  symmetric convex polygon.

Space objects are immutable; all functions here are pure.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionMismatch, HypothesisViolation, InvalidSpace

SPHERE_TOL = 1e-8
SYMMETRY_TOL = 1e-9

KINDS = ("euclidean", "lp", "polyhedral2d")


class _AllOfSphere:
    """Marker: every unit vector is an extreme point of the unit ball."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ALL_OF_SPHERE"


ALL_OF_SPHERE = _AllOfSphere()


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SpaceSpec:
    kind: str
    dim: int
    p: float | None = None
    gram: np.ndarray | None = None
    vertices: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpace(f"unknown space kind {self.kind!r}")
        if isinstance(self.dim, bool) or int(self.dim) != self.dim or self.dim < 1:
            raise InvalidSpace(f"dim must be a positive integer, got {self.dim!r}")
        object.__setattr__(self, "dim", int(self.dim))

        if self.kind == "euclidean":
            if self.p is not None or self.vertices is not None:
                raise InvalidSpace("euclidean space takes only dim and gram")
            if self.gram is not None:
                g = _frozen(self.gram)
                if g.shape != (self.dim, self.dim):
                    raise InvalidSpace(f"gram must be {self.dim}x{self.dim}, got {g.shape}")
                if not np.all(np.isfinite(g)) or not np.allclose(g, g.T, rtol=0, atol=1e-12):
                    raise InvalidSpace("gram matrix must be symmetric")
                if np.linalg.eigvalsh(g).min() <= SPHERE_TOL:
                    raise InvalidSpace("gram matrix must be positive definite")
                object.__setattr__(self, "gram", g)

        elif self.kind == "lp":
            if self.gram is not None or self.vertices is not None:
                raise InvalidSpace("lp space takes only dim and p")
            p = self.p
            if isinstance(p, str) and p.lower() in ("inf", "infinity"):
                p = math.inf
            try:
                p = float(p)
            except (TypeError, ValueError):
                raise InvalidSpace(f"lp exponent must be a number or 'inf', got {self.p!r}") from None
            if math.isnan(p) or p < 1:
                raise InvalidSpace(f"lp exponent must satisfy p >= 1, got {p}")
            object.__setattr__(self, "p", p)

        else:
            if self.gram is not None or self.p is not None:
                raise InvalidSpace("polyhedral2d space takes only vertices")
            if self.dim != 2:
                raise InvalidSpace("polyhedral2d spaces are two-dimensional")
            v = _frozen(self.vertices if self.vertices is not None else [])
            _validate_polygon(v)
            object.__setattr__(self, "vertices", v)

    def __eq__(self, other):
        if not isinstance(other, SpaceSpec):
            return NotImplemented
        return to_dict(self) == to_dict(other)

    def __hash__(self):
        return hash(repr(to_dict(self)))

    def __repr__(self):
        if self.kind == "euclidean":
            extra = "" if self.gram is None else ", gram=..."
            return f"Euclidean(dim={self.dim}{extra})"
        if self.kind == "lp":
            return f"Lp(p={self.p:g}, dim={self.dim})"
        return f"Polyhedral2D({len(self.vertices)} vertices)"

    @property
    def is_euclidean(self):
        return self.kind == "euclidean"

    @property
    def is_polyhedral(self):
        """True when the unit ball is a polytope (l_1, l_inf or a polygon)."""
        return self.kind == "polyhedral2d" or (self.kind == "lp" and self.p in (1.0, math.inf))

    @property
    def is_smooth(self):
        return self.kind == "euclidean" or (self.kind == "lp" and 1 < self.p < math.inf)

    @cached_property
    def chol(self):
        """Lower Cholesky factor ``L`` of the Gram matrix, so ``||v|| = ||L^T v||_2``."""
        if self.kind != "euclidean":
            raise HypothesisViolation("only euclidean spaces have a Gram matrix")
        if self.gram is None:
            return np.eye(self.dim)
        return np.linalg.cholesky(self.gram)

    @cached_property
    def polygon(self):
        """Vertices of the unit ball in counterclockwise order (2D polyhedral spaces)."""
        if self.kind == "polyhedral2d":
            return self.vertices
        if self.kind == "lp" and self.dim == 2 and self.p == math.inf:
            return _frozen([[1, -1], [1, 1], [-1, 1], [-1, -1]])
        if self.kind == "lp" and self.dim == 2 and self.p == 1.0:
            return _frozen([[1, 0], [0, 1], [-1, 0], [0, -1]])
        raise HypothesisViolation(f"{self!r} has no polygonal unit ball")

    @cached_property
    def facets(self):
        """Rows ``a_j`` with ``a_j . v = 1`` on edge ``j`` of the polygon."""
        verts = self.polygon
        a = verts
        b = np.roll(verts, -1, axis=0)
        normal = np.column_stack([b[:, 1] - a[:, 1], a[:, 0] - b[:, 0]])
        scale = np.einsum("ij,ij->i", normal, a)
        return _frozen(normal / scale[:, None])


def _validate_polygon(v):
    if v.ndim != 2 or v.shape[1] != 2 or len(v) < 4:
        raise InvalidSpace("polyhedral2d needs at least four 2D vertices")
    if len(v) % 2:
        raise InvalidSpace("a centrally symmetric polygon has an even number of vertices")
    if not np.all(np.isfinite(v)):
        raise InvalidSpace("vertices must be finite")
    for u in v:
        if np.min(np.linalg.norm(v + u, axis=1)) > SYMMETRY_TOL:
            raise InvalidSpace(f"polygon is not symmetric: -{u.tolist()} is not a vertex")
    e1 = np.roll(v, -1, axis=0) - v
    e2 = np.roll(e1, -1, axis=0)
    turn = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    if np.any(turn <= 1e-12):
        raise InvalidSpace("vertices must form a strictly convex polygon in counterclockwise order")
    # convex + CCW + symmetric still allows a polygon winding twice around 0
    angles = np.unwrap(np.arctan2(v[:, 1], v[:, 0]))
    if not np.all(np.diff(angles) > 0) or angles[-1] - angles[0] >= 2 * math.pi:
        raise InvalidSpace("vertices must wind once counterclockwise around the origin")


def euclidean(dim, gram=None):
    return SpaceSpec("euclidean", dim, gram=gram)


def lp(p, dim):
    return SpaceSpec("lp", dim, p=p)


def polyhedral2d(vertices):
    return SpaceSpec("polyhedral2d", 2, vertices=vertices)


def regular_polygon(n_vertices, phase=0.0):
    """Regular polygon with ``n_vertices`` (even) vertices on the Euclidean unit circle."""
    t = phase + 2 * np.pi * np.arange(n_vertices) / n_vertices
    return polyhedral2d(np.column_stack([np.cos(t), np.sin(t)]))


def _check_vector(space, v):
    v = np.asarray(v, dtype=float)
    if v.shape[-1:] != (space.dim,):
        raise DimensionMismatch(f"expected vectors of length {space.dim}, got shape {v.shape}")
    return v


def norm(space, v):
    """Norm of ``v`` (or of each row of a stacked array of vectors)."""
    v = _check_vector(space, v)
    if space.kind == "euclidean":
        if space.gram is None:
            out = np.linalg.norm(v, axis=-1)
        else:
            out = np.linalg.norm(v @ space.chol, axis=-1)
    elif space.kind == "lp":
        p = space.p
        if p == math.inf:
            out = np.max(np.abs(v), axis=-1)
        elif p == 1.0:
            out = np.sum(np.abs(v), axis=-1)
        else:
            out = np.linalg.norm(v, ord=p, axis=-1)
    else:
        # gauge of a symmetric polygon: largest facet functional
        out = np.max(v @ space.facets.T, axis=-1)
        out = np.maximum(out, 0.0)
    return float(out) if np.ndim(out) == 0 else out


def inner(space, u, v):
    """Inner product of a euclidean space."""
    if space.kind != "euclidean":
        raise HypothesisViolation(f"{space!r} has no inner product")
    u = _check_vector(space, u)
    v = _check_vector(space, v)
    if space.gram is None:
        return float(u @ v)
    return float(u @ space.gram @ v)


def support_functional(space, v):
    """A norming functional at ``v``: ``f . v = ||v||`` and ``|f . u| <= ||u||``.

    This is the gradient of the norm where it exists; at kinks of l_1, l_inf or
    polygonal norms one subgradient is returned (lowest index wins).
    """
    v = _check_vector(space, v)
    nv = norm(space, v)
    if nv == 0:
        return np.zeros(space.dim)
    if space.kind == "euclidean":
        gv = v if space.gram is None else space.gram @ v
        return gv / nv
    if space.kind == "lp":
        p = space.p
        if p == math.inf:
            f = np.zeros(space.dim)
            i = int(np.argmax(np.abs(v)))
            f[i] = np.sign(v[i])
            return f
        if p == 1.0:
            return np.sign(v)
        return np.sign(v) * (np.abs(v) / nv) ** (p - 1)
    j = int(np.argmax(space.facets @ v))
    return np.array(space.facets[j])


def is_strictly_convex(space):
    if space.kind == "euclidean":
        return True
    if space.kind == "lp":
        return 1 < space.p < math.inf
    return False


def unit_ball_extreme_points(space):
    """Extreme points of the closed unit ball.

    Returns ``ALL_OF_SPHERE`` for strictly convex spaces, otherwise an array of
    points, one per row.
    """
    if is_strictly_convex(space):
        return ALL_OF_SPHERE
    if space.kind == "polyhedral2d":
        return np.array(space.vertices)
    n = space.dim
    if space.p == math.inf:
        return np.array(list(itertools.product([1.0, -1.0], repeat=n)))
    pts = []
    for i in range(n):
        for s in (1.0, -1.0):
            e = np.zeros(n)
            e[i] = s
            pts.append(e)
    return np.array(pts)


def is_extreme_point(space, v, tol=SPHERE_TOL):
    v = _check_vector(space, v)
    nv = norm(space, v)
    if abs(nv - 1) > tol:
        raise HypothesisViolation(f"expected a unit vector, got norm {nv!r}")
    if is_strictly_convex(space):
        return True
    if space.kind == "lp" and space.p == math.inf:
        return bool(np.all(np.abs(v) >= 1 - tol))
    if space.kind == "lp":
        return int(np.sum(np.abs(v) > tol)) == 1
    return bool(np.min(np.linalg.norm(space.vertices - v, axis=1)) <= tol)


@dataclass(frozen=True)
class SegmentDescriptor:
    """A maximal segment ``{x + lam*y : lambda1 <= lam <= lambda2}`` on the unit sphere."""

    x: np.ndarray
    y: np.ndarray
    lambda1: float
    lambda2: float

    @property
    def endpoints(self):
        return self.x + self.lambda1 * self.y, self.x + self.lambda2 * self.y

    def points(self, count=11):
        lam = np.linspace(self.lambda1, self.lambda2, count)
        return self.x[None, :] + lam[:, None] * self.y[None, :]


def find_flat_segment(space):
    """A segment of the unit sphere, or ``None`` when the space is strictly convex.

    The edge chosen is the one met by the ray through ``(1, 0)``; when that ray
    hits a vertex, the edge leaving it counterclockwise. ``x`` is the edge
    midpoint and ``y`` the unit vector along the edge in counterclockwise
    direction.
    """
    if space.dim != 2:
        raise DimensionMismatch("flat segments are only searched for in dimension 2")
    if is_strictly_convex(space):
        return None
    verts = np.asarray(space.polygon)
    nxt = np.roll(verts, -1, axis=0)
    hit = (verts[:, 1] <= 0) & (nxt[:, 1] > 0) & (verts[:, 0] + nxt[:, 0] > 0)
    j = int(np.flatnonzero(hit)[0])
    a, b = verts[j], nxt[j]
    x = (a + b) / 2
    d = b - a
    length = norm(space, d)
    y = d / length
    return SegmentDescriptor(x=x, y=y, lambda1=-length / 2, lambda2=length / 2)


def sphere_sample(space, seed, count):
    """``count`` unit vectors, reproducible for a fixed integer seed or Generator."""
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = np.random.default_rng(seed)
    out = np.empty((count, space.dim))
    filled = 0
    while filled < count:
        d = rng.standard_normal((count - filled, space.dim))
        nd = np.atleast_1d(norm(space, d))
        keep = nd > 1e-12
        d = d[keep] / nd[keep][:, None]
        out[filled:filled + len(d)] = d
        filled += len(d)
    return out


def to_dict(space):
    d = {"kind": space.kind, "dim": space.dim}
    if space.kind == "lp":
        d["p"] = "inf" if space.p == math.inf else space.p
    elif space.kind == "euclidean" and space.gram is not None:
        d["gram"] = space.gram.tolist()
    elif space.kind == "polyhedral2d":
        d["vertices"] = space.vertices.tolist()
    return d


def from_dict(d):
    """Parse the JSON object form of a space; absent fields take defaults."""
    if not isinstance(d, dict):
        raise InvalidSpace("a space must be a JSON object")
    kind = str(d.get("kind", "euclidean")).lower()
    if kind == "polyhedral2d":
        return polyhedral2d(d.get("vertices"))
    if "dim" not in d:
        raise InvalidSpace("space needs a 'dim' field")
    if kind == "lp":
        return lp(d.get("p", 2), d["dim"])
    if kind == "euclidean":
        return euclidean(d["dim"], d.get("gram"))
    raise InvalidSpace(f"unknown space kind {kind!r}")
