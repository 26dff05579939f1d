"""Birkhoff-James orthogonality.

``x`` is Birkhoff-James orthogonal to ``y`` when ``||x + lam*y|| >= ||x||`` for
every real ``lam``. In an inner-product space this is ordinary orthogonality;
in general it is decided by minimizing the convex function
``phi(lam) = ||x + lam*y||``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import space as sp
from .errors import HypothesisViolation, ValidationError

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI2 = (3 - math.sqrt(5)) / 2


def golden_section(f, a, b, rel_tol=1e-12, max_iter=200):
    """Minimize a unimodal ``f`` on ``[a, b]``.

    Stops once the bracket is narrower than ``rel_tol * (1 + |best|)`` or after
    ``max_iter`` reductions. Returns ``(argmin, f(argmin))`` for the best point
    evaluated.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    c = a + INV_PHI2 * h
    d = a + INV_PHI * h
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if fc <= fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + INV_PHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + INV_PHI * h
            fd = f(d)
        best = c if fc <= fd else d
        if b - a < rel_tol * (1 + abs(best)):
            break
    if fc <= fd:
        return c, fc
    return d, fd


def min_over_lambda(space, x, y):
    """Global minimizer of ``lam -> ||x + lam*y||``.

    The bracket starts at ``+-(||x||/||y|| + 1)`` and doubles until both ends are
    no better than ``lam = 0``; convexity then puts a minimizer inside it.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nx = sp.norm(space, x)
    ny = sp.norm(space, y)
    if ny == 0:
        raise ValidationError("y must be nonzero", code="zero_vector")

    def phi(lam):
        return sp.norm(space, x + lam * y)

    phi0 = nx
    if nx == 0:
        return 0.0, 0.0
    r = nx / ny + 1
    while phi(r) < phi0 or phi(-r) < phi0:
        r *= 2
    lam, val = golden_section(phi, -r, r)
    if val > phi0:
        return 0.0, phi0
    return float(lam), float(val)


@dataclass(frozen=True)
class BJVerdict:
    orthogonal: bool
    minimizer_lambda: float
    min_value: float
    margin: float

    def to_dict(self):
        return {
            "orthogonal": self.orthogonal,
            "minimizer_lambda": self.minimizer_lambda,
            "min_value": self.min_value,
            "margin": self.margin,
        }


def bj_orthogonal_exact_hilbert(space, x, y, tol=1e-8):
    """Inner-product test ``|<x, y>| <= tol * ||x|| * ||y||``."""
    if space.kind != "euclidean":
        raise HypothesisViolation(f"exact orthogonality test needs a euclidean space, got {space!r}")
    ip = sp.inner(space, x, y)
    return abs(ip) <= tol * sp.norm(space, x) * sp.norm(space, y)


def bj_orthogonal(space, x, y, tol=1e-8, method="auto"):
    """Decide ``x _|_B y``.

    ``method="auto"`` uses the inner product on euclidean spaces and the
    numerical minimization elsewhere; ``method="numeric"`` always minimizes.
    The numerical verdict is ``min ||x + lam*y|| >= ||x|| - tol*||x||``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nx = sp.norm(space, x)
    if nx == 0 or sp.norm(space, y) == 0:
        raise ValidationError("x and y must be nonzero", code="zero_vector")
    if method not in ("auto", "numeric"):
        raise ValidationError(f"unknown method {method!r}")

    if space.kind == "euclidean" and method == "auto":
        # closed-form projection: lam* = -<x,y>/<y,y>
        ip = sp.inner(space, x, y)
        yy = sp.inner(space, y, y)
        lam = -ip / yy
        val = math.sqrt(max(nx * nx - ip * ip / yy, 0.0))
        ortho = bj_orthogonal_exact_hilbert(space, x, y, tol)
        return BJVerdict(ortho, float(lam), float(val), float(val - nx))

    lam, val = min_over_lambda(space, x, y)
    return BJVerdict(bool(val >= nx - tol * nx), lam, val, float(val - nx))
