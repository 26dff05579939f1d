"""Extreme non-isometries on planes: Euclidean versus non-Euclidean.

For each two-dimensional space the driver looks for an extreme contraction
that is not an isometry:

* a plane whose sphere contains a segment gets the flat-segment construction;
* a strictly convex non-Euclidean plane gets the randomized search;
* a Euclidean plane gets the negative protocol: many seeded random
  contractions are classified and every extreme verdict must come with an
  isometry.
"""

from __future__ import annotations

import numpy as np

from . import space as sp
from .attain import operator, unwhiten_operator
from .errors import OpGeomError
from .extreme import (
    classify,
    is_isometry,
    flat_segment_extreme,
    search_extreme_nonisometry,
    witness_residuals,
)


def _random_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def random_contraction(rng, n, kind):
    """A seeded random contraction on R^n of one of four flavours."""
    if kind == "orthogonal":
        return _random_orthogonal(rng, n)
    a = rng.standard_normal((n, n))
    if kind == "rank_deficient":
        a[:, -1] = 0.0
        a = a @ _random_orthogonal(rng, n)
    a /= np.linalg.svd(a, compute_uv=False)[0]
    if kind == "interior":
        a *= rng.uniform(0.1, 0.99)
    return a


FLAVOURS = ("orthogonal", "norm_one", "rank_deficient", "interior")


def euclidean_negative_protocol(space, seed=0, trials=1000, tol=1e-8):
    """Classify ``trials`` random contractions; no extreme non-isometry may appear."""
    rng = np.random.default_rng(seed)
    counts = {"extreme": 0, "not_extreme": 0, "inconclusive": 0}
    extreme_non_isometries = 0
    worst_midpoint = 0.0
    worst_norm_gap = 0.0
    frame = operator(np.zeros((space.dim, space.dim)), space)
    for i in range(trials):
        flavour = FLAVOURS[i % len(FLAVOURS)]
        a = random_contraction(rng, space.dim, flavour)
        # a is a contraction in orthonormal coordinates; express it in the space's own
        m = unwhiten_operator(frame, a)
        op = operator(m, space)
        verdict = classify(op, tol, seed=i)
        counts[verdict.status] += 1
        if verdict.status == "extreme" and not is_isometry(op, tol):
            extreme_non_isometries += 1
        if verdict.witness is not None:
            r = witness_residuals(op, verdict.witness)
            worst_midpoint = max(worst_midpoint, r["midpoint_error"])
            worst_norm_gap = max(worst_norm_gap, abs(r["norm_T1"] - 1), abs(r["norm_T2"] - 1))
    return {
        "trials": trials,
        "verdicts": counts,
        "extreme_non_isometries": extreme_non_isometries,
        "worst_witness_midpoint_error": worst_midpoint,
        "worst_witness_norm_gap": worst_norm_gap,
    }


def _label(space):
    if space.kind == "lp":
        p = "inf" if space.p == np.inf else f"{space.p:g}"
        return f"l{p}^{space.dim}"
    if space.kind == "euclidean":
        return f"euclidean^{space.dim}"
    return f"polygon({len(space.vertices)})"


def plane_experiment(spaces, seed=0, budget=10_000, euclidean_trials=1000, tol=1e-8):
    """One row per space: was an extreme contraction that is not an isometry found?"""
    rows = []
    for idx, space in enumerate(spaces):
        row = {"space": sp.to_dict(space), "label": _label(space),
               "strictly_convex": sp.is_strictly_convex(space)}
        try:
            if space.dim != 2:
                row.update(protocol="skipped", found=None, details={"reason": "space is not two-dimensional"})
            elif not sp.is_strictly_convex(space):
                res = flat_segment_extreme(space, seed, tol)
                row.update(protocol="flat_segment", found=True, details=res.to_dict())
            elif space.kind == "euclidean" or space.p == 2.0:
                hilbert = space if space.kind == "euclidean" else sp.euclidean(2)
                rep = euclidean_negative_protocol(hilbert, seed + idx, euclidean_trials, tol)
                row.update(protocol="euclidean_negative", found=rep["extreme_non_isometries"] > 0, details=rep)
            else:
                res = search_extreme_nonisometry(space, seed + idx, budget, tol)
                if res is None:
                    row.update(protocol="search", found=False, details={
                        "budget": budget,
                        "note": "nothing found within budget; this is not evidence of absence",
                    })
                else:
                    row.update(protocol="search", found=True, details=res.to_dict())
        except OpGeomError as e:
            row.update(protocol="error", found=None, details={"error": e.code, "message": str(e)})
        rows.append(row)
    return {"rows": rows}


def default_spaces():
    return [sp.lp("inf", 2), sp.lp(1, 2), sp.lp(4, 2), sp.lp(1.5, 2), sp.euclidean(2)]



# name used by the published interface
theorem27_experiment = plane_experiment
