"""Acceptance criteria; each test prints one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s`` or
``python3 tests/test_acceptance.py``.
"""

import json
import time

import numpy as np
import pytest

from opgeom import space as sp
from opgeom.attain import check_attainment_conditions, operator, operator_norm
from opgeom.basis import greedy_orthogonal_basis, normalized_offdiagonal
from opgeom.bjorth import bj_orthogonal, bj_orthogonal_exact_hilbert
from opgeom.cli import RunConfig, run
from opgeom.extreme import (
    hilbert_extreme_classify,
    flat_segment_extreme,
    nonextreme_witness,
    sufficient_extreme_check,
)

pytestmark = pytest.mark.acceptance

RESULTS = {}


def _report(num, name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {name} ({detail})"
    RESULTS[num] = line
    print(line)
    return ok


def _orthogonal(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def _unit(v):
    return v / np.linalg.norm(v)


def test_criterion_1_attainment_characterization():
    rng = np.random.default_rng(1)
    e3 = sp.euclidean(3)
    start = time.perf_counter()
    bad_members, bad_outsiders = 0, 0
    for i in range(200):
        m = rng.standard_normal((3, 3))
        if i % 2:
            # repeated top singular value: two-dimensional attaining subspace
            u, s, vt = np.linalg.svd(m)
            s[1] = s[0]
            m = u @ np.diag(s) @ vt
        op = operator(m, e3)
        _, s, vt = np.linalg.svd(m)
        dim = int(np.sum(s >= s[0] * (1 - 1e-12)))
        for c in rng.standard_normal((5, dim)):
            x = _unit(c @ vt[:dim])
            r = check_attainment_conditions(op, x, 1e-8)
            bad_members += not (r.cond_i_holds and r.cond_ii_holds)
        found = 0
        while found < 5:
            x = _unit(rng.standard_normal(3))
            if np.linalg.norm(m @ x) > s[0] - 1e-3:
                continue
            found += 1
            r = check_attainment_conditions(op, x, 1e-8)
            bad_outsiders += r.cond_i_holds and r.cond_ii_holds
    elapsed = time.perf_counter() - start
    ok = bad_members == 0 and bad_outsiders == 0 and elapsed < 10
    assert _report(1, "attainment characterization on 200 operators", ok,
                   f"member failures {bad_members}, outsider passes {bad_outsiders}, {elapsed:.2f}s")


def test_criterion_2_deflation_basis():
    rng = np.random.default_rng(2)
    worst_off, worst_gap, monotone = 0.0, 0.0, True
    for i in range(200):
        n = 2 + i % 5
        m = rng.standard_normal((n, n))
        r = greedy_orthogonal_basis(operator(m, sp.euclidean(n)))
        worst_off = max(worst_off, normalized_offdiagonal(r))
        worst_gap = max(worst_gap, float(np.max(np.abs(r.image_norms - np.linalg.svd(m, compute_uv=False)))))
        monotone &= bool(np.all(np.diff(r.image_norms) <= 0))
    ok = worst_off <= 1e-8 and worst_gap <= 1e-8 and monotone
    assert _report(2, "deflation basis on 200 matrices", ok,
                   f"max off-diagonal {worst_off:.1e}, max sigma gap {worst_gap:.1e}, monotone {monotone}")


def test_criterion_3_witnesses():
    rng = np.random.default_rng(3)
    worst_mid, worst_norm, distinct, cases = 0.0, 0.0, True, set()
    for i in range(100):
        n = 2 + i % 4
        s = np.sort(rng.uniform(0, 0.999, n))[::-1]
        s[0] = 1.0
        if i % 2:
            s[1:] = 0.0  # rank one: the second basis image vanishes, forcing the second case
        m = _orthogonal(rng, n) @ np.diag(s) @ _orthogonal(rng, n).T
        pair = nonextreme_witness(operator(m, sp.euclidean(n)))
        cases.add(pair.case_tag)
        worst_mid = max(worst_mid, float(np.max(np.abs((pair.T1 + pair.T2) / 2 - m))))
        for t in (pair.T1, pair.T2):
            worst_norm = max(worst_norm, abs(np.linalg.svd(t, compute_uv=False)[0] - 1))
        distinct &= bool(np.any(pair.T1 != pair.T2))
    ok = worst_mid <= 1e-14 and worst_norm <= 1e-8 and distinct and cases == {"I", "II"}
    assert _report(3, "non-extremeness witnesses on 100 contractions", ok,
                   f"midpoint {worst_mid:.1e}, norm gap {worst_norm:.1e}, cases {sorted(cases)}")


def test_criterion_4_isometries_extreme():
    rng = np.random.default_rng(4)
    statuses, worst_margin = set(), np.inf
    for i in range(100):
        n = 2 + i % 4
        q = _orthogonal(rng, n)
        if i % 2:
            q[:, 0] *= -1  # flip the determinant sign
        op = operator(q, sp.euclidean(n))
        statuses.add(hilbert_extreme_classify(op).status)
        cert = sufficient_extreme_check(op)
        worst_margin = min(worst_margin, -1.0 if cert is None else cert.independence_margin)
    ok = statuses == {"extreme"} and worst_margin >= 1e-6
    assert _report(4, "rotations and reflections are extreme", ok,
                   f"statuses {sorted(statuses)}, min independence margin {worst_margin:.3g}")


def test_criterion_5_flat_segment_counterexamples():
    details = []
    ok = True
    for space in (sp.lp("inf", 2), sp.lp(1, 2)):
        res = flat_segment_extreme(space)
        t = res.op.matrix
        vertex_norm = max(sp.norm(space, t @ v) for v in sp.unit_ball_extreme_points(space))
        y = res.not_isometry_proof
        ty = sp.norm(space, t @ y)
        this = (abs(vertex_norm - 1) <= 1e-12 and res.certificate is not None
                and all(res.certificate.image_extreme_flags) and ty == 0
                and abs(sp.norm(space, y) - 1) <= 1e-12)
        ok &= this
        details.append(f"p={space.p:g}: norm {vertex_norm:.15g}, ||Ty|| {ty:g}")
    assert _report(5, "flat-segment extreme non-isometries", ok, "; ".join(details))


def test_criterion_6_plane_experiment():
    start = time.perf_counter()
    code, out = run(RunConfig("thm27", seed=0, budget=10_000), b"")
    elapsed = time.perf_counter() - start
    rows = json.loads(out)["rows"]
    found = [r["found"] for r in rows]
    euc = rows[-1]["details"]
    ok = (code == 0 and found == [True, True, True, True, False] and euc["trials"] == 1000
          and euc["extreme_non_isometries"] == 0 and elapsed < 120)
    assert _report(6, "plane experiment over five spaces", ok,
                   f"found {found}, euclidean verdicts {euc['verdicts']}, {elapsed:.1f}s")


def test_criterion_7_orthogonality():
    rng = np.random.default_rng(7)
    e3 = sp.euclidean(3)
    disagree = 0
    for i in range(1000):
        x, y = rng.standard_normal((2, 3))
        if i % 2 == 0:
            y -= (x @ y) / (x @ x) * x
        exact = bj_orthogonal_exact_hilbert(e3, x, y, 1e-8)
        disagree += exact != bj_orthogonal(e3, x, y, 1e-8, method="numeric").orthogonal
    l1 = sp.lp(1, 2)
    asym = bj_orthogonal(l1, [0, 1], [1, 1]).orthogonal and not bj_orthogonal(l1, [1, 1], [0, 1]).orthogonal
    flips = 0
    spaces = [sp.lp(1, 2), sp.lp(3, 3), sp.lp("inf", 2), e3]
    for i in range(500):
        space = spaces[i % 4]
        x, y = rng.standard_normal((2, space.dim))
        a, b = rng.uniform(0.1, 10, 2) * rng.choice([-1, 1], 2)
        flips += bj_orthogonal(space, x, y).orthogonal != bj_orthogonal(space, a * x, b * y).orthogonal
    ok = disagree == 0 and asym and flips == 0
    assert _report(7, "orthogonality decisions", ok,
                   f"euclidean disagreements {disagree}/1000, l1 asymmetry {asym}, scaling flips {flips}/500")


def test_criterion_8_norm_oracles():
    rng = np.random.default_rng(8)
    worst_spec, worst_vert = 0.0, 0.0
    for i in range(100):
        n = 2 + i % 3
        m = rng.standard_normal((n, n))
        op = operator(m, sp.euclidean(n))
        worst_spec = max(worst_spec, abs(operator_norm(op, "multistart", seed=i).value
                                         - operator_norm(op, "spectral").value))
    linf = sp.lp("inf", 2)
    for i in range(100):
        op = operator(rng.standard_normal((2, 2)), linf)
        worst_vert = max(worst_vert, abs(operator_norm(op, "multistart", seed=i).value
                                         - operator_norm(op, "vertex").value))
    ok = worst_spec <= 1e-6 and worst_vert <= 1e-6
    assert _report(8, "multistart against exact norms", ok,
                   f"spectral gap {worst_spec:.1e}, vertex gap {worst_vert:.1e}")


if __name__ == "__main__":
    import sys

    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
