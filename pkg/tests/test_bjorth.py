import numpy as np
import pytest

from opgeom import space as sp
from opgeom.bjorth import bj_orthogonal, bj_orthogonal_exact_hilbert, golden_section, min_over_lambda
from opgeom.errors import HypothesisViolation, ValidationError

from conftest import random_orthogonal
from oracles import grid_min, lp_norm


def test_golden_section_quadratic():
    lam, val = golden_section(lambda t: (t - 0.3) ** 2 + 1, -5, 5)
    assert lam == pytest.approx(0.3, abs=1e-7)
    assert val == pytest.approx(1, abs=1e-14)


def test_min_over_lambda_euclidean():
    lam, val = min_over_lambda(sp.euclidean(2), [1, 1], [0, 1])
    # a smooth minimum pins the argmin only to about sqrt(machine eps)
    assert lam == pytest.approx(-1, abs=1e-6)
    assert val == pytest.approx(1, abs=1e-10)


def test_min_over_lambda_l1_against_grid():
    def phi(t):
        return lp_norm(np.array([1, 1]) + t * np.array([0, 1]), 1)

    g_lam, g_val = grid_min(phi)
    assert g_lam == pytest.approx(-1, abs=1e-6)
    assert g_val == pytest.approx(1, abs=1e-10)
    lam, val = min_over_lambda(sp.lp(1, 2), [1, 1], [0, 1])
    assert val == pytest.approx(g_val, abs=1e-10)
    assert lam == pytest.approx(g_lam, abs=1e-6)


def test_min_over_lambda_zero_x_and_zero_y():
    assert min_over_lambda(sp.lp(3, 2), [0, 0], [1, 2]) == (0.0, 0.0)
    with pytest.raises(ValidationError):
        min_over_lambda(sp.lp(3, 2), [1, 0], [0, 0])


@pytest.mark.parametrize("space", [sp.lp(1, 3), sp.lp(1.3, 3), sp.lp(5, 3), sp.lp("inf", 3)], ids=repr)
def test_min_over_lambda_matches_grid_oracle(space, rng):
    for _ in range(5):
        x, y = rng.standard_normal((2, 3))

        def phi(t):
            return lp_norm(x + t * y, space.p)

        bound = 2 * sp.norm(space, x) / sp.norm(space, y) + 1
        _, g_val = grid_min(phi, -bound, bound, step=bound / 2000)
        lam, val = min_over_lambda(space, x, y)
        assert val <= sp.norm(space, x)
        assert val == pytest.approx(g_val, abs=1e-9)


def test_min_over_lambda_far_minimizer():
    # minimizer at lam = -1000, far outside the starting bracket
    lam, val = min_over_lambda(sp.euclidean(2), [1000, 1], [1, 0])
    assert lam == pytest.approx(-1000, rel=1e-9)
    assert val == pytest.approx(1, abs=1e-9)


def test_bj_examples():
    assert bj_orthogonal(sp.euclidean(2), [1, 0], [0, 1]).orthogonal
    v = bj_orthogonal(sp.lp(1, 2), [0, 1], [1, 1])
    assert v.orthogonal and v.min_value == pytest.approx(1, abs=1e-10)
    v = bj_orthogonal(sp.lp(1, 2), [1, 1], [0, 1])
    assert not v.orthogonal and v.min_value == pytest.approx(1, abs=1e-10)


def test_bj_rejects_zero():
    with pytest.raises(ValidationError):
        bj_orthogonal(sp.lp(1, 2), [0, 0], [1, 1])


def test_exact_hilbert_examples():
    e2 = sp.euclidean(2)
    assert bj_orthogonal_exact_hilbert(e2, [1, 2], [2, -1])
    # <x, y> = 1 here, far from the tolerance band
    assert bj_orthogonal_exact_hilbert(e2, [1, 0], [1, 1e-12], tol=1e-9) is False
    # |<x, y>| = 1e-12 <= 1e-9 * ||x|| * ||y||
    assert bj_orthogonal_exact_hilbert(e2, [1, 0], [1e-12, 1], tol=1e-9)
    g = sp.euclidean(2, gram=np.diag([1.0, 4.0]))
    assert bj_orthogonal_exact_hilbert(g, [2, 1], [2, -1])
    with pytest.raises(HypothesisViolation):
        bj_orthogonal_exact_hilbert(sp.lp(2, 2), [1, 0], [0, 1])


def _pairs(rng, n, count):
    """Half exactly orthogonal pairs, half generic pairs."""
    out = []
    for i in range(count):
        x = rng.standard_normal(n)
        y = rng.standard_normal(n)
        if i % 2 == 0:
            y -= (x @ y) / (x @ x) * x
        out.append((x, y))
    return out


def test_hilbert_agreement_1000_pairs(rng):
    for i, (x, y) in enumerate(_pairs(rng, 3, 1000)):
        e = sp.euclidean(3)
        exact = bj_orthogonal_exact_hilbert(e, x, y, 1e-8)
        numeric = bj_orthogonal(e, x, y, 1e-8, method="numeric").orthogonal
        assert exact == numeric
        assert bj_orthogonal(e, x, y, 1e-8).orthogonal == exact


@pytest.mark.parametrize("space", [sp.lp(1, 2), sp.lp(3, 3), sp.lp("inf", 2), sp.euclidean(3)], ids=repr)
def test_scalar_invariance(space, rng):
    for _ in range(125):
        x, y = rng.standard_normal((2, space.dim))
        a, b = rng.uniform(0.1, 10, 2) * rng.choice([-1, 1], 2)
        assert bj_orthogonal(space, x, y).orthogonal == bj_orthogonal(space, a * x, b * y).orthogonal


def test_zero_margin_consistency(rng):
    s = sp.lp(1, 2)
    for _ in range(100):
        x, y = rng.integers(-3, 4, (2, 2)).astype(float)
        if not x.any() or not y.any():
            continue
        v = bj_orthogonal(s, x, y)
        phi0 = sp.norm(s, x)
        assert v.orthogonal == (phi0 - v.min_value <= 1e-8 * phi0)
        assert v.min_value <= phi0
        if v.orthogonal:
            assert v.margin >= -1e-8 * phi0


def test_rotations_preserve_orthogonality(rng):
    for n in (2, 3, 4):
        e = sp.euclidean(n)
        for x, y in _pairs(rng, n, 166):
            u = random_orthogonal(rng, n)
            assert bj_orthogonal(e, x, y, method="numeric").orthogonal == \
                bj_orthogonal(e, u @ x, u @ y, method="numeric").orthogonal
