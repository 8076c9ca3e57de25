import math
import random
from fractions import Fraction

import numpy as np
import pytest

from gen import random_plq, restrict
from varsel.oracle import oracle_conjugate
from varsel.plq import PLQError, PLQFunction

INF = math.inf
F = Fraction


def subdifferential(f, x):
    """``[lo, hi]`` from one-sided slopes, widened to infinity at domain ends."""
    lo_dom, hi_dom = f.dom
    left = right = None
    for j, (q, s, _) in enumerate(f.pieces):
        a, b = f.breaks[j], f.breaks[j + 1]
        if a < x <= b:
            left = q * x + s
        if a <= x < b:
            right = q * x + s
    if f.is_point_domain:
        return -INF, INF
    lo = -INF if x == lo_dom else left
    hi = INF if x == hi_dom else right
    return lo, hi


def test_quadratic_self_conjugate():
    f = PLQFunction.quadratic()
    assert f.conjugate() == f


def test_indicator_and_abs_are_dual():
    d = PLQFunction.indicator(-1.0, 1.0)
    a = PLQFunction.support(-1.0, 1.0)
    assert d.conjugate() == a
    assert a.conjugate() == d
    for v in (-2, -1, 0, 1, 2):
        assert d.conjugate()(v) == abs(v)


def test_conjugate_matches_grid_oracle_small():
    d = PLQFunction.indicator(-1.0, 1.0)
    xs = np.linspace(-1, 1, 2**12 + 1)
    vs = np.arange(-2, 3, dtype=float)
    assert np.max(np.abs(oracle_conjugate(d, xs, vs) - np.abs(vs))) <= 1e-6


def test_recession_examples():
    a = PLQFunction.support(-1.0, 1.0)
    assert a.recession() == a
    assert PLQFunction.quadratic().recession() == PLQFunction.indicator(0.0, 0.0)
    h = PLQFunction((-1.0, 1.0), [(2.0, 0.0, 0.0)])
    assert h.conjugate().recession() == a


def test_recession_of_linear_ray():
    f = PLQFunction((0.0, INF), [(0.0, 1.0, 3.0)])
    r = f.recession()
    assert r(2.0) == 2.0 and r(-1.0) == INF


def test_huber_conjugate_is_clipped_quadratic():
    h = PLQFunction((-INF, -1.0, 1.0, INF), [(0.0, -1.0, -0.5), (1.0, 0.0, 0.0), (0.0, 1.0, -0.5)])
    c = h.conjugate()
    assert c.dom == (-1.0, 1.0)
    assert c(0.5) == pytest.approx(0.125)


def test_exact_fraction_biconjugate():
    f = PLQFunction((F(-1), F(1, 2), INF), [(F(1), F(0), F(0)), (F(0), F(1, 2), F(-1, 8))])
    g = f.conjugate().conjugate()
    assert g.breaks == f.breaks and g.pieces == f.pieces
    assert all(isinstance(v, Fraction) for p in f.conjugate().pieces for v in p)


def test_invalid_functions():
    with pytest.raises(PLQError, match="discontinuous"):
        PLQFunction((0.0, 1.0, 2.0), [(0.0, 0.0, 0.0), (0.0, 0.0, 1.0)])
    with pytest.raises(PLQError, match="convex"):
        PLQFunction((0.0, 1.0, 2.0), [(0.0, 1.0, 0.0), (0.0, -1.0, 2.0)])
    with pytest.raises(PLQError, match="curvature"):
        PLQFunction((0.0, 1.0), [(-1.0, 0.0, 0.0)])


def test_point_domain():
    f = PLQFunction((2.0, 2.0), [(1.0, 1.0, 0.0)])
    assert f(2.0) == 4.0 and f(2.1) == INF
    c = f.conjugate()
    assert c(1.0) == pytest.approx(2.0 - 4.0)


def test_minimize_over_and_tilt():
    q = PLQFunction.quadratic()
    assert q.minimize_over(1.0, 3.0) == 0.5
    assert q.minimize_over(-1.0, 1.0) == 0.0
    assert PLQFunction.indicator(0.0, 1.0).minimize_over(2.0, 3.0) == INF
    assert q.tilt(1.0).minimize_over(-INF, INF) == -0.5


def test_json_roundtrip():
    h = PLQFunction((-INF, -1.0, 1.0, INF), [(0.0, -1.0, -0.5), (1.0, 0.0, 0.0), (0.0, 1.0, -0.5)])
    assert PLQFunction.from_json(h.to_json()) == h
    assert PLQFunction.from_json({"dom": [-1, 1], "pieces": [[0, 0, 0]]}) == PLQFunction.indicator(-1.0, 1.0)


def test_random_biconjugate_exact():
    rng = random.Random(7)
    for _ in range(200):
        f = random_plq(rng)
        g = f.conjugate().conjugate()
        assert (g.breaks, g.pieces) == (f.breaks, f.pieces)


def test_fenchel_young_with_equality_on_subgradients():
    rng = random.Random(8)
    grid = [F(k, 4) for k in range(-16, 17)]
    for _ in range(60):
        f = random_plq(rng)
        c = f.conjugate()
        for x in grid:
            fx = f(x)
            if fx == INF:
                continue
            lo, hi = subdifferential(f, x)
            for v in grid:
                cv = c(v)
                total = fx + cv
                assert total >= x * v
                assert (total == x * v) == (lo <= v <= hi)


@pytest.mark.parametrize("alpha", [F(1, 2), F(2), F(7)])
def test_recession_positive_homogeneity(alpha):
    rng = random.Random(9)
    for _ in range(60):
        r = random_plq(rng).recession()
        for k in range(-8, 9):
            v = F(k, 4)
            assert r(alpha * v) == (alpha * r(v) if r(v) != INF else INF)


def test_conjugate_vs_oracle_random_windows():
    rng = random.Random(10)
    xs = np.arange(-4 * 2**12, 4 * 2**12 + 1) / 2**12
    vs = np.linspace(-3, 3, 25)
    for _ in range(20):
        f = restrict(random_plq(rng, exact=False), -4.0, 4.0)
        exact = np.array([f.conjugate()(v) for v in vs])
        assert np.max(np.abs(exact - oracle_conjugate(f, xs, vs))) <= 1e-6
