import math

import numpy as np
import pytest

from varsel.functions import PiecewiseFunction
from varsel.integrand import NormalIntegrand, domain_map, eval_Ih, integrate_along
from varsel.intervals import IntervalUnion
from varsel.measure import Measure, lebesgue
from varsel.oracle import oracle_Ih
from varsel.plq import PLQFunction

INF = math.inf
D1 = PLQFunction.indicator(-1.0, 1.0)
D2 = PLQFunction.indicator(-2.0, 2.0)
Q = PLQFunction.quadratic()


def test_eval_examples():
    y = PiecewiseFunction([0, 1], [0, 1])
    h = NormalIntegrand.constant(Q)
    assert eval_Ih(h, y, lebesgue()) == pytest.approx(1 / 6)
    assert eval_Ih(h, y, Measure([0, 1], [1], [(0.5, 2)])) == pytest.approx(5 / 12)
    assert eval_Ih(NormalIntegrand.constant(D1), PiecewiseFunction([0, 1], [0, 2]), lebesgue()) == INF


def test_eval_ignores_null_breakpoint_but_not_atoms():
    h = NormalIntegrand([0, 0.5, 1], [D2, D2], [D2, D1, D2])
    y = PiecewiseFunction.constant(1.5)
    assert eval_Ih(h, y, lebesgue()) == 0.0
    assert eval_Ih(h, y, Measure([0, 1], [1], [(0.5, 1)])) == INF


def test_eval_matches_riemann_oracle():
    h = NormalIntegrand([0, 0.4, 1], [PLQFunction((-1.0, 1.0), [(1.0, 0.0, 0.0)]), Q])
    y = PiecewiseFunction([0, 0.3, 1], [0.2, -0.8, 1.5])
    mu = Measure([0, 0.5, 1], [1, 3], [(0.7, 0.5)])
    assert eval_Ih(h, y, mu) == pytest.approx(oracle_Ih(h, y, mu), abs=1e-6)


def test_integrate_along_quadratic():
    assert integrate_along(Q, 0.0, 1.0, 1.0) == pytest.approx(1 / 6)
    assert integrate_along(Q, 1.0, 1.0, 2.0) == pytest.approx(1.0)
    assert integrate_along(D1, 0.0, 2.0, 1.0) == INF


def test_domain_map_examples():
    assert domain_map(NormalIntegrand.constant(D2)).value(0.3) == IntervalUnion.interval(-2, 2)
    m = domain_map(NormalIntegrand([0, 0.5, 1], [D2, D2], [D2, D1, D2]))
    assert m.value(0.5) == IntervalUnion.interval(-1, 1)
    assert m.value(0.7) == IntervalUnion.interval(-2, 2)
    assert domain_map(NormalIntegrand.constant(Q)).value(0.1) == IntervalUnion.interval(-INF, INF)


def test_integrand_conjugate_pointwise():
    h = NormalIntegrand([0, 0.5, 1], [D2, D1], [D2, D1, D1])
    c = h.conjugate()
    for t in (0.0, 0.25, 0.5, 0.75):
        assert c.at(t) == h.at(t).conjugate()


def test_json_roundtrip_with_names():
    h = NormalIntegrand([0, 0.5, 1], [D2, D1], [D2, D1, D1])
    h2 = NormalIntegrand.from_json({"tgrid": [0, 0.5, 1], "piece_plq": ["d2", "d1"], "break_plq": ["d2", "d1", "d1"]}, {"d1": D1, "d2": D2})
    for t in np.linspace(0, 1, 9):
        assert h2.at(t) == h.at(t)
    h3 = NormalIntegrand.from_json(h.to_json())
    for t in np.linspace(0, 1, 9):
        assert h3.at(t) == h.at(t)
