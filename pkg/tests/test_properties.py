"""Property-based checks on random instances (hypothesis drives the seeds)."""

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from gen import random_isc_map, random_measure, random_plq
from varsel.intervals import IntervalUnion, hausdorff
from varsel.measure import SignedMeasure, Span, lebesgue_decompose, measure_of, total_variation
from varsel.plq import PLQFunction
from varsel.setmap import (
    Component,
    PiecewiseSetMap,
    inner_limit,
    mu_essential_supremum,
    mu_inner_limit,
    outer_limit,
)

seeds = st.randoms(use_true_random=False)
dyadic = st.integers(0, 32).map(lambda k: k / 32)


@st.composite
def interval_unions(draw):
    pts = sorted(draw(st.lists(st.integers(-20, 20), min_size=0, max_size=6)))
    return IntervalUnion((a / 4, b / 4) for a, b in zip(pts[0::2], pts[1::2]))


@st.composite
def spans(draw):
    cuts = sorted(set(draw(st.lists(dyadic, min_size=2, max_size=8))))
    out = []
    for a, b in zip(cuts[0::2], cuts[1::2]):
        out.append(Span(a, b, draw(st.booleans()), draw(st.booleans())))
    if draw(st.booleans()):
        p = draw(dyadic)
        if all(p < sp.lo or p > sp.hi for sp in out):
            out.append(Span(p, p))
    return out


@st.composite
def general_maps(draw):
    """Arbitrary (not necessarily isc or convex) piecewise-constant maps."""
    rng = draw(seeds)
    grid = [0.0] + sorted(rng.sample([k / 8 for k in range(1, 8)], rng.randint(0, 3))) + [1.0]

    def value():
        a = rng.randint(-8, 4) / 4
        parts = [(a, a + rng.randint(0, 4) / 4)]
        if rng.random() < 0.3:
            parts.append((parts[0][1] + 0.5, parts[0][1] + 1))
        return parts

    return PiecewiseSetMap.from_steps(grid, [value() for _ in grid[1:]], [value() for _ in grid])


@settings(max_examples=150, deadline=None)
@given(general_maps(), seeds)
def test_limit_sandwich(gamma, rng):
    mu = random_measure(rng, gamma)
    for t in set(gamma.grid) | {rng.random()}:
        li, ml, ls = inner_limit(gamma, t), mu_inner_limit(gamma, t, mu), outer_limit(gamma, t)
        assert li.issubset(ml) and ml.issubset(ls)


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_mli_convex_for_convex_maps(rng):
    gamma = random_isc_map(rng)
    mu = random_measure(rng, gamma)
    for t in gamma.grid:
        assert mu_inner_limit(gamma, t, mu).is_convex


@settings(max_examples=150, deadline=None)
@given(seeds, st.lists(st.integers(0, 64), min_size=1, max_size=5))
def test_null_point_invariance(rng, ks):
    gamma = random_isc_map(rng)
    mu = random_measure(rng, gamma)
    changes = {k / 64: IntervalUnion([(-9, -8), (8, 9)]) for k in ks if mu.atom_weight(k / 64) == 0}
    other = gamma.perturbed(changes)
    for t in set(other.grid) | {rng.random() for _ in range(3)}:
        assert mu_inner_limit(other, t, mu) == mu_inner_limit(gamma, t, mu)


@settings(max_examples=100, deadline=None)
@given(st.lists(general_maps(), min_size=1, max_size=3), seeds)
def test_esssup_contains_inputs_off_grid(maps, rng):
    from varsel.measure import lebesgue

    sup = mu_essential_supremum(maps, lebesgue())
    for _ in range(10):
        t = rng.random()
        if any(t in g.grid for g in maps):
            continue
        for g in maps:
            assert g.value(t).issubset(sup.value(t))
        assert sup.value(t) == IntervalUnion.empty().union(*(g.value(t) for g in maps))


@settings(max_examples=200, deadline=None)
@given(seeds, spans(), st.lists(st.booleans(), min_size=8, max_size=8))
def test_measure_additivity(rng, parts, side):
    mu = random_measure(rng)
    a = [p for p, k in zip(parts, side) if k]
    b = [p for p, k in zip(parts, side) if not k]
    assert abs(measure_of(mu, parts) - measure_of(mu, a) - measure_of(mu, b)) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(seeds, spans())
def test_decomposition_roundtrip_and_total_variation(rng, s):
    mu = random_measure(rng)
    grid = [0.0, 0.25, 0.5, 1.0]
    theta = SignedMeasure(grid, [rng.uniform(-2, 2) for _ in grid[1:]], [(rng.randint(0, 8) / 8, rng.choice([-1.0, 2.0]))])
    dec = lebesgue_decompose(theta, mu)
    assert abs(measure_of(dec.reconstruct(), s) - measure_of(theta, s)) <= 1e-12
    assert measure_of(total_variation(theta), s) >= abs(measure_of(theta, s)) - 1e-12


@settings(max_examples=200, deadline=None)
@given(interval_unions(), interval_unions(), interval_unions())
def test_hausdorff_metric(a, b, c):
    if a.is_empty or b.is_empty or c.is_empty:
        return
    assert hausdorff(a, b) == hausdorff(b, a)
    assert hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c) + 1e-12
    assert (hausdorff(a, b) == 0) == (a == b)


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_domain_identity_from_recession(rng):
    f = random_plq(rng)
    lo, hi = f.dom
    assert f.conjugate().recession().conjugate() == PLQFunction.indicator(lo, hi)


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_biconjugate_exact(rng):
    f = random_plq(rng)
    g = f.conjugate().conjugate()
    assert (g.breaks, g.pieces) == (f.breaks, f.pieces)


@settings(max_examples=200, deadline=None)
@given(seeds, st.integers(-12, 12), st.integers(-12, 12))
def test_fenchel_young(rng, i, j):
    f = random_plq(rng)
    x, v = Fraction(i, 4), Fraction(j, 4)
    fx = f(x)
    if fx != float("inf"):
        assert fx + f.conjugate()(v) >= x * v


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_affine_component_limits_match_piece_formula(rng):
    a0, a1 = rng.randint(-4, 4) / 4, rng.randint(-4, 4) / 4
    w = rng.randint(1, 8) / 4
    gamma = PiecewiseSetMap([0, 0.5, 1], [[Component(a0, a1, a0 + w, a1)], [Component.const(-10, 10)]])
    assert inner_limit(gamma, 0.25) == IntervalUnion.interval(a0 + a1 / 4, a0 + w + a1 / 4)
