"""End-to-end acceptance checks; each test reports one PASS/FAIL line."""

import random
import time

import numpy as np
import pytest

from gen import random_isc_map, random_measure, random_plq, restrict
from varsel import golden
from varsel.duality import bv_duality, duality_report, eval_Jhstar
from varsel.intervals import IntervalUnion, hausdorff
from varsel.measure import lebesgue, lebesgue_decompose
from varsel.oracle import compare_limits, oracle_conjugate, oracle_limits, oracle_mli, staircase_truncation
from varsel.setmap import (
    check_essential_selection,
    continuous_selection,
    essential_selection_counterexample,
    is_fully_lsc,
    is_inner_semicontinuous,
    is_outer_mu_regular,
    is_solid_valued,
    mli_map,
    mu_inner_limit,
)

MAPS = golden.setmaps()
MEASURES = golden.measures()
SIGNED = golden.signed_measures()
INTEGRANDS = golden.integrands()
N_RANDOM = 500


@pytest.fixture(scope="module")
def random_instances():
    rng = random.Random(1)
    out = []
    for _ in range(N_RANDOM):
        g = random_isc_map(rng)
        out.append((g, random_measure(rng, g)))
    return out


def test_criterion_01_shrink_map_verdicts(criterion):
    criterion(1, "shrink map: outer-regular with atom, not without; not fully lsc; isc; < 1 s")
    start = time.perf_counter()
    g = MAPS["shrinkMap"]
    with_atom = is_outer_mu_regular(g, MEASURES["lebPlusAtom"]).verdict
    without = is_outer_mu_regular(g, lebesgue()).verdict
    full = is_fully_lsc(g).verdict
    isc = is_inner_semicontinuous(g).verdict
    elapsed = time.perf_counter() - start
    criterion.detail(f"{elapsed:.3f} s")
    assert (with_atom, without, full, isc) == (True, False, False, True)
    assert elapsed < 1.0


def test_criterion_02_dyadic_staircase(criterion):
    criterion(2, "staircase truncations N=6,8,10: mli at 2^-n = [1,2], mli at 0 covers {0} u [1,2]; < 30 s at N=10")
    step = 2.0**-12
    mu = lebesgue()
    timings = {}
    for N in (6, 8, 10):
        g = staircase_truncation(N)
        start = time.perf_counter()
        for n in range(1, N + 1):
            assert hausdorff(oracle_mli(g, 2.0**-n, mu, step=step), IntervalUnion.interval(1, 2)) <= 2 * step
        at0 = oracle_mli(g, 0.0, mu, step=step)
        assert IntervalUnion([(0, 0), (1, 2)]).issubset(at0.fatten(2.0**-N))
        assert IntervalUnion([(0, 0), (1, 2)]).issubset(oracle_limits(g, 0.0, "ls", step=step).fatten(2.0**-N))
        # the point near 0 is far from every mli value at 2^-n: mli is not isc at 0
        low = at0.parts[0]
        assert low[1] <= 2.0**-N and IntervalUnion.interval(1, 2).distance(low[1]) >= 0.99
        timings[N] = time.perf_counter() - start
    criterion.detail(f"N=10 took {timings[10]:.2f} s")
    assert timings[10] < 30


def test_criterion_03_regularity_iff_no_counterexample(criterion, random_instances):
    criterion(3, f"{N_RANDOM} random isc solid maps: outer-regular iff no counterexample, classifications hold")
    rng = random.Random(3)
    failures = 0
    n_reg = n_cx = 0
    for g, mu in random_instances:
        regular = is_outer_mu_regular(g, mu).verdict
        cx = essential_selection_counterexample(g, mu)
        if regular != (cx is None):
            failures += 1
            continue
        if cx is not None:
            n_cx += 1
            failures += check_essential_selection(g, cx, mu).kind != "essential_only"
            continue
        n_reg += 1
        m = mli_map(g, mu)
        for _ in range(3):
            s = rng.random()
            a, b = m.value(s).parts[0]
            y = continuous_selection(m, (s, rng.uniform(a, b)))
            failures += check_essential_selection(g, y, mu).kind != "selection"
    criterion.detail(f"{n_reg} regular, {n_cx} counterexamples, {failures} failures")
    assert n_reg > 50 and n_cx > 50
    assert failures == 0


def test_criterion_04_mli_structure(criterion, random_instances):
    criterion(4, f"{N_RANDOM} random maps: mli idempotent, equals the map off the grid, isc solid convex")
    failures = 0
    for g, mu in random_instances:
        m = mli_map(g, mu)
        failures += mli_map(m, mu) != m
        failures += not m.same_pieces(g)
        rng = random.Random(len(g.grid))
        for _ in range(3):
            t = rng.random()
            if t not in g.grid:
                failures += m.value(t) != g.value(t)
        failures += not (is_inner_semicontinuous(m).verdict and is_solid_valued(m).verdict and m.is_convex_valued)
    criterion.detail(f"{failures} failures")
    assert failures == 0


def test_criterion_05_null_point_invariance(criterion, random_instances):
    criterion(5, f"{N_RANDOM} random maps perturbed at <= 5 non-atom points: mli bit-identical")
    rng = random.Random(5)
    failures = 0
    for g, mu in random_instances:
        atoms = set(mu.atom_locations)
        pts = {rng.randint(0, 64) / 64 for _ in range(rng.randint(1, 5))} - atoms
        changes = {}
        for p in pts:
            kind = rng.random()
            if kind < 0.3:
                changes[p] = IntervalUnion.empty()
            elif kind < 0.6:
                changes[p] = IntervalUnion.point(rng.uniform(-9, 9))
            else:
                changes[p] = IntervalUnion([(rng.uniform(-9, -1), rng.uniform(-1, 0)), (1, rng.uniform(1, 9))])
        other = g.perturbed(changes)
        probes = set(other.grid) | {rng.random() for _ in range(5)}
        failures += any(mu_inner_limit(other, t, mu) != mu_inner_limit(g, t, mu) for t in probes)
    criterion.detail(f"{failures} failures")
    assert failures == 0


def test_criterion_06_fully_lsc_implies_regular(criterion):
    criterion(6, "200 random fully lsc maps x 5 measures: outer-regular")
    rng = random.Random(6)
    found = failures = 0
    while found < 200:
        g = random_isc_map(rng, regular_bias=0.8)
        if not is_fully_lsc(g).verdict:
            continue
        found += 1
        for _ in range(5):
            failures += not is_outer_mu_regular(g, random_measure(rng, g)).verdict
    criterion.detail(f"{failures} failures")
    assert failures == 0


def test_criterion_07_plq_conjugation(criterion):
    criterion(7, "1000 exact biconjugates; conjugates match grid sup at 2^-16 within 1e-6")
    rng = random.Random(7)
    bad = 0
    for _ in range(1000):
        f = random_plq(rng)
        g = f.conjugate().conjugate()
        bad += (g.breaks, g.pieces) != (f.breaks, f.pieces)
    xs = np.arange(-4 * 2**16, 4 * 2**16 + 1) / 2**16
    vs = np.linspace(-3, 3, 25)
    worst = 0.0
    for _ in range(60):
        f = restrict(random_plq(rng, exact=False), -4.0, 4.0)
        c = f.conjugate()
        exact = np.array([c(v) for v in vs])
        worst = max(worst, float(np.max(np.abs(exact - oracle_conjugate(f, xs, vs)))))
    criterion.detail(f"{bad} biconjugate mismatches, worst grid deviation {worst:.1e}")
    assert bad == 0
    assert worst <= 1e-6


def _oracle_J(h, theta, mu, n=2**12):
    """Conjugate terms of J by grid sup over each domain."""
    dec = lebesgue_decompose(theta, mu)
    grid = sorted(set(h.tgrid) | set(dec.grid))
    total = 0.0

    def hstar(f, v):
        lo, hi = float(f.dom[0]), float(f.dom[1])
        return float(oracle_conjugate(f, np.linspace(lo, hi, n + 1), [v])[0])

    for t0, t1 in zip(grid, grid[1:]):
        mid = 0.5 * (t0 + t1)
        total += mu.density_at(mid) * (t1 - t0) * hstar(h.at(mid), dec.ac_density(mid))
    for t, w in mu.atoms:
        total += w * hstar(h.at(t), dec.atom_ratios[t])
    for t, v in dec.singular.atoms:
        lo, hi = h.at(t).dom
        total += max(v * float(lo), v * float(hi))
    return total


def test_criterion_08_duality_over_continuous_functions(criterion):
    criterion(8, "regular |gap| <= 1e-3 at level 8 (quadratic <= 1e-6); shrink domain J = 1 vs estimate >= 1.99; < 60 s")
    start = time.perf_counter()
    lev = 8
    regular = duality_report(INTEGRANDS["regularDom"], SIGNED["dirac05"], MEASURES["lebesgue"], lev)
    mixed = duality_report(INTEGRANDS["mixedPLQ"], SIGNED["mixed"], MEASURES["twoDensities"], lev)
    quad = duality_report(INTEGRANDS["quadratic"], SIGNED["unitDensity"], MEASURES["lebesgue"], lev)
    gap = duality_report(INTEGRANDS["shrinkDom"], SIGNED["dirac05"], MEASURES["lebesgue"], lev)
    elapsed = time.perf_counter() - start
    j_mixed = _oracle_J(INTEGRANDS["mixedPLQ"], SIGNED["mixed"], MEASURES["twoDensities"])
    criterion.detail(
        f"gaps {regular.gap:.1e}, {mixed.gap:.1e}, {quad.gap:.1e}; shrink estimate {gap.Istar_estimates[-1]:.4f}; {elapsed:.1f} s"
    )
    assert regular.regularity_verdict and mixed.regularity_verdict and quad.regularity_verdict
    assert abs(regular.gap) <= 1e-3 and abs(mixed.gap) <= 1e-3
    assert abs(quad.gap) <= 1e-6
    assert abs(mixed.J_value - j_mixed) <= 1e-6
    assert not gap.regularity_verdict and gap.J_value == 1.0
    assert gap.Istar_estimates[-1] >= 1.99 and gap.certified_gap
    assert elapsed < 60


def test_criterion_09_duality_over_bv(criterion):
    criterion(9, "BV: exact and numerical sup agree within 1e-3; left-irregular sup >= 1.99 > J = 1; mirror equal")
    lev = 8
    cases = {
        "irregular": (INTEGRANDS["bvLeftIrregular"], SIGNED["dirac03"], MEASURES["lebesgue"]),
        "regular": (INTEGRANDS["bvLeftRegular"], SIGNED["dirac03"], MEASURES["lebesgue"]),
        "mixed": (INTEGRANDS["mixedPLQ"], SIGNED["mixed"], MEASURES["twoDensities"]),
        "zero": (INTEGRANDS["regularDom"], SIGNED["zero"], MEASURES["lebesgue"]),
    }
    reps = {k: bv_duality(*v, levels=lev) for k, v in cases.items()}
    diffs = {k: abs(r.exact_sup - r.Istar_estimates[-1]) for k, r in reps.items()}
    criterion.detail(", ".join(f"{k} {d:.1e}" for k, d in diffs.items()))
    assert all(d <= 1e-3 for d in diffs.values())
    irr = reps["irregular"]
    assert not irr.regularity_verdict and irr.J_value == 1.0
    assert irr.exact_sup >= 1.99 and irr.Istar_estimates[-1] >= 1.99 and irr.certified_gap
    reg = reps["regular"]
    assert reg.regularity_verdict and abs(reg.exact_sup - reg.J_value) <= 1e-3 and abs(reg.gap) <= 1e-3
    assert all(r.consistent for r in reps.values())
    assert eval_Jhstar(*cases["zero"]) == 0.0


def test_criterion_10_oracle_convergence(criterion):
    criterion(10, "oracle vs exact limits at breakpoints: decreasing as the step halves 2^-8 -> 2^-12, <= 2 step")
    rng = random.Random(10)
    instances = [(name, g, MEASURES["lebPlusAtom"]) for name, g in MAPS.items() if not name.startswith("staircase")]
    for i in range(6):
        g = random_isc_map(rng, max_cells=3, max_slope=0.5, regular_bias=0.3)
        instances.append((f"random{i}", g, random_measure(rng, g)))
    steps = [2.0**-8, 2.0**-10, 2.0**-12]
    worst_ratio = 0.0
    failures = []
    for name, g, mu in instances:
        ds = [compare_limits(g, mu, s) for s in steps]
        for key in ("li", "ls", "mli"):
            seq = [d[key] for d in ds]
            worst_ratio = max(worst_ratio, max(v / s for v, s in zip(seq, steps)))
            if any(v > 2 * s for v, s in zip(seq, steps)):
                failures.append((name, key, "bound", seq))
            if any(b > a for a, b in zip(seq, seq[1:])) or (seq[0] > 0 and not seq[-1] < seq[0]):
                failures.append((name, key, "monotone", seq))
    criterion.detail(f"{len(instances)} maps, worst discrepancy {worst_ratio:.2f} step")
    assert not failures, failures
