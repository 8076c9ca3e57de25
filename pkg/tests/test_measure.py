import pytest

from varsel.measure import (
    Measure,
    MeasureError,
    SignedMeasure,
    Span,
    is_strictly_positive,
    lebesgue,
    lebesgue_decompose,
    measure_of,
    require_base,
    total_variation,
)


def test_measure_of_spans_with_atoms():
    mu = Measure([0, 0.5, 1], [1, 3], [(0.5, 2)])
    assert measure_of(mu, [Span(0, 1)]) == pytest.approx(0.5 + 1.5 + 2)
    assert measure_of(mu, [Span(0, 0.5, True, False)]) == pytest.approx(0.5)
    assert measure_of(mu, [Span(0.5, 0.5)]) == 2


def test_overlapping_spans_rejected():
    with pytest.raises(MeasureError):
        measure_of(lebesgue(), [Span(0, 0.6), Span(0.5, 1)])


def test_positive_measure_validation():
    with pytest.raises(MeasureError):
        Measure([0, 1], [-1])
    with pytest.raises(MeasureError):
        Measure([0, 1], [1], [(0.5, -1)])
    with pytest.raises(MeasureError):
        SignedMeasure([0, 1], [1], [(1.5, 1)])


def test_strict_positivity():
    assert is_strictly_positive(lebesgue())
    zero_cell = Measure([0, 0.5, 1], [0, 1])
    assert not is_strictly_positive(zero_cell)
    with pytest.raises(MeasureError):
        require_base(zero_cell)


def test_algebra():
    a = Measure([0, 1], [1], [(0.5, 1)])
    b = Measure([0, 0.25, 1], [2, 0], [(0.5, 1), (0.75, 3)])
    s = a + b
    assert isinstance(s, Measure)
    assert s.atom_weight(0.5) == 2 and s.atom_weight(0.75) == 3
    assert s.density_at(0.1) == 3 and s.density_at(0.9) == 1
    d = a - a
    assert d.equivalent(SignedMeasure([0, 1], [0]))
    assert total_variation(SignedMeasure([0, 1], [-2], [(0.1, -1)])).total_mass() == pytest.approx(3)


def test_lebesgue_decomposition_reconstructs():
    theta = SignedMeasure([0, 0.5, 1], [2, -1], [(0.5, 1), (0.3, -2)])
    mu = Measure([0, 1], [2], [(0.5, 4)])
    dec = lebesgue_decompose(theta, mu)
    assert dec.ac_at(0.25) == 1.0
    assert dec.ac_at(0.75) == -0.5
    assert dec.ac_at(0.5) == 0.25
    assert dec.singular.atoms == ((0.3, -2.0),)
    assert dec.reconstruct().equivalent(theta, 1e-12)


def test_json_roundtrip():
    m = Measure([0, "0.5", 1], ["1", 2], [("0.25", 1)])
    assert Measure.from_json(m.to_json()).equivalent(m)
