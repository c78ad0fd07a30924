import math

import pytest
from hypothesis import given, strategies as st

from giantent.geometry import (
    CouplingPoint, Layout, LayoutError, classify, from_gaps, nested_layout,
    pair_metrics, proportional_delay, standard_layout, translate,
)

PI = math.pi
CASE_I = (0, PI / 2, 0, PI / 2)


def atoms(layout):
    return tuple(p.atom for p in layout.points)


def test_standard_separate_positions():
    lay = standard_layout("separate", PI, 0.8, CASE_I)
    assert [p.phase_coord for p in lay.points] == pytest.approx([0, PI, 2 * PI, 3 * PI])
    assert atoms(lay) == ("a", "a", "b", "b")
    assert lay.topology == "separate"


def test_standard_nested_has_inner_atom_a():
    lay = standard_layout("nested", PI, 0.8, CASE_I)
    assert atoms(lay) == ("b", "a", "a", "b")
    for p, q in zip(lay.points, lay.points[1:]):
        m = pair_metrics(lay, p, q)
        assert m.phase_shift == pytest.approx(PI)
        assert m.delay == pytest.approx(0.8)


def test_braided_collocated():
    lay = standard_layout("braided", 0, 0, (0.1, 0.2, 0.3, 0.4))
    assert atoms(lay) == ("a", "b", "a", "b")
    for p in lay.points:
        for q in lay.points:
            m = pair_metrics(lay, p, q)
            assert (m.phase_shift, m.delay) == (0, 0)


def test_nested_layout_matches_standard():
    assert nested_layout(1.3, 0.8, 1.3, 0.8, CASE_I) == standard_layout("nested", 1.3, 0.8, CASE_I)


def test_nested_layout_collapsed_inner_atom():
    lay = nested_layout(0, 0, PI, 0.8, CASE_I)
    m = pair_metrics(lay, "a1", "a2")
    assert (m.phase_shift, m.delay) == (0, 0)
    assert pair_metrics(lay, "b1", "a1").delay == pytest.approx(0.8)


def test_nested_layout_gaps():
    lay = nested_layout(3.0, 0.5, PI, 0.8, CASE_I)
    assert pair_metrics(lay, "a1", "a2").phase_shift == pytest.approx(3.0)
    assert pair_metrics(lay, "b1", "b2").delay == pytest.approx(2.1)


def test_proportional_delay():
    assert proportional_delay(PI / 2, PI, 0.8) == pytest.approx(0.4)
    assert proportional_delay(1.0, 0.0, 0.8) == 0.0


def test_pair_metrics_examples():
    lay = standard_layout("separate", PI / 2, 0.8, CASE_I)
    m = pair_metrics(lay, "a1", "a2")
    assert (m.phase_shift, m.delay) == pytest.approx((PI / 2, 0.8))
    m = pair_metrics(lay, "a1", "b2")
    assert (m.phase_shift, m.delay) == pytest.approx((3 * PI / 2, 2.4))
    assert pair_metrics(lay, "b1", "b1") == pair_metrics(lay, "a2", "a2")
    assert pair_metrics(lay, "b1", "b1").delay == 0
    assert pair_metrics(lay, "a2", "b2") == pair_metrics(lay, "b2", "a2")


def test_pair_metrics_unknown_point():
    lay = standard_layout("separate", 1, 1, CASE_I)
    with pytest.raises(KeyError):
        pair_metrics(lay, "a1", "c3")


@pytest.mark.parametrize("args", [(-1, 0.5), (1, -0.1)])
def test_negative_gaps_rejected(args):
    with pytest.raises(LayoutError):
        standard_layout("separate", *args, CASE_I)
    with pytest.raises(LayoutError):
        nested_layout(*args, 1, 1, CASE_I)


def test_unknown_topology():
    with pytest.raises(LayoutError):
        standard_layout("twisted", 1, 1, CASE_I)


def test_layout_validation():
    p = lambda a, i, x: CouplingPoint(a, i, x, x)  # noqa: E731
    with pytest.raises(LayoutError):
        Layout((p("a", 1, 0), p("a", 2, 1), p("b", 1, 2)))
    with pytest.raises(LayoutError):
        Layout((p("a", 1, 0), p("a", 1, 1), p("b", 1, 2), p("b", 2, 3)))
    with pytest.raises(LayoutError):
        Layout((p("a", 1, 2), p("a", 2, 1), p("b", 1, 2), p("b", 2, 3)))
    with pytest.raises(LayoutError):
        CouplingPoint("a", 1, -1.0, 0.0)
    with pytest.raises(LayoutError):
        CouplingPoint("a", 1, math.inf, 0.0)
    with pytest.raises(LayoutError):
        CouplingPoint("c", 1, 0.0, 0.0)
    # delay ordering must follow phase ordering
    with pytest.raises(LayoutError):
        Layout((CouplingPoint("a", 1, 0, 1), CouplingPoint("a", 2, 1, 0.5),
                CouplingPoint("b", 1, 2, 2), CouplingPoint("b", 2, 3, 3)))


def test_coupling_phase_stored_as_given():
    lay = standard_layout("separate", 1, 1, (7.0, -3.0, 0, 100.0))
    assert lay.point("a1").coupling_phase == 7.0
    assert lay.point("b2").coupling_phase == 100.0


@pytest.mark.parametrize("seq,label", [
    ("aabb", "separate"), ("bbaa", "separate"), ("abab", "braided"), ("baba", "braided"),
    ("abba", "nested"), ("baab", "nested"),
])
def test_classify(seq, label):
    assert classify(seq) == label


gap = st.tuples(st.floats(0, 10), st.floats(0, 5))
order = st.permutations([("a", 1), ("a", 2), ("b", 1), ("b", 2)])


@given(order, st.lists(gap, min_size=3, max_size=3), st.floats(0, 50), st.floats(0, 50))
def test_classification_translation_invariant(order, gaps, dx, dt):
    lay = from_gaps(order, gaps, (0, 0, 0, 0))
    assert translate(lay, dx, dt).topology == lay.topology


@given(st.lists(gap, min_size=3, max_size=3))
def test_additivity(gaps):
    lay = from_gaps([("a", 1), ("b", 1), ("a", 2), ("b", 2)], gaps, (0, 0, 0, 0))
    pts = lay.points
    for i in range(4):
        for j in range(i, 4):
            for k in range(j, 4):
                whole = pair_metrics(lay, pts[i], pts[k])
                a = pair_metrics(lay, pts[i], pts[j])
                b = pair_metrics(lay, pts[j], pts[k])
                # cumulative storage: only one rounding in each difference
                assert whole.phase_shift == pytest.approx(a.phase_shift + b.phase_shift, rel=1e-15, abs=1e-14)
                assert whole.delay == pytest.approx(a.delay + b.delay, rel=1e-15, abs=1e-14)
