import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import explicit_gaps, gap_oracle
from thickpat.sets import GapRecord, IntervalUnion, SetDescriptor, gaps, normalize
from thickpat.thickness import (EXACT, INF, LOWER, TRUNCATION, ThicknessValue, local_thickness, thickness,
                                _union_thickness, thickness_chunk, thickness_gap, thickness_ifs_lower,
                                windowed_thickness)


@pytest.mark.parametrize("eps", [F(1, 3), F(1, 5), F(1, 2), F(3, 5), F(1, 9)])
def test_middle_closed_form(eps):
    d = SetDescriptor.middle(eps)
    for n in range(1, 7):
        assert thickness_gap(gaps(d, n)) == (1 - eps) / (2 * eps)
    t = thickness(d)
    assert t.kind == EXACT and t.describe().startswith(f"tau = {(1 - eps) / (2 * eps)}")


def test_single_gap_and_no_gap():
    d = SetDescriptor.explicit((0, 1), [(F(2, 5), F(1, 2))])
    assert thickness(d).value == 4
    assert thickness_chunk(d).value == 4
    assert thickness_gap([]) == INF
    assert thickness(SetDescriptor.explicit((0, 1))).is_infinite


def test_singleton_and_bad_record():
    assert thickness(SetDescriptor.explicit((1, 1))).value == 0
    with pytest.raises(ValueError, match="not a gap"):
        GapRecord((F(1, 2), F(1, 2)), (0, F(1, 2)), (F(1, 2), 1))


def test_chunk_brute_force_depth_3():
    assert thickness_chunk(SetDescriptor.middle(F(1, 3)), 3).value == 1
    assert thickness_chunk(SetDescriptor.explicit((0, 1))).value == thickness(SetDescriptor.explicit((0, 1))).value
    assert thickness_chunk(SetDescriptor.explicit((1, 1))).value == 0


@given(explicit_gaps())
def test_gap_formula_matches_definition_oracle(d):
    t = thickness(d)
    if not d.gaps:
        assert t.is_infinite
    else:
        assert t.value == gap_oracle(d.hull, list(d.gaps))


@given(explicit_gaps().filter(lambda d: d.gaps))
def test_chunk_equals_gap(d):
    assert thickness_chunk(d).value == thickness(d).value


def test_equal_length_permutations():
    gs = [(F(1, 10), F(2, 10)), (F(4, 10), F(5, 10)), (F(7, 10), F(8, 10))]
    d = SetDescriptor.explicit((0, 1), gs)
    base = thickness_gap(gaps(d))
    for perm in itertools.permutations(gaps(d)):
        assert thickness_gap(perm) == base


def test_isolated_point_gives_zero():
    # {0} ∪ [1/2, 1] as a cover: the point 0 is isolated
    assert _union_thickness(IntervalUnion([(0, 0), (F(1, 2), 1)])) == 0
    # a tiny left flank pushes the value toward zero
    d = SetDescriptor.explicit((0, 1), [(F(1, 100), F(1, 2))])
    assert thickness(d).value == F(1, 49)


def test_ifs_lower_examples():
    assert thickness_ifs_lower(SetDescriptor.ifs([F(1, 3)] * 2, [0, F(2, 3)])).value == 1
    assert thickness_ifs_lower(SetDescriptor.ifs([F(1, 5)] * 3, [0, F(2, 5), F(4, 5)])).value == 1
    t = thickness_ifs_lower(SetDescriptor.ifs([F(1, 2), F(1, 4)], [0, F(3, 4)]))
    assert t.value == 1 and t.kind == LOWER


def test_unequal_ifs_reports_truncation():
    d = SetDescriptor.ifs([F(1, 2), F(1, 4)], [0, F(3, 4)])
    t = thickness(d, 5)
    assert t.kind == TRUNCATION and t.value >= thickness_ifs_lower(d).value


def test_local_thickness_examples():
    d = SetDescriptor.middle(F(1, 5))
    lt = local_thickness(d, [F(k, 4) for k in range(5)], [F(1, 2), F(1, 4)], 4)
    assert lt.value >= thickness_ifs_lower(d).value
    mixed = SetDescriptor.explicit((0, 1), [(F(1, 100), F(1, 2))])
    inside = local_thickness(mixed, [F(3, 4)], [F(1, 8)])
    assert inside.is_infinite
    w = windowed_thickness(SetDescriptor.middle(F(1, 3)), [(0, F(1, 3))], 4)
    assert w.value == 1
    with pytest.raises(ValueError):
        local_thickness(d, [0], [F(1, 4), F(1, 2)])


@given(st.fractions(min_value=F(1, 10), max_value=10, max_denominator=20), st.fractions(-3, 3, max_denominator=20),
       st.sampled_from([F(1, 3), F(1, 5), F(3, 5)]))
def test_scale_invariance(s, t, eps):
    d = SetDescriptor.middle(eps).affine(s, t)
    assert thickness(normalize(d)[0]).value == thickness(d).value == (1 - eps) / (2 * eps)


def test_value_json_roundtrip():
    for v in (thickness(SetDescriptor.middle(F(1, 3))), ThicknessValue(INF, EXACT)):
        assert ThicknessValue.from_json(v.to_json()) == v
