from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import explicit_gaps, middle_cover
from thickpat.sets import (AffineMap, IntervalUnion, MonotoneSmooth, SetDescriptor, construction_endpoints,
                           gaps, intersect_all, normalize, piecewise_linear, preimage, refine)
from thickpat.thickness import thickness

C = SetDescriptor.middle(F(1, 3))
U1 = IntervalUnion([(0, F(1, 3)), (F(2, 3), 1)])


def test_normalize_identity_and_affine():
    d, T = normalize(C)
    assert d == C and T(F(1, 2)) == F(1, 2)
    d, T = normalize(SetDescriptor.explicit((2, 5), [(3, 4)]))
    assert d.hull == (0, 1) and d.gaps == ((F(1, 3), F(2, 3)),)
    assert T(2) == 0 and T(5) == 1 and T(F(7, 2)) == F(1, 2)


def test_normalize_degenerate():
    with pytest.raises(ValueError, match="degenerate set"):
        normalize(SetDescriptor.explicit((1, 1)))


@given(explicit_gaps(max_gaps=6), st.fractions(min_value=F(1, 10), max_value=10), st.fractions(-5, 5))
def test_normalize_keeps_thickness(d, s, t):
    moved = d.affine(s, t)
    assert thickness(normalize(moved)[0]).value == thickness(d).value


def test_refine_examples():
    assert refine(C, 1) == U1
    c2 = refine(C, 2)
    assert len(c2) == 4 and all(b - a == F(1, 9) for a, b in c2)
    ifs = SetDescriptor.ifs([F(1, 4), F(1, 4)], [0, F(3, 4)])
    assert refine(ifs, 1) == IntervalUnion([(0, F(1, 4)), (F(3, 4), 1)])


@pytest.mark.parametrize("eps", [F(1, 3), F(1, 5), F(3, 5), F(1, 2)])
def test_refine_matches_recursive_oracle(eps):
    for n in range(6):
        assert refine(SetDescriptor.middle(eps), n) == IntervalUnion(middle_cover(eps, n))


def test_gap_records():
    (r,) = gaps(C, 1)
    assert r.G == (F(1, 3), F(2, 3)) and r.L == (0, F(1, 3)) and r.R == (F(2, 3), 1)
    recs = gaps(C, 2)
    assert [x.gap_length for x in recs] == [F(1, 3), F(1, 9), F(1, 9)]
    g = next(x for x in recs if x.G == (F(1, 9), F(2, 9)))
    assert g.L == (0, F(1, 9)) and g.R == (F(2, 9), F(1, 3))


def test_sorted_explicit_gaps_come_back_unchanged():
    d = SetDescriptor.explicit((0, 1), [(F(2, 5), F(3, 5)), (F(1, 10), F(3, 20)), (F(4, 5), F(17, 20))])
    assert [r.G for r in gaps(d)] == [(F(2, 5), F(3, 5)), (F(1, 10), F(3, 20)), (F(4, 5), F(17, 20))]


def test_union_algebra_examples():
    assert U1.intersect(IntervalUnion.interval(F(1, 6), F(1, 2))) == IntervalUnion.interval(F(1, 6), F(1, 3))
    assert IntervalUnion.interval(0, 1).translate(F(-1, 2)) == IntervalUnion.interval(F(-1, 2), F(1, 2))
    assert U1.minkowski_sum(U1) == IntervalUnion.interval(0, 2)


def test_canonical_form_merges_touching():
    U = IntervalUnion([(F(1, 2), 1), (0, F(1, 2)), (3, 3)])
    assert U.intervals == ((0, 1), (3, 3))


def test_preimage_examples():
    assert preimage(AffineMap(2, 1), IntervalUnion.interval(1, 3)) == IntervalUnion.interval(0, 1)
    sq = MonotoneSmooth(lambda x: x * x, lambda y: float(y) ** 0.5, (1, 2), 2, 4)
    W = preimage(sq, IntervalUnion.interval(1, 4))
    assert W.lo <= 1 and W.hi >= 2 and W.hi - W.lo < 1 + F(1, 10**6)


def test_quadratic_preimage_encloses_samples():
    from thickpat.patterns import quadratic_pattern_setup
    setup = quadratic_pattern_setup([F(-1, 10), F(1, 10)], [0, 0], 4)
    f = setup.maps[0]
    target = refine(SetDescriptor.middle(F(1, 5), (4, 5)), 3)
    W = preimage(f, target)
    lo, hi = setup.window
    for k in range(100):
        x = lo + (hi - lo) * F(k, 99)
        if f.forward(x) in target:
            assert x in W


def test_smooth_inverse_checked():
    with pytest.raises(ValueError):
        MonotoneSmooth(lambda x: x * x, lambda y: float(y), (1, 2), 2, 4)


@given(explicit_gaps())
def test_refine_nesting_explicit(d):
    for n in range(len(d.gaps)):
        assert refine(d, n + 1).issubset(refine(d, n))


@given(st.sampled_from([F(1, 3), F(1, 5), F(1, 2), F(3, 5), F(7, 9)]), st.integers(0, 5))
def test_refine_nesting_and_endpoints(eps, n):
    d = SetDescriptor.middle(eps)
    assert refine(d, n + 1).issubset(refine(d, n))
    deeper = refine(d, n + 2)
    assert all(e in deeper for e in construction_endpoints(d, n))


def unions(max_size=4):
    pt = st.fractions(min_value=-3, max_value=3, max_denominator=12)
    return st.lists(st.tuples(pt, pt).map(lambda p: tuple(sorted(p))), max_size=max_size).map(IntervalUnion)


@given(unions(), unions(), unions(), st.fractions(-2, 2, max_denominator=12))
def test_algebra_laws(a, b, c, t):
    assert a.intersect(b) == b.intersect(a)
    assert a.intersect(b).intersect(c) == a.intersect(b.intersect(c))
    assert a.intersect(a) == a
    assert a.translate(t).translate(-t) == a
    assert intersect_all([a, b, c]) == a.intersect(b).intersect(c)


@given(st.fractions(-2, 2, max_denominator=12), st.fractions(0, 1, max_denominator=12),
       st.fractions(-2, 2, max_denominator=12), st.fractions(0, 1, max_denominator=12))
def test_minkowski_single_intervals(a, la, c, lc):
    S = IntervalUnion.interval(a, a + la).minkowski_sum(IntervalUnion.interval(c, c + lc))
    assert S == IntervalUnion.interval(a + c, a + la + c + lc)


@given(unions(), unions())
def test_minkowski_sum_contains_pair_sums(a, b):
    S = a.minkowski_sum(b)
    for x, _ in a:
        for y, _ in b:
            assert x + y in S
    if a and b:
        assert S.measure() <= a.diam() + b.diam()


def test_descriptor_json_roundtrip_and_validation():
    for d in (C, SetDescriptor.ifs([F(1, 2), F(1, 4)], [0, F(3, 4)]),
              SetDescriptor.explicit((2, 5), [(3, 4)])):
        assert SetDescriptor.from_json(d.to_json()) == d
    with pytest.raises(ValueError):
        SetDescriptor.explicit((0, 1), [(F(1, 2), F(3, 2))])
    with pytest.raises(ValueError):
        SetDescriptor.ifs([F(1, 2), F(1, 2)], [0, F(1, 2)])
    with pytest.raises(ValueError):
        SetDescriptor.from_json({"kind": "cf", "hull": [0, 1]})


def test_piecewise_linear_is_bilipschitz():
    f = piecewise_linear([-1, F(1, 2), 2], [1, 2])
    assert (f.c1, f.c2) == (1, 2)
    assert f.image(0, 1) == (F(1), F(5, 2))
