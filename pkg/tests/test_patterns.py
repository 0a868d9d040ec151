from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import middle_cover
from thickpat.patterns import (ABSENT, affine_family_window, ALARM, CANDIDATE, FAILS, HOLDS, PRESENT, Certificate, ap_extent, ap_search,
                               endpoint_ap, gap_lemma_check, homothety_search, longest_ap, pattern_search_general,
                               quadratic_pattern_setup, sumset_cover, translate_search)
from thickpat.sets import AffineMap, IntervalUnion, SetDescriptor, refine

C = SetDescriptor.middle(F(1, 3))
M5 = SetDescriptor.middle(F(1, 5))


def pairwise_common(shifted_lists):
    """Oracle: intersect lists of closed intervals by brute force over all tuples."""
    acc = shifted_lists[0]
    for nxt in shifted_lists[1:]:
        acc = [(max(a, c), min(b, d)) for a, b in acc for c, d in nxt if max(a, c) <= min(b, d)]
    return acc


def oracle_present(eps, shifts, n):
    pieces = middle_cover(eps, n)
    return bool(pairwise_common([[(a - s, b - s) for a, b in pieces] for s in shifts]))


def test_ap_examples():
    for n in range(1, 13):
        c = ap_search(C, 4, F(1, 3), n)
        assert c.verdict == PRESENT and c.witness == 0 and c.in_set
    c = ap_search(C, 3, F(1, 2), 1)
    assert c.verdict == ABSENT and c.depth == 1
    c = ap_search(M5, 3, F(2, 3), 4)
    assert c.verdict == ABSENT and c.depth == 0
    with pytest.raises(ValueError, match="at least 2"):
        ap_search(C, 1, F(1, 3), 2)


def test_translate_examples():
    assert translate_search(C, [0], 5).verdict == PRESENT
    c = translate_search(C, [0, 1], 5)
    assert c.witness == 0 and c.in_set
    # C - C = [-1, 1], so the pair {0, 1/2} is present at every depth:
    # x in [2/9, 5/18] puts x and x + 1/2 in the depth-2 cover
    for n in range(7):
        c = translate_search(C, [0, F(1, 2)], n)
        assert c.verdict == PRESENT and oracle_present(F(1, 3), [0, F(1, 2)], n)
    assert translate_search(C, [0, F(1, 2)], 2).witness_set.intervals[0] == (F(2, 9), F(5, 18))


@given(st.sampled_from([F(1, 3), F(1, 5), F(1, 2)]), st.integers(2, 4),
       st.fractions(min_value=F(1, 50), max_value=F(1, 2), max_denominator=60), st.integers(0, 4))
def test_ap_search_matches_bruteforce(eps, m, delta, n):
    d = SetDescriptor.middle(eps)
    c = ap_search(d, m, delta, n)
    truth = oracle_present(eps, [k * delta for k in range(m)], n)
    if c.absent:
        assert not oracle_present(eps, [k * delta for k in range(m)], c.depth)
        assert not truth
    else:
        assert truth
        cover = refine(d, n)
        assert all(c.witness + k * delta in cover for k in range(m))
        if c.in_set:
            ends = set(cover.endpoints())
            assert all(c.witness + k * delta in ends for k in range(m))


@given(st.integers(2, 4), st.fractions(min_value=F(1, 50), max_value=F(1, 2), max_denominator=60), st.integers(0, 4))
def test_absence_persists_deeper(m, delta, n):
    c = ap_search(M5, m, delta, n)
    if c.absent:
        assert ap_search(M5, m, delta, n + 1).absent


def test_homothety_examples():
    g = homothety_search(C, [0, 1, 2], [F(1, 6), F(1, 3), F(2, 3)], 6)
    by = dict(zip(g.values, g.certificates))
    assert by[F(1, 3)].verdict == PRESENT and by[F(1, 3)].witness == 0 and by[F(1, 3)].in_set
    assert by[F(2, 3)].verdict == ABSENT  # diam 4/3 exceeds the hull
    assert g.best == F(1, 3) or by[F(1, 6)].present
    with pytest.raises(ValueError):
        homothety_search(C, [0, 1], [], 3)


def test_homothety_presence_shrinks_with_depth():
    lams = [F(k, 27) for k in range(1, 14)]
    shallow = set(homothety_search(C, [0, 1, 3], lams, 2).present_values)
    deep = set(homothety_search(C, [0, 1, 3], lams, 3).present_values)
    assert deep <= shallow


def test_longest_ap_lower_and_pigeonhole():
    r = longest_ap(C, 4)
    assert r.length >= 4 and r.certified_length >= 4
    assert r.length <= 1 / r.delta + 1
    assert ap_extent(C, F(1, 3), 4) >= 4


def test_endpoint_ap():
    assert endpoint_ap([0, F(1, 3), F(2, 3), 1, F(5, 3)])[0] == 4


def test_gap_lemma_examples():
    r = gap_lemma_check(M5, M5.translate(F(2, 5)), 10)
    assert r.verdict == HOLDS and r.certificate.depth <= 10 and r.certificate.present
    r = gap_lemma_check(C, C.translate(F(1, 7)), 6)
    assert r.verdict == FAILS and r.reason == "product not > 1"
    inside = M5.affine(F(1, 10), F(9, 20))
    r = gap_lemma_check(M5, inside, 6)
    assert r.verdict == FAILS and r.reason == "lies in a gap"


@given(st.fractions(min_value=F(-9, 10), max_value=F(9, 10), max_denominator=40))
def test_gap_lemma_never_alarms(t):
    r = gap_lemma_check(M5, M5.translate(t), 8)
    assert r.verdict != ALARM


def test_general_reduces_to_translate_and_ap():
    pts = [0, F(2, 9), F(2, 3)]
    maps = [AffineMap(1, p) for p in pts]
    for n in (2, 4):
        a = translate_search(C, pts, n)
        b = pattern_search_general(C, maps, affine_family_window(maps, C.hull).intervals[0], n)
        assert (a.verdict, a.depth, a.witness_set) == (b.verdict, b.depth, b.witness_set)
    maps = [AffineMap(1, k * F(2, 9)) for k in range(3)]
    a = ap_search(C, 3, F(2, 9), 3)
    b = pattern_search_general(C, maps, affine_family_window(maps, C.hull).intervals[0], 3)
    assert (a.verdict, a.witness_set) == (b.verdict, b.witness_set)


def test_general_window_hypothesis():
    with pytest.raises(ValueError, match="hypothesis violated"):
        pattern_search_general(C, [AffineMap(1, 0)], (0, 2), 3)


def test_quadratic_setup_examples():
    s = quadratic_pattern_setup([0], [0], 4)
    assert s.window[0] == 2 and s.c1 == 4
    assert abs(float(s.window[1]) - 5 ** 0.5) < 1e-20 + 1e-12 and s.window[1] <= F(22360679775, 10**10)
    assert float(s.c2) >= 2 * 5 ** 0.5 - 1e-12
    with pytest.raises(ValueError, match="rejected"):
        quadratic_pattern_setup([0], [5], 4)


@pytest.mark.parametrize("x,ok", [(F(1, 10), True), (F(1, 2), False)])
def test_quadratic_symmetric_pair(x, ok):
    import math
    holds = math.sqrt(4) + float(x) < math.sqrt(5) - float(x)
    assert holds == ok
    if ok:
        s = quadratic_pattern_setup([-x, x], [0, 0], 4)
        assert s.window[0] < s.window[1]
    else:
        with pytest.raises(ValueError, match="rejected"):
            quadratic_pattern_setup([-x, x], [0, 0], 4)


def test_quadratic_search_gives_a_verdict():
    s = quadratic_pattern_setup([F(-1, 10), F(1, 10)], [0, 0], 4)
    target = M5.affine(1, 4)
    c = pattern_search_general(target, s.maps, s.window, 6)
    assert c.verdict in (CANDIDATE, ABSENT)


def test_sumset_examples():
    for n in range(9):
        assert sumset_cover([C, C], n) == IntervalUnion.interval(0, 2)
    pt = SetDescriptor.explicit((F(1, 2), F(1, 2)))
    assert sumset_cover([pt, M5], 2) == refine(M5, 2).translate(F(1, 2))
    assert sumset_cover([M5, M5], 3).issubset(sumset_cover([M5, M5], 2))


def test_certificate_json_roundtrip():
    for c in (ap_search(C, 4, F(1, 3), 3), ap_search(C, 3, F(1, 2), 1)):
        assert Certificate.from_json(c.to_json()) == c
