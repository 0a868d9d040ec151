from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from thickpat.game import (ERASED, IN_TARGET, UNDETERMINED, AliceMove, BobMove, GameParams, GameTranscript, Turn,
                           alice_cantor_strategy, bob_gap_seeker, bob_midpoint_zoom, bob_random, bob_scripted,
                           combine_intersection, conjugate_transcript, erased_twice, parse_script, play, revalidate,
                           transport_bilip, transport_similarity, validate_alice_move, validate_bob_move,
                           widen_params)
from thickpat.sets import AffineMap, SetDescriptor, piecewise_linear

C = SetDescriptor.middle(F(1, 3))
M5 = SetDescriptor.middle(F(1, 5))
P = GameParams(2, F(1, 2), 0, F(1, 4))


def cantor_C():
    return alice_cantor_strategy(C, params=P, depth=10)


def test_bob_rules():
    assert validate_bob_move([], P, BobMove(F(1, 2), F(1, 4)))
    assert validate_bob_move([], P, BobMove(F(1, 2), F(1, 8))).rule == "initial radius"
    h = [Turn(BobMove(F(1, 2), F(1, 4)), AliceMove())]
    assert validate_bob_move(h, P, BobMove(F(1, 2), F(1, 16))).rule == "radius decay"
    assert validate_bob_move(h, P, BobMove(F(3, 4), F(1, 8))).rule == "nesting"
    assert validate_bob_move(h, P, BobMove(F(5, 8), F(1, 8)))


def test_alice_rules():
    bob = BobMove(F(1, 2), F(1, 4))
    q = GameParams(F(1, 2), F(1, 2), F(1, 2), F(1, 4))
    budget = q.alpha * bob.radius
    # two balls of radius budget/4: sqrt sum equals sqrt(budget) exactly
    assert validate_alice_move([], q, bob, AliceMove(((0, budget / 4), (1, budget / 4))))
    assert validate_alice_move([], q, bob, AliceMove(((0, budget ** 2 / 4), (1, budget ** 2 / 4))))
    assert validate_alice_move([], q, bob, AliceMove(((0, budget / 3), (1, budget / 3)))).rule == "budget"
    assert validate_alice_move([], P, bob, AliceMove(((0, F(1, 100)), (1, F(1, 100))))).rule == "single ball"
    assert validate_alice_move([], P, bob, AliceMove(((0, F(1, 2)),)))
    assert not validate_alice_move([], P, bob, AliceMove(((0, F(3, 5)),)))
    assert validate_alice_move([], P, bob, AliceMove())


def test_cantor_strategy_examples():
    s = cantor_C()
    b1 = BobMove(F(1, 2), F(1, 4))
    assert s([], b1).is_pass
    h = [Turn(b1, AliceMove())]
    assert s(h, BobMove(F(1, 2), F(1, 8))).balls == ((F(1, 2), F(1, 6)),)


def test_cantor_waits_for_the_flank_condition():
    s = cantor_C()
    tr = play(bob_midpoint_zoom(F(1, 6)), s, stop_radius=F(1, 40))
    firsts = [(t.bob.radius, t.alice.balls) for t in tr.turns]
    assert all(not balls for r, balls in firsts if 2 * r > F(1, 9))
    hit = next((r, balls) for r, balls in firsts if balls)
    assert hit == (F(1, 32), ((F(1, 6), F(1, 18)),))
    assert 2 * hit[0] <= F(1, 9) < 4 * hit[0]


def test_cantor_needs_normalized_descriptor():
    with pytest.raises(ValueError):
        alice_cantor_strategy(C.affine(2, 0), beta=F(1, 2))


def test_default_parameters():
    s = alice_cantor_strategy(M5, beta=F(1, 5))
    assert s.params == GameParams(F(5, 2), F(1, 5), 0, F(1, 10))


def test_play_examples():
    s = cantor_C()
    assert play(bob_midpoint_zoom(F(1, 2)), s, stop_radius=F(1, 10**4)).outcome == ERASED
    assert play(bob_midpoint_zoom(0), s, stop_radius=F(1, 10**4)).outcome == IN_TARGET
    bad = bob_scripted([BobMove(F(1, 2), F(1, 4)), BobMove(F(1, 2), F(1, 16))])
    tr = play(bad, s)
    assert tr.violation["rule"] == "radius decay" and tr.violation["who"] == "bob"
    assert any("not checked" in n for n in tr.notes)


def test_gap_seeker_ends_erased():
    s = alice_cantor_strategy(M5, beta=F(1, 5), resolution=F(1, 10**5))
    tr = play(bob_gap_seeker(M5), s, stop_radius=F(1, 10**5))
    assert tr.violation is None and tr.outcome == ERASED


@settings(max_examples=40)
@given(st.integers(0, 10**6), st.sampled_from([F(1, 3), F(1, 5), F(1, 2)]))
def test_winning_property_random_bobs(seed, eps):
    d = SetDescriptor.middle(eps)
    beta = F(1, 5) if eps != F(1, 2) else F(1, 2)
    stop = F(1, 10**4)
    s = alice_cantor_strategy(d, beta=beta, resolution=stop)
    tr = play(bob_random(seed), s, stop_radius=stop)
    assert tr.violation is None
    assert tr.outcome in (ERASED, IN_TARGET)
    assert not erased_twice(tr)
    assert revalidate(tr) == []


def test_widen_identity_and_c_lift():
    s = cantor_C()
    assert widen_params(s, P) is s
    lifted = GameParams(P.alpha, P.beta, F(1, 2), P.rho)
    w = widen_params(s, lifted)
    for seed in range(20):
        tr = play(bob_random(seed), w, stop_radius=F(1, 10**3))
        assert tr.violation is None and revalidate(tr, lifted) == []
    with pytest.raises(ValueError):
        widen_params(s, GameParams(1, P.beta, 0, P.rho))


def test_widen_doubled_alpha_replay():
    s = cantor_C()
    tr = play(bob_midpoint_zoom(F(1, 2)), s, stop_radius=F(1, 10**3))
    doubled = GameParams(2 * P.alpha, P.beta, P.c, P.rho)
    assert revalidate(tr, doubled) == []
    for t in tr.turns:
        for _, r in t.alice.balls:
            assert doubled.alpha * t.bob.radius - r >= 2 * (P.alpha * t.bob.radius - r) - P.alpha * t.bob.radius


def _mapped_moves(tr, lam, t):
    return [BobMove(lam * u.bob.center + t, abs(lam) * u.bob.radius) for u in tr.turns]


@pytest.mark.parametrize("lam,t", [(F(2), F(1)), (F(-1, 3), F(1, 2)), (F(1, 7), F(-3))])
def test_similarity_conjugation_bit_identical(lam, t):
    s = cantor_C()
    moved = transport_similarity(s, lam, t)
    assert moved.params == GameParams(P.alpha, P.beta, P.c, abs(lam) * P.rho)
    for seed in range(15):
        tr = play(bob_random(seed), s, stop_radius=F(1, 10**3))
        tr2 = play(bob_scripted(_mapped_moves(tr, lam, t)), moved, stop_radius=abs(lam) * F(1, 10**3),
                   targets=moved.targets if lam > 0 else [])
        conj = conjugate_transcript(tr, lam, t)
        assert [u.to_json() for u in tr2.turns] == [u.to_json() for u in conj.turns]
        assert revalidate(tr2) == []
        if lam > 0:
            assert tr2.outcome == tr.outcome


def test_similarity_identity_and_zero():
    s = cantor_C()
    assert transport_similarity(s, 1, 0) is s
    with pytest.raises(ValueError):
        transport_similarity(s, 0, 1)


def test_bilip_transport():
    s = cantor_C()
    assert transport_bilip(s, AffineMap(1, 0)) is s
    aff = transport_bilip(s, AffineMap(3, 1))
    assert aff.params == GameParams(P.alpha, P.beta, 0, 3 * P.rho)
    f = piecewise_linear([-1, F(1, 2), 2], [1, 2])
    with pytest.raises(ValueError):
        transport_bilip(s, f)  # beta 1/2 doubles to 1, outside (0, 1)
    base = alice_cantor_strategy(M5, beta=F(1, 5))
    g = transport_bilip(base, f)
    assert g.params == GameParams(5, F(2, 5), 0, F(1, 5))
    for seed in range(100):
        tr = play(bob_random(seed, lo=0, hi=F(3, 2)), g, stop_radius=F(1, 10**3))
        assert tr.violation is None
    with pytest.raises(ValueError):
        transport_bilip(widen_params(s, GameParams(P.alpha, P.beta, 1, P.rho)), f)


def test_bilip_affine_matches_similarity():
    s = cantor_C()
    a = transport_bilip(s, AffineMap(3, 1))
    b = transport_similarity(s, 3, 1)
    for seed in range(10):
        ta = play(bob_random(seed, lo=1, hi=4), a, stop_radius=F(1, 10**3), targets=[])
        tb = play(bob_random(seed, lo=1, hi=4), b, stop_radius=F(1, 10**3), targets=[])
        assert [u.to_json() for u in ta.turns] == [u.to_json() for u in tb.turns]


def test_combine_rules():
    s = cantor_C()
    assert combine_intersection([s]) is s
    c = F(1, 2)
    w = widen_params(s, GameParams(P.alpha, P.beta, c, P.rho))
    comb = combine_intersection([w, w, w])
    assert comb.params.alpha == 9 * P.alpha  # n^(1/c) a with n = 3, c = 1/2
    with pytest.raises(ValueError):
        combine_intersection([s, s])
    other = widen_params(s, GameParams(P.alpha, F(3, 4), c, P.rho))
    with pytest.raises(ValueError):
        combine_intersection([w, other])


def test_combine_two_translates_legal():
    base = alice_cantor_strategy(M5, beta=F(1, 5), resolution=F(1, 10**3))
    p = base.params
    w = widen_params(base, GameParams(p.alpha, p.beta, F(1, 2), p.rho))
    comb = combine_intersection([w, transport_similarity(w, 1, F(-1, 10))])
    assert comb.params.alpha == 4 * p.alpha
    for seed in range(100):
        tr = play(bob_random(seed), comb, stop_radius=F(1, 10**3))
        assert tr.violation is None and revalidate(tr) == []


def test_transcript_json_roundtrip():
    tr = play(bob_random(3), cantor_C(), stop_radius=F(1, 10**3))
    again = GameTranscript.from_json(tr.to_json())
    assert again == tr and again.to_json() == tr.to_json()


def test_parse_script():
    moves = parse_script("# bob\n1/2 1/4\n1/2, 1/8  # shrink\n\n")
    assert moves == [BobMove(F(1, 2), F(1, 4)), BobMove(F(1, 2), F(1, 8))]
    with pytest.raises(ValueError):
        parse_script("1/2\n")
