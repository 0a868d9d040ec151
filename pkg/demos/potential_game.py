"""Alice erases gaps of a Cantor set; Bob zooms in however he likes.

Run:  python3 demos/potential_game.py
"""

from fractions import Fraction

from thickpat import SetDescriptor, alice_cantor_strategy, play
from thickpat.game import bob_gap_seeker, bob_midpoint_zoom, bob_random, combine_intersection, transport_similarity, widen_params, GameParams

M5 = SetDescriptor.middle(Fraction(1, 5))
stop = Fraction(1, 10**5)
alice = alice_cantor_strategy(M5, beta=Fraction(1, 5), resolution=stop)
print("parameters:", alice.params.to_json())

for name, bob in [("zoom to 1/2", bob_midpoint_zoom(Fraction(1, 2))),
                  ("zoom to 0", bob_midpoint_zoom(0)),
                  ("gap seeker", bob_gap_seeker(M5)),
                  ("random", bob_random(11))]:
    tr = play(bob, alice, stop_radius=stop)
    erased = sum(len(t.alice.balls) for t in tr.turns)
    print(f"{name:12s} {len(tr.turns):3d} turns, {erased} erasures -> {tr.outcome}")

# Two translated copies at once: widen to c > 0, then add the budgets.
p = alice.params
wide = widen_params(alice, GameParams(p.alpha, p.beta, Fraction(1, 2), p.rho))
both = combine_intersection([wide, transport_similarity(wide, 1, Fraction(-1, 10))])
tr = play(bob_random(3), both, stop_radius=stop)
print(f"intersection of two translates: alpha {both.params.alpha}, outcome {tr.outcome}, violation {tr.violation}")
