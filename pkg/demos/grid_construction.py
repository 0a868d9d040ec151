"""Grow a large subset of a winning set on nested grids and measure its dimension.

Run:  python3 demos/grid_construction.py
"""

import math
from fractions import Fraction

from thickpat import ConstructionParams, build_fractal, dimension_estimate
from thickpat.appendix import children, child_lower_bound, GridBall, D

for beta, N in ((Fraction(1, 4), 2), (Fraction(1, 4), 3), (Fraction(1, 5), 2), (Fraction(1, 5), 3)):
    p = ConstructionParams(Fraction(1, 10**9), beta, Fraction(1, 2), 1, N=N)
    n = len(children(GridBall(0, 0, D), p))
    print(f"beta={beta} N={N}: {n} children per node (7/24 bound {child_lower_bound(beta, N)}), keep {p.M}")

p = ConstructionParams(Fraction(1, 10**9), Fraction(1, 4), Fraction(1, 2), 1, N=2)
tree = build_fractal(p, J=5)
est = dimension_estimate(tree)
print("nodes per level:", tree.counts())
print("box counts:", est.counts)
print(f"slope {est.slope:.4f} vs log 3/log 16 = {math.log(3) / math.log(16):.4f}")
