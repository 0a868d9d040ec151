from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def explicit_gaps(draw, max_gaps=12, den=60, dup_lengths=False):
    """Hull [0, 1] with up to ``max_gaps`` disjoint open gaps on a 1/den grid."""
    k = draw(st.integers(0, max_gaps))
    cuts = sorted(draw(st.lists(st.integers(1, den - 1), min_size=2 * k, max_size=2 * k, unique=True)))
    gaps = [(Fraction(cuts[2 * i], den), Fraction(cuts[2 * i + 1], den)) for i in range(k)]
    from thickpat.sets import SetDescriptor
    return SetDescriptor.explicit((0, 1), gaps)


def middle_cover(eps, n):
    """Independent depth-n cover of the middle-eps set by explicit recursion."""
    eps = Fraction(eps)
    pieces = [(Fraction(0), Fraction(1))]
    for _ in range(n):
        nxt = []
        for a, b in pieces:
            side = (b - a) * (1 - eps) / 2
            nxt += [(a, a + side), (b - side, b)]
        pieces = nxt
    return pieces


def gap_oracle(hull, gaps):
    """Thickness of an explicit gap structure straight from the removal definition.

    Each gap's flank runs from the gap out to the nearest gap removed before it
    (longer, or equally long and further left), or to the hull.
    """
    lo, hi = hull
    order = sorted(gaps, key=lambda g: (-(g[1] - g[0]), g[0]))
    rank = {g: i for i, g in enumerate(order)}
    best = None
    for g in gaps:
        earlier = [h for h in gaps if rank[h] < rank[g]]
        left = max([h[1] for h in earlier if h[1] <= g[0]], default=lo)
        right = min([h[0] for h in earlier if h[0] >= g[1]], default=hi)
        v = min(g[0] - left, right - g[1]) / (g[1] - g[0])
        best = v if best is None else min(best, v)
    return best


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
