"""Grid construction of a large subset of a winning set, and brute-force checks
of the counting lemmas behind it.

Balls live on two lattices per level ``n``: the fine grid ``E_n`` with
centers ``x0 + (rho_n/2) z`` and the sparse grid ``D_n`` with centers
``x0 + 3 rho_n z``, all of radius ``rho_n = beta^n rho``.  Internally every
ball is stored by its fine-grid index, so the sparse ball ``z`` is the fine
ball ``6z``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
import numpy as np
from mpmath import iv

from .bounds import constant_condition
from .sets import IntervalUnion, as_fraction, fraction_str

E, D = "E", "D"


@dataclass(frozen=True)
class ConstructionParams:
    alpha: Fraction
    beta: Fraction
    c: Fraction
    rho: Fraction
    x0: Fraction = Fraction(0)
    N: int = 2
    gamma: Fraction = Fraction(1, 72)

    def __post_init__(self):
        for name in ("alpha", "beta", "c", "rho", "x0", "gamma"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if not 0 < self.beta <= Fraction(1, 2):
            raise ValueError("need 0 < beta <= 1/2 so every fine ball has a containing parent")
        if self.alpha <= 0 or self.rho <= 0 or self.c < 0:
            raise ValueError("need alpha > 0, rho > 0, c >= 0")
        if not 0 < self.gamma < 1:
            raise ValueError("need 0 < gamma < 1")
        if self.N < 1:
            raise ValueError("need N >= 1")

    def radius(self, n: int) -> Fraction:
        return self.beta**n * self.rho

    @property
    def M(self) -> int:
        """Children kept per node: ``ceil(beta^-N / 6)``."""
        q = self.beta ** (-self.N) / 6
        return math.ceil(q)

    @property
    def canonical_N(self) -> int:
        return math.floor(1 / (720 * self.alpha))

    def to_json(self) -> dict:
        return {k: fraction_str(getattr(self, k)) for k in ("alpha", "beta", "c", "rho", "x0", "gamma")} | {"N": self.N}


@dataclass(frozen=True, order=True)
class GridBall:
    """Fine-grid ball ``z`` at ``level``; ``grid`` records which lattice it was named on."""

    level: int
    z: int
    grid: str = field(default=E, compare=False)

    def center(self, p: ConstructionParams) -> Fraction:
        return p.x0 + p.radius(self.level) / 2 * self.z

    def radius(self, p: ConstructionParams) -> Fraction:
        return p.radius(self.level)

    def interval(self, p: ConstructionParams, shrink: int = 1) -> tuple:
        c, r = self.center(p), self.radius(p) / shrink
        return c - r, c + r

    @property
    def is_sparse(self) -> bool:
        return self.z % 6 == 0

    @property
    def sparse_index(self) -> int:
        if self.z % 6:
            raise ValueError("not a sparse-grid ball")
        return self.z // 6

    def to_json(self) -> list:
        return [self.level, self.grid, self.sparse_index if self.grid == D else self.z]


def grid_ball(level: int, grid: str, z: int, params: ConstructionParams | None = None) -> GridBall:
    """Ball ``z`` of the ``grid`` lattice at ``level`` (stored by fine index)."""
    if level < 0:
        raise ValueError("level must be nonnegative")
    if grid == E:
        return GridBall(level, z, E)
    if grid == D:
        return GridBall(level, 6 * z, D)
    raise ValueError("grid must be 'E' or 'D'")


def _contains(outer: tuple, inner: tuple) -> bool:
    return outer[0] <= inner[0] and inner[1] <= outer[1]


def project(b: GridBall, p: ConstructionParams) -> GridBall:
    """Parent of ``b`` one level up.

    The containing fine ball whose center is closest to ``b``'s (smaller
    center on ties), except at levels that are multiples of ``N``, where a
    containing sparse ball takes precedence.
    """
    n = b.level - 1
    if n < 0:
        raise ValueError("level-0 balls have no parent")
    # In units of the parent radius the child's center sits at beta*z/2 and
    # has radius beta, so parent selection depends on beta*z alone.
    q = p.beta * b.z
    if n % p.N == 0:
        w = round(q / 6)
        for cand in (w - 1, w, w + 1):
            if abs(6 * cand - q) / 2 + p.beta <= 1:
                return GridBall(n, 6 * cand, D)
    w = math.floor(q)
    if q - w > Fraction(1, 2):
        w += 1
    if abs(w - q) / 2 + p.beta > 1:
        raise AssertionError("nearest parent does not contain the ball")
    return GridBall(n, w, E)


def ancestor(b: GridBall, level: int, p: ConstructionParams) -> GridBall:
    """Iterated projection down to ``level``."""
    while b.level > level:
        b = project(b, p)
    return b


def ancestors(b: GridBall, p: ConstructionParams) -> list:
    """``[pi_0(b), pi_1(b), ..., b]``."""
    chain = [b]
    while chain[-1].level > 0:
        chain.append(project(chain[-1], p))
    return chain[::-1]


# ---------------------------------------------------------------------------
# potential
# ---------------------------------------------------------------------------

Oracle = Callable[[GridBall], Sequence]


def no_erasure_oracle(ball: GridBall) -> list:
    return []


def fixed_oracle(answers: dict) -> Oracle:
    """Answers looked up by ``(level, fine index)``; everything else passes."""
    return lambda ball: list(answers.get((ball.level, ball.z), []))


def strategy_oracle(strategy, p: ConstructionParams) -> Oracle:
    """Alice's answer to ``ball`` when Bob is taken to have played its ancestor chain."""
    from .game import BobMove, Turn

    memo: dict = {}

    def answer(ball: GridBall):
        key = (ball.level, ball.z)
        if key not in memo:
            chain = ancestors(ball, p)
            history = []
            for b in chain[:-1]:
                history.append(Turn(BobMove(b.center(p), b.radius(p)), _answer_move(b)))
            memo[key] = strategy(history, BobMove(ball.center(p), ball.radius(p)))
        return memo[key]

    def _answer_move(b):
        answer(b)
        return memo[(b.level, b.z)]

    return lambda ball: list(answer(ball).balls)


class PotentialLedger:
    """Accumulated erasure mass ``phi_j(B)`` from an answer oracle.

    ``phi_j(B)`` sums ``r^c`` over the answers to each ancestor ``pi_n(B)``,
    ``n < j``, that meet ``B``.  Answers are finite collections per turn.
    """

    def __init__(self, params: ConstructionParams, oracle: Oracle | None = None, prec: int = 128):
        self.params = params
        self.oracle = oracle or no_erasure_oracle
        self.prec = prec
        self._answers: dict = {}

    def answers(self, ball: GridBall) -> list:
        key = (ball.level, ball.z)
        if key not in self._answers:
            self._answers[key] = [(as_fraction(h), as_fraction(r)) for h, r in self.oracle(ball)]
        return self._answers[key]

    def contributions(self, ball: GridBall) -> list:
        """Radii of the ancestor answers meeting ``ball``, by ancestor level."""
        p = self.params
        lo, hi = ball.interval(p)
        out = []
        b = ball
        while b.level > 0:
            b = project(b, p)
            for h, r in self.answers(b):
                if h - r <= hi and lo <= h + r:
                    out.append((b.level, r))
        return out

    def phi(self, ball: GridBall):
        """Exact for ``c`` in {0, 1}; otherwise an ``mpmath`` interval."""
        radii = [r for _, r in self.contributions(ball)]
        c = self.params.c
        if c == 0:
            return Fraction(len(radii))
        if c == 1:
            return sum(radii, Fraction(0))
        return _power_sum(radii, c, self.prec)

    def is_good(self, ball: GridBall) -> bool:
        """``phi(B) <= (gamma rho_level)^c``; undecided comparisons count as bad."""
        p = self.params
        thr = p.gamma * ball.radius(p)
        v = self.phi(ball)
        c = p.c
        if c == 0:
            return v <= 1
        if c == 1:
            return v <= thr
        t = _power_sum([thr], c, self.prec)
        return v.b <= t.a


def _power_sum(radii, c: Fraction, prec: int):
    old = iv.prec
    iv.prec = prec
    try:
        cc = iv.mpf(c.numerator) / c.denominator
        s = iv.mpf(0)
        for r in radii:
            s += iv.exp(cc * iv.log(iv.mpf(r.numerator) / r.denominator))
        return s
    finally:
        iv.prec = old


def potential_phi(ball: GridBall, ledger: PotentialLedger):
    return ledger.phi(ball)


# ---------------------------------------------------------------------------
# children
# ---------------------------------------------------------------------------


def children(B: GridBall, p: ConstructionParams) -> list:
    """Sparse balls ``N`` levels down inside the half-size ball ``B/2``, left to right."""
    if not B.is_sparse:
        raise ValueError("children are defined for sparse-grid balls")
    n = B.level + p.N
    half = B.interval(p, shrink=2)
    r = p.radius(n)
    step = 3 * r
    lo = math.ceil((half[0] + r - p.x0) / step)
    hi = math.floor((half[1] - r - p.x0) / step)
    out = [GridBall(n, 6 * w, D) for w in range(lo, hi + 1)]
    assert all(_contains(half, b.interval(p)) for b in out)
    return out


def child_count_formula(beta, N: int) -> int:
    """Closed-form child count when ``beta^-N`` is an integer: ``2 floor((beta^-N/2 - 1)/3) + 1``."""
    inv = as_fraction(beta) ** (-N)
    if inv.denominator != 1:
        raise ValueError("formula assumes beta^-N is an integer")
    return 2 * math.floor((inv / 2 - 1) / 3) + 1


def child_lower_bound(beta, N: int) -> int:
    """``ceil(7/24 * beta^-N)``."""
    return math.ceil(Fraction(7, 24) * as_fraction(beta) ** (-N))


def bad_children_bound(beta, N: int) -> int:
    """``floor(beta^-N / 12)``."""
    return math.floor(as_fraction(beta) ** (-N) / 12)


def filter_good(kids: Sequence[GridBall], ledger: PotentialLedger) -> list:
    return [b for b in kids if ledger.is_good(b)]


# ---------------------------------------------------------------------------
# nesting lemma
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NestingResult:
    status: str  # "witness", "counterexample" or "skipped"
    z: int
    z2: int
    k: int
    N: int
    beta: Fraction
    witness: int | None = None
    I1: tuple | None = None
    I2: tuple | None = None

    def to_json(self) -> dict:
        f = lambda t: None if t is None else [fraction_str(t[0]), fraction_str(t[1])]
        return {"status": self.status, "z": self.z, "z2": self.z2, "k": self.k, "N": self.N,
                "beta": fraction_str(self.beta), "witness": self.witness,
                "I1": f(self.I1), "I2": f(self.I2)}


def nesting_admissible(z: int, z2: int, N: int, beta) -> bool:
    """``1/2 - beta^N >= 3 |beta^N z2 - z|``: child ``z2`` sits inside half of ``z``."""
    b = as_fraction(beta) ** N
    return Fraction(1, 2) - b >= 3 * abs(b * z2 - z)


def nesting_intervals(z: int, z2: int, k: int, N: int, beta) -> tuple:
    beta = as_fraction(beta)
    s = beta ** (N - k)
    r1 = 1 - 2 * s
    c1 = 6 * z2 * s
    r2 = 2 * (beta ** (-k) - 1)
    c2 = 6 * z * beta ** (-k)
    return (c1 - r1, c1 + r1), (c2 - r2, c2 + r2)


def verify_nesting_lemma(z: int, z2: int, k: int, N: int, beta) -> NestingResult:
    """Find an integer fine index ``z'`` at level ``k`` with ``B' ⊆ B`` and ``B'' ⊆ B'/2``."""
    beta = as_fraction(beta)
    if not (1 <= k <= N - 1) or beta > Fraction(1, 4) or not nesting_admissible(z, z2, N, beta):
        return NestingResult("skipped", z, z2, k, N, beta)
    I1, I2 = nesting_intervals(z, z2, k, N, beta)
    lo, hi = max(I1[0], I2[0]), min(I1[1], I2[1])
    w = math.ceil(lo)
    if w <= hi:
        return NestingResult("witness", z, z2, k, N, beta, w, I1, I2)
    return NestingResult("counterexample", z, z2, k, N, beta, None, I1, I2)


def nesting_sweep(betas=(Fraction(1, 4), Fraction(1, 5)), Ns=(2, 3), zmax: int = 20) -> dict:
    """Every admissible ``(z, z2, k)`` with ``|z| <= zmax``; counts and any counterexamples."""
    checked, bad, len_fail = 0, [], []
    for beta in betas:
        beta = as_fraction(beta)
        for N in Ns:
            inv = beta ** (-N)
            for z in range(-zmax, zmax + 1):
                spread = inv * (Fraction(1, 2) - beta**N) / 3
                for z2 in range(math.floor(inv * z - spread) - 1, math.ceil(inv * z + spread) + 2):
                    if not nesting_admissible(z, z2, N, beta):
                        continue
                    for k in range(1, N):
                        res = verify_nesting_lemma(z, z2, k, N, beta)
                        checked += 1
                        if res.status != "witness":
                            bad.append(res)
                        I1, I2 = res.I1, res.I2
                        if I1[1] - I1[0] < 1 or I2[1] - I2[0] < 12:
                            len_fail.append(res)
    return {"checked": checked, "counterexamples": bad, "length_failures": len_fail}


# ---------------------------------------------------------------------------
# projection property
# ---------------------------------------------------------------------------


def fine_balls_inside(outer: tuple, level: int, p: ConstructionParams) -> list:
    """All fine balls at ``level`` contained in the closed interval ``outer``."""
    r = p.radius(level)
    step = r / 2
    lo = math.ceil((outer[0] + r - p.x0) / step)
    hi = math.floor((outer[1] - r - p.x0) / step)
    return [GridBall(level, w, E) for w in range(lo, hi + 1)]


def projection_sweep(p: ConstructionParams, zmax: int = 20, js=(0, 1), extra_levels: int = 1) -> dict:
    """Check ``pi_{jN}(B') = B`` for every fine ``B' ⊆ B/2`` up to ``N + extra_levels`` levels below
    each sparse ``B`` at level ``jN``, and ``b ⊆ project(b)`` along the way."""
    checked, failures, contain_fail = 0, [], []
    for j in js:
        base = j * p.N
        for z in range(-zmax, zmax + 1):
            B = GridBall(base, 6 * z, D)
            half = B.interval(p, shrink=2)
            landing: dict = {B: B}

            def land(ball):
                if ball.level == base:
                    return ball
                if ball not in landing:
                    parent = project(ball, p)
                    if not _contains(parent.interval(p), ball.interval(p)):
                        contain_fail.append(ball)
                    landing[ball] = land(parent)
                return landing[ball]

            for n in range(base + 1, base + p.N + extra_levels + 1):
                for b in fine_balls_inside(half, n, p):
                    checked += 1
                    top = land(b)
                    if top != B:
                        failures.append((B, b, top))
    return {"checked": checked, "failures": failures, "containment_failures": contain_fail}


# ---------------------------------------------------------------------------
# fractal
# ---------------------------------------------------------------------------


class ShortfallError(ValueError):
    """A node has fewer good children than the construction needs."""

    def __init__(self, node: GridBall, good: int, needed: int):
        super().__init__(f"node level={node.level} z={node.z}: {good} good children, need {needed} "
                         "(the good-children lower bound fails at these constants)")
        self.node, self.good, self.needed = node, good, needed


@dataclass
class FractalTree:
    params: ConstructionParams
    levels: list  # list of list of (GridBall, parent index)
    records: list  # per node: children count, filtered count, good count

    def cover(self, j: int) -> IntervalUnion:
        return IntervalUnion([b.interval(self.params) for b, _ in self.levels[j]])

    def counts(self) -> list:
        return [len(level) for level in self.levels]

    def to_json(self) -> dict:
        return {"params": self.params.to_json(),
                "levels": [[{"parent": par, "z": b.sparse_index, "level": b.level} for b, par in lvl]
                           for lvl in self.levels],
                "records": self.records}

    def dump_rows(self) -> list:
        """``(tree level, parent index, sparse index, verdict)`` rows."""
        rows = []
        for j, lvl in enumerate(self.levels):
            for b, par in lvl:
                rows.append((j, par, b.sparse_index, "selected"))
        return rows


def build_fractal(params: ConstructionParams, oracle: Oracle | None = None, J: int = 3,
                  ledger: PotentialLedger | None = None) -> FractalTree:
    """Keep ``M`` good children (leftmost first) of every node for ``J`` rounds."""
    ledger = ledger or PotentialLedger(params, oracle)
    root = GridBall(0, 0, D)
    levels = [[(root, -1)]]
    records = []
    M = params.M
    for j in range(J):
        nxt = []
        for idx, (B, _) in enumerate(levels[-1]):
            kids = children(B, params)
            good = filter_good(kids, ledger)
            records.append({"level": j, "node": idx, "children": len(kids),
                            "filtered": len(kids) - len(good), "good": len(good)})
            if len(good) < M:
                raise ShortfallError(B, len(good), M)
            nxt.extend((b, idx) for b in good[:M])
        levels.append(nxt)
    return FractalTree(params, levels, records)


@dataclass(frozen=True)
class DimensionEstimate:
    slope: float
    scales: tuple
    counts: tuple
    similarity_bound: float
    game_bound: float | None

    def to_json(self) -> dict:
        return {"slope": self.slope, "scales": [float(s) for s in self.scales],
                "counts": list(self.counts), "similarity_bound": self.similarity_bound,
                "game_bound": self.game_bound}


def box_counts(U: IntervalUnion, scales: Sequence) -> list:
    """Number of mesh intervals ``[k s, (k+1) s)`` meeting ``U``, per scale ``s``."""
    out = []
    for s in scales:
        boxes = set()
        for a, b in U:
            boxes.update(range(math.floor(a / s), math.floor(b / s) + 1))
        out.append(len(boxes))
    return out


def dimension_estimate(tree: FractalTree) -> DimensionEstimate:
    """Least-squares slope of log(box count) against log(1/scale) on the deepest cover.

    Scales are the node diameters ``2 rho_{jN}`` for tree levels ``j >= 1``.
    """
    p = tree.params
    J = len(tree.levels) - 1
    if J < 2:
        raise ValueError("need at least two tree levels")
    U = tree.cover(J)
    scales = [2 * p.radius(j * p.N) for j in range(1, J + 1)]
    counts = box_counts(U, scales)
    x = np.array([-math.log(float(s)) for s in scales])
    y = np.array([math.log(c) for c in counts])
    slope = float(np.polyfit(x, y, 1)[0]) if len(set(counts)) > 1 else 0.0
    sim = math.log(p.M) / (p.N * abs(math.log(float(p.beta))))
    game = None
    if 0 < p.c < 1 and constant_condition_holds(p.alpha, p.beta, p.c):
        game = 1 - 1440 * float(p.alpha) * math.log(6) / abs(math.log(float(p.beta)))
    return DimensionEstimate(slope, tuple(scales), tuple(counts), sim, game)


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------


def _ivq(q):
    q = as_fraction(q)
    return iv.mpf(q.numerator) / q.denominator


def constant_condition_holds(alpha, beta, c) -> bool:
    """``alpha^c <= (1 - beta^(1-c)) / 720^2``; undecided counts as not holding."""
    return constant_condition(alpha, beta, c) is True


def chain_check(children_count: int, filtered: int, beta, N: int) -> dict:
    """Per-instance counting chain: children minus filtered against ``ceil(beta^-N/6)``."""
    inv = as_fraction(beta) ** (-N)
    need = math.ceil(inv / 6)
    return {
        "children": children_count,
        "children_bound": child_lower_bound(beta, N),
        "children_ok": children_count >= child_lower_bound(beta, N),
        "filtered": filtered,
        "filtered_bound": bad_children_bound(beta, N),
        "filtered_ok": filtered <= bad_children_bound(beta, N),
        "good": children_count - filtered,
        "needed": need,
        "chain_ok": children_count - filtered >= need,
    }


def constants_ledger(alpha, beta, c, gamma=Fraction(1, 72), prec: int = 128) -> dict:
    """Check the three inequalities that bound the filtered children by ``beta^-N / 12``.

    With ``N = floor(1/(720 alpha))``:
    (1) ``5 N alpha <= 1/144``;
    (2) ``5 alpha^c gamma^-c sum_{k>=0} beta^(k(1-c)) <= 1/144``;
    (3) ``beta^(N(1-c)) <= 1/72``.
    Each entry is True, False or None (undecided at ``prec``).
    """
    alpha, beta, c, gamma = (as_fraction(v) for v in (alpha, beta, c, gamma))
    N = math.floor(1 / (720 * alpha))
    out = {"N": N, "hypothesis": constant_condition(alpha, beta, c, prec), "N_at_least_2": N >= 2}
    out["item1"] = 5 * N * alpha <= Fraction(1, 144)
    old = iv.prec
    iv.prec = prec
    try:
        a, b, cc, g = _ivq(alpha), _ivq(beta), _ivq(c), _ivq(gamma)
        series = 1 / (1 - iv.exp((1 - cc) * iv.log(b)))
        lhs2 = 5 * iv.exp(cc * iv.log(a)) * iv.exp(-cc * iv.log(g)) * series
        d2 = iv.mpf(1) / 144 - lhs2
        lhs3 = iv.exp(N * (1 - cc) * iv.log(b))
        d3 = iv.mpf(1) / 72 - lhs3
    finally:
        iv.prec = old
    decide = lambda d: True if d.a >= 0 else (False if d.b < 0 else None)
    out["item2"] = decide(d2)
    out["item3"] = decide(d3)
    return out


def hypothesis_alpha(beta, c, shrink=1, digits: int = 30) -> Fraction:
    """A rational ``alpha`` just inside ``alpha^c <= (1 - beta^(1-c))/720^2``, times ``shrink``."""
    beta, c = as_fraction(beta), as_fraction(c)
    with mpmath.workdps(digits + 20):
        b = mpmath.mpf(beta.numerator) / beta.denominator
        cc = mpmath.mpf(c.numerator) / c.denominator
        val = ((1 - b ** (1 - cc)) / 720**2) ** (1 / cc)
        q = Fraction(mpmath.nstr(val * (1 - mpmath.mpf(10) ** (-digits // 2)), digits))
    return q * as_fraction(shrink)
