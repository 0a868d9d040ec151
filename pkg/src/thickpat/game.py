"""The (alpha, beta, c, rho) potential game on the line.

Bob plays nested closed balls whose radii shrink by at most a factor beta per
turn; Alice answers by erasing balls under a c-power budget.  A play here is
finite: it stops once Bob's radius drops below a stop radius, and the final
ball is classified against the erased region and the target set.

Strategies are callables ``strategy(history, bob_move) -> AliceMove`` with a
``params`` attribute; ``history`` is the list of completed turns as seen by
that strategy.  Wrappers (transports, combinations) keep the moves of the
strategies they wrap in ``AliceMove.parts`` so inner histories can be rebuilt
exactly.
"""

from __future__ import annotations

import bisect
import functools
import math
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
import numpy as np
from mpmath import iv

from .sets import (
    AffineMap,
    IntervalUnion,
    MonotoneSmooth,
    SetDescriptor,
    as_fraction,
    fraction_str,
    gap_records_from_cover,
    refine,
)
from .thickness import INF, thickness

ERASED = "ErasedOutcome"
IN_TARGET = "OutcomeInTargetCover"
UNDETERMINED = "Undetermined"

LEGALITY_PREC = 256


@dataclass(frozen=True)
class GameParams:
    alpha: Fraction
    beta: Fraction
    c: Fraction
    rho: Fraction

    def __post_init__(self):
        for name in ("alpha", "beta", "c", "rho"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.alpha <= 0:
            raise ValueError("need alpha > 0")
        if not 0 < self.beta < 1:
            raise ValueError("need 0 < beta < 1")
        if self.c < 0:
            raise ValueError("need c >= 0")
        if self.rho <= 0:
            raise ValueError("need rho > 0")

    def dominates(self, other: "GameParams") -> bool:
        """Every parameter at least as large as in ``other``."""
        return (self.alpha >= other.alpha and self.beta >= other.beta
                and self.c >= other.c and self.rho >= other.rho)

    def to_json(self) -> dict:
        return {k: fraction_str(getattr(self, k)) for k in ("alpha", "beta", "c", "rho")}

    @classmethod
    def from_json(cls, data: dict) -> "GameParams":
        return cls(*(Fraction(data[k]) for k in ("alpha", "beta", "c", "rho")))


@dataclass(frozen=True)
class BobMove:
    center: Fraction
    radius: Fraction

    def __post_init__(self):
        object.__setattr__(self, "center", as_fraction(self.center))
        object.__setattr__(self, "radius", as_fraction(self.radius))

    @property
    def interval(self) -> tuple:
        return self.center - self.radius, self.center + self.radius

    def to_json(self) -> list:
        return [fraction_str(self.center), fraction_str(self.radius)]

    @classmethod
    def from_json(cls, data) -> "BobMove":
        return cls(Fraction(data[0]), Fraction(data[1]))


@dataclass(frozen=True)
class AliceMove:
    """Erased closed balls ``(center, radius)``; empty means pass."""

    balls: tuple = ()
    parts: tuple | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "balls",
                           tuple((as_fraction(h), as_fraction(r)) for h, r in self.balls))

    @property
    def is_pass(self) -> bool:
        return not self.balls

    def to_json(self) -> list:
        return [[fraction_str(h), fraction_str(r)] for h, r in self.balls]

    @classmethod
    def from_json(cls, data) -> "AliceMove":
        return cls(tuple((Fraction(h), Fraction(r)) for h, r in data))


PASS = AliceMove()


@dataclass(frozen=True)
class Turn:
    bob: BobMove
    alice: AliceMove

    def to_json(self) -> dict:
        return {"bob": self.bob.to_json(), "alice": self.alice.to_json()}

    @classmethod
    def from_json(cls, data) -> "Turn":
        return cls(BobMove.from_json(data["bob"]), AliceMove.from_json(data["alice"]))


@dataclass(frozen=True)
class RuleCheck:
    """``ok`` or the name of the broken rule."""

    ok: bool
    rule: str = ""
    detail: str = ""

    def __bool__(self):
        return self.ok


OK = RuleCheck(True)


# ---------------------------------------------------------------------------
# rules
# ---------------------------------------------------------------------------


def validate_bob_move(history: Sequence[Turn], params: GameParams, move: BobMove) -> RuleCheck:
    if move.radius <= 0:
        return RuleCheck(False, "positive radius", f"radius {move.radius}")
    if not history:
        if move.radius < params.rho:
            return RuleCheck(False, "initial radius", f"{move.radius} < rho = {params.rho}")
        return OK
    prev = history[-1].bob
    if move.radius < params.beta * prev.radius:
        return RuleCheck(False, "radius decay",
                         f"{move.radius} < beta * {prev.radius}")
    if abs(move.center - prev.center) + move.radius > prev.radius:
        return RuleCheck(False, "nesting", "ball leaves the previous ball")
    return OK


def _power_sum_le(radii, bound, c: Fraction, prec: int = LEGALITY_PREC) -> bool:
    """Decide ``sum r^c <= bound^c``; a tie within ``prec`` bits counts as legal."""
    if c == 1:
        return sum(radii) <= bound
    old = iv.prec
    iv.prec = prec
    try:
        cc = iv.mpf(c.numerator) / c.denominator
        lhs = iv.mpf(0)
        for r in radii:
            lhs += iv.exp(cc * iv.log(iv.mpf(r.numerator) / r.denominator))
        rhs = iv.exp(cc * iv.log(iv.mpf(bound.numerator) / bound.denominator))
        diff = rhs - lhs
    finally:
        iv.prec = old
    return not diff.b < 0


def validate_alice_move(history: Sequence[Turn], params: GameParams, bob: BobMove,
                        move: AliceMove) -> RuleCheck:
    """Budget rule for Alice's answer to ``bob``."""
    if move.is_pass:
        return OK
    radii = [r for _, r in move.balls]
    if any(r <= 0 for r in radii):
        return RuleCheck(False, "positive radius")
    bound = params.alpha * bob.radius
    if params.c == 0:
        if len(radii) > 1:
            return RuleCheck(False, "single ball", "c = 0 allows one ball")
        if radii[0] > bound:
            return RuleCheck(False, "budget", f"{radii[0]} > alpha * rho_m = {bound}")
        return OK
    if len(radii) == 1:
        ok = radii[0] <= bound
    else:
        ok = _power_sum_le(radii, bound, params.c)
    if not ok:
        return RuleCheck(False, "budget", "sum rho_i^c > (alpha rho_m)^c")
    return OK


# ---------------------------------------------------------------------------
# transcripts
# ---------------------------------------------------------------------------


@dataclass
class GameTranscript:
    params: GameParams
    stop_radius: Fraction
    turns: list = field(default_factory=list)
    outcome: str | None = None
    final: tuple | None = None
    violation: dict | None = None
    notes: list = field(default_factory=list)

    def erased(self) -> IntervalUnion:
        return IntervalUnion([(h - r, h + r) for t in self.turns for h, r in t.alice.balls])

    def erased_balls(self) -> list:
        return [b for t in self.turns for b in t.alice.balls]

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "stop_radius": fraction_str(self.stop_radius),
            "turns": [t.to_json() for t in self.turns],
            "outcome": self.outcome,
            "final": None if self.final is None else [fraction_str(v) for v in self.final],
            "violation": self.violation,
            "notes": list(self.notes),
        }

    @classmethod
    def from_json(cls, data: dict) -> "GameTranscript":
        return cls(
            params=GameParams.from_json(data["params"]),
            stop_radius=Fraction(data["stop_radius"]),
            turns=[Turn.from_json(t) for t in data["turns"]],
            outcome=data["outcome"],
            final=None if data["final"] is None else tuple(Fraction(v) for v in data["final"]),
            violation=data["violation"],
            notes=list(data["notes"]),
        )

    def __eq__(self, other):
        if not isinstance(other, GameTranscript):
            return NotImplemented
        return self.to_json() == other.to_json()


def revalidate(tr: GameTranscript, params: GameParams | None = None) -> list:
    """Re-run every rule check on a transcript; returns ``(turn, who, RuleCheck)`` failures."""
    params = params or tr.params
    bad = []
    for m, t in enumerate(tr.turns):
        hist = tr.turns[:m]
        chk = validate_bob_move(hist, params, t.bob)
        if not chk:
            bad.append((m, "bob", chk))
        chk = validate_alice_move(hist, params, t.bob, t.alice)
        if not chk:
            bad.append((m, "alice", chk))
    return bad


# ---------------------------------------------------------------------------
# gap tables
# ---------------------------------------------------------------------------


def matched_depth(d: SetDescriptor, size: Fraction, max_depth: int = 24) -> int:
    """Least depth whose components are all shorter than ``size``."""
    if d.is_finite:
        return len(d.gaps)
    # the longest level-n component is the hull scaled by the largest ratio n times
    comp, r = d.length, max(d.ratios)
    for n in range(max_depth + 1):
        if comp < size:
            return n
        comp *= r
    return max_depth


@dataclass(frozen=True)
class GapTable:
    """Gaps of a cover in positional order with their removal rank and smaller flank."""

    lefts: tuple
    rights: tuple
    ranks: np.ndarray
    flanks: tuple

    def meeting(self, a: Fraction, b: Fraction) -> range:
        """Indices of the open gaps meeting ``[a, b]``."""
        return range(bisect.bisect_right(self.rights, a), bisect.bisect_left(self.lefts, b))


@functools.lru_cache(maxsize=32)
def gap_table(d: SetDescriptor, depth: int) -> GapTable:
    records = gap_records_from_cover(refine(d, depth))
    ranked = sorted(range(len(records)), key=lambda i: records[i].G[0])
    return GapTable(
        tuple(records[i].G[0] for i in ranked),
        tuple(records[i].G[1] for i in ranked),
        np.array(ranked, dtype=np.int64),
        tuple(records[i].min_flank for i in ranked),
    )


# ---------------------------------------------------------------------------
# strategies
# ---------------------------------------------------------------------------


class CantorStrategy:
    """Erase the first gap (in removal order) meeting Bob's ball once the ball is
    no longer than that gap's shorter flank, if the budget allows and the gap
    has not been erased before."""

    def __init__(self, d: SetDescriptor, params: GameParams, depth: int):
        if d.hull != (0, 1):
            raise ValueError("descriptor must be normalized to hull [0, 1]")
        self.descriptor = d
        self.params = params
        self.depth = depth
        self.table = gap_table(d, depth)
        self.targets = (d,)

    def __repr__(self):
        return f"CantorStrategy(depth={self.depth}, params={self.params})"

    def __call__(self, history: Sequence[Turn], bob: BobMove) -> AliceMove:
        a, b = bob.interval
        idx = self.table.meeting(a, b)
        if not len(idx):
            return PASS
        i = idx.start + int(np.argmin(self.table.ranks[idx.start:idx.stop]))
        if 2 * bob.radius > self.table.flanks[i]:
            return PASS
        l, r = self.table.lefts[i], self.table.rights[i]
        ball = ((l + r) / 2, (r - l) / 2)
        # one ball: the budget reads r <= alpha * rho_m for every c
        if ball[1] > self.params.alpha * bob.radius:
            return PASS
        for t in history:
            if ball in t.alice.balls:
                return PASS
        return AliceMove((ball,))


def alice_cantor_strategy(d: SetDescriptor, beta=None, params: GameParams | None = None,
                          depth: int | None = None, resolution=None) -> CantorStrategy:
    """Alice's gap-erasing strategy for ``(-inf, 0) ∪ C ∪ (1, inf)``.

    Default parameters are ``alpha = 1/(tau beta)``, ``c = 0``, ``rho = beta/2``.
    Gaps are tabulated to ``depth``, or to the least depth whose components
    are shorter than ``2 beta resolution`` (the smallest ball Bob can reach
    after dropping below ``resolution``); without either, depth 12.
    """
    if d.hull != (0, 1):
        raise ValueError("descriptor must be normalized to hull [0, 1]")
    if params is None:
        if beta is None:
            raise ValueError("need beta or params")
        beta = as_fraction(beta)
        tau = thickness(d)
        if tau.is_infinite or tau.value == 0:
            raise ValueError("need 0 < tau < inf")
        params = GameParams(1 / (tau.value * beta), beta, 0, beta / 2)
    if depth is None:
        if resolution is not None:
            depth = matched_depth(d, 2 * params.beta * as_fraction(resolution))
        else:
            depth = len(d.gaps) if d.is_finite else 12
    return CantorStrategy(d, params, depth)


def _inner_history(history: Sequence[Turn], k: int, fallback: Callable) -> list:
    """History as seen by the ``k``-th wrapped strategy."""
    out = []
    for t in history:
        if t.alice.parts is not None:
            inner = t.alice.parts[k]
        else:
            inner = fallback(t.alice)
        out.append(Turn(t.bob, inner))
    return out


class WidenedStrategy:
    def __init__(self, base, params: GameParams):
        self.base = base
        self.params = params
        self.targets = getattr(base, "targets", ())

    def __call__(self, history, bob):
        inner = _inner_history(history, 0, lambda a: a)
        move = self.base(inner, bob)
        return AliceMove(move.balls, parts=(move,))


def widen_params(strategy, params: GameParams):
    """The same strategy, declared for looser parameters."""
    if not params.dominates(strategy.params):
        raise ValueError("widened parameters must all be >= the original ones")
    if params == strategy.params:
        return strategy
    return WidenedStrategy(strategy, params)


def _map_ball(ball, lam: Fraction, t: Fraction):
    h, r = ball
    return lam * h + t, abs(lam) * r


class SimilarityStrategy:
    def __init__(self, base, lam: Fraction, t: Fraction):
        self.base, self.lam, self.t = base, lam, t
        p = base.params
        self.params = GameParams(p.alpha, p.beta, p.c, abs(lam) * p.rho)
        self.targets = tuple(d.affine(lam, t) for d in getattr(base, "targets", ())) if lam > 0 else ()

    def _pull(self, ball):
        return _map_ball(ball, 1 / self.lam, -self.t / self.lam)

    def __call__(self, history, bob):
        inv = lambda a: AliceMove(tuple(self._pull(b) for b in a.balls))
        inner = [Turn(BobMove(*self._pull((t.bob.center, t.bob.radius))), a.alice)
                 for t, a in zip(history, _inner_history(history, 0, inv))]
        move = self.base(inner, BobMove(*self._pull((bob.center, bob.radius))))
        return AliceMove(tuple(_map_ball(b, self.lam, self.t) for b in move.balls), parts=(move,))


def transport_similarity(strategy, lam, t):
    """Strategy for the image of the target under ``x -> lam*x + t``."""
    lam, t = as_fraction(lam), as_fraction(t)
    if lam == 0:
        raise ValueError("similarity ratio must be nonzero")
    if lam == 1 and t == 0:
        return strategy
    return SimilarityStrategy(strategy, lam, t)


def conjugate_transcript(tr: GameTranscript, lam, t) -> GameTranscript:
    """Image of a transcript under ``x -> lam*x + t``."""
    lam, t = as_fraction(lam), as_fraction(t)
    if lam == 0:
        raise ValueError("similarity ratio must be nonzero")
    p = tr.params
    turns = [Turn(BobMove(*_map_ball((u.bob.center, u.bob.radius), lam, t)),
                  AliceMove(tuple(_map_ball(b, lam, t) for b in u.alice.balls)))
             for u in tr.turns]
    final = None
    if tr.final is not None:
        a, b = (lam * v + t for v in tr.final)
        final = (min(a, b), max(a, b))
    return GameTranscript(GameParams(p.alpha, p.beta, p.c, abs(lam) * p.rho), abs(lam) * tr.stop_radius,
                          turns, tr.outcome, final, tr.violation, list(tr.notes))


class BilipStrategy:
    def __init__(self, base, f):
        self.base, self.f = base, f
        p = base.params
        k = f.c2 / f.c1
        self.params = GameParams(k * p.alpha, k * p.beta, 0, f.c2 * p.rho)
        self.targets = ()
        self.notes = []

    def _pull(self, center, radius):
        iv_ = self.f.preimage_interval(center - radius, center + radius)
        if iv_ is None:
            return None
        a, b = iv_
        return BobMove((a + b) / 2, (b - a) / 2)

    def _pull_alice(self, move: AliceMove) -> AliceMove:
        balls = []
        for h, r in move.balls:
            m = self._pull(h, r)
            if m is not None:
                balls.append((m.center, m.radius))
        return AliceMove(tuple(balls))

    def __call__(self, history, bob):
        pulled = [self._pull(t.bob.center, t.bob.radius) for t in history]
        inner_alice = _inner_history(history, 0, self._pull_alice)
        inner = [Turn(p, a.alice) for p, a in zip(pulled, inner_alice) if p is not None]
        b = self._pull(bob.center, bob.radius)
        if b is None:
            return AliceMove((), parts=(PASS,))
        move = self.base(inner, b)
        balls = []
        for h, r in move.balls:
            lo, hi = self.f.image(h - r, h + r)
            balls.append(((lo + hi) / 2, (hi - lo) / 2))
        out = AliceMove(tuple(balls), parts=(move,))
        if not validate_alice_move(history, self.params, bob, out):
            # only outward rounding of a non-exact map can get here
            self.notes.append("forward image exceeded the budget after rounding; passed")
            return AliceMove((), parts=(PASS,))
        return out


def transport_bilip(strategy, f):
    """Strategy for ``f(S)`` from a ``c = 0`` strategy for ``S``.

    Parameters become ``(c2/c1 alpha, c2/c1 beta, 0, c2 rho)``.
    """
    if strategy.params.c != 0:
        raise ValueError("bi-Lipschitz transport needs a c = 0 strategy")
    if not isinstance(f, (AffineMap, MonotoneSmooth)):
        raise ValueError("map must be an AffineMap or a validated MonotoneSmooth")
    if isinstance(f, AffineMap) and f.a == 1 and f.b == 0:
        return strategy
    return BilipStrategy(strategy, f)


def _alpha_sum_upper(alphas: Sequence[Fraction], c: Fraction) -> Fraction:
    """Rational ``alpha >= (sum alpha_j^c)^(1/c)``; exact when that is rational."""
    if all(a == alphas[0] for a in alphas) and (1 / c).denominator == 1:
        return len(alphas) ** int(1 / c) * alphas[0]
    if c == 1:
        return sum(alphas)
    old = iv.prec
    iv.prec = LEGALITY_PREC
    try:
        cc = iv.mpf(c.numerator) / c.denominator
        s = iv.mpf(0)
        for a in alphas:
            s += iv.exp(cc * iv.log(iv.mpf(a.numerator) / a.denominator))
        val = iv.exp(iv.log(s) / cc)
        hi = mpmath.mpf(val.b)
    finally:
        iv.prec = old
    m, e = mpmath.frexp(hi)
    q = Fraction(int(mpmath.ceil(mpmath.ldexp(m, 200))), 2**200) * Fraction(2) ** int(e)
    return q


class CombinedStrategy:
    def __init__(self, components, params: GameParams):
        self.components = tuple(components)
        self.params = params
        self.targets = tuple(d for s in self.components for d in getattr(s, "targets", ()))

    def __call__(self, history, bob):
        moves = []
        for k, s in enumerate(self.components):
            moves.append(s(_inner_history(history, k, lambda a: a), bob))
        return AliceMove(tuple(b for m in moves for b in m.balls), parts=tuple(moves))


def combine_intersection(strategies: Sequence):
    """Play all component strategies at once; ``alpha^c = sum alpha_j^c``."""
    strategies = list(strategies)
    if not strategies:
        raise ValueError("need at least one strategy")
    if len(strategies) == 1:
        return strategies[0]
    p0 = strategies[0].params
    for s in strategies[1:]:
        p = s.params
        if (p.beta, p.c, p.rho) != (p0.beta, p0.c, p0.rho):
            raise ValueError("components must share beta, c and rho")
    if p0.c == 0:
        raise ValueError("combining needs c > 0")
    alpha = _alpha_sum_upper([s.params.alpha for s in strategies], p0.c)
    return CombinedStrategy(strategies, GameParams(alpha, p0.beta, p0.c, p0.rho))


def rational_c_above(x: float, den: int = 10**6) -> Fraction:
    """A rational at least ``x`` (c may be rounded up by monotonicity)."""
    return Fraction(math.ceil(x * den), den)


# ---------------------------------------------------------------------------
# Bob
# ---------------------------------------------------------------------------


def _shrink_toward(prev: BobMove, radius: Fraction, target: Fraction) -> BobMove:
    slack = prev.radius - radius
    center = min(max(target, prev.center - slack), prev.center + slack)
    return BobMove(center, radius)


def bob_midpoint_zoom(target, factor=None):
    """Zoom toward ``target`` as fast as the rules allow (or by ``factor``)."""
    target = as_fraction(target)

    def bob(history, params: GameParams):
        q = params.beta if factor is None else as_fraction(factor)
        if not history:
            return BobMove(target, params.rho)
        prev = history[-1].bob
        return _shrink_toward(prev, q * prev.radius, target)

    return bob


def bob_gap_seeker(d: SetDescriptor, depth: int = 8, factor=None):
    """Steer toward the largest gap meeting the current ball (leftmost on ties)."""
    table = gap_table(d, depth)

    def bob(history, params: GameParams):
        q = params.beta if factor is None else as_fraction(factor)
        if not history:
            mid = (d.hull[0] + d.hull[1]) / 2
            return BobMove(mid, params.rho)
        prev = history[-1].bob
        a, b = prev.interval
        idx = table.meeting(a, b)
        if len(idx):
            i = idx.start + int(np.argmin(table.ranks[idx.start:idx.stop]))
            target = (table.lefts[i] + table.rights[i]) / 2
        else:
            target = prev.center
        return _shrink_toward(prev, q * prev.radius, target)

    return bob


def bob_random(seed: int, lo=-Fraction(1, 5), hi=Fraction(6, 5), grain: int = 64):
    """Uniformly random legal moves with dyadic factors; reproducible from ``seed``."""
    lo, hi = as_fraction(lo), as_fraction(hi)

    def bob(history, params: GameParams):
        rng = random.Random(f"{seed}:{len(history)}")
        if not history:
            center = lo + (hi - lo) * Fraction(rng.randint(0, grain), grain)
            return BobMove(center, params.rho * (1 + Fraction(rng.randint(0, grain), grain)))
        prev = history[-1].bob
        q = params.beta + (1 - params.beta) * Fraction(rng.randint(0, grain - 1), grain)
        radius = q * prev.radius
        slack = prev.radius - radius
        center = prev.center + slack * Fraction(rng.randint(-grain, grain), grain)
        return BobMove(center, radius)

    return bob


def bob_scripted(moves: Sequence[BobMove]):
    """Replay a fixed list of moves, then stop."""
    moves = list(moves)

    def bob(history, params):
        return moves[len(history)] if len(history) < len(moves) else None

    return bob


def parse_script(text: str) -> list:
    """Scripted-Bob file: one ``center radius`` pair of rationals per line; ``#`` comments."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise ValueError(f"bad script line: {line!r}")
        out.append(BobMove(as_fraction(parts[0]), as_fraction(parts[1])))
    return out


# ---------------------------------------------------------------------------
# play
# ---------------------------------------------------------------------------


def classify(final: tuple, erased_balls: Sequence, targets: Sequence[SetDescriptor]) -> str:
    """Classify Bob's final ball against the erased balls and the targets.

    Each target ``t`` stands for ``(-inf, lo) ∪ t ∪ (hi, inf)``; the final
    ball is compared with the cover in which every gap whose shorter flank is
    at least the ball's length is removed.
    """
    a, b = final
    erased = IntervalUnion([(h - r, h + r) for h, r in erased_balls])
    if erased.contains_interval(a, b):
        return ERASED
    if not targets:
        return UNDETERMINED
    rest = IntervalUnion.interval(a, b).difference_open([(h - r, h + r) for h, r in erased_balls])
    size = b - a
    for d in targets:
        lo, hi = d.hull
        s = 1 / (hi - lo)
        nd = d.affine(s, -lo * s) if (lo, hi) != (0, 1) else d
        depth = matched_depth(nd, size * s)
        table = gap_table(nd, depth)
        for x, y in rest:
            u, v = (x - lo) * s, (y - lo) * s
            for i in table.meeting(u, v):
                if table.flanks[i] >= size * s:
                    return UNDETERMINED
    return IN_TARGET


def play(bob, alice, params: GameParams | None = None, stop_radius=Fraction(1, 10**6),
         max_turns: int = 10_000, targets=None) -> GameTranscript:
    """Alternate validated moves until Bob's radius drops below ``stop_radius``."""
    stop_radius = as_fraction(stop_radius)
    if stop_radius <= 0:
        raise ValueError("stop radius must be positive")
    params = params or alice.params
    targets = getattr(alice, "targets", ()) if targets is None else targets
    tr = GameTranscript(params, stop_radius,
                        notes=["the rule lim rho_m = 0 is not checked; play stops at the stop radius"])
    history: list = []
    for _ in range(max_turns):
        move = bob(history, params)
        if move is None:
            tr.notes.append("Bob stopped")
            break
        chk = validate_bob_move(history, params, move)
        if not chk:
            tr.violation = {"turn": len(history), "who": "bob", "rule": chk.rule, "detail": chk.detail}
            break
        answer = alice(history, move)
        chk = validate_alice_move(history, params, move, answer)
        if not chk:
            tr.violation = {"turn": len(history), "who": "alice", "rule": chk.rule, "detail": chk.detail}
            break
        history.append(Turn(move, answer))
        if move.radius < stop_radius:
            break
    else:
        tr.notes.append("turn limit reached")
    tr.turns = history
    if history and tr.violation is None:
        tr.final = history[-1].bob.interval
        tr.outcome = classify(tr.final, tr.erased_balls(), targets)
    return tr


def play_batch(bobs: Sequence, alice, params=None, stop_radius=Fraction(1, 10**6),
               targets=None, executor=None) -> list:
    """Independent plays, one per Bob; results in input order."""
    run = lambda b: play(b, alice, params, stop_radius, targets=targets)
    if executor is None:
        return [run(b) for b in bobs]
    return list(executor.map(run, bobs))


def erased_twice(tr: GameTranscript) -> bool:
    balls = tr.erased_balls()
    return len(balls) != len(set(balls))
