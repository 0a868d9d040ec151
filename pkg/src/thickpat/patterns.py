"""Presence/absence certificates for finite patterns, by exact interval-union search.

The depth-``n`` cover ``C_n`` contains the set, so an empty intersection of
shifted covers proves the pattern is absent from the set itself.  A nonempty
intersection only shows presence in the cover, unless every pattern point of
the witness is a construction endpoint (those belong to the set).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .sets import (
    AffineMap,
    IntervalUnion,
    MonotoneSmooth,
    SetDescriptor,
    as_fraction,
    fraction_str,
    intersect_all,
    preimage,
    refine,
)
from .thickness import EXACT, thickness

PRESENT = "present-at-depth"
CANDIDATE = "present-candidate"
ABSENT = "certified-absent"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Certificate:
    """Outcome of one pattern query.

    ``witness_set`` is the set of admissible parameters ``x`` at ``depth``;
    ``in_set`` is True when the pattern at ``witness`` consists of
    construction endpoints, which certifies presence in the set itself.
    """

    verdict: str
    depth: int
    params: dict
    witness: Fraction | None = None
    witness_set: IntervalUnion | None = None
    in_set: bool = False
    provenance: tuple = ()

    @property
    def present(self) -> bool:
        return self.verdict in (PRESENT, CANDIDATE)

    @property
    def absent(self) -> bool:
        return self.verdict == ABSENT

    def same_verdict(self, other: "Certificate") -> bool:
        return (self.verdict, self.depth, self.witness, self.witness_set, self.in_set) == (
            other.verdict, other.depth, other.witness, other.witness_set, other.in_set)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "depth": self.depth,
            "params": self.params,
            "witness": None if self.witness is None else fraction_str(self.witness),
            "witness_set": None if self.witness_set is None else self.witness_set.to_json(),
            "in_set": self.in_set,
            "provenance": list(self.provenance),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        return cls(
            verdict=data["verdict"],
            depth=data["depth"],
            params=data["params"],
            witness=None if data["witness"] is None else Fraction(data["witness"]),
            witness_set=None if data["witness_set"] is None
            else IntervalUnion.from_json(data["witness_set"]),
            in_set=data["in_set"],
            provenance=tuple(data["provenance"]),
        )


def _endpoint_set(cover: IntervalUnion) -> set:
    return set(cover.endpoints())


def _pick_witness(W: IntervalUnion, pattern_of, cover: IntervalUnion):
    """Prefer a witness whose whole pattern sits on construction endpoints."""
    ends = _endpoint_set(cover)
    for x in W.endpoints():
        if all(p in ends for p in pattern_of(x)):
            return x, True
    return W.lo, False


def _shift_search(d: SetDescriptor, shifts: Sequence[Fraction], depth: int, op: str,
                  params: dict) -> Certificate:
    """Find ``x`` with ``x + s`` in the cover for every shift ``s``, depth by depth."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    shifts = [as_fraction(s) for s in shifts]
    for n in range(depth + 1):
        cover = refine(d, n)
        W = intersect_all([cover.translate(-s) for s in shifts])
        if W.is_empty():
            return Certificate(ABSENT, n, params, provenance=(op, f"refine<= {n}"))
    x, in_set = _pick_witness(W, lambda x: [x + s for s in shifts], cover)
    return Certificate(PRESENT, depth, params, x, W, in_set, provenance=(op, f"refine<= {depth}"))


def translate_search(d: SetDescriptor, points: Sequence, depth: int) -> Certificate:
    """Is a translate ``x + {x_1..x_k}`` present in the depth-``depth`` cover?"""
    pts = [as_fraction(p) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    return _shift_search(d, pts, depth, "translate_search",
                         {"points": [fraction_str(p) for p in pts]})


def ap_search(d: SetDescriptor, m: int, delta, depth: int) -> Certificate:
    """``m``-term progression with gap ``delta``: intersect ``C_n - k*delta``."""
    if m < 2:
        raise ValueError("progression length must be at least 2")
    delta = as_fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    return _shift_search(d, [k * delta for k in range(m)], depth, "ap_search",
                         {"m": m, "delta": fraction_str(delta)})


@dataclass(frozen=True)
class GridSearch:
    """Certificates over a parameter grid plus a one-line summary."""

    parameter: str
    values: tuple
    certificates: tuple

    @property
    def present_values(self) -> list:
        return [v for v, c in zip(self.values, self.certificates) if c.present]

    @property
    def best(self):
        """Smallest grid value with a presence certificate, if any."""
        pv = self.present_values
        return min(pv) if pv else None

    def summary(self) -> dict:
        counts = {}
        for c in self.certificates:
            counts[c.verdict] = counts.get(c.verdict, 0) + 1
        best = self.best
        return {"parameter": self.parameter, "n": len(self.values), "counts": counts,
                "smallest_present": None if best is None else fraction_str(best)}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([self.parameter, "verdict", "depth", "witness", "in_set"])
        for v, c in zip(self.values, self.certificates):
            w.writerow([fraction_str(v), c.verdict, c.depth,
                        "" if c.witness is None else fraction_str(c.witness), int(c.in_set)])
        return buf.getvalue()


def ap_grid_search(d: SetDescriptor, m: int, deltas: Iterable, depth: int) -> GridSearch:
    deltas = tuple(as_fraction(x) for x in deltas)
    return GridSearch("delta", deltas, tuple(ap_search(d, m, x, depth) for x in deltas))


def homothety_search(d: SetDescriptor, points: Sequence, lambdas: Iterable, depth: int) -> GridSearch:
    """``translate_search`` on ``lambda * A`` for each ``lambda`` of the grid."""
    lambdas = tuple(as_fraction(x) for x in lambdas)
    if not lambdas:
        raise ValueError("empty lambda grid")
    if any(x <= 0 for x in lambdas):
        raise ValueError("lambda grid must be positive")
    pts = [as_fraction(p) for p in points]
    certs = []
    for lam in lambdas:
        c = translate_search(d, [lam * p for p in pts], depth)
        certs.append(Certificate(c.verdict, c.depth,
                                 {"points": [fraction_str(p) for p in pts], "lambda": fraction_str(lam)},
                                 c.witness, c.witness_set, c.in_set,
                                 ("homothety_search",) + c.provenance))
    return GridSearch("lambda", lambdas, tuple(certs))


def endpoint_difference_grid(d: SetDescriptor, depth: int, k_max: int = 1, limit: int | None = None) -> list:
    """Positive differences ``(e - e')/k`` of construction endpoints, ascending."""
    pts = refine(d, depth).endpoints()
    diffs = {b - a for i, a in enumerate(pts) for b in pts[i + 1:]}
    grid = sorted({q / k for q in diffs for k in range(1, k_max + 1)})
    return grid[:limit] if limit else grid


# ---------------------------------------------------------------------------
# longest progression
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LongestAP:
    """Longest progression found in the depth cover over a finite grid of gaps.

    ``length`` is the largest ``m`` with a presence certificate at ``depth``
    for some candidate gap ``delta``; candidates are endpoint differences
    divided by ``k <= m_max`` and longer than every cover component (shorter
    gaps fit inside a single component and say nothing about the set).
    ``certified_length`` is the longest progression made of construction
    endpoints, which lies in the set itself.
    """

    length: int
    delta: Fraction | None
    start: Fraction | None
    depth: int
    candidates: int
    examined: int
    exhausted: bool
    certified_length: int
    certified_delta: Fraction | None
    envelope: tuple | None = None

    @property
    def verdict(self) -> str:
        return INCONCLUSIVE if self.exhausted else PRESENT

    def to_json(self) -> dict:
        f = lambda v: None if v is None else fraction_str(v)
        return {"length": self.length, "delta": f(self.delta), "start": f(self.start),
                "depth": self.depth, "candidates": self.candidates, "examined": self.examined,
                "exhausted": self.exhausted, "verdict": self.verdict,
                "certified_length": self.certified_length,
                "certified_delta": f(self.certified_delta),
                "envelope": None if self.envelope is None else list(self.envelope)}


def _extent(cover: IntervalUnion, delta: Fraction, cap: int):
    """Largest ``m <= cap`` with ``∩_{k<m} (cover - k*delta)`` nonempty, and that set."""
    W, m = cover, 1
    while m < cap:
        nxt = W.intersect(cover.translate(-m * delta))
        if nxt.is_empty():
            break
        W, m = nxt, m + 1
    return m, W


def ap_extent(d: SetDescriptor, delta, depth: int, cap: int = 256) -> int:
    """Largest ``m <= cap`` with an ``m``-term progression of gap ``delta`` in the depth cover."""
    return _extent(refine(d, depth), as_fraction(delta), cap)[0]


def endpoint_ap(points: Sequence[Fraction]):
    """Longest progression inside a finite set of rationals: ``(length, delta, start)``.

    Dynamic programming over pairs, ``run[j][delta] = run[i][delta] + 1``.
    """
    pts = sorted(set(points))
    if not pts:
        return 0, None, None
    den = math.lcm(*(p.denominator for p in pts))
    ints = [int(p * den) for p in pts]
    runs = [dict() for _ in ints]
    best = (1, None, ints[0])
    for j, pj in enumerate(ints):
        rj = runs[j]
        for i in range(j):
            step = pj - ints[i]
            length = runs[i].get(step, 1) + 1
            if length > rj.get(step, 1):
                rj[step] = length
                if length > best[0]:
                    best = (length, step, pj - (length - 1) * step)
    length, step, start = best
    return length, None if step is None else Fraction(step, den), Fraction(start, den)


def longest_ap(d: SetDescriptor, depth: int, m_max: int = 8, budget: int = 20_000,
               cap: int = 256) -> LongestAP:
    """Longest progression present in the depth-``depth`` cover over the endpoint-difference grid.

    Stops with ``exhausted=True`` (verdict inconclusive, partial maximum)
    after ``budget`` candidate gaps.
    """
    cover = refine(d, depth)
    floor_ = cover.max_component_length()
    pts = cover.endpoints()
    diffs = {b - a for i, a in enumerate(pts) for b in pts[i + 1:]}
    grid = sorted({q / k for q in diffs for k in range(1, m_max + 1) if q / k > floor_}, reverse=True)
    best = (1 if pts else 0, None, pts[0] if pts else None)
    examined, exhausted = 0, False
    for delta in grid:
        if examined >= budget:
            exhausted = True
            break
        examined += 1
        m, W = _extent(cover, delta, cap)
        if m > best[0]:
            best = (m, delta, W.lo)
    c_len, c_delta, _ = endpoint_ap(pts)
    envelope = None
    if d.kind == "middle":
        from .bounds import bfs_ap_envelope
        envelope = bfs_ap_envelope(d.epsilon)
    return LongestAP(best[0], best[1], best[2], depth, len(grid), examined, exhausted,
                     c_len, c_delta, envelope)


# ---------------------------------------------------------------------------
# Gap Lemma
# ---------------------------------------------------------------------------

HOLDS = "hypotheses-hold"
FAILS = "hypotheses-fail"
ALARM = "internal-consistency-alarm"


@dataclass(frozen=True)
class GapLemmaResult:
    verdict: str
    reason: str
    tau1: object
    tau2: object
    certificate: Certificate | None = None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "reason": self.reason,
            "tau1": self.tau1.to_json(),
            "tau2": self.tau2.to_json(),
            "certificate": None if self.certificate is None else self.certificate.to_json(),
        }


def _not_in_gap(a: SetDescriptor, b: SetDescriptor, depth: int):
    """Does the hull of ``b`` avoid lying in a gap of ``a``?  True/False/None."""
    lo, hi = b.hull
    cover = refine(a, depth if not a.is_finite else len(a.gaps))
    if hi < a.hull[0] or lo > a.hull[1]:
        return False
    ends = cover.endpoints()
    if any(lo <= e <= hi for e in ends):
        return True
    for g0, g1 in cover.gaps():
        if g0 < lo and hi < g1:
            return False
    return None


def gap_lemma_check(d1: SetDescriptor, d2: SetDescriptor, depth: int = 10,
                    thickness_depth: int = 6) -> GapLemmaResult:
    """Check the Gap Lemma hypotheses and search the covers for a common point."""
    if d1.length == 0 or d2.length == 0:
        raise ValueError("both sets must be nondegenerate")
    t1, t2 = thickness(d1, thickness_depth), thickness(d2, thickness_depth)
    both_exact = t1.kind == EXACT and t2.kind == EXACT
    prod_gt_one = (t1.is_infinite and t2.value != 0) or (t2.is_infinite and t1.value != 0) or (
        not t1.is_infinite and not t2.is_infinite and t1.value * t2.value > 1)
    if not prod_gt_one:
        return GapLemmaResult(FAILS, "product not > 1", t1, t2)
    sides = (_not_in_gap(d1, d2, depth), _not_in_gap(d2, d1, depth))
    if False in sides:
        return GapLemmaResult(FAILS, "lies in a gap", t1, t2)
    if None in sides:
        return GapLemmaResult(INCONCLUSIVE, "not-in-gap undecided at this depth", t1, t2)

    params = {"d1": d1.to_json(), "d2": d2.to_json()}
    for n in range(depth + 1):
        c1, c2 = refine(d1, n), refine(d2, n)
        W = c1.intersect(c2)
        if W.is_empty():
            cert = Certificate(ABSENT, n, params, provenance=("gap_lemma_check",))
            if both_exact:
                return GapLemmaResult(ALARM, "hypotheses hold but covers are disjoint", t1, t2, cert)
            return GapLemmaResult(INCONCLUSIVE, "covers disjoint; thickness values are truncations",
                                  t1, t2, cert)
    e1, e2 = _endpoint_set(c1), _endpoint_set(c2)
    witness, in_set = W.lo, False
    for x in W.endpoints():
        if x in e1 and x in e2:
            witness, in_set = x, True
            break
    cert = Certificate(PRESENT, depth, params, witness, W, in_set, ("gap_lemma_check",))
    reason = "tau1*tau2 > 1, neither hull lies in a gap"
    if not both_exact:
        reason += " (thickness from depth truncation)"
    return GapLemmaResult(HOLDS, reason, t1, t2, cert)


# ---------------------------------------------------------------------------
# general monotone patterns
# ---------------------------------------------------------------------------


def affine_family_window(maps: Sequence[AffineMap], hull) -> IntervalUnion:
    """Largest window ``I`` with ``f(I)`` inside ``hull`` for every affine ``f``."""
    H = IntervalUnion.interval(*hull)
    return intersect_all([preimage(f, H) for f in maps])


def _validate_window(maps, window, hull):
    lo, hi = hull
    for f in maps:
        a, b = f.image(*window)
        if a < lo or b > hi:
            raise ValueError("hypothesis violated: window not inside every preimage of the hull")
        if isinstance(f, MonotoneSmooth):
            dlo, dhi = f.domain
            if window[0] < dlo or window[1] > dhi:
                raise ValueError("hypothesis violated: window leaves the map's domain")


def pattern_search_general(d: SetDescriptor, maps: Sequence, window, depth: int) -> Certificate:
    """Search ``I ∩ ⋂ f_i^{-1}(S_n)`` where ``S_n`` is the cover filled in outside the hull.

    Because ``f_i(I)`` lies in the hull, only the cover itself matters.
    Affine-only queries are exact; any smooth map makes presence a candidate.
    """
    if not maps:
        raise ValueError("need at least one map")
    if isinstance(window, IntervalUnion):
        if len(window) != 1:
            raise ValueError("window must be a single interval")
        window = window.intervals[0]
    window = (as_fraction(window[0]), as_fraction(window[1]))
    if not window[0] < window[1]:
        raise ValueError("window must have positive length")
    _validate_window(maps, window, d.hull)
    I = IntervalUnion.interval(*window)
    exact = all(isinstance(f, AffineMap) for f in maps)
    params = {"maps": [_describe_map(f) for f in maps],
              "window": [fraction_str(window[0]), fraction_str(window[1])]}
    for n in range(depth + 1):
        cover = refine(d, n)
        W = intersect_all([I] + [preimage(f, cover) for f in maps])
        if W.is_empty():
            return Certificate(ABSENT, n, params, provenance=("pattern_search_general", f"refine<= {n}"))
    prov = ("pattern_search_general", f"refine<= {depth}")
    if exact:
        x, in_set = _pick_witness(W, lambda x: [f(x) for f in maps], cover)
        return Certificate(PRESENT, depth, params, x, W, in_set, prov)
    return Certificate(CANDIDATE, depth, params, W.lo, W, False, prov)


def _describe_map(f) -> str:
    if isinstance(f, AffineMap):
        return f"{fraction_str(f.a)}*x + {fraction_str(f.b)}"
    return getattr(f, "name", "f")


def _sqrt_bounds(q: Fraction, digits: int) -> tuple:
    """Rational ``(lo, hi)`` around ``sqrt(q)``; exact when ``q`` is a square."""
    q = as_fraction(q)
    if q < 0:
        raise ValueError("square root of a negative number")
    p, r = q.numerator, q.denominator
    sp, sr = math.isqrt(p), math.isqrt(r)
    if sp * sp == p and sr * sr == r:
        v = Fraction(sp, sr)
        return v, v
    scale = 10**digits
    s = math.isqrt(p * r * scale * scale)
    return Fraction(s, r * scale), Fraction(s + 1, r * scale)


@dataclass(frozen=True)
class QuadraticSetup:
    window: tuple
    c1: Fraction
    c2: Fraction
    maps: tuple
    b: Fraction

    def target_hull(self) -> tuple:
        return (self.b, self.b + 1)


def quadratic_pattern_setup(xs: Sequence, ys: Sequence, b, digits: int = 30) -> QuadraticSetup:
    """Window and derivative bounds for ``P_i(x) = (x - x_i)^2 + y_i`` mapping into ``[b, b+1]``.

    The window is rounded inward, ``c1`` down and ``c2`` up.  Raises
    ``ValueError`` naming the violated condition when the family is rejected.
    """
    xs = [as_fraction(x) for x in xs]
    ys = [as_fraction(y) for y in ys]
    b = as_fraction(b)
    if not xs or len(xs) != len(ys):
        raise ValueError("need matching, nonempty x and y lists")
    if any(y < 0 for y in ys):
        raise ValueError("rejected: need y_i >= 0")
    if not b > max(xs + ys):
        raise ValueError("rejected: need b > max(x_i, y_i)")
    while True:
        left = [_sqrt_bounds(b - y, digits) for y in ys]
        right = [_sqrt_bounds(b + 1 - y, digits) for y in ys]
        lo_up = max(s[1] + x for s, x in zip(left, xs))
        lo_dn = max(s[0] + x for s, x in zip(left, xs))
        hi_dn = min(s[0] + x for s, x in zip(right, xs))
        hi_up = min(s[1] + x for s, x in zip(right, xs))
        if lo_up < hi_dn:
            break
        if lo_dn >= hi_up:
            raise ValueError("rejected: max_i sqrt(b - y_i) + x_i >= min_j sqrt(b + 1 - y_j) + x_j")
        if digits > 200:
            raise ValueError("rejected: window inequality undecided at 200 digits")
        digits *= 2
    c1 = 2 * _sqrt_bounds(b - max(ys), digits)[0]
    c2 = 2 * _sqrt_bounds(b + 1, digits)[1]
    window = (lo_up, hi_dn)
    maps = tuple(_quadratic_map(x, y, window, c1, c2, i) for i, (x, y) in enumerate(zip(xs, ys)))
    return QuadraticSetup(window, c1, c2, maps, b)


def _quadratic_map(x0: Fraction, y0: Fraction, window, c1, c2, i) -> MonotoneSmooth:
    def forward(x):
        return (as_fraction(x) - x0) ** 2 + y0

    def inverse(y):
        if isinstance(y, Fraction):
            lo, hi = _sqrt_bounds(y - y0, 0) if y >= y0 else (None, None)
            if lo is not None and lo == hi:
                return x0 + lo
            return float(x0) + math.sqrt(max(float(y - y0), 0.0))
        return float(x0) + math.sqrt(max(float(y) - float(y0), 0.0))

    return MonotoneSmooth(forward, inverse, window, c1, c2,
                          name=f"(x - {fraction_str(x0)})^2 + {fraction_str(y0)}")


def sumset_cover(ds: Sequence[SetDescriptor], depth: int) -> IntervalUnion:
    """Minkowski sum of the depth covers, which contains the closure of the sumset."""
    if len(ds) < 2:
        raise ValueError("need at least two summands")
    acc = refine(ds[0], depth)
    for d in ds[1:]:
        acc = acc.minkowski_sum(refine(d, depth))
    return acc
