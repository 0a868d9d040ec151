"""Exact descriptions of compact subsets of the line and the interval-union algebra.

Every endpoint is a :class:`fractions.Fraction`.  Thickness values and
emptiness certificates are infima and emptiness checks, where a single
floating-point error can flip a verdict, so nothing in here touches floats
unless a caller hands in a non-rational monotone map.
"""

from __future__ import annotations

import bisect
import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

Interval = tuple  # (Fraction, Fraction), closed, lo <= hi


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are accepted only when they are exactly representable as a short
    decimal (``Fraction(str(x))``), which keeps ``1e-6`` meaning one millionth.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# IntervalUnion
# ---------------------------------------------------------------------------


class IntervalUnion:
    """A finite, sorted union of pairwise disjoint closed intervals.

    The canonical form merges intervals that overlap or share an endpoint, so
    consecutive components always satisfy ``b_j < a_{j+1}``.  Degenerate
    intervals (points) are allowed.
    """

    __slots__ = ("_iv", "_lefts")

    def __init__(self, intervals: Iterable = (), *, _canonical: bool = False):
        if _canonical:
            self._iv = tuple(intervals)
        else:
            self._iv = self._merge(
                (as_fraction(a), as_fraction(b)) for a, b in intervals
            )
        self._lefts = None

    @staticmethod
    def _merge(pairs) -> tuple:
        items = []
        for a, b in pairs:
            if a > b:
                raise ValueError(f"interval [{a}, {b}] has lo > hi")
            items.append((a, b))
        items.sort()
        out = []
        for a, b in items:
            if out and a <= out[-1][1]:
                if b > out[-1][1]:
                    out[-1] = (out[-1][0], b)
            else:
                out.append((a, b))
        return tuple(out)

    # construction helpers -------------------------------------------------
    @classmethod
    def interval(cls, a, b) -> "IntervalUnion":
        return cls([(a, b)])

    @classmethod
    def point(cls, x) -> "IntervalUnion":
        x = as_fraction(x)
        return cls([(x, x)], _canonical=True)

    @classmethod
    def empty(cls) -> "IntervalUnion":
        return cls((), _canonical=True)

    # container protocol ----------------------------------------------------
    @property
    def intervals(self) -> tuple:
        return self._iv

    def __iter__(self):
        return iter(self._iv)

    def __len__(self):
        return len(self._iv)

    def __bool__(self):
        return bool(self._iv)

    def __eq__(self, other):
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        return self._iv == other._iv

    def __hash__(self):
        return hash(self._iv)

    def __repr__(self):
        body = " U ".join(f"[{fraction_str(a)}, {fraction_str(b)}]" for a, b in self._iv)
        return f"IntervalUnion({body or 'empty'})"

    def is_empty(self) -> bool:
        return not self._iv

    @property
    def lo(self) -> Fraction:
        return self._iv[0][0]

    @property
    def hi(self) -> Fraction:
        return self._iv[-1][1]

    def hull(self) -> "IntervalUnion":
        if not self._iv:
            return self
        return IntervalUnion([(self.lo, self.hi)], _canonical=True)

    def diam(self) -> Fraction:
        return self.hi - self.lo if self._iv else Fraction(0)

    def measure(self) -> Fraction:
        return sum((b - a for a, b in self._iv), Fraction(0))

    def max_component_length(self) -> Fraction:
        return max((b - a for a, b in self._iv), default=Fraction(0))

    def endpoints(self) -> list:
        pts = []
        for a, b in self._iv:
            pts.append(a)
            if b != a:
                pts.append(b)
        return pts

    def gaps(self) -> list:
        """Bounded complementary open intervals, left to right."""
        return [(self._iv[i][1], self._iv[i + 1][0]) for i in range(len(self._iv) - 1)]

    # membership -------------------------------------------------------------
    def _left_index(self):
        if self._lefts is None:
            self._lefts = [a for a, _ in self._iv]
        return self._lefts

    def component_index(self, x) -> int | None:
        x = as_fraction(x)
        i = bisect.bisect_right(self._left_index(), x) - 1
        if i >= 0 and x <= self._iv[i][1]:
            return i
        return None

    def __contains__(self, x) -> bool:
        return self.component_index(x) is not None

    def contains_interval(self, a, b) -> bool:
        i = self.component_index(a)
        return i is not None and as_fraction(b) <= self._iv[i][1]

    def issubset(self, other: "IntervalUnion") -> bool:
        return all(other.contains_interval(a, b) for a, b in self._iv)

    # algebra ------------------------------------------------------------------
    def intersect(self, other: "IntervalUnion") -> "IntervalUnion":
        A, B = self._iv, other._iv
        i = j = 0
        out = []
        while i < len(A) and j < len(B):
            a = max(A[i][0], B[j][0])
            b = min(A[i][1], B[j][1])
            if a <= b:
                out.append((a, b))
            if A[i][1] < B[j][1]:
                i += 1
            else:
                j += 1
        # touching pieces coming from different components cannot merge: a
        # shared endpoint would mean overlapping components of one operand.
        return IntervalUnion(out, _canonical=True)

    __and__ = intersect

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        return IntervalUnion(self._iv + other._iv)

    __or__ = union

    def difference_open(self, holes: Iterable) -> "IntervalUnion":
        """Remove open intervals ``(a, b)`` from the union."""
        holes = sorted((as_fraction(a), as_fraction(b)) for a, b in holes)
        out = []
        for lo, hi in self._iv:
            cur = lo
            for a, b in holes:
                if b <= cur or a >= hi:
                    continue
                if a >= cur:
                    out.append((cur, a))
                cur = max(cur, b)
                if cur > hi:
                    break
            if cur <= hi:
                out.append((cur, hi))
        return IntervalUnion(out)

    def translate(self, t) -> "IntervalUnion":
        t = as_fraction(t)
        return IntervalUnion([(a + t, b + t) for a, b in self._iv], _canonical=True)

    def scale(self, s) -> "IntervalUnion":
        s = as_fraction(s)
        if s == 0:
            return IntervalUnion.point(0) if self._iv else self
        if s > 0:
            return IntervalUnion([(a * s, b * s) for a, b in self._iv], _canonical=True)
        return IntervalUnion(
            [(b * s, a * s) for a, b in reversed(self._iv)], _canonical=True
        )

    def affine(self, s, t) -> "IntervalUnion":
        return self.scale(s).translate(t)

    def minkowski_sum(self, other: "IntervalUnion") -> "IntervalUnion":
        if not self._iv or not other._iv:
            return IntervalUnion.empty()
        small, big = sorted((self, other), key=len)
        acc = []
        for a, b in small._iv:
            acc.extend((a + c, b + d) for c, d in big._iv)
        return IntervalUnion(acc)

    __add__ = minkowski_sum

    # serialisation ------------------------------------------------------------
    def to_json(self) -> list:
        return [[fraction_str(a), fraction_str(b)] for a, b in self._iv]

    @classmethod
    def from_json(cls, data) -> "IntervalUnion":
        return cls([(a, b) for a, b in data])


def intersect_all(unions: Sequence[IntervalUnion]) -> IntervalUnion:
    """Intersect several unions, smallest first, stopping once empty."""
    if not unions:
        raise ValueError("need at least one union")
    ordered = sorted(unions, key=len)
    acc = ordered[0]
    for u in ordered[1:]:
        if acc.is_empty():
            break
        acc = acc.intersect(u)
    return acc


# ---------------------------------------------------------------------------
# Gap records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GapRecord:
    """A complementary gap ``G`` with the flanks ``L`` and ``R`` it leaves behind."""

    G: tuple
    L: tuple
    R: tuple

    def __post_init__(self):
        if self.L[1] != self.G[0] or self.G[1] != self.R[0]:
            raise ValueError("L, G, R must be contiguous")
        if self.G[1] <= self.G[0]:
            raise ValueError("not a gap")

    @property
    def gap_length(self) -> Fraction:
        return self.G[1] - self.G[0]

    @property
    def left_length(self) -> Fraction:
        return self.L[1] - self.L[0]

    @property
    def right_length(self) -> Fraction:
        return self.R[1] - self.R[0]

    @property
    def min_flank(self) -> Fraction:
        return min(self.left_length, self.right_length)

    @property
    def ratio(self) -> Fraction:
        return self.min_flank / self.gap_length

    def to_json(self) -> dict:
        return {k: [fraction_str(v[0]), fraction_str(v[1])] for k, v in
                (("G", self.G), ("L", self.L), ("R", self.R))}


def gap_records_from_cover(cover: IntervalUnion) -> list:
    """Gap records of a finite union, in decreasing gap length.

    Ties are broken by ascending left endpoint.  The flanks of a gap run out
    to the nearest gap removed *before* it (or to the hull), found with a
    monotone stack in one left-to-right pass and one right-to-left pass.
    """
    if cover.is_empty():
        return []
    raw = cover.gaps()
    n = len(raw)
    if n == 0:
        return []
    # rank: position in the removal order; raw is already left-to-right, so a
    # stable sort on length alone breaks ties by ascending left endpoint
    lengths = [g[1] - g[0] for g in raw]
    order = sorted(range(n), key=lengths.__getitem__, reverse=True)
    rank = [0] * n
    for r, i in enumerate(order):
        rank[i] = r
    left_bound = [cover.lo] * n
    stack = []
    for i in range(n):
        while stack and rank[stack[-1]] > rank[i]:
            stack.pop()
        if stack:
            left_bound[i] = raw[stack[-1]][1]
        stack.append(i)
    right_bound = [cover.hi] * n
    stack = []
    for i in range(n - 1, -1, -1):
        while stack and rank[stack[-1]] > rank[i]:
            stack.pop()
        if stack:
            right_bound[i] = raw[stack[-1]][0]
        stack.append(i)
    return [
        GapRecord(G=raw[i], L=(left_bound[i], raw[i][0]), R=(raw[i][1], right_bound[i]))
        for i in order
    ]


# ---------------------------------------------------------------------------
# Set descriptors
# ---------------------------------------------------------------------------

KINDS = ("gaps", "ifs", "middle")


@dataclass(frozen=True)
class SetDescriptor:
    """Declarative description of a compact set with convex hull ``hull``.

    kind ``"gaps"``
        hull minus finitely many open ``gaps``.
    kind ``"ifs"``
        self-similar set; child ``i`` occupies
        ``[t + offsets[i]*L, t + (offsets[i] + ratios[i])*L]`` of the hull
        ``[t, t+L]``.  The first child starts at the left end of the hull and
        the last one ends at the right end.
    kind ``"middle"``
        middle-epsilon Cantor set scaled onto the hull.
    """

    kind: str
    hull: tuple
    gaps: tuple = ()
    ratios: tuple = ()
    offsets: tuple = ()
    epsilon: Fraction | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown descriptor kind {self.kind!r}")
        lo, hi = (as_fraction(v) for v in self.hull)
        if lo > hi:
            raise ValueError("hull has lo > hi")
        object.__setattr__(self, "hull", (lo, hi))
        if self.kind == "gaps":
            gaps = tuple(sorted((as_fraction(a), as_fraction(b)) for a, b in self.gaps))
            for a, b in gaps:
                if not a < b:
                    raise ValueError(f"gap ({a}, {b}) is empty")
                if not (lo < a and b < hi):
                    raise ValueError(f"gap ({a}, {b}) is not strictly inside the hull")
            for (a0, b0), (a1, b1) in zip(gaps, gaps[1:]):
                if a1 < b0:
                    raise ValueError("gaps overlap")
            object.__setattr__(self, "gaps", gaps)
        elif self.kind == "middle":
            eps = as_fraction(self.epsilon)
            if not 0 < eps < 1:
                raise ValueError("epsilon must lie in (0, 1)")
            object.__setattr__(self, "epsilon", eps)
            lam = (1 - eps) / 2
            object.__setattr__(self, "ratios", (lam, lam))
            object.__setattr__(self, "offsets", (Fraction(0), 1 - lam))
        else:
            ratios = tuple(as_fraction(r) for r in self.ratios)
            offsets = tuple(as_fraction(o) for o in self.offsets)
            if len(ratios) < 2 or len(ratios) != len(offsets):
                raise ValueError("an IFS needs at least two maps with one offset each")
            if any(not 0 < r < 1 for r in ratios):
                raise ValueError("contraction ratios must lie in (0, 1)")
            if offsets[0] != 0 or offsets[-1] + ratios[-1] != 1:
                raise ValueError("first child must start and last child end at the hull ends")
            for i in range(len(ratios) - 1):
                if offsets[i] + ratios[i] >= offsets[i + 1]:
                    raise ValueError("IFS children overlap or are not ordered left to right")
            object.__setattr__(self, "ratios", ratios)
            object.__setattr__(self, "offsets", offsets)

    # constructors ---------------------------------------------------------------
    @classmethod
    def explicit(cls, hull, gaps=()) -> "SetDescriptor":
        return cls("gaps", tuple(hull), gaps=tuple(gaps))

    @classmethod
    def ifs(cls, ratios, offsets, hull=(0, 1)) -> "SetDescriptor":
        return cls("ifs", tuple(hull), ratios=tuple(ratios), offsets=tuple(offsets))

    @classmethod
    def middle(cls, epsilon, hull=(0, 1)) -> "SetDescriptor":
        return cls("middle", tuple(hull), epsilon=as_fraction(epsilon))

    # basic facts ------------------------------------------------------------------
    @property
    def length(self) -> Fraction:
        return self.hull[1] - self.hull[0]

    @property
    def is_finite(self) -> bool:
        """True when the construction stops after finitely many removals."""
        return self.kind == "gaps"

    @property
    def is_uniform(self) -> bool:
        """Equal contraction ratios and equal first-level gaps."""
        if self.kind == "gaps":
            return False
        return len(set(self.ratios)) == 1 and len(set(self.child_gaps())) == 1

    def child_gaps(self) -> tuple:
        """Relative first-level gaps ``h_{i,i+1}`` of an IFS."""
        return tuple(
            self.offsets[i + 1] - self.offsets[i] - self.ratios[i]
            for i in range(len(self.ratios) - 1)
        )

    def as_ifs(self) -> "SetDescriptor":
        if self.kind == "middle":
            return SetDescriptor.ifs(self.ratios, self.offsets, self.hull)
        if self.kind == "ifs":
            return self
        raise ValueError("explicit-gap descriptors have no IFS form")

    def affine(self, s, t) -> "SetDescriptor":
        """Image under ``x -> s*x + t`` with ``s > 0``."""
        s, t = as_fraction(s), as_fraction(t)
        if s <= 0:
            raise ValueError("only orientation-preserving images are supported")
        hull = (self.hull[0] * s + t, self.hull[1] * s + t)
        if self.kind == "gaps":
            return SetDescriptor.explicit(hull, [(a * s + t, b * s + t) for a, b in self.gaps])
        if self.kind == "middle":
            return SetDescriptor.middle(self.epsilon, hull)
        return SetDescriptor.ifs(self.ratios, self.offsets, hull)

    def translate(self, t) -> "SetDescriptor":
        return self.affine(1, t)

    # serialisation ----------------------------------------------------------------
    def to_json(self) -> dict:
        out = {"hull": [fraction_str(self.hull[0]), fraction_str(self.hull[1])], "kind": self.kind}
        if self.kind == "gaps":
            out["gaps"] = [[fraction_str(a), fraction_str(b)] for a, b in self.gaps]
        elif self.kind == "ifs":
            out["ifs"] = {
                "ratios": [fraction_str(r) for r in self.ratios],
                "offsets": [fraction_str(o) for o in self.offsets],
            }
        else:
            out["epsilon"] = fraction_str(self.epsilon)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SetDescriptor":
        try:
            kind = data["kind"]
            hull = tuple(data["hull"])
            if len(hull) != 2:
                raise ValueError("hull must have two endpoints")
            if kind == "gaps":
                return cls.explicit(hull, [tuple(g) for g in data.get("gaps", [])])
            if kind == "ifs":
                return cls.ifs(data["ifs"]["ratios"], data["ifs"]["offsets"], hull)
            if kind == "middle":
                return cls.middle(data["epsilon"], hull)
        except (KeyError, TypeError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed descriptor: {exc}") from exc
        raise ValueError(f"unknown descriptor kind {kind!r}")


@dataclass(frozen=True)
class AffineRecord:
    """``T(x) = scale*x + shift``."""

    scale: Fraction
    shift: Fraction

    def __call__(self, x):
        return self.scale * as_fraction(x) + self.shift

    def inverse(self) -> "AffineRecord":
        return AffineRecord(1 / self.scale, -self.shift / self.scale)


def normalize(d: SetDescriptor):
    """Rescale ``d`` onto the hull ``[0, 1]``.

    Returns the transported descriptor and the map ``T(x) = (x - t)/L``.
    """
    t, L = d.hull[0], d.length
    if L == 0:
        raise ValueError("degenerate set")
    T = AffineRecord(1 / L, -t / L)
    if T.scale == 1 and T.shift == 0:
        return d, T
    return d.affine(T.scale, T.shift), T


@functools.lru_cache(maxsize=64)
def refine(d: SetDescriptor, n: int) -> IntervalUnion:
    """Depth-``n`` cover ``C_n`` of the described set.

    For explicit gaps the first ``n`` gaps in removal order are taken out, so
    ``n >= len(gaps)`` gives the set itself.  For self-similar sets ``C_n`` is
    the union of the ``k**n`` level-``n`` construction intervals.
    """
    if n < 0:
        raise ValueError("depth must be nonnegative")
    lo, hi = d.hull
    if d.kind == "gaps":
        ordered = sorted(d.gaps, key=lambda g: (-(g[1] - g[0]), g[0]))
        return IntervalUnion([(lo, hi)], _canonical=True).difference_open(ordered[:n])
    # integer numerators over den**n keep the inner loop free of gcds
    den = math.lcm(*(x.denominator for x in d.ratios + d.offsets))
    maps = [(int(o * den), int((o + r) * den)) for r, o in zip(d.ratios, d.offsets)]
    rel = [(0, 1)]
    for _ in range(n):
        rel = [(a * den + (b - a) * p, a * den + (b - a) * q) for a, b in rel for p, q in maps]
    scale = (hi - lo) / Fraction(den) ** n
    if lo == 0 and scale.numerator == 1:
        q = scale.denominator
        return IntervalUnion(
            [(Fraction(a, q), Fraction(b, q)) for a, b in rel], _canonical=True
        )
    return IntervalUnion([(lo + a * scale, lo + b * scale) for a, b in rel], _canonical=True)


def gaps(d: SetDescriptor, n: int | None = None) -> list:
    """Gap records of ``refine(d, n)`` in decreasing length order.

    ``n`` may be omitted for explicit-gap descriptors, meaning all gaps.
    """
    if n is None:
        if d.kind != "gaps":
            raise ValueError("a depth is required for infinite constructions")
        n = len(d.gaps)
    elif n < 1 and d.kind != "gaps":
        raise ValueError("depth must be at least 1")
    return gap_records_from_cover(refine(d, n))


def construction_endpoints(d: SetDescriptor, n: int) -> list:
    """Endpoints of the level-``n`` construction intervals.

    All of them lie in the described set itself: explicit-gap endpoints are
    never removed, and IFS endpoints are images of the hull ends, which are
    fixed points of the outer maps.
    """
    return refine(d, n).endpoints()


def is_construction_endpoint(d: SetDescriptor, x, n: int) -> bool:
    """Whether ``x`` is an endpoint of a construction interval of level <= ``n``."""
    cover = refine(d, n)
    i = cover.component_index(x)
    if i is None:
        return False
    a, b = cover.intervals[i]
    return x == a or x == b


# ---------------------------------------------------------------------------
# Monotone maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AffineMap:
    """``f(x) = a*x + b`` with ``a != 0``."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", as_fraction(self.a))
        object.__setattr__(self, "b", as_fraction(self.b))
        if self.a == 0:
            raise ValueError("affine map must have nonzero slope")

    @property
    def exact(self) -> bool:
        return True

    @property
    def c1(self) -> Fraction:
        return abs(self.a)

    c2 = c1

    @property
    def increasing(self) -> bool:
        return self.a > 0

    def __call__(self, x) -> Fraction:
        return self.a * as_fraction(x) + self.b

    def inverse_point(self, y) -> Fraction:
        return (as_fraction(y) - self.b) / self.a

    def image(self, lo, hi) -> tuple:
        u, v = self(lo), self(hi)
        return (u, v) if u <= v else (v, u)

    def preimage_interval(self, lo, hi) -> tuple:
        u, v = self.inverse_point(lo), self.inverse_point(hi)
        return (u, v) if u <= v else (v, u)


def _round_out(value, direction: int, rel: float) -> Fraction:
    """Rational bound on the ``direction`` side of a real value."""
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    v = Fraction(str(value)) if not isinstance(value, float) else Fraction(value)
    pad = abs(v) * Fraction(rel) + Fraction(rel)
    return v + pad if direction > 0 else v - pad


@dataclass(frozen=True)
class MonotoneSmooth:
    """A strictly monotone map on ``domain`` with ``c1 <= |f'| <= c2`` there.

    ``forward`` and ``inverse`` take and return Fractions when they can be
    evaluated exactly, or anything ``float``/``mpmath`` otherwise; inexact
    results are rounded outward by a relative pad ``tol`` so preimages are
    enclosures.
    """

    forward: Callable
    inverse: Callable
    domain: tuple
    c1: Fraction
    c2: Fraction
    tol: float = 1e-12
    name: str = "f"
    n_checks: int = 9

    def __post_init__(self):
        lo, hi = (as_fraction(v) for v in self.domain)
        if not lo < hi:
            raise ValueError("domain must have positive length")
        object.__setattr__(self, "domain", (lo, hi))
        object.__setattr__(self, "c1", as_fraction(self.c1))
        object.__setattr__(self, "c2", as_fraction(self.c2))
        if not 0 < self.c1 <= self.c2:
            raise ValueError("need 0 < c1 <= c2")
        self._validate()

    @property
    def exact(self) -> bool:
        return False

    @property
    def increasing(self) -> bool:
        lo, hi = self.domain
        return _as_real(self.forward(lo)) < _as_real(self.forward(hi))

    def _validate(self):
        lo, hi = self.domain
        ys = []
        for k in range(self.n_checks):
            x = lo + (hi - lo) * Fraction(k, self.n_checks - 1)
            y = self.forward(x)
            back = _as_real(self.inverse(y))
            if abs(float(back - x)) > 1e-6 * max(1.0, abs(float(x))):
                raise ValueError(f"inverse of {self.name} inconsistent with forward map at x={x}")
            ys.append(_as_real(y))
        steps = list(zip(ys, ys[1:]))
        if not (all(u < v for u, v in steps) or all(u > v for u, v in steps)):
            raise ValueError(f"{self.name} is not strictly monotone on its domain")

    def __call__(self, x):
        return self.forward(as_fraction(x))

    def image(self, lo, hi) -> tuple:
        """Outward-rounded rational enclosure of ``f([lo, hi])``."""
        u, v = self.forward(as_fraction(lo)), self.forward(as_fraction(hi))
        if _as_real(u) > _as_real(v):
            u, v = v, u
        return _round_out(u, -1, self.tol), _round_out(v, +1, self.tol)

    def range(self) -> tuple:
        return self.image(*self.domain)

    def preimage_interval(self, lo, hi) -> tuple:
        """Enclosure of ``f^{-1}([lo, hi])`` clipped to the domain."""
        dlo, dhi = self.domain
        rlo, rhi = self.range()
        lo, hi = max(as_fraction(lo), rlo), min(as_fraction(hi), rhi)
        if lo > hi:
            return None
        inc = self.increasing
        ends = []
        for y, side in ((lo, -1), (hi, +1)):
            # the side of the preimage this endpoint bounds
            pre_side = side if inc else -side
            at_range_end = (y == rlo) if side < 0 else (y == rhi)
            if at_range_end:
                ends.append(dlo if pre_side < 0 else dhi)
            else:
                ends.append(_round_out(self.inverse(y), pre_side, self.tol))
        a, b = min(ends), max(ends)
        a, b = max(a, dlo), min(b, dhi)
        if a > b:
            return None
        return a, b


def _as_real(v):
    if isinstance(v, Fraction):
        return v
    return Fraction(str(v)) if not isinstance(v, float) else Fraction(v)


def preimage(m, U: IntervalUnion) -> IntervalUnion:
    """``m^{-1}(U)``: exact for affine maps, an outward enclosure otherwise."""
    if isinstance(m, AffineMap):
        return U.translate(-m.b).scale(1 / m.a)
    pieces = []
    for a, b in U:
        iv = m.preimage_interval(a, b)
        if iv is not None:
            pieces.append(iv)
    return IntervalUnion(pieces)


def piecewise_linear(breaks: Sequence, slopes: Sequence, value_at_first=0, name="pl"):
    """Increasing piecewise-linear map with exact forward and inverse.

    ``breaks`` are the knots ``x_0 < ... < x_k`` (the domain) and ``slopes``
    the ``k`` positive slopes between them.
    """
    xs = [as_fraction(x) for x in breaks]
    ss = [as_fraction(s) for s in slopes]
    if len(xs) != len(ss) + 1 or any(s <= 0 for s in ss):
        raise ValueError("need len(breaks) == len(slopes) + 1 and positive slopes")
    ys = [as_fraction(value_at_first)]
    for i, s in enumerate(ss):
        ys.append(ys[-1] + s * (xs[i + 1] - xs[i]))

    def forward(x):
        x = as_fraction(x)
        i = min(max(bisect.bisect_right(xs, x) - 1, 0), len(ss) - 1)
        return ys[i] + ss[i] * (x - xs[i])

    def inverse(y):
        y = as_fraction(y)
        i = min(max(bisect.bisect_right(ys, y) - 1, 0), len(ss) - 1)
        return xs[i] + (y - ys[i]) / ss[i]

    return MonotoneSmooth(forward, inverse, (xs[0], xs[-1]), min(ss), max(ss), name=name)
