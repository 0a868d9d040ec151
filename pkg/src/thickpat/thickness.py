"""Newhouse thickness: gap and chunk definitions, IFS lower bound, local scans."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .sets import (
    GapRecord,
    IntervalUnion,
    SetDescriptor,
    as_fraction,
    fraction_str,
    gap_records_from_cover,
    refine,
)

INF = math.inf

EXACT = "exact"
LOWER = "lower-bound"
TRUNCATION = "depth-n-truncation"


@dataclass(frozen=True)
class ThicknessValue:
    """A thickness number together with how far it can be trusted.

    ``value`` is a Fraction or ``math.inf``.  ``kind`` is one of ``"exact"``,
    ``"lower-bound"`` and ``"depth-n-truncation"``.
    """

    value: object
    kind: str
    depth: int | None = None
    note: str = ""

    def __post_init__(self):
        if self.value != INF:
            object.__setattr__(self, "value", as_fraction(self.value))
            if self.value < 0:
                raise ValueError("thickness is nonnegative")

    @property
    def is_infinite(self) -> bool:
        return self.value == INF

    def __float__(self):
        return float(self.value)

    def describe(self) -> str:
        v = "inf" if self.is_infinite else fraction_str(self.value)
        label = self.kind
        if self.note:
            label += ", " + self.note
        return f"tau = {v} ({label})"

    def to_json(self) -> dict:
        return {
            "value": "inf" if self.is_infinite else fraction_str(self.value),
            "kind": self.kind,
            "depth": self.depth,
            "note": self.note,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ThicknessValue":
        v = INF if data["value"] == "inf" else Fraction(data["value"])
        return cls(v, data["kind"], data.get("depth"), data.get("note", ""))


def thickness_gap(records: Iterable[GapRecord]) -> object:
    """``inf`` over the records of ``min(|L|, |R|) / |G|``; no records means ``inf``."""
    best = INF
    for r in records:
        if r.gap_length <= 0:
            raise ValueError("not a gap")
        q = r.min_flank / r.gap_length
        if best == INF or q < best:
            best = q
    return best


def _union_thickness(U: IntervalUnion):
    """Thickness of a finite union of closed intervals."""
    if U.is_empty():
        raise ValueError("empty set has no thickness")
    if len(U) == 1:
        a, b = U.intervals[0]
        return Fraction(0) if a == b else INF
    return thickness_gap(gap_records_from_cover(U))


def thickness(d: SetDescriptor, depth: int = 6) -> ThicknessValue:
    """Thickness of ``d`` as read off its gap records.

    Explicit gap structures are exact.  For self-similar sets with equal
    ratios and equal first-level gaps every deeper gap repeats a first-level
    ratio, so the depth-``depth`` truncation is already the exact value; all
    other self-similar sets report the truncation, which only bounds the true
    infimum from above.
    """
    if d.length == 0:
        return ThicknessValue(0, EXACT, note="singleton")
    if d.kind == "gaps":
        v = _union_thickness(refine(d, len(d.gaps)))
        return ThicknessValue(v, EXACT, note="finite gap structure")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    v = thickness_gap(gap_records_from_cover(refine(d, depth)))
    if d.is_uniform:
        return ThicknessValue(v, EXACT, depth, note="self-similar")
    return ThicknessValue(v, TRUNCATION, depth, note="truncated infimum")


def chunk_thickness_of_cover(U: IntervalUnion):
    """Chunk formula on a finite union: ``inf |S| / dist(S, U \\ S)``.

    A chunk of a finite union is a run of consecutive components, cut in the
    gaps on either side; cutting anywhere inside a gap gives the same chunk.
    """
    comps = U.intervals
    k = len(comps)
    if k == 0:
        raise ValueError("empty set has no thickness")
    if k == 1:
        # no proper chunks: an interval is infinitely thick, a point has thickness 0
        return Fraction(0) if comps[0][0] == comps[0][1] else INF
    best = INF
    for i in range(k):
        for j in range(i, k):
            if i == 0 and j == k - 1:
                continue
            diam = comps[j][1] - comps[i][0]
            dists = []
            if i > 0:
                dists.append(comps[i][0] - comps[i - 1][1])
            if j < k - 1:
                dists.append(comps[j + 1][0] - comps[j][1])
            q = diam / min(dists)
            if best == INF or q < best:
                best = q
    return best


def thickness_chunk(d: SetDescriptor, n: int | None = None) -> ThicknessValue:
    """Thickness of ``refine(d, n)`` by brute force over all chunks."""
    if n is None:
        if d.kind != "gaps":
            raise ValueError("a depth is required for infinite constructions")
        n = len(d.gaps)
    v = chunk_thickness_of_cover(refine(d, n))
    kind = EXACT if (d.kind == "gaps" and n >= len(d.gaps)) or d.is_uniform else TRUNCATION
    return ThicknessValue(v, kind, n, note="chunk formula")


def thickness_ifs_lower(d: SetDescriptor) -> ThicknessValue:
    """First-level lower bound for a self-similar set.

    ``min(l_1/h_12, l_2/min(h_12, h_23), ..., l_k/h_{k-1,k})`` with child
    lengths ``l_i`` and gaps ``h`` between neighbouring children.
    """
    d = d.as_ifs()
    lam = d.ratios
    h = d.child_gaps()
    if any(g <= 0 for g in h):
        raise ValueError("IFS children must be disjoint")
    k = len(lam)
    terms = []
    for i in range(k):
        near = [h[j] for j in (i - 1, i) if 0 <= j < k - 1]
        terms.append(lam[i] / min(near))
    return ThicknessValue(min(terms), LOWER, note="first-level ratios")


def local_thickness(
    d: SetDescriptor,
    centers: Sequence,
    radii: Sequence,
    depth: int = 6,
) -> ThicknessValue:
    """Scan ``tau(C_depth ∩ [x - r, x + r])`` over centers and radii, keep the max.

    Empty windows are skipped.  For infinite constructions a window that
    meets the cover in a single interval is unresolved at this depth (the
    true set there is not an interval) and is skipped as well.
    """
    radii = [as_fraction(r) for r in radii]
    if any(r <= 0 for r in radii) or any(a <= b for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be positive and strictly decreasing")
    cover = refine(d, depth if not d.is_finite else len(d.gaps))
    best = None
    for x in centers:
        x = as_fraction(x)
        for r in radii:
            w = cover.intersect(IntervalUnion.interval(x - r, x + r))
            if w.is_empty():
                continue
            if len(w) == 1 and not d.is_finite and w.intervals[0][0] != w.intervals[0][1]:
                continue
            v = _union_thickness(w)
            if best is None or v == INF or (best != INF and v > best):
                best = v
    if best is None:
        best = Fraction(0)
    return ThicknessValue(best, LOWER, depth, note="finite window scan")


def windowed_thickness(d: SetDescriptor, windows: Sequence, depth: int = 6) -> ThicknessValue:
    """Largest thickness over user-supplied compact windows ``[a, b]``.

    A stand-in for the supremum over compact subsets, restricted to the
    windows given.
    """
    cover = refine(d, depth if not d.is_finite else len(d.gaps))
    best = None
    for a, b in windows:
        w = cover.intersect(IntervalUnion.interval(a, b))
        if w.is_empty():
            continue
        v = _union_thickness(w)
        if best is None or v == INF or (best != INF and v > best):
            best = v
    return ThicknessValue(Fraction(0) if best is None else best, LOWER, depth,
                          note="max over supplied windows")
