"""Explicit pattern-capacity and dimension bounds, evaluated with outward rounding.

All transcendental expressions go through :mod:`mpmath`'s interval context, so
every reported number comes with an enclosure ``[lo, hi]``.  A floor is only
taken when both ends of the enclosure agree on it; otherwise the precision is
doubled a few times and, failing that, the result is flagged indeterminate.
"""

from __future__ import annotations

import math
import os
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import mpmath
from mpmath import iv

from .sets import as_fraction, fraction_str
from .thickness import INF, ThicknessValue

DEFAULT_PREC = int(os.environ.get("THICKPAT_PRECISION", "80"))
MAX_DOUBLINGS = 4
ENDPOINT_PREC = 8192


@dataclass(frozen=True)
class Enclosure:
    lo: mpmath.mpf
    hi: mpmath.mpf

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return float((self.lo + self.hi) / 2)

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def to_json(self) -> list:
        return [mpmath.nstr(self.lo, 30), mpmath.nstr(self.hi, 30)]


@contextmanager
def _workprec(p: int):
    old = iv.prec
    iv.prec = p
    try:
        yield
    finally:
        iv.prec = old


def _enc(x) -> Enclosure:
    # endpoints are exact binary numbers; convert without rounding them inward
    with mpmath.workprec(ENDPOINT_PREC):
        return Enclosure(mpmath.mpf(x.a), mpmath.mpf(x.b))


def _iv_num(x):
    """Exact rational (or string/int) as an interval at the current precision."""
    if isinstance(x, (iv.mpf,)):
        return x
    if isinstance(x, mpmath.mpf):
        return iv.mpf(x)
    q = as_fraction(x)
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


@dataclass(frozen=True)
class CapacityResult:
    """Floor of a capacity formula together with the enclosure it came from."""

    N: int | None
    variant: str
    inputs: dict
    enclosure: Enclosure
    prec: int
    determinate: bool
    alternate: "CapacityResult | None" = None

    def to_json(self) -> dict:
        out = {
            "N": self.N,
            "variant": self.variant,
            "inputs": self.inputs,
            "enclosure": self.enclosure.to_json(),
            "prec": self.prec,
            "determinate": self.determinate,
        }
        if self.alternate is not None:
            out["alternate"] = self.alternate.to_json()
        return out


def _floored(evaluate, variant: str, inputs: dict, prec: int) -> CapacityResult:
    p = prec
    for _ in range(MAX_DOUBLINGS + 1):
        with _workprec(p):
            val = evaluate()
        enc = _enc(val)
        lo_f, hi_f = int(mpmath.floor(enc.lo)), int(mpmath.floor(enc.hi))
        if lo_f == hi_f and enc.width < 1:
            return CapacityResult(max(lo_f, 0), variant, inputs, enc, p, True)
        p *= 2
    return CapacityResult(None, variant, inputs, enc, p // 2, False)


def _tau_interval(tau):
    if isinstance(tau, ThicknessValue):
        tau = tau.value
    if tau == INF:
        raise ValueError("formula needs a finite thickness")
    return tau


# ---------------------------------------------------------------------------
# capacity formulas
# ---------------------------------------------------------------------------


def ap_capacity(tau, prec: int = DEFAULT_PREC) -> CapacityResult:
    """``floor(log 4 / (4 e 720^2) * tau / log tau)``: size of finite sets guaranteed."""
    tau = _tau_interval(tau)
    if as_fraction(tau) <= 1:
        raise ValueError("formula domain: need tau > 1")

    def evaluate():
        t = _iv_num(tau)
        return iv.log(4) / (4 * iv.e * 720**2) * t / iv.log(t)

    return _floored(evaluate, "simplified", {"tau": fraction_str(as_fraction(tau))}, prec)


def ap_capacity_unsimplified(tau, prec: int = DEFAULT_PREC) -> CapacityResult:
    """``floor(tau/(720^2 4e) * (1 - (1/4)^(1/log(tau/4))))``, the condition before simplifying."""
    tau = _tau_interval(tau)
    if not _exceeds_e(as_fraction(tau) / 4):
        raise ValueError("capacity formula undefined: need tau/4 > e")

    def evaluate():
        t = _iv_num(tau)
        beta = iv.mpf(1) / 4
        return t / (720**2 * 4 * iv.e) * (1 - iv.exp(iv.log(beta) / iv.log(t / 4)))

    return _floored(evaluate, "unsimplified", {"tau": fraction_str(as_fraction(tau))}, prec)


def bilip_capacity(tau, A, D, m, prec: int = DEFAULT_PREC) -> CapacityResult:
    """Pattern capacity for bi-Lipschitz families with distortion ``A``.

    ``beta = min(m/D, 1/(4A))`` and ``c = 1 - 1/log(tau*beta)``.  The returned
    (canonical) value uses ``min(Am/D, 1/4)`` inside the last factor, as the
    sufficient condition is derived; the value with ``beta`` there is
    attached as ``alternate``.
    """
    tau = as_fraction(_tau_interval(tau))
    A, D, m = as_fraction(A), as_fraction(D), as_fraction(m)
    if A < 1:
        raise ValueError("need A >= 1")
    if D <= 0 or m <= 0:
        raise ValueError("need D > 0 and m > 0")
    beta = min(m / D, 1 / (4 * A))
    beta_t = A * beta
    if not _exceeds_e(tau * beta):
        raise ValueError("capacity formula undefined: need tau*beta > e")

    def make(inner):
        def evaluate():
            tb = _iv_num(tau * beta)
            L = iv.log(tb)
            a_pow = iv.exp((1 - 1 / L) * iv.log(_iv_num(A)))
            return tb / (720**2 * iv.e * a_pow) * (1 - iv.exp(iv.log(_iv_num(inner)) / L))
        return evaluate

    inputs = {
        "tau": fraction_str(tau), "A": fraction_str(A), "D": fraction_str(D),
        "m": fraction_str(m), "beta": fraction_str(beta), "beta_tilde": fraction_str(beta_t),
    }
    statement = _floored(make(beta), "statement (beta)", inputs, prec)
    proof = _floored(make(beta_t), "proof (A*beta)", inputs, prec)
    return CapacityResult(proof.N, proof.variant, inputs, proof.enclosure, proof.prec,
                          proof.determinate, alternate=statement)


def _exceeds_e(q: Fraction) -> bool:
    with _workprec(80):
        x = _iv_num(q) - iv.e
    return x.a > 0


def capacity_threshold(m: int, lo=None, hi=None, iterations: int = 200):
    """Bracket the least ``tau`` with ``ap_capacity(tau) >= m`` by bisection.

    Bisects geometrically, then arithmetically, over the integers; returns
    consecutive integers ``(below, above)`` with ``N(below) < m <= N(above)``.
    """
    def N(t):
        r = ap_capacity(t)
        if not r.determinate:
            raise ArithmeticError("indeterminate floor during bisection")
        return r.N

    lo = 2 if lo is None else int(lo)
    hi = 10 if hi is None else int(hi)
    if N(lo) >= m:
        raise ValueError("lower starting point already reaches m")
    while N(hi) < m:
        lo, hi = hi, hi * hi
    for _ in range(iterations):
        if hi - lo <= 1:
            break
        mid = math.isqrt(lo * hi) if hi > 4 * lo else (lo + hi) // 2
        mid = min(max(mid, lo + 1), hi - 1)
        if N(mid) >= m:
            hi = mid
        else:
            lo = mid
    return lo, hi


# ---------------------------------------------------------------------------
# dimension, sumsets, envelopes
# ---------------------------------------------------------------------------


def hausdorff_lower(tau, prec: int = DEFAULT_PREC) -> Enclosure:
    """Enclosure of ``log 2 / log(2 + 1/tau)``."""
    if isinstance(tau, ThicknessValue):
        tau = tau.value
    if tau == INF:
        one = mpmath.mpf(1)
        return Enclosure(one, one)
    tau = as_fraction(tau)
    if tau <= 0:
        raise ValueError("need tau > 0")
    with _workprec(prec):
        val = iv.log(2) / iv.log(2 + 1 / _iv_num(tau))
    return _enc(val)


@dataclass(frozen=True)
class SumsetVerdict:
    """``contains_interval`` when ``s >= 1``; else a thickness lower bound ``s/(1-s)``."""

    contains_interval: bool
    s: object
    thickness_bound: object | None

    @property
    def verdict(self) -> str:
        return "ContainsInterval" if self.contains_interval else "ThicknessLowerBound"

    def to_json(self) -> dict:
        fmt = lambda v: None if v is None else fraction_str(v)
        return {"verdict": self.verdict, "s": fmt(self.s),
                "thickness_bound": fmt(self.thickness_bound)}


def astels_sumset(taus: Iterable) -> SumsetVerdict:
    """Sum of ``tau/(tau+1)`` over the summands decides interval vs. Cantor set."""
    s = Fraction(0)
    for t in taus:
        if isinstance(t, ThicknessValue):
            t = t.value
        if t == INF:
            s += 1
            continue
        t = as_fraction(t)
        if t < 0:
            raise ValueError("thickness is nonnegative")
        s += t / (t + 1)
    if s >= 1:
        return SumsetVerdict(True, s, None)
    return SumsetVerdict(False, s, s / (1 - s))


def bfs_ap_envelope(epsilon) -> tuple:
    """Unit-constant envelopes ``((1/eps)/log(1/eps), 1/eps)`` for the longest AP in M_eps."""
    eps = as_fraction(epsilon)
    if not 0 < eps < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    inv = 1 / float(eps)
    return inv / math.log(inv), inv


# ---------------------------------------------------------------------------
# constants for the dimension bound of winning sets
# ---------------------------------------------------------------------------


def winning_dimension_bound(alpha, beta) -> float:
    """``1 - 1440 alpha log 6 / |log beta|``."""
    return 1 - 1440 * float(alpha) * math.log(6) / abs(math.log(float(beta)))


def constant_condition(alpha, beta, c, prec: int = DEFAULT_PREC) -> bool | None:
    """Whether ``alpha^c <= (1 - beta^(1-c)) / 720^2``; ``None`` if undecidable at ``prec``."""
    with _workprec(prec):
        a, b, cc = _iv_num(alpha), _iv_num(beta), _iv_num(c)
        lhs = iv.exp(cc * iv.log(a))
        rhs = (1 - iv.exp((1 - cc) * iv.log(b))) / 720**2
        diff = rhs - lhs
    if diff.a >= 0:
        return True
    if diff.b < 0:
        return False
    return None
