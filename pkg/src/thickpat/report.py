"""CSV tables and SVG plots: progression verdict grid, box counts, longest-progression trend."""

from __future__ import annotations

import csv
import io
import math
from fractions import Fraction
from pathlib import Path

from . import appendix, bounds, patterns
from .sets import SetDescriptor, fraction_str


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _figure():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "thickpat"
    matplotlib.rcParams["svg.fonttype"] = "none"
    return plt


def _save(plt, fig, path: Path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def verdict_rows(depth: int, ms=(3, 4, 5), steps: int = 24) -> list:
    d = SetDescriptor.middle(Fraction(1, 3))
    deltas = [Fraction(k, steps) for k in range(1, steps // 2 + 1)]
    rows = []
    for m in ms:
        g = patterns.ap_grid_search(d, m, deltas, depth)
        for delta, cert in zip(g.values, g.certificates):
            rows.append((m, fraction_str(delta), cert.verdict, int(cert.in_set)))
    return rows


def box_rows(J: int = 5) -> tuple:
    p = appendix.ConstructionParams(Fraction(1, 10**9), Fraction(1, 4), Fraction(1, 2), 1, N=2)
    est = appendix.dimension_estimate(appendix.build_fractal(p, J=J))
    rows = [(fraction_str(s), c) for s, c in zip(est.scales, est.counts)]
    return rows, est


def trend_rows(depth: int, epsilons=(Fraction(1, 3), Fraction(1, 5), Fraction(1, 9))) -> list:
    rows = []
    for eps in epsilons:
        r = patterns.longest_ap(SetDescriptor.middle(eps), depth)
        lo, hi = bounds.bfs_ap_envelope(eps)
        rows.append((fraction_str(eps), r.length, r.certified_length, f"{lo:.6f}", f"{hi:.6f}"))
    return rows


def write_report(out: Path, depth: int = 4) -> list:
    out.mkdir(parents=True, exist_ok=True)
    plt = _figure()
    written = []

    rows = verdict_rows(depth)
    (out / "ap_verdicts.csv").write_text(_csv(rows, ["m", "delta", "verdict", "endpoint_witness"]))
    fig, ax = plt.subplots(figsize=(7, 2.5))
    for m, delta, verdict, _ in rows:
        color = "tab:green" if verdict == patterns.PRESENT else "tab:red"
        ax.scatter(float(Fraction(delta)), m, c=color, s=18)
    ax.set_xlabel("common difference")
    ax.set_ylabel("terms")
    ax.set_title(f"progressions in the middle-third set, depth {depth} (green present, red absent)")
    _save(plt, fig, out / "ap_verdicts.svg")
    written += [out / "ap_verdicts.csv", out / "ap_verdicts.svg"]

    rows, est = box_rows()
    (out / "box_counts.csv").write_text(_csv(rows, ["scale", "count"]))
    fig, ax = plt.subplots(figsize=(5, 4))
    xs = [-math.log(float(Fraction(s))) for s, _ in rows]
    ys = [math.log(c) for _, c in rows]
    ax.plot(xs, ys, "o-", label=f"slope {est.slope:.3f}")
    ax.plot(xs, [ys[0] + est.similarity_bound * (x - xs[0]) for x in xs], "--",
            label=f"log M / (N |log beta|) = {est.similarity_bound:.3f}")
    ax.set_xlabel("log(1/scale)")
    ax.set_ylabel("log(box count)")
    ax.legend()
    _save(plt, fig, out / "box_counts.svg")
    written += [out / "box_counts.csv", out / "box_counts.svg"]

    rows = trend_rows(depth)
    (out / "longest_ap.csv").write_text(_csv(rows, ["epsilon", "length", "endpoint_length",
                                                    "envelope_lo", "envelope_hi"]))
    fig, ax = plt.subplots(figsize=(5, 4))
    inv = [1 / float(Fraction(r[0])) for r in rows]
    ax.plot(inv, [r[1] for r in rows], "o-", label="longest progression in cover")
    ax.plot(inv, [float(r[3]) for r in rows], ":", label="(1/eps)/log(1/eps)")
    ax.plot(inv, [float(r[4]) for r in rows], ":", label="1/eps")
    ax.set_xlabel("1/eps")
    ax.set_ylabel("terms")
    ax.legend()
    _save(plt, fig, out / "longest_ap.svg")
    written += [out / "longest_ap.csv", out / "longest_ap.svg"]
    return written
