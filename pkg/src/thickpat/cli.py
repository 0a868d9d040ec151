"""Command-line front end.

Exit codes: 0 ok, 1 usage error, 2 invalid input, 3 internal-consistency alarm.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import appendix, bounds, game, patterns
from .sets import SetDescriptor, as_fraction, fraction_str, refine
from .thickness import thickness, thickness_chunk, thickness_ifs_lower, local_thickness

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_ALARM = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


# ---------------------------------------------------------------------------
# descriptor shorthand
# ---------------------------------------------------------------------------

_NUM = r"-?\d+(?:/\d+)?"
_HULL = re.compile(rf"^(.*)\[({_NUM}),({_NUM})\]$")


def _split_hull(body: str):
    m = _HULL.match(body)
    if m:
        return m.group(1), (Fraction(m.group(2)), Fraction(m.group(3)))
    return body, (Fraction(0), Fraction(1))


def parse_descriptor(text: str) -> SetDescriptor:
    """``middle:EPS[lo,hi]``, ``ifs:r1,r2,...@o1,o2,...[lo,hi]``,
    ``gaps:[lo,hi](a,b)(c,d)...`` or a path to a JSON descriptor."""
    text = text.strip()
    try:
        if text.startswith("middle:"):
            body, hull = _split_hull(text[len("middle:"):])
            return SetDescriptor.middle(Fraction(body), hull)
        if text.startswith("ifs:"):
            body, hull = _split_hull(text[len("ifs:"):])
            ratios, _, offsets = body.partition("@")
            if not offsets:
                raise ValueError("ifs shorthand needs '@' before the offsets")
            return SetDescriptor.ifs([Fraction(r) for r in ratios.split(",")],
                                     [Fraction(o) for o in offsets.split(",")], hull)
        if text.startswith("gaps:"):
            m = re.match(rf"^\[({_NUM}),({_NUM})\](.*)$", text[len("gaps:"):])
            if not m:
                raise ValueError("gaps shorthand is gaps:[lo,hi](a,b)...")
            gaps = re.findall(rf"\(({_NUM}),({_NUM})\)", m.group(3))
            if "".join(f"({a},{b})" for a, b in gaps) != m.group(3):
                raise ValueError("could not read the gap list")
            return SetDescriptor.explicit((Fraction(m.group(1)), Fraction(m.group(2))),
                                          [(Fraction(a), Fraction(b)) for a, b in gaps])
        path = Path(text)
        if path.exists():
            return SetDescriptor.from_json(json.loads(path.read_text()))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"invalid descriptor {text!r}: {exc}") from exc
    raise ValueError(f"invalid descriptor {text!r}: unknown shorthand and no such file")


def _fractions(text: str) -> list:
    return [Fraction(t) for t in text.split(",") if t.strip()]


def _emit(obj, args):
    if getattr(args, "json_out", None):
        Path(args.json_out).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_thickness(args) -> int:
    d = parse_descriptor(args.descriptor)
    t = thickness(d, args.depth)
    print(t.describe())
    out = {"gap": t.to_json()}
    if args.all:
        if len(refine(d, args.depth if not d.is_finite else len(d.gaps)).intervals) > 1:
            tc = thickness_chunk(d, None if d.is_finite else min(args.depth, 8))
            print("chunk:", tc.describe())
            out["chunk"] = tc.to_json()
        if d.kind != "gaps":
            tl = thickness_ifs_lower(d)
            print("ifs-lower:", tl.describe())
            out["ifs_lower"] = tl.to_json()
        lo, hi = d.hull
        centers = [lo + (hi - lo) * k / 4 for k in range(5)]
        radii = [(hi - lo) / 2 ** k for k in range(1, 4)]
        tl = local_thickness(d, centers, radii, args.depth)
        print("local:", tl.describe())
        out["local"] = tl.to_json()
    _emit(out, args)
    return EXIT_OK


def cmd_bounds(args) -> int:
    prec = args.prec
    out = {}
    if args.tau is not None:
        tau = Fraction(args.tau)
        h = bounds.hausdorff_lower(tau, prec)
        print(f"dim_H >= {h.mid:.10f}  enclosure {h.to_json()}")
        out["dim_lower"] = h.to_json()
        try:
            r = bounds.ap_capacity(tau, prec)
            print(f"N(tau) = {r.N}" + ("" if r.determinate else " (indeterminate)"))
            out["capacity"] = r.to_json()
        except ValueError as exc:
            print(f"N(tau) = 0 ({exc})")
            out["capacity"] = {"N": 0, "note": str(exc)}
        if args.A is not None:
            try:
                r = bounds.bilip_capacity(tau, args.A, args.D or 1, args.m or Fraction(1, 4), prec)
                print(f"N(tau, A, D, m) = {r.N} [{r.variant}];"
                      f" alternate {r.alternate.N} [{r.alternate.variant}]")
                out["bilip"] = r.to_json()
            except ValueError as exc:
                print(f"N(tau, A, D, m) = 0 ({exc})")
                out["bilip"] = {"N": 0, "note": str(exc)}
    if args.sumset:
        v = bounds.astels_sumset(_fractions(args.sumset))
        extra = "" if v.contains_interval else f", thickness >= {fraction_str(v.thickness_bound)}"
        print(f"sumset: {v.verdict} (s = {fraction_str(v.s)}{extra})")
        out["sumset"] = v.to_json()
    if args.epsilon is not None:
        lo, hi = bounds.bfs_ap_envelope(args.epsilon)
        print(f"longest-AP envelope for M_eps: [{lo:.6g}, {hi:.6g}] up to constants")
        out["envelope"] = [lo, hi]
    if args.threshold is not None:
        lo, hi = bounds.capacity_threshold(args.threshold)
        print(f"least tau with N(tau) >= {args.threshold}: in ({lo}, {hi}]")
        out["threshold"] = [lo, hi]
    if not out:
        raise UsageError("bounds needs at least one of --tau, --sumset, --epsilon, --threshold")
    _emit(out, args)
    return EXIT_OK


def cmd_find_ap(args) -> int:
    d = parse_descriptor(args.descriptor)
    if args.longest:
        r = patterns.longest_ap(d, args.depth, m_max=args.m_max, budget=args.budget)
        print(f"{r.verdict}: length {r.length} (delta {fraction_str(r.delta) if r.delta else '-'}),"
              f" endpoint-certified length {r.certified_length}")
        _emit(r.to_json(), args)
        return EXIT_OK
    if args.m is None or (args.delta is None and not args.delta_grid):
        raise UsageError("find-ap needs --m and --delta or --delta-grid (or --longest)")
    if args.delta_grid:
        g = patterns.ap_grid_search(d, args.m, _fractions(args.delta_grid), args.depth)
        sys.stdout.write(g.to_csv())
        _emit(g.summary(), args)
        return EXIT_OK
    c = patterns.ap_search(d, args.m, args.delta, args.depth)
    _print_cert(c)
    _emit(c.to_json(), args)
    return EXIT_OK


def _print_cert(c: patterns.Certificate):
    line = f"{c.verdict} (depth {c.depth})"
    if c.witness is not None:
        line += f" witness x = {fraction_str(c.witness)}"
        line += " [endpoints, in the set]" if c.in_set else " [in the cover]"
    print(line)


def cmd_find_pattern(args) -> int:
    d = parse_descriptor(args.descriptor)
    if args.quadratic:
        xs, ys = _fractions(args.xs), _fractions(args.ys)
        setup = patterns.quadratic_pattern_setup(xs, ys, args.b)
        s = 1 / d.length
        target = d.affine(s, setup.b - d.hull[0] * s) if d.hull != setup.target_hull() else d
        c = patterns.pattern_search_general(target, setup.maps, setup.window, args.depth)
        print(f"window [{float(setup.window[0]):.6f}, {float(setup.window[1]):.6f}],"
              f" c1 = {float(setup.c1):.6f}, c2 = {float(setup.c2):.6f}")
        _print_cert(c)
        _emit(c.to_json(), args)
        return EXIT_OK
    if not args.points:
        raise UsageError("find-pattern needs --points or --quadratic")
    pts = _fractions(args.points)
    if args.lambdas:
        g = patterns.homothety_search(d, pts, _fractions(args.lambdas), args.depth)
        sys.stdout.write(g.to_csv())
        _emit(g.summary(), args)
        return EXIT_OK
    c = patterns.translate_search(d, pts, args.depth)
    _print_cert(c)
    _emit(c.to_json(), args)
    return EXIT_OK


def cmd_gap_lemma(args) -> int:
    d1, d2 = parse_descriptor(args.first), parse_descriptor(args.second)
    r = patterns.gap_lemma_check(d1, d2, args.depth)
    print(f"{r.verdict}: {r.reason}; tau1 = {fraction_str(r.tau1.value) if not r.tau1.is_infinite else 'inf'},"
          f" tau2 = {fraction_str(r.tau2.value) if not r.tau2.is_infinite else 'inf'}")
    if r.certificate is not None:
        _print_cert(r.certificate)
    _emit(r.to_json(), args)
    return EXIT_ALARM if r.verdict == patterns.ALARM else EXIT_OK


def cmd_sumset(args) -> int:
    ds = [parse_descriptor(t) for t in args.descriptors]
    U = patterns.sumset_cover(ds, args.depth)
    print(f"cover: {len(U)} interval(s), hull [{fraction_str(U.lo)}, {fraction_str(U.hi)}],"
          f" measure {fraction_str(U.measure())}")
    taus = [thickness(d, max(args.depth, 1)) for d in ds]
    v = bounds.astels_sumset(taus)
    print(f"thickness test: {v.verdict} (s = {fraction_str(v.s)})")
    _emit({"cover": U.to_json(), "astels": v.to_json()}, args)
    return EXIT_OK


def cmd_play_game(args) -> int:
    d = parse_descriptor(args.descriptor)
    lo, hi = d.hull
    s = 1 / (hi - lo)
    unit = d.affine(s, -lo * s) if (lo, hi) != (0, 1) else d
    stop = as_fraction(args.stop_radius)
    alice = game.alice_cantor_strategy(unit, beta=args.beta, resolution=stop * s)
    if (lo, hi) != (0, 1):
        alice = game.transport_similarity(alice, hi - lo, lo)
    if args.interactive:
        return _interactive(alice, stop)
    if args.script:
        moves = game.parse_script(Path(args.script).read_text())
        tr = game.play(game.bob_scripted(moves), alice, stop_radius=stop)
        trs = [tr]
    else:
        bobs = [game.bob_random(args.seed + i, lo - (hi - lo) / 5, hi + (hi - lo) / 5)
                for i in range(args.plays)]
        trs = game.play_batch(bobs, alice, stop_radius=stop)
    counts: dict = {}
    bad = 0
    for tr in trs:
        key = tr.outcome if tr.violation is None else f"violation:{tr.violation['who']}"
        counts[key] = counts.get(key, 0) + 1
        bad += tr.violation is not None and tr.violation["who"] == "alice"
    p = alice.params
    print(f"params alpha={fraction_str(p.alpha)} beta={fraction_str(p.beta)} c={fraction_str(p.c)}"
          f" rho={fraction_str(p.rho)}; {len(trs)} play(s)")
    for k in sorted(counts):
        print(f"  {k}: {counts[k]}")
    if args.transcripts:
        Path(args.transcripts).write_text(json.dumps([t.to_json() for t in trs], sort_keys=True) + "\n")
    return EXIT_ALARM if bad else EXIT_OK


def _interactive(alice, stop) -> int:
    p = alice.params
    print(f"You are Bob. alpha={fraction_str(p.alpha)} beta={fraction_str(p.beta)} "
          f"c={fraction_str(p.c)} rho={fraction_str(p.rho)}")
    print("Enter 'center radius' (rationals) each turn; blank line to stop.")
    history: list = []
    while True:
        try:
            line = input("bob> ").strip()
        except EOFError:
            break
        if not line:
            break
        try:
            c, r = line.split()
            move = game.BobMove(Fraction(c), Fraction(r))
        except ValueError:
            print("could not read 'center radius'")
            continue
        chk = game.validate_bob_move(history, p, move)
        if not chk:
            print(f"illegal ({chk.rule}): {chk.detail}")
            continue
        ans = alice(history, move)
        history.append(game.Turn(move, ans))
        if ans.is_pass:
            print("alice: pass")
        else:
            print("alice erases " + ", ".join(f"B({fraction_str(h)}, {fraction_str(r)})" for h, r in ans.balls))
        if move.radius < stop:
            break
    if history:
        out = game.classify(history[-1].bob.interval, [b for t in history for b in t.alice.balls],
                            getattr(alice, "targets", ()))
        print(f"outcome: {out}")
    return EXIT_OK


def _construction(args) -> appendix.ConstructionParams:
    return appendix.ConstructionParams(args.alpha, args.beta, args.c, args.rho, args.x0, args.N,
                                       args.gamma)


def cmd_build_appendix(args) -> int:
    p = _construction(args)
    try:
        tree = appendix.build_fractal(p, J=args.J)
    except appendix.ShortfallError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INVALID
    est = appendix.dimension_estimate(tree) if args.J >= 2 else None
    print(f"M = {p.M}; nodes per level {tree.counts()}")
    if est:
        print(f"box-count slope {est.slope:.4f}; log M/(N|log beta|) = {est.similarity_bound:.4f}")
    if args.tree:
        Path(args.tree).write_text(json.dumps(tree.to_json(), sort_keys=True) + "\n")
    if args.csv and est:
        Path(args.csv).write_text(_box_csv(est))
    return EXIT_OK


def _box_csv(est) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["scale", "count"])
    for s, c in zip(est.scales, est.counts):
        w.writerow([fraction_str(s), c])
    return buf.getvalue()


def cmd_verify_lemmas(args) -> int:
    betas = _fractions(args.betas)
    Ns = [int(n) for n in args.Ns.split(",")]
    alarm = False
    sweep = appendix.nesting_sweep(betas, Ns, args.zmax)
    print(f"nesting lemma: {sweep['checked']} cases, {len(sweep['counterexamples'])} counterexamples,"
          f" {len(sweep['length_failures'])} interval-length failures")
    for bad in sweep["counterexamples"][:10]:
        print("  COUNTEREXAMPLE", json.dumps(bad.to_json()))
    alarm |= bool(sweep["counterexamples"])
    for beta in betas:
        for N in Ns:
            p = appendix.ConstructionParams(Fraction(1, 10**9), beta, Fraction(1, 2), 1, N=N)
            proj = appendix.projection_sweep(p, args.zmax, extra_levels=0)
            kids = len(appendix.children(appendix.GridBall(0, 0, appendix.D), p))
            need = appendix.child_lower_bound(beta, N)
            print(f"beta={fraction_str(beta)} N={N}: projection {proj['checked']} balls,"
                  f" {len(proj['failures'])} failures; children {kids} (bound {need}:"
                  f" {'holds' if kids >= need else 'FAILS'})")
            alarm |= bool(proj["failures"] or proj["containment_failures"])
    for beta, c in ((Fraction(1, 4), Fraction(1, 2)), (Fraction(1, 5), Fraction(1, 10)),
                    (Fraction(1, 10), Fraction(9, 10))):
        a = appendix.hypothesis_alpha(beta, c)
        led = appendix.constants_ledger(a, beta, c)
        items = " ".join(f"({i})={led[f'item{i}']}" for i in (1, 2, 3))
        print(f"constants beta={fraction_str(beta)} c={fraction_str(c)}: N={led['N']} {items}")
    return EXIT_ALARM if alarm else EXIT_OK


def cmd_report(args) -> int:
    from . import report
    paths = report.write_report(Path(args.out), depth=args.depth)
    for p in paths:
        print(p)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _depth(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("depth must be nonnegative")
    return n


def _prec(text: str) -> int:
    n = int(text)
    if n < 53:
        raise argparse.ArgumentTypeError("precision must be at least 53 bits")
    return n


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="thickpat", description="Thickness, patterns and potential games on Cantor sets.")
    ap.add_argument("--prec", type=_prec, default=bounds.DEFAULT_PREC,
                    help="working precision in bits (default from THICKPAT_PRECISION)")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        p.add_argument("--json", dest="json_out", metavar="PATH", help="write a JSON artifact")
        return p

    p = add("thickness", cmd_thickness, "thickness of a set")
    p.add_argument("descriptor")
    p.add_argument("--depth", type=_depth, default=6)
    p.add_argument("--all", action="store_true", help="also chunk, first-level and local values")

    p = add("bounds", cmd_bounds, "capacity and dimension bounds")
    p.add_argument("--tau", type=Fraction)
    p.add_argument("--A", type=Fraction)
    p.add_argument("--D", type=Fraction)
    p.add_argument("--m", type=Fraction)
    p.add_argument("--sumset", metavar="T1,T2,...")
    p.add_argument("--epsilon", type=Fraction)
    p.add_argument("--threshold", type=int, metavar="M")

    p = add("find-ap", cmd_find_ap, "arithmetic progression search")
    p.add_argument("descriptor")
    p.add_argument("--m", type=int)
    p.add_argument("--delta", type=Fraction)
    p.add_argument("--delta-grid", metavar="D1,D2,...")
    p.add_argument("--depth", type=_depth, default=6)
    p.add_argument("--longest", action="store_true")
    p.add_argument("--m-max", type=int, default=8)
    p.add_argument("--budget", type=int, default=20_000)

    p = add("find-pattern", cmd_find_pattern, "translate, homothety or quadratic pattern search")
    p.add_argument("descriptor")
    p.add_argument("--points")
    p.add_argument("--lambdas")
    p.add_argument("--quadratic", action="store_true")
    p.add_argument("--xs")
    p.add_argument("--ys")
    p.add_argument("--b", type=Fraction)
    p.add_argument("--depth", type=_depth, default=6)

    p = add("gap-lemma", cmd_gap_lemma, "check the Gap Lemma on two sets")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--depth", type=_depth, default=10)

    p = add("sumset", cmd_sumset, "Minkowski sum of covers")
    p.add_argument("descriptors", nargs="+")
    p.add_argument("--depth", type=_depth, default=6)

    p = add("play-game", cmd_play_game, "potential game against the Cantor strategy")
    p.add_argument("descriptor")
    p.add_argument("--beta", type=Fraction, default=Fraction(1, 5))
    p.add_argument("--plays", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stop-radius", type=Fraction, default=Fraction(1, 10**6))
    p.add_argument("--script", help="file of 'center radius' lines for Bob")
    p.add_argument("--interactive", action="store_true", help="play Bob from the terminal")
    p.add_argument("--transcripts", metavar="PATH")

    p = add("build-appendix", cmd_build_appendix, "grid construction of a large winning subset")
    p.add_argument("--alpha", type=Fraction, default=Fraction(1, 10**9))
    p.add_argument("--beta", type=Fraction, default=Fraction(1, 4))
    p.add_argument("--c", type=Fraction, default=Fraction(1, 2))
    p.add_argument("--rho", type=Fraction, default=Fraction(1))
    p.add_argument("--x0", type=Fraction, default=Fraction(0))
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--gamma", type=Fraction, default=Fraction(1, 72))
    p.add_argument("--J", type=int, default=3)
    p.add_argument("--tree", metavar="PATH")
    p.add_argument("--csv", metavar="PATH")

    p = add("verify-lemmas", cmd_verify_lemmas, "brute-force the construction's counting lemmas")
    p.add_argument("--betas", default="1/4,1/5")
    p.add_argument("--Ns", default="2,3")
    p.add_argument("--zmax", type=int, default=20)

    p = add("report", cmd_report, "CSV and SVG summaries")
    p.add_argument("--out", default="report")
    p.add_argument("--depth", type=_depth, default=4)
    return ap


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"thickpat {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ArithmeticError) as exc:
        print(json.dumps({"error": "validation", "command": args.command, "message": str(exc)}),
              file=sys.stderr)
        return EXIT_INVALID


def main(argv=None) -> None:
    try:
        code = run(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_USAGE
    sys.exit(code)


if __name__ == "__main__":
    main()
