"""Command line entry point: check, pieces, metric, bigons, diagram.

Machine-read output is TSV; lines starting with ``#`` echo the effective
configuration.  Exit codes: 0 success or HOLDS, 1 FAILS, 2 UNKNOWN or
partial, 3 input error.
"""
import argparse
import json
import random
import sys
from fractions import Fraction

from . import __version__
from .complex_model import FORMAT_VERSION, load_presentation
from .errors import ScError

EXIT_OK, EXIT_FAILS, EXIT_UNKNOWN, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


def _fmt(x):
    if isinstance(x, (list, tuple)):
        return " ".join(_fmt(y) for y in x)
    return str(x)


class Report:
    def __init__(self, out, args):
        self.out = out
        self.args = args

    def config(self, echo_to=None):
        stream = echo_to or self.out
        for key in sorted(vars(self.args)):
            if key in ("func",):
                continue
            stream.write(f"# {key}\t{_fmt(getattr(self.args, key))}\n")

    def row(self, *cols):
        self.out.write("\t".join(_fmt(c) for c in cols) + "\n")


def _load(path):
    try:
        return load_presentation(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def parse_condition(text):
    """'C:9' -> ('C', 9); "C':1/6" or 'Cprime:1/6' -> ("C'", Fraction(1, 6))."""
    kind, sep, value = text.partition(":")
    try:
        if sep and kind == "C":
            return "C", int(value)
        if sep and kind in ("C'", "Cprime"):
            return "C'", Fraction(value)
    except (ValueError, ZeroDivisionError):
        pass
    raise InputError(f"bad condition {text!r}; use C:<p> or C':<a/b>")


def cmd_check(args, rep):
    from .small_cancellation import FAILS, HOLDS, check_metric_condition, check_nonmetric_condition
    p = _load(args.file)
    conditions = [parse_condition(c) for c in args.condition]
    rep.config()
    rep.row("condition", "result", "witness")
    results = []
    for kind, value in conditions:
        v = check_nonmetric_condition(p, value) if kind == "C" else check_metric_condition(p, value)
        wit = "-" if v.witness is None else json.dumps(v.witness, sort_keys=True, default=str)
        rep.row(v.condition, v.result, wit)
        for key in sorted(v.diagnostics):
            rep.out.write(f"# {key}\t{json.dumps(v.diagnostics[key], sort_keys=True, default=str)}\n")
        results.append(v.result)
    if FAILS in results:
        return EXIT_FAILS
    return EXIT_OK if all(r == HOLDS for r in results) else EXIT_UNKNOWN


def cmd_pieces(args, rep):
    from .pieces import get_pieces
    p = _load(args.file)
    rep.config()
    ps = get_pieces(p)
    rep.out.write(f"# M\t{ps.M}\n")
    rep.row("kind", "path", "diameter", "provenance")
    for q in sorted(ps.maximal, key=lambda q: (q.kind, -q.diameter, str(q.path))):
        rep.row(q.kind, q.path if isinstance(q.path, str) else list(q.path), q.diameter, list(q.provenance))
    return EXIT_UNKNOWN if ps.unbounded else EXIT_OK


def cmd_metric(args, rep):
    from .covers import XTILDE, build_ball
    from .piece_metric import build_piece_graph, cone_diameter_report, qi_constants_report
    p = _load(args.file)
    rep.config(echo_to=sys.stderr if args.dot else None)
    ball = build_ball(p, XTILDE, args.radius)
    g = build_piece_graph(ball, p=p)
    if args.dot:
        rep.out.write(_piece_graph_dot(g))
        return EXIT_OK
    if args.source is not None or args.target is not None:
        return _metric_pair(g, args, rep)
    r = qi_constants_report(g)
    rep.row("radius", "vertices", "M", "pairs", "lower_violations", "upper_violations",
            "triangle_violations", "max_d_over_dp")
    rep.row(args.radius, len(ball), r.M, r.pairs_checked, len(r.lower_violations),
            len(r.upper_violations), len(r.triangle_violations), f"{r.max_ratio:.4f}")
    rep.out.write("\n")
    rep.row("cone", "vertices", "dp_diameter", "diameter")
    for c in cone_diameter_report(p):
        rep.row(c.cone, c.vertices, c.diameter, c.combinatorial_diameter)
    return EXIT_OK if r.ok else EXIT_FAILS


def _vertex(ball, word, p):
    from .words import parse_word
    if word.strip() in ("", "1"):
        path = []
    else:
        try:
            path = list(parse_word(word.split(), p.gens)) if p.classical else [int(t) for t in word.split()]
        except ValueError as exc:
            raise InputError(f"bad word {word!r}: {exc}") from None
    v = ball.vertex_of(path)
    if v is None:
        raise InputError(f"{word!r} does not end inside the ball")
    return v


def _metric_pair(g, args, rep):
    from .hyperbolicity import _d_geodesics
    from .piece_metric import piece_geodesics
    p, ball = g.p, g.base
    u = _vertex(ball, args.source or "1", p)
    v = _vertex(ball, args.target or "1", p)
    rep.row("from", "to", "d", "d_p", "d_geodesic", "piece_geodesic", "exact")
    dgeo = _d_geodesics(ball, u, v, 1)
    pgeo, _ = piece_geodesics(g, u, v, 1, check=False)
    steps = [_fmt(g.underlying((a, b))) for a, b in zip(pgeo[0], pgeo[0][1:])]
    rep.row(ball.label_text(u), ball.label_text(v), ball.dist(u, v), g.dp(u, v),
            _fmt(g.underlying(dgeo[0])) or "1", " | ".join(steps) or "1", g.exact(u, v))
    return EXIT_OK


def _piece_graph_dot(g):
    lines = ["graph P {"]
    for u in range(len(g)):
        lines.append(f'  v{u} [label="{g.base.label_text(u)}"];')
    for u in range(len(g)):
        for kind, v in g.neighbours(u):
            if u < v:
                style = "" if kind == 0 else " [style=dashed]"
                lines.append(f"  v{u} -- v{v}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_bigons(args, rep):
    from .covers import XHAT, XTILDE, build_ball
    from .hyperbolicity import scan_sources, scan_thin_bigons
    from .piece_metric import build_piece_graph
    p = _load(args.file)
    rep.config()
    ball = build_ball(p, XHAT if p.classical else XTILDE, args.radius)
    g = build_piece_graph(ball, p=p)
    sources = None
    if args.sources:
        pool = scan_sources(g)
        sources = sorted(random.Random(args.seed).sample(pool, min(args.sources, len(pool))))
    scan = scan_thin_bigons(g, cap=args.max_geodesics, sources=sources)
    rep.row("radius", "pairs_scanned", "max_epsilon", "witness")
    rep.out.write(scan.row() + "\n")
    if scan.truncated:
        rep.out.write("# truncated\tTrue\n")
    return EXIT_UNKNOWN if scan.truncated else EXIT_OK


def _load_diagram(args):
    from .diagrams import DiscDiagram, validate_diagram
    p = _load(args.presentation)
    try:
        with open(args.file) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.file}: {exc.strerror}") from None
    try:
        d = DiscDiagram.from_json(text, p)
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"malformed diagram: {exc}") from None
    v = validate_diagram(d)
    if not v.ok:
        raise InputError(f"invalid diagram: {v.violations[:3]}")
    return d


def _emit(d, args, rep):
    rep.out.write(d.to_dot() if args.dot else d.to_json() + "\n")


def cmd_diagram_reduce(args, rep):
    from .diagrams import FULL, PARTIALLY_REDUCED, WEAK, reduce
    d = _load_diagram(args)
    rep.config(echo_to=sys.stderr)
    out = reduce(d, FULL if args.mode == "full" else WEAK)
    _emit(out, args, rep)
    sys.stderr.write(f"# comp\t{_fmt(d.comp())} -> {_fmt(out.comp())}\n# steps\t{len(out.log)}\n")
    return EXIT_UNKNOWN if PARTIALLY_REDUCED in out.flags else EXIT_OK


def cmd_diagram_classify(args, rep):
    from .diagrams import LADDER, classify_greendlinger
    d = _load_diagram(args)
    rep.config()
    v = classify_greendlinger(d)
    rep.row("verdict", "count", "caveats")
    count = len(v.ladder.cells) if v.kind == LADDER else len(v.exposed)
    rep.row(v.kind, count, v.caveats or "-")
    if v.kind == LADDER:
        rep.row("cell", "id")
        for kind, key in v.ladder.cells:
            rep.row(kind, key)
    else:
        rep.row("exposed", "where", "degree")
        for e in v.exposed:
            rep.row(e.kind, e.where, "-" if e.degree is None else e.degree)
    return EXIT_OK if v.dichotomy_holds else EXIT_FAILS


def cmd_diagram_sandwich(args, rep):
    from .diagrams import sandwich_decompose
    d = _load_diagram(args)
    rep.config()
    s = sandwich_decompose(d, args.split)
    rep.row("pushes", "D1", "Dprime", "D2", "ok")
    rep.row(len(s.pushes), sorted(s.d1) or "-", sorted(s.dprime) or "-", sorted(s.d2) or "-", s.verdict.ok)
    for name, path in (("gamma1", s.gamma1), ("lambda1", s.lambda1), ("lambda2", s.lambda2), ("gamma2", s.gamma2)):
        rep.row(name, path or "-")
    return EXIT_OK if s.verdict.ok else EXIT_FAILS


def cmd_diagram_random(args, rep):
    from .diagrams import random_classical_diagram
    p = _load(args.file)
    if not p.classical:
        raise InputError("random diagrams need a classical presentation")
    rep.config(echo_to=sys.stderr)
    d = random_classical_diagram(p, args.seed, cells=args.cells)
    _emit(d, args, rep)
    return EXIT_OK


def build_parser():
    from .diagrams import FORMAT as DIAGRAM_FORMAT
    ap = argparse.ArgumentParser(prog="cubical-sc", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version",
                    version=f"cubical-sc {__version__} (presentations {FORMAT_VERSION}, diagrams {DIAGRAM_FORMAT})")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide C(p) or C'(alpha)")
    c.add_argument("file")
    c.add_argument("--condition", required=True, action="append", help="C:<p>, C':<a/b> or Cprime:<a/b>; repeatable")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("pieces", help="list maximal pieces")
    c.add_argument("file")
    c.set_defaults(func=cmd_pieces)

    c = sub.add_parser("metric", help="piece metric checks on a ball of the universal cover")
    c.add_argument("file")
    c.add_argument("--radius", type=int, default=4)
    c.add_argument("--from", dest="source", default=None, help="word naming a ball vertex")
    c.add_argument("--to", dest="target", default=None)
    c.add_argument("--dot", action="store_true", help="emit the piece graph in DOT")
    c.set_defaults(func=cmd_metric)

    c = sub.add_parser("bigons", help="thin bigon scan on a quotient ball")
    c.add_argument("file")
    c.add_argument("--radius", type=int, default=3)
    c.add_argument("--max-geodesics", type=int, default=16)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--sources", type=int, default=0, help="sample this many scan sources (0 = all)")
    c.set_defaults(func=cmd_bigons)

    dg = sub.add_parser("diagram", help="disc diagram tools")
    dsub = dg.add_subparsers(dest="action", required=True)
    for name, func, helptext in (("reduce", cmd_diagram_reduce, "apply reduction moves"),
                                 ("classify", cmd_diagram_classify, "ladder or exposed cells"),
                                 ("sandwich", cmd_diagram_sandwich, "square pushes from both sides")):
        c = dsub.add_parser(name, help=helptext)
        c.add_argument("file", help="diagram JSON")
        c.add_argument("--presentation", required=True)
        c.set_defaults(func=func)
        if name == "reduce":
            c.add_argument("--mode", choices=("weak", "full"), default="full")
            c.add_argument("--dot", action="store_true")
        if name == "sandwich":
            c.add_argument("--split", type=int, required=True, help="boundary position ending gamma1")
    c = dsub.add_parser("random", help="seeded random diagram over a classical presentation")
    c.add_argument("file")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--cells", type=int, default=None)
    c.add_argument("--dot", action="store_true")
    c.set_defaults(func=cmd_diagram_random)
    return ap


def main(argv=None, out=None):
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    rep = Report(out, args)
    try:
        return args.func(args, rep)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except ScError as exc:
        sys.stderr.write(f"error [{exc.code}]: {exc}\n")
        if exc.code in ("SYNTAX", "VALIDATION", "NOT_CLASSICAL", "NO_SPLIT_MARKED", "NOT_WEAKLY_REDUCED"):
            return EXIT_INPUT
        return EXIT_UNKNOWN


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
