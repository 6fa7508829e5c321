"""Command-line front end: emit, eval, verify, torelli.

Exit codes: 0 success, 1 usage or input error, 2 verification failure,
3 irrational branch points, 4 curve not of Gamma type.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import modulimaps as mm
from . import verify as vf
from .exactcore import ExactError, MultiPoly
from .projgeom import BiCurve, BirMapP2, ProjPoint, RuledMap, Undefined, apply, from_json, to_json

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_IRRATIONAL, EXIT_NOT_GAMMA = 0, 1, 2, 3, 4

MAP_ALIASES = {"phi": "phiTilde", "Phi": "phiTilde"}
EMIT_OBJECTS = ("gamma", "sigma", "conic", "lines", "points", "map")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2, which is reserved for verification failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _add_params(p: argparse.ArgumentParser):
    g = p.add_argument_group("parameters")
    g.add_argument("--lambda", dest="lam", type=_fraction, help="rational lambda (needs --t)")
    g.add_argument("--t", type=_fraction, help="rational t (needs --lambda)")
    g.add_argument("--s", type=_fraction, help="rational s with s^2 = t(t-1)(t-lambda)")
    g.add_argument("--symbolic", action="store_true", help="keep lambda and t as variables (default)")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("-o", "--output", help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="parabolic-moduli", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    emit = sub.add_parser("emit", help="print a curve, point set or map")
    emit.add_argument("object", choices=EMIT_OBJECTS)
    emit.add_argument("name", nargs="?", help="map name for 'emit map'")
    _add_params(emit)

    ev = sub.add_parser("eval", help="apply a named map to a point")
    ev.add_argument("map")
    ev.add_argument("--point", required=True, help="b0,b1,b2 or (z0,z1),(w0,w1)")
    _add_params(ev)

    ver = sub.add_parser("verify", help="run the certificate suite")
    _add_params(ver)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--jobs", type=int, default=1)
    ver.add_argument("-k", "--check", action="append", dest="patterns", metavar="PATTERN",
                     help="glob over check names (repeatable)")
    ver.add_argument("--include-printed", action="store_true",
                     help="also run the checks of formulas as typeset")
    ver.add_argument("--timings", action="store_true", help="include elapsed_ms in the report")

    tor = sub.add_parser("torelli", help="recover (lambda, t) from a Gamma-type curve")
    tor.add_argument("curve", help="JSON file with a bicurve ('-' for stdin)")
    tor.add_argument("--format", choices=("json", "text"), default="json")
    tor.add_argument("-o", "--output")
    return parser


def params_from_args(args) -> mm.ModuliParams:
    numeric = [x is not None for x in (args.lam, args.t, args.s)]
    if args.symbolic and any(numeric):
        raise UsageError("--symbolic excludes --lambda, --t and --s")
    if args.lam is None and args.t is None:
        if args.s is not None:
            raise UsageError("--s needs --lambda and --t")
        return mm.ModuliParams.symbolic()
    if args.lam is None or args.t is None:
        raise UsageError("numeric runs need both --lambda and --t")
    try:
        return mm.ModuliParams.rational(args.lam, args.t, args.s)
    except mm.DegenerateParams as exc:
        raise UsageError(str(exc))


# ------------------------------------------------------------------ emit


def emit_object(obj: str, name, params: mm.ModuliParams):
    """The requested object as a library value."""
    if obj == "gamma":
        return mm.gamma_curve(params)
    if obj == "sigma":
        return mm.sigma_cubic(params)
    if obj == "conic":
        return mm.standard_conic(params)
    if obj == "points":
        return {mm.label_str(k): p for k, p in mm.special_points(params).items()}
    if obj == "lines":
        return {mm.label_str(i) + "," + mm.label_str(j): c for (i, j), c in mm.standard_lines(params).items()}
    if obj == "map":
        if not name:
            raise UsageError(f"'emit map' needs a name, one of {', '.join(mm.MAP_TAGS)}")
        return named(name, params)
    raise UsageError(f"unknown object {obj!r}")


def named(name: str, params):
    tag = MAP_ALIASES.get(name, name)
    try:
        return mm.named_map(tag, params)
    except (KeyError, ValueError):
        raise UsageError(f"unknown map {name!r}; known: {', '.join(mm.MAP_TAGS)}")


def serialize(value) -> dict:
    if isinstance(value, dict):
        kind = "points" if all(isinstance(v, ProjPoint) for v in value.values()) else "lines"
        return {"kind": kind, "payload": {k: to_json(v) for k, v in value.items()}}
    return to_json(value)


def parse_emitted(data: dict):
    """Inverse of :func:`serialize`."""
    if data["kind"] in ("points", "lines"):
        return {k: from_json(v) for k, v in data["payload"].items()}
    return from_json(data)


def render_text(value) -> str:
    if isinstance(value, dict):
        return "\n".join(f"{k}: {render_text(v)}" for k, v in value.items())
    if isinstance(value, BirMapP2):
        return "\n".join(f"b{i}' = {c}" for i, c in enumerate(value.components))
    if isinstance(value, RuledMap):
        (z0, z1), (w0, w1) = value.zpair, value.wpair
        return f"z = ({z1}) / ({z0})\nw = ({w1}) / ({w0})"
    return str(value)


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


# ------------------------------------------------------------------ eval

_GROUP = re.compile(r"\(([^()]*)\)")


def parse_point(text: str):
    """'b0,b1,b2' gives a P^2 point; '(z0,z1),(w0,w1)' a point of P^1 x P^1."""
    text = text.strip()
    try:
        if "(" in text:
            groups = _GROUP.findall(text)
            if len(groups) != 2:
                raise UsageError("a P1xP1 point has the form (z0,z1),(w0,w1)")
            pts = [[Fraction(x) for x in g.split(",")] for g in groups]
            if any(len(c) != 2 for c in pts):
                raise UsageError("each P1 factor needs two coordinates")
            return tuple(ProjPoint(c) for c in pts)
        coords = [Fraction(x) for x in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse point {text!r}")
    if len(coords) != 3:
        raise UsageError("a P2 point has three coordinates")
    return ProjPoint(coords)


def _base_point_name(pt: ProjPoint, params) -> str | None:
    for k, D in mm.special_points(params).items():
        if pt == D:
            return f"D_{mm.label_str(k)}"
    return None


def evaluate(name: str, point, params):
    """Image of a point, or the string 'undefined (...)' at a base point."""
    f = named(name, params)
    on_plane = isinstance(f, BirMapP2) or (isinstance(f, RuledMap) and f.source == "P2")
    if on_plane != isinstance(point, ProjPoint):
        raise UsageError(f"map {name} takes a {'P2' if on_plane else 'P1xP1'} point")
    try:
        return apply(f, point)
    except Undefined:
        where = _base_point_name(point, params) if on_plane else None
        return f"undefined (base point {where})" if where else "undefined (base point)"


def _coord(c: MultiPoly) -> str:
    return str(c)


def format_image(image) -> str:
    if isinstance(image, str):
        return image
    if isinstance(image, ProjPoint):
        return ",".join(_coord(c) for c in image.coords)
    return ",".join("(" + ",".join(_coord(c) for c in p.coords) + ")" for p in image)


# ---------------------------------------------------------------- drivers


def _write(args, text: str):
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_emit(args) -> int:
    value = emit_object(args.object, args.name, params_from_args(args))
    _write(args, render_text(value) if args.format == "text" else _dumps(serialize(value)))
    return EXIT_OK


def cmd_eval(args) -> int:
    params = params_from_args(args)
    image = evaluate(args.map, parse_point(args.point), params)
    if args.format == "text":
        _write(args, format_image(image))
    elif isinstance(image, str):
        _write(args, _dumps({"undefined": True, "message": image}))
    else:
        pts = [image] if isinstance(image, ProjPoint) else list(image)
        _write(args, _dumps({"image": [[_coord(c) for c in p.coords] for p in pts]}))
    return EXIT_OK


def cmd_verify(args) -> int:
    params = params_from_args(args)
    if params.is_numeric():
        plan = vf.VerifyPlan(mode="specialized", params=((params.lam_value, params.t_value),),
                             patterns=tuple(args.patterns or ("*",)), jobs=args.jobs, seed=args.seed,
                             include_printed=args.include_printed)
    else:
        plan = vf.VerifyPlan(patterns=tuple(args.patterns or ("*",)), jobs=args.jobs, seed=args.seed,
                             include_printed=args.include_printed)
    try:
        certs = vf.run_suite(plan)
    except vf.InvalidPlan as exc:
        raise UsageError(str(exc))
    doc = vf.report(certs, seed=plan.seed, mode=plan.mode, timings=args.timings)
    if args.format == "text":
        lines = [f"{c.status.upper():7s} {c.name}" + (f"  ({c.reason})" if c.reason else "") for c in certs]
        s = doc["summary"]
        lines.append(f"{s['pass']} passed, {s['fail']} failed, {s['skipped']} skipped (seed {plan.seed})")
        _write(args, "\n".join(lines))
    else:
        _write(args, _dumps(doc))
    return EXIT_VERIFY if doc["summary"]["fail"] else EXIT_OK


def read_curve(path: str) -> BiCurve:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
        curve = from_json(json.loads(text))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read curve from {path}: {exc}")
    if not isinstance(curve, BiCurve):
        raise UsageError("torelli needs a bicurve")
    return curve


def cmd_torelli(args) -> int:
    res = mm.torelli_reconstruct(read_curve(args.curve))
    if args.format == "text":
        cls = ", ".join(f"({a}, {b})" for a, b in res.candidates)
        _write(args, f"lambda = {res.lam}\nt = {res.t}\nz-map: {res.zmap}\nw-map: {res.wmap}\nclass: {cls}")
    else:
        _write(args, _dumps(res.to_json()))
    return EXIT_OK


COMMANDS = {"emit": cmd_emit, "eval": cmd_eval, "verify": cmd_verify, "torelli": cmd_torelli}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except mm.IrrationalBranch as exc:
        print(f"error: irrational branch points: {exc}", file=sys.stderr)
        return EXIT_IRRATIONAL
    except mm.NotGammaType as exc:
        print(f"error: not a Gamma-type curve: {exc}", file=sys.stderr)
        return EXIT_NOT_GAMMA
    except ExactError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
