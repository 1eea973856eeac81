"""conelab command line: metric, verify, gromov, horo, geodesic, reconstruct.

Exit codes: 0 pass, 1 check failure, 2 input error, 3 math precondition.
"""

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import cones as C
from . import geodesics as geo
from . import reconstruction as rec
from .antimorphism import identity_map
from .errors import ConeError, InputError
from .spin import inversion_map
from .suites import DEFAULT_SAMPLES, DEFAULT_TOLERANCES, RunConfig, run_verify

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_MATH = 0, 1, 2, 3
MAP_SELECTORS = ("builtin:inversion", "builtin:conjugated-inversion", "builtin:identity")


def format_scalar(v):
    if v == 0.0:
        return "0"
    return f"{v:#.15g}"


def load_json_arg(text, what):
    """Inline JSON, or a path to a JSON file."""
    if text is None:
        raise InputError(f"missing --{what}")
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"--{what}: not valid JSON ({exc})") from None


def load_cone(text):
    return C.cone_from_json(load_json_arg(text, "cone"))


def load_point(cone, text, what):
    return cone.check_dim(C.point_from_json(load_json_arg(text, what)))


def parse_floats(text, what):
    """"a,b,c" or a JSON list."""
    try:
        if text.strip().startswith("["):
            vals = json.loads(text)
        else:
            vals = [float(t) for t in text.split(",") if t.strip()]
        return [float(v) for v in vals]
    except (ValueError, json.JSONDecodeError):
        raise InputError(f"--{what}: expected a comma separated list of numbers, got {text!r}") from None


def parse_t_grid(text):
    """"start:stop:count" (inclusive linspace) or a list."""
    if ":" in text:
        parts = text.split(":")
        try:
            a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
        except (ValueError, IndexError):
            raise InputError(f"--t: expected start:stop:count, got {text!r}") from None
        if n < 1:
            raise InputError("--t: count must be positive")
        return [float(t) for t in np.linspace(a, b, n)]
    return parse_floats(text, "t")


def resolve_map(selector, cone):
    if selector is None:
        return None
    if selector not in MAP_SELECTORS:
        raise InputError(f"unknown map selector {selector!r}; choose from {', '.join(MAP_SELECTORS)}")
    if selector == "builtin:identity":
        return identity_map(cone)
    g = inversion_map(cone)
    if selector == "builtin:inversion" and g.name != "inversion":
        raise InputError("builtin:inversion needs a Lorentz cone; use builtin:conjugated-inversion")
    if selector == "builtin:conjugated-inversion" and g.name != "conjugated-inversion":
        raise InputError("builtin:conjugated-inversion needs a linear image of a Lorentz cone")
    return g


def build_config(args):
    tolerances = dict(DEFAULT_TOLERANCES)
    for item in args.tol or ():
        name, sep, val = item.partition("=")
        if not sep or name not in tolerances:
            raise InputError(f"--tol expects NAME=VAL with NAME in {sorted(tolerances)}, got {item!r}")
        try:
            tolerances[name] = float(val)
        except ValueError:
            raise InputError(f"--tol {name}: {val!r} is not a number") from None
    seed = args.seed
    env = os.environ.get("CONELAB_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise InputError(f"CONELAB_SEED={env!r} is not an integer") from None
    samples = dict(DEFAULT_SAMPLES)
    if args.samples is not None:
        samples["default"] = args.samples
    return RunConfig(seed, tolerances, samples, args.out)


def emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def dump_json(obj):
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def dump_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(c)) if isinstance(c, float) else c for c in row])
    return buf.getvalue()


# -- subcommands -----------------------------------------------------------

def cmd_metric(args):
    cone = load_cone(args.cone)
    x = load_point(cone, args.x, "x")
    if args.quantity == "norm":
        value = C.order_unit_norm(cone, x)
    else:
        y = load_point(cone, args.y, "y")
        value = {"M": C.gauge, "dH": C.hilbert, "dT": C.thompson}[args.quantity](cone, x, y)
    emit(format_scalar(value) + "\n", args.out)
    return EXIT_PASS


def cmd_verify(args):
    cone = load_cone(args.cone)
    config = build_config(args)
    g = resolve_map(args.map, cone)
    result = run_verify(cone, g, config, expect_negative=args.expect_negative)
    emit(dump_json(result.to_json()), config.out)
    print(f"{result.name}: {'pass' if result.passed else 'FAIL'} in {result.wall_time:.2f}s", file=sys.stderr)
    return EXIT_PASS if result.passed else EXIT_FAIL


def cmd_gromov(args):
    cone = load_cone(args.cone)
    eta1 = C.point_from_json(load_json_arg(args.eta1, "eta1"))
    eta2 = C.point_from_json(load_json_arg(args.eta2, "eta2"))
    svals = parse_floats(args.s_values, "s-values")
    records = geo.gromov_experiment(cone, eta1, eta2, svals)
    emit(dump_csv(["s", "value", "branch"], [(r.s, r.value, r.branch) for r in records]), args.out)
    return EXIT_PASS


def cmd_horo(args):
    cone = load_cone(args.cone)
    eta = load_point(cone, args.eta, "eta")
    z = load_point(cone, args.z, "z")
    res = geo.horo_limit(cone, eta, z, parse_floats(args.s_values, "s-values"))
    emit(dump_csv(["s", "estimate"], zip(res.s, res.estimates)), args.out)
    return EXIT_PASS


def cmd_geodesic(args):
    cone = load_cone(args.cone)
    x = load_point(cone, args.x, "x")
    ts = parse_t_grid(args.t)
    if args.type == "II":
        gam = geo.TypeIIGeodesic(x)
    else:
        z = load_point(cone, args.z, "z")
        gam, _ = geo.typeI_through(cone, x, z)
    emit(dump_json([C.point_to_json(gam(t)) for t in ts]), args.out)
    return EXIT_PASS


def cmd_reconstruct(args):
    cone = load_cone(args.cone)
    config = build_config(args)
    g = resolve_map(args.map, cone)
    tols = {"b_asymmetry": config.tol("reconstruction"), "residual": config.tol("reconstruction")}
    report = rec.reconstruct_jordan(cone, g, basis_samples=config.count(), seed=config.master_seed, tols=tols)
    emit(dump_json(report.to_json()), config.out)
    expected = rec.Verdict.NOT_SPIN_FACTOR if args.expect_negative else rec.Verdict.SPIN_FACTOR
    return EXIT_PASS if report.verdict is expected else EXIT_FAIL


# -- parser ----------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="conelab", description="Order unit space geometry toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, run=False):
        p.add_argument("--cone", required=True, help="cone descriptor: JSON file or inline JSON")
        p.add_argument("--out", help="write output here instead of stdout")
        if run:
            p.add_argument("--map", choices=MAP_SELECTORS, help="antimorphism selector")
            p.add_argument("--seed", type=int, default=0, help="master seed (CONELAB_SEED overrides)")
            p.add_argument("--samples", type=int, help="default sample count (500)")
            p.add_argument("--tol", action="append", metavar="NAME=VAL",
                           help="override a tolerance: boundary, gauge_rel, symmetry, reconstruction")
            p.add_argument("--expect-negative", action="store_true",
                           help="pass when the detector rejects the cone (NotSpinFactor)")

    p = sub.add_parser("metric", help="gauge, Hilbert/Thompson distance or order unit norm")
    common(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y")
    p.add_argument("--quantity", choices=("M", "dH", "dT", "norm"), default="M")
    p.set_defaults(func=cmd_metric)

    p = sub.add_parser("verify", help="property-by-property verification suite")
    common(p, run=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gromov", help="Gromov products toward boundary targets (CSV)")
    common(p)
    p.add_argument("--eta1", default="[1.0, 0.0]", help="boundary target in section coordinates")
    p.add_argument("--eta2", default="[-1.0, 0.0]")
    p.add_argument("--s-values", default=",".join(f"1e-{k}" for k in range(7)))
    p.set_defaults(func=cmd_gromov)

    p = sub.add_parser("horo", help="horofunction limit estimates (CSV)")
    common(p)
    p.add_argument("--eta", required=True)
    p.add_argument("--z", required=True)
    p.add_argument("--s-values", default=",".join(f"1e-{k}" for k in range(1, 6)))
    p.set_defaults(func=cmd_horo)

    p = sub.add_parser("geodesic", help="sample a type I or type II geodesic (JSON)")
    common(p)
    p.add_argument("--type", choices=("I", "II"), default="II")
    p.add_argument("--x", required=True)
    p.add_argument("--z", help="second point for type I")
    p.add_argument("--t", default="-1:1:5", help="start:stop:count or a list")
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("reconstruct", help="rebuild the spin factor from cone data (JSON)")
    common(p, run=True)
    p.set_defaults(func=cmd_reconstruct)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PASS if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"conelab: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConeError, ArithmeticError) as exc:
        print(f"conelab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MATH
    except OSError as exc:
        print(f"conelab: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
