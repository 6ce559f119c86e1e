"""Command-line front end.

Exit codes: 0 pass, 1 I/O failure, 2 usage or parse error, 3 verification
failure. Reports go to stdout, diagnostics to stderr.
"""

import argparse
import math
import sys

import numpy as np

from . import __version__
from .characterize import ToleranceConfig, Verdict, analyze, classify, is_equidistant, sphericity
from .io import (
    FORMATS,
    PointSetParseError,
    digest,
    dumps,
    load_points,
    read_input,
    serialize_points,
    write_output,
)
from .linalg import RigidMotion, apply_motion, make_rng, random_rotation
from .simplex import METHODS, SimplexSpec, construct

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_FAIL = 3

MODES = ("theorem", "distances", "sphericity")


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(value) and value > 0):
        raise argparse.ArgumentTypeError(f"must be a finite positive number: {text!r}")
    return value


def _nonnegative_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(value) and value >= 0):
        raise argparse.ArgumentTypeError(f"must be a finite number >= 0: {text!r}")
    return value


def _tolerance(text):
    value = _positive_float(text)
    if value >= 1:
        raise argparse.ArgumentTypeError(f"tolerance must be < 1: {text!r}")
    return value


def _vector(text):
    try:
        values = [float(tok) for tok in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated vector: {text!r}") from None
    if not all(math.isfinite(v) for v in values):
        raise argparse.ArgumentTypeError("vector entries must be finite")
    return np.array(values)


def _tolerances(args):
    kwargs = {}
    if args.tol is not None:
        kwargs["equidist_rel"] = args.tol
        kwargs["sphericity_rel"] = args.tol
    if args.tol_projection is not None:
        kwargs["projection_rel"] = args.tol_projection
    return ToleranceConfig(**kwargs)


def _load(path, fmt=None):
    try:
        data = read_input(path)
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}", EXIT_IO) from None
    try:
        pts, meta, fmt = load_points(data, path, fmt)
    except PointSetParseError as exc:
        raise CliError(f"{path}: {exc}", EXIT_USAGE) from None
    return pts, meta, fmt, data


def _save(text, path):
    try:
        write_output(text, path)
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}", EXIT_IO) from None


def _out_format(args, fallback):
    if args.format:
        return args.format
    if args.out and args.out.endswith(".json"):
        return "json"
    if args.out and args.out.endswith(".csv"):
        return "csv"
    return fallback


def cmd_generate(args):
    try:
        spec = SimplexSpec(
            dim=args.dim,
            sigma2=args.sigma2,
            edge=args.edge,
            method=args.method,
            centered=args.centered,
        )
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    pts = construct(spec)
    if args.seed is not None:
        pts = apply_motion(pts, random_rotation(spec.dim, args.seed))
    meta = {
        "generator": "simplexstat",
        "version": __version__,
        "method": spec.method,
        "sigma2": spec.scale,
        "centered": spec.centered,
        "seed": args.seed,
    }
    _save(serialize_points(pts, _out_format(args, "csv"), meta), args.out)
    return EXIT_OK


def _verify_one(path, args, tol):
    pts, _, _, data = _load(path, args.format)
    if pts.shape[0] < 2:
        raise CliError(f"{path}: verification needs at least 2 points", EXIT_USAGE)
    diag = classify(pts, tol)
    if args.mode == "theorem":
        passed = diag.verdict is Verdict.REGULAR_SIMPLEX
    elif args.mode == "distances":
        passed = is_equidistant(pts, tol) is not None
    else:
        sigma2_hat, resid = sphericity(pts)
        passed = sigma2_hat > 0 and resid <= tol.sphericity_rel
    if diag.inconsistent:
        print(
            f"{path}: warning: scatter and distance checks disagree at these tolerances",
            file=sys.stderr,
        )
    report = {
        "tool": "simplexstat",
        "version": __version__,
        "mode": args.mode,
        "passed": passed,
        **diag.to_dict(),
        "tolerances": tol.to_dict(),
        "input_digest": digest(data),
    }
    return report


def _text_report(report):
    lines = []
    for key, value in report.items():
        if isinstance(value, dict):
            value = ", ".join(f"{k}={v}" for k, v in value.items())
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def cmd_verify(args):
    tol = _tolerances(args)
    reports = [_verify_one(path, args, tol) for path in args.inputs]
    if args.report == "json":
        body = reports[0] if len(reports) == 1 else reports
        text = dumps(body) + "\n"
    else:
        text = "\n".join(_text_report(r) for r in reports)
    _save(text, None)
    return EXIT_OK if all(r["passed"] for r in reports) else EXIT_FAIL


def cmd_transform(args):
    pts, meta, fmt, _ = _load(args.input, args.format)
    p = pts.shape[1]
    if args.rotate_seed is not None:
        motion = random_rotation(p, args.rotate_seed)
    else:
        motion = RigidMotion.identity(p)
    if args.translate is not None:
        if args.translate.shape[0] != p:
            raise CliError(
                f"--translate has {args.translate.shape[0]} entries but points are in R^{p}",
                EXIT_USAGE,
            )
        motion = motion.with_translation(args.translate)
    out = apply_motion(pts, motion)
    _save(serialize_points(out, _out_format(args, fmt), meta), args.out)
    return EXIT_OK


def cmd_perturb(args):
    pts, meta, fmt, _ = _load(args.input, args.format)
    if args.noise_sigma > 0:
        pts = pts + args.noise_sigma * make_rng(args.seed).standard_normal(pts.shape)
    _save(serialize_points(pts, _out_format(args, fmt), meta), args.out)
    return EXIT_OK


def cmd_analyze(args):
    pts, _, _, data = _load(args.input, args.format)
    tol = _tolerances(args)
    result = analyze(pts, tol)
    result = {
        "tool": "simplexstat",
        "version": __version__,
        **result,
        "tolerances": tol.to_dict(),
        "input_digest": digest(data),
    }
    text = dumps(result) + "\n" if args.report == "json" else _text_report(result)
    _save(text, None)
    return EXIT_OK


def _add_tol_flags(sp):
    sp.add_argument(
        "--tol",
        type=_tolerance,
        help="relative tolerance for the distance and sphericity checks (default 1e-8)",
    )
    sp.add_argument(
        "--tol-projection",
        type=_tolerance,
        help="tolerance for the projection-matrix checks (default 1e-10)",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="simplexstat",
        description="Build regular simplices and test point sets for equidistance "
        "via their scatter matrix.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write the p+1 vertices of a regular simplex")
    g.add_argument("--dim", type=int, required=True, help="ambient dimension p >= 1")
    scale = g.add_mutually_exclusive_group(required=True)
    scale.add_argument("--sigma2", type=_positive_float, help="half the squared edge length")
    scale.add_argument("--edge", type=_positive_float, help="edge length")
    g.add_argument("--method", choices=METHODS, default="incremental")
    g.add_argument("--seed", type=int, help="apply a seeded random rotation")
    g.add_argument(
        "--centered",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="subtract the centroid (default: yes)",
    )
    g.add_argument("--format", choices=FORMATS)
    g.add_argument("--out", help="output file (default stdout)")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="check point sets; exit 0 on pass, 3 on failure")
    v.add_argument("inputs", nargs="+", help="point-set files, '-' for stdin")
    v.add_argument("--mode", choices=MODES, default="theorem")
    v.add_argument("--report", choices=("text", "json"), default="text")
    v.add_argument("--format", choices=FORMATS, help="input format (default: sniff)")
    _add_tol_flags(v)
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("analyze", help="dump all numeric diagnostics")
    a.add_argument("input")
    a.add_argument("--report", choices=("text", "json"), default="json")
    a.add_argument("--format", choices=FORMATS, help="input format (default: sniff)")
    _add_tol_flags(a)
    a.set_defaults(func=cmd_analyze)

    t = sub.add_parser("transform", help="apply a seeded rotation and/or a translation")
    t.add_argument("input")
    t.add_argument("--rotate-seed", type=int)
    t.add_argument("--translate", type=_vector, metavar="C1,C2,...")
    t.add_argument("--format", choices=FORMATS, help="output format (default: input's)")
    t.add_argument("--out")
    t.set_defaults(func=cmd_transform)

    pb = sub.add_parser("perturb", help="add seeded Gaussian noise to every coordinate")
    pb.add_argument("input")
    pb.add_argument("--noise-sigma", type=_nonnegative_float, required=True)
    pb.add_argument("--seed", type=int, default=0)
    pb.add_argument("--format", choices=FORMATS, help="output format (default: input's)")
    pb.add_argument("--out")
    pb.set_defaults(func=cmd_perturb)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except CliError as exc:
        print(f"simplexstat {args.command}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
