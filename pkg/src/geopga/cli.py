"""Command line interface: ``geopga <command> ...``.

Commands: gen, lift, fit, reconstruct, mean, stats. Exit status 0 on
success, 2 for usage errors, 3 for invalid data and 4 for numerical
failures; failures print one ``error: <kind>: <message>`` line to stderr.
"""

import argparse
import re
import sys

import numpy as np

from . import io
from .exceptions import NumericalError, ValidationError
from .lift import lift_trajectory
from .manifold import NORTH2, SCHEMES, as_layout
from .pga import (
    MeanConfig,
    PgaModel,
    build_snapshot_matrix,
    intrinsic_mean,
    lift_at_mean,
    pga_fit,
    reconstruct_trajectory,
)
from .stats import (
    bin_counts,
    lift_project_error,
    log_project_error,
    orth_normality_errors,
    summarize,
)
from .trajgen import KINDS, GenSpec, generate

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4

_ANGLE = re.compile(r"^([+-]?)((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?(\*?pi)?(?:/(\d+\.?\d*))?$")


def parse_angle(text):
    """Angle from strings such as ``'5pi'``, ``'-pi/2'``, ``'2*pi'`` or ``'1.25'``."""
    s = text.strip().lower()
    m = _ANGLE.match(s)
    if m is None or (m.group(2) is None and m.group(3) is None):
        raise argparse.ArgumentTypeError(f"bad angle {text!r}")
    if m.group(3) is not None and m.group(3).startswith("*") and m.group(2) is None:
        raise argparse.ArgumentTypeError(f"bad angle {text!r}")
    value = float(m.group(2)) if m.group(2) else 1.0
    if m.group(3):
        value *= np.pi
    if m.group(4):
        value /= float(m.group(4))
    return -value if m.group(1) == "-" else value


def parse_vector(text):
    try:
        v = [float(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad vector {text!r}") from None
    if len(v) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated numbers")
    return tuple(v)


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("expected a nonnegative integer")
    return v


def build_parser():
    p = argparse.ArgumentParser(prog="geopga", description="Principal geodesic analysis on S2 and SO(3).")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a synthetic trajectory file")
    g.add_argument("--kind", choices=KINDS, default="winding")
    g.add_argument("--manifold", choices=("S2", "SO3"), default="SO3")
    g.add_argument("--n", type=int, default=100)
    g.add_argument("--angle", type=parse_angle, default=np.pi)
    g.add_argument("--axis", type=parse_vector, default=(0.0, 0.0, 1.0))
    g.add_argument("--amplitude", type=float, default=1.0)
    g.add_argument("--omega", type=float, default=1.0)
    g.add_argument("--dt", type=float, default=0.01)
    g.add_argument("--step", type=float, default=0.1)
    g.add_argument("--noise", type=float, default=1e-6)
    g.add_argument("--seed", type=_nonneg_int, default=0)
    g.add_argument("-o", "--output", required=True)

    lf = sub.add_parser("lift", help="lift a trajectory into the tangent space at its first sample")
    lf.add_argument("trajectory")
    lf.add_argument("--scheme", choices=SCHEMES, default=NORTH2)
    lf.add_argument("-o", "--output", required=True)

    f = sub.add_parser("fit", help="fit a PGA model to a lift file")
    f.add_argument("lift")
    f.add_argument("--rank", type=_nonneg_int, default=None)
    f.add_argument("--keep-first", action="store_true",
                   help="keep the first lifted sample (multi-trajectory lifts at a mean)")
    f.add_argument("-o", "--output", required=True)

    r = sub.add_parser("reconstruct", help="rank-p reconstruction of the fitted snapshots")
    r.add_argument("model")
    r.add_argument("--rank", type=_nonneg_int, default=None)
    r.add_argument("-o", "--output", required=True)

    m = sub.add_parser("mean", help="intrinsic mean of one or more trajectory files")
    m.add_argument("trajectories", nargs="+")
    m.add_argument("--alpha", type=float, default=1.0)
    m.add_argument("--tol", type=float, default=1e-12)
    m.add_argument("--max-iter", type=_nonneg_int, default=200)
    m.add_argument("--scheme", choices=SCHEMES, default=NORTH2)
    m.add_argument("--lift-output", help="also write all trajectories lifted at the mean")
    m.add_argument("-o", "--output", required=True)

    s = sub.add_parser("stats", help="error statistics of a trajectory (and its lift)")
    s.add_argument("trajectory")
    s.add_argument("lift", nargs="?")
    s.add_argument("--metric", choices=("lift", "log", "orth"), default=None,
                   help="lift-and-project (default with a lift file), log-and-project "
                        "(default otherwise) or orthogonality/normality errors")
    s.add_argument("--angular", help="write (theta, error) pairs to this CSV file")
    s.add_argument("-o", "--output", help="histogram CSV file")
    return p


def _read_trajectory(path, out):
    parsed = io.parse_trajectory(io.read_text(path))
    if parsed.n_projected:
        print(f"warning: {path}: projected {parsed.n_projected} component(s) onto the manifold",
              file=out)
    return parsed


def _cmd_gen(args, out):
    spec = GenSpec(kind=args.kind, manifold=args.manifold, n=args.n, axis=args.axis,
                   angle=args.angle, amplitude=args.amplitude, omega=args.omega, dt=args.dt,
                   step=args.step, noise=args.noise, seed=args.seed)
    X = generate(spec)
    io.write_text(args.output, io.serialize_trajectory(X, spec.manifold))
    print(f"wrote {X.shape[0]} samples to {args.output}", file=out)


def _lift_summary(lift):
    norms = [np.linalg.norm(lift.tangents[-1, sl]) for sl in lift.layout.tangent_slices()]
    crossings = lift.crossings().tolist()
    return (f"samples={len(lift)} crossings={crossings} "
            f"final_norms={[float(v) for v in norms]}")


def _cmd_lift(args, out):
    parsed = _read_trajectory(args.trajectory, out)
    lift = lift_trajectory(parsed.X, as_layout(parsed.layout, args.scheme))
    io.write_text(args.output, io.serialize_lift(lift))
    print(_lift_summary(lift), file=out)


def _cmd_fit(args, out):
    lift = io.parse_lift(io.read_text(args.lift))
    Y = build_snapshot_matrix(lift, drop_first=not args.keep_first)
    model = pga_fit(Y, lift.base, lift.layout)
    p = model.rank if args.rank is None else args.rank
    if p > model.rank:
        raise ValidationError(f"rank {p} exceeds the numerical rank {model.rank}")
    model = PgaModel(model.base, model.layout, model.U[:, :p], model.singular_values[:p],
                     model.V[:, :p], model.all_singular_values)
    io.write_text(args.output, io.serialize_model(model))
    ratios = model.singular_value_ratios()
    sigma1 = float(model.all_singular_values[0]) if ratios.size else 0.0
    ratio2 = float(ratios[1]) if ratios.size > 1 else 0.0
    print(f"rank={model.rank} sigma1={sigma1!r} sigma2/sigma1={ratio2!r}", file=out)


def _cmd_reconstruct(args, out):
    model = io.parse_model(io.read_text(args.model))
    p = model.rank if args.rank is None else args.rank
    X = reconstruct_trajectory(model, p)
    io.write_text(args.output, io.serialize_trajectory(X, model.layout))
    print(f"wrote {X.shape[0]} samples (rank {p}) to {args.output}", file=out)


def _cmd_mean(args, out):
    parsed = [_read_trajectory(path, out) for path in args.trajectories]
    layouts = {str(p.layout) for p in parsed}
    if len(layouts) != 1:
        raise ValidationError(f"trajectory files have different layouts: {sorted(layouts)}")
    layout = as_layout(parsed[0].layout, args.scheme)
    X = np.concatenate([p.X for p in parsed], axis=0)
    res = intrinsic_mean(X, layout, MeanConfig(args.alpha, args.max_iter, args.tol))
    io.write_text(args.output, io.serialize_trajectory(res.mean[None], layout))
    if args.lift_output:
        lift = lift_at_mean([p.X for p in parsed], layout, res.mean)
        io.write_text(args.lift_output, io.serialize_lift(lift))
    print(f"iterations={res.n_iter} grad_norm={res.grad_norm!r}", file=out)


def _cmd_stats(args, out):
    parsed = _read_trajectory(args.trajectory, out)
    metric = args.metric or ("lift" if args.lift else "log")
    if metric == "lift":
        if not args.lift:
            raise ValidationError("metric 'lift' needs a lift file")
        lift = io.parse_lift(io.read_text(args.lift))
        if lift.layout.components != parsed.layout.components:
            raise ValidationError("trajectory and lift layouts differ")
        records = lift_project_error(parsed.X, lift)
    elif metric == "log":
        records = log_project_error(parsed.X, parsed.layout)
    else:
        records = orth_normality_errors(parsed.X, parsed.layout)
    hist = bin_counts(records)
    if args.output:
        io.write_histogram_csv(args.output, hist)
    if args.angular:
        io.write_angular_csv(args.angular, records)
    print(f"metric={metric} {summarize(records).format()}", file=out)


_COMMANDS = {
    "gen": _cmd_gen,
    "lift": _cmd_lift,
    "fit": _cmd_fit,
    "reconstruct": _cmd_reconstruct,
    "mean": _cmd_mean,
    "stats": _cmd_stats,
}


def _fail(kind, exc, err):
    msg = " ".join(str(exc).split())
    print(f"error: {kind}: {msg}", file=err)


def run_command(argv=None, out=None, err=None):
    """Run one command; returns the exit status instead of exiting."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        _COMMANDS[args.command](args, out)
    except ValidationError as exc:
        _fail("validation", exc, err)
        return EXIT_DATA
    except OSError as exc:
        _fail("io", exc, err)
        return EXIT_DATA
    except NumericalError as exc:
        _fail("numerical", exc, err)
        return EXIT_NUMERICAL
    return EXIT_OK


def main(argv=None):
    sys.exit(run_command(argv))
