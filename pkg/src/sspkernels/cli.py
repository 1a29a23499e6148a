"""Command-line entry point: kernel profiles, empirical kernels, heatmaps
and convergence sweeps written as CSV.

Exit codes: 0 success, 2 bad arguments, 3 numerical-accuracy failure.
"""

import argparse
import io
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .analysis import (
    BuilderConfig,
    analytic_reference,
    convergence_sweep,
    default_radii,
    empirical_profile,
    heatmap2d,
)
from .exceptions import AccuracyError, DomainError
from .kernels import KernelSpec
from .sampling import RadialDistribution

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ACCURACY = 3

DEFAULT_N_LIST = "1,2,3,5,10"


class UsageError(Exception):
    pass


def fmt(x):
    """17 significant digits, locale independent."""
    return format(float(x), ".17g")


def _int_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _float_list(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return tuple(values)


def _seed(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _meta_line(command, **params):
    fields = " ".join(f"{k}={v}" for k, v in params.items())
    return f"# command={command} {fields} generator=sspkernels-{__version__}"


def write_atomic(path, text):
    """Write ``text`` to ``path`` via a temporary file and rename."""
    if path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _make_dist(args, n):
    kind = args.dist
    if kind == "uniform":
        return RadialDistribution.uniform(lam=args.lam)
    if kind == "chi":
        return RadialDistribution.chi(n, lam=args.lam)
    if kind == "scaled_beta":
        return RadialDistribution.scaled_beta(n, lam=args.lam)
    raise UsageError(f"unknown distribution {kind!r}")


def _builder_config(args):
    n = args.n
    dist = _make_dist(args, 1 if args.builder == "product" else n)
    return BuilderConfig(
        kind=args.builder,
        n=n,
        dist=dist,
        M=args.M,
        n_rotations=args.NR,
        n_scales=args.NS,
        M_per_axis=args.M_per_axis,
        scales=args.scales,
    )


def _builder_meta(args):
    meta = {"builder": args.builder, "n": args.n, "dist": args.dist, "lambda": fmt(args.lam)}
    if args.builder == "randssp":
        meta["M"] = args.M
    elif args.builder == "hexssp":
        meta.update(NR=args.NR, NS=args.NS)
        if args.scales is not None:
            meta["scales"] = ",".join(fmt(v) for v in args.scales)
    else:
        meta["M_per_axis"] = args.M_per_axis
    meta["ell"] = fmt(args.ell)
    meta["seed"] = args.seed
    return meta


def cmd_kernel_profile(args):
    radii = default_radii(1.0, args.rmax, args.points) * args.ell
    columns = []
    for n in args.n:
        spec = KernelSpec(args.kernel, n=n, ell=args.ell)
        columns.append(np.asarray(spec(radii)))
    out = io.StringIO()
    out.write(
        _meta_line(
            "kernel-profile",
            kernel=args.kernel,
            n=",".join(map(str, args.n)),
            ell=fmt(args.ell),
            rmax=fmt(args.rmax),
            points=args.points,
        )
        + "\n"
    )
    if len(args.n) == 1:
        out.write("rho,K\n")
    else:
        out.write("rho," + ",".join(f"K_n{n}" for n in args.n) + "\n")
    for i, r in enumerate(radii):
        out.write(",".join([fmt(r)] + [fmt(c[i]) for c in columns]) + "\n")
    return out.getvalue()


def cmd_empirical(args):
    cfg = _builder_config(args)
    pm = cfg.build(args.seed)
    radii = default_radii(1.0, args.rmax, args.points) * args.ell
    prof = empirical_profile(pm, args.ell, radii=radii)
    ref = np.asarray(analytic_reference(pm, args.ell)(radii))
    err = np.abs(prof.values - ref)
    out = io.StringIO()
    out.write(_meta_line("empirical", M_rows=pm.M, rmax=fmt(args.rmax), points=args.points,
                         **_builder_meta(args)) + "\n")
    out.write("rho,K_empirical,K_analytic,abs_err\n")
    for r, k, a, e in zip(radii, prof.values, ref, err):
        out.write(f"{fmt(r)},{fmt(k)},{fmt(a)},{fmt(e)}\n")
    out.write(f"# rmse={fmt(np.sqrt(np.mean(err * err)))} max_abs_err={fmt(err.max())}\n")
    return out.getvalue()


def cmd_heatmap(args):
    if args.n != 2:
        raise UsageError("heatmap needs --n 2")
    cfg = _builder_config(args)
    pm = cfg.build(args.seed)
    xs, ys, grid = heatmap2d(pm, args.ell, args.extent, args.resolution)
    out = io.StringIO()
    out.write(_meta_line("heatmap", extent=fmt(args.extent), resolution=args.resolution,
                         **_builder_meta(args)) + "\n")
    out.write("x,y,K\n")
    for i, y in enumerate(ys):
        for j, x in enumerate(xs):
            out.write(f"{fmt(x)},{fmt(y)},{fmt(grid[i, j])}\n")
    return out.getvalue()


_SWEEP_PARAMS = {"M": "M", "NR": "n_rotations", "NS": "n_scales", "M_per_axis": "M_per_axis"}


def cmd_convergence(args):
    cfg = _builder_config(args)
    param = _SWEEP_PARAMS[args.sweep_param]
    radii = default_radii(1.0, args.rmax, args.points) * args.ell
    # a throwaway matrix identifies the reference kernel for this builder
    reference = analytic_reference(cfg.build(0), args.ell)
    report = convergence_sweep(cfg, reference, args.sweep, seeds=args.seeds, param=param,
                               radii=radii, ell=args.ell, master_seed=args.seed)
    out = io.StringIO()
    meta = _builder_meta(args)
    meta.pop("seed")
    out.write(_meta_line("convergence", sweep_param=args.sweep_param,
                         sweep=",".join(map(str, args.sweep)), seeds=args.seeds, master_seed=args.seed,
                         rmax=fmt(args.rmax), points=args.points, **meta) + "\n")
    out.write("value,max_abs_err_median,rmse_median,seeds\n")
    for v, m, r in zip(report.values, report.max_abs_median, report.rmse_median):
        out.write(f"{v},{fmt(m)},{fmt(r)},{args.seeds}\n")
    if report.slope is not None:
        out.write(f"# slope={fmt(report.slope)}\n")
    return out.getvalue()


def _add_builder_args(p, default_builder="hexssp"):
    p.add_argument("--builder", choices=("hexssp", "randssp", "product"), default=default_builder)
    p.add_argument("--n", type=int, default=2, help="feature dimension")
    p.add_argument("--NR", type=int, default=50, help="hexssp orientations")
    p.add_argument("--NS", type=int, default=20, help="hexssp scales per orientation")
    p.add_argument("--scales", type=_float_list, default=None,
                   help="fixed hexssp scales, one per scale index (default: drawn)")
    p.add_argument("--M", type=int, default=1000, help="randssp row count")
    p.add_argument("--M-per-axis", dest="M_per_axis", type=int, default=1000,
                   help="product baseline rows per axis")
    p.add_argument("--dist", choices=("uniform", "chi", "scaled_beta"), default="uniform")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0, help="magnitude scale (1/length scale)")
    p.add_argument("--ell", type=float, default=1.0, help="embedding length scale")
    p.add_argument("--seed", type=_seed, default=0)


def build_parser():
    parser = argparse.ArgumentParser(prog="ssp-kernels", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernel-profile", help="analytic kernel on a radial grid")
    p.add_argument("--kernel", choices=("sinc", "gaussian", "hypergeometric", "jinc"), default="hypergeometric")
    p.add_argument("--n", type=_int_list, default=_int_list(DEFAULT_N_LIST))
    p.add_argument("--ell", type=float, default=1.0)
    p.add_argument("--rmax", type=float, default=10.0)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_kernel_profile)

    p = sub.add_parser("empirical", help="empirical similarity vs analytic kernel")
    _add_builder_args(p)
    p.add_argument("--rmax", type=float, default=10.0)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_empirical)

    p = sub.add_parser("heatmap", help="2-D similarity map around the origin")
    _add_builder_args(p)
    p.add_argument("--extent", type=float, default=10.0)
    p.add_argument("--resolution", type=int, default=101)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_heatmap)

    p = sub.add_parser("convergence", help="error vs phase-matrix size")
    _add_builder_args(p, default_builder="randssp")
    p.add_argument("--sweep-param", choices=tuple(_SWEEP_PARAMS), default="M")
    p.add_argument("--sweep", type=_int_list, default=_int_list("100,1000,10000"))
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--rmax", type=float, default=6.0)
    p.add_argument("--points", type=int, default=61)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_convergence)
    return parser


def _validate(args):
    if getattr(args, "ell", 1.0) <= 0:
        raise UsageError("--ell must be positive")
    if getattr(args, "lam", 1.0) <= 0:
        raise UsageError("--lambda must be positive")
    if getattr(args, "points", 2) < 2:
        raise UsageError("--points must be at least 2")
    if getattr(args, "rmax", 1.0) <= 0:
        raise UsageError("--rmax must be positive")
    if getattr(args, "scales", None) is not None:
        if args.builder != "hexssp":
            raise UsageError("--scales applies to the hexssp builder only")
        if len(args.scales) != args.NS:
            raise UsageError("--scales needs exactly --NS values")
    if args.command == "kernel-profile" and args.kernel == "sinc" and args.n != [1]:
        raise UsageError("the sinc kernel needs --n 1")


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        _validate(args)
        text = args.func(args)
        write_atomic(args.output, text)
    except (UsageError, DomainError) as exc:
        print(f"ssp-kernels: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AccuracyError as exc:
        print(f"ssp-kernels: accuracy failure: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
