"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 numerical contract violation.
"""
from __future__ import annotations

import argparse
import io
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .circular import decompose_posterior, verify_decomposition
from .comparison import Method, homodyne_posterior, resolution_scan, vogel_schleich_density, vs_agreement_check
from .exceptions import ContractError, DomainError
from .inference import (
    PhaseInterval,
    asymptotic_posterior,
    empirical_posterior,
    fisher_information,
    gaussian_width,
    ml_estimate,
    relative_entropy,
    shannon_entropy,
)
from .numerics import Grid1D
from .sampling import SampleParseError, draw_samples, read_samples, sample_moments
from .states import StateModel

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_CONTRACT = 4


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _finite(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text!r}")
    return value


def _angle(args, value):
    if value is None:
        return None
    return math.radians(value) if args.degrees else value


def _model(args, require_amp=True) -> StateModel:
    if args.amp is None and require_amp:
        raise UsageError("--amp is required")
    return StateModel(
        amp=args.amp if args.amp is not None else 0.0,
        sig_phase=_angle(args, args.sig_phase),
        squeeze=args.squeeze,
    )


def _write_text(path, text: str) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    Path(path).write_text(text, newline="\n")


def _table(header: str, columns, fmt="%.17g") -> str:
    buf = io.StringIO()
    np.savetxt(buf, np.column_stack(columns), fmt=fmt, delimiter=",", header=header, comments="", newline="\n")
    return buf.getvalue()


def _scan_thetas(args, closed=True) -> np.ndarray:
    return np.linspace(0.0, math.pi, args.points, endpoint=closed)


def cmd_simulate(args) -> int:
    if args.theta_prime is None:
        raise UsageError("--theta-prime is required")
    if args.n is None:
        raise UsageError("--n is required")
    if args.out is None:
        raise UsageError("--out is required")
    samples = draw_samples(_model(args), _angle(args, args.theta_prime), args.n, args.seed)
    samples.to_csv(args.out)
    line = f"n={samples.n} mean={float(np.mean(samples.values)):.17g}"
    if samples.n >= 2:
        line += f" std={sample_moments(samples)[1]:.17g}"
    print(line)
    return EXIT_OK


def cmd_estimate(args) -> int:
    if args.input is None:
        raise UsageError("--input is required")
    model = _model(args)
    samples = read_samples(args.input)
    dist = empirical_posterior(model, samples.values, args.interval, args.grid)
    dist.check_normalized()
    report = ml_estimate(dist)
    if args.out is not None:
        dist.to_csv(args.out)
        report_path = args.report or Path(args.out).with_suffix(".json")
        Path(report_path).write_text(report.to_json() + "\n", newline="\n")
    elif args.report is not None:
        Path(args.report).write_text(report.to_json() + "\n", newline="\n")
    print(report.to_json())
    return EXIT_OK


def cmd_entropy_scan(args) -> int:
    model = _model(args)
    thetas = _scan_thetas(args)
    phi = _angle(args, args.phi)
    phis = thetas if phi is None else np.full_like(thetas, phi)
    values = np.array([relative_entropy(model, t, p) for t, p in zip(thetas, phis)])
    shannon = np.full_like(thetas, shannon_entropy(model))
    _write_text(args.out, _table("theta_prime,phi,relative_entropy,shannon_entropy", [thetas, phis, values, shannon]))
    return EXIT_OK


def cmd_fisher_scan(args) -> int:
    model = _model(args)
    thetas = _scan_thetas(args)
    info = np.array([fisher_information(model, t) for t in thetas])
    lines = ["theta_prime,fisher_information,gaussian_width"]
    for t, i in zip(thetas, info):
        w = gaussian_width(model, t, args.n or 1)
        lines.append(f"{t:.17g},{i:.17g},{'' if w is None else format(w, '.17g')}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def figure1_table(n_alpha_sq: float = 100.0, thetas: int = 181, grid: int = 2048) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Half-interval posteriors for true phases ``linspace(0, pi, thetas)``.

    Returns ``(theta, phi, density)`` where ``density[i]`` is the row for ``theta[i]``.
    """
    model = StateModel(amp=math.sqrt(n_alpha_sq), sig_phase=0.0)
    theta = np.linspace(0.0, math.pi, thetas)
    rows = []
    phi = None
    for t in theta:
        dist = asymptotic_posterior(model, t, 1, PhaseInterval.HALF, grid)
        dist.check_normalized()
        rows.append(dist.density)
        phi = dist.phi
    return theta, np.asarray(phi), np.vstack(rows)


def cmd_figure1(args) -> int:
    theta, phi, density = figure1_table(args.n_alpha_sq, args.thetas, args.grid or 2048)
    tt = np.repeat(theta, phi.size)
    pp = np.tile(phi, theta.size)
    header = f"# n_alpha_sq={args.n_alpha_sq!r},thetas={theta.size},grid={phi.size}\ntheta,phi,density"
    _write_text(args.out, _table(header, [tt, pp, density.ravel()]))
    return EXIT_OK


def cmd_resolution(args) -> int:
    if args.n is None:
        raise UsageError("--n is required")
    model = _model(args)
    thetas = _scan_thetas(args, closed=False)
    curve = resolution_scan(model, args.n, thetas, args.method, args.grid)
    _write_text(args.out, curve.csv_text())
    return EXIT_OK


def cmd_decompose(args) -> int:
    theta = _angle(args, args.theta_prime) or 0.0
    f1, f2 = decompose_posterior(args.n_alpha_sq, theta)
    grid = Grid1D.circle(0.0, 2 * math.pi, args.grid or 4096)
    err = verify_decomposition(args.n_alpha_sq, theta, grid)
    print(f"kappa1={f1.kappa!r} beta1={f1.beta!r} kappa2={f2.kappa!r} beta2={f2.beta!r} max_abs_error={err:.3e}")
    if args.out is not None:
        phi = grid.nodes
        direct = asymptotic_posterior(StateModel(amp=math.sqrt(args.n_alpha_sq)), theta, 1, PhaseInterval.FULL, grid.count)
        _write_text(args.out, _table("phi,density", [phi, direct.density]))
    return EXIT_OK


def cmd_compare_vs(args) -> int:
    err = vs_agreement_check(args.n_alpha_sq, args.grid)
    print(f"n_alpha_sq={args.n_alpha_sq!r} max_abs_error={err:.3e}")
    if args.out is not None:
        grid = PhaseInterval.HALF.grid(args.grid)
        vs = vogel_schleich_density(StateModel(amp=math.sqrt(args.n_alpha_sq), sig_phase=-math.pi / 2), grid)
        ml = homodyne_posterior(args.n_alpha_sq, 0.0, PhaseInterval.HALF, args.grid)
        _write_text(args.out, _table("theta,vogel_schleich,ml_homodyne", [grid.nodes, vs.density, ml.density]))
    return EXIT_OK


def _add_state(p):
    p.add_argument("--amp", type=_finite, help="coherent amplitude |alpha|")
    p.add_argument("--sig-phase", type=_finite, default=0.0, help="signal phase")
    p.add_argument("--squeeze", type=_finite, default=0.0, help="squeezing parameter r")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadphase", description="Phase inference from homodyne quadrature records.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--degrees", action="store_true", help="angles on the command line are in degrees")
    common.add_argument("--out", help="output path ('-' or omitted writes to stdout where allowed)")
    common.add_argument("--grid", type=_positive_int, help="number of phase grid nodes")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="draw a synthetic quadrature record")
    _add_state(p)
    p.add_argument("--theta-prime", type=_finite)
    p.add_argument("--n", type=_positive_int)
    p.add_argument("--seed", type=_seed, default=0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", parents=[common], help="ML phase estimate from a record")
    _add_state(p)
    p.add_argument("--input", help="sample CSV written by 'simulate'")
    p.add_argument("--interval", choices=["full", "half"], default="half")
    p.add_argument("--report", help="report JSON path (default: --out with .json suffix)")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("entropy-scan", parents=[common], help="relative entropy over theta'")
    _add_state(p)
    p.add_argument("--phi", type=_finite, help="fixed inferred phase (default: phi = theta')")
    p.add_argument("--points", type=_positive_int, default=181)
    p.set_defaults(func=cmd_entropy_scan)

    p = sub.add_parser("fisher-scan", parents=[common], help="Fisher information over theta'")
    _add_state(p)
    p.add_argument("--n", type=_positive_int, default=1)
    p.add_argument("--points", type=_positive_int, default=181)
    p.set_defaults(func=cmd_fisher_scan)

    p = sub.add_parser("figure1", parents=[common], help="posterior surface over true and inferred phase")
    p.add_argument("--n-alpha-sq", type=_finite, default=100.0)
    p.add_argument("--thetas", type=_positive_int, default=181)
    p.set_defaults(func=cmd_figure1)

    p = sub.add_parser("resolution", parents=[common], help="phase resolution curve")
    _add_state(p)
    p.add_argument("--n", type=_positive_int)
    p.add_argument("--method", choices=[m.value for m in Method], default="ml")
    p.add_argument("--points", type=_positive_int, default=90)
    p.set_defaults(func=cmd_resolution)

    p = sub.add_parser("decompose", parents=[common], help="von Mises factors of the posterior")
    p.add_argument("--n-alpha-sq", type=_finite, required=True)
    p.add_argument("--theta-prime", type=_finite, default=0.0)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("compare-vs", parents=[common], help="check against the zero-field phase distribution")
    p.add_argument("--n-alpha-sq", type=_finite, required=True)
    p.set_defaults(func=cmd_compare_vs)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SampleParseError as exc:
        print(f"{parser.prog} {args.command}: cannot read input: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, DomainError) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ContractError as exc:
        print(f"{parser.prog} {args.command}: numerical contract violated: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except OSError as exc:
        print(f"{parser.prog} {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
