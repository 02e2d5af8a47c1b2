"""Command-line entry point: every capability as a subcommand.

Exit codes: 0 success, 2 usage errors (argparse's convention), 3 when a
computation hits its budget or fails to converge.  Subcommands that write
files also write a manifest.json recording the full configuration, the
seed, and a digest per output, so a run can be reproduced byte for byte
(exact-arithmetic outputs) or statistically (floating ones).
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import math
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bounds import (
    BoundReport,
    ConvergenceError,
    DBound,
    RadiusProblem,
    bound_report,
    curve_points,
    discriminant_roots,
    free_radius,
    radius_from_discriminant,
    write_curve_csv,
)
from .census import BudgetExceededError, DEFAULT_BUDGET, take_census, write_census_csv
from .groups import GroupSignature, MalformedWordError, parse_signature
from .sampler import SampleConfig, estimate_bad_frequency
from .series import (
    WalkWeights,
    bundle_to_json,
    dp_tables,
    generating_functions,
    tables_to_json,
    verify_recurrences,
)
from .spectral import (
    SpectralConfig,
    estimate_z_inverse,
    free_limit,
    spectral_summary,
    write_spectral_csv,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _parse_d_bound(text: str) -> DBound:
    if text == "zero":
        return DBound.zero()
    if text.startswith("c="):
        return DBound.geometric_rate(float(text[2:]))
    if text.startswith("R="):
        return DBound.radius_form(float(text[2:]))
    raise argparse.ArgumentTypeError(
        f"bad d-bound {text!r}: expected zero, c=<float>, or R=<float>"
    )


def _parse_range(text: str) -> range:
    """Inclusive lo:hi, or a single integer."""
    if ":" in text:
        lo, hi = text.split(":", 1)
        return range(int(lo), int(hi) + 1)
    v = int(text)
    return range(v, v + 1)


def _parse_rational(text: str) -> Fraction:
    return Fraction(text)


def _ensure_seed(args) -> int:
    if args.seed is None:
        args.seed = int.from_bytes(os.urandom(8), "big") >> 1
        print(f"seed: {args.seed} (generated)")
    return args.seed


class _Manifest:
    """Collects output files and writes manifest.json alongside them."""

    def __init__(self, subcommand: str, args: argparse.Namespace):
        self.subcommand = subcommand
        self.config = {
            k: str(v) for k, v in sorted(vars(args).items()) if k != "func"
        }
        self.started = time.time()
        self.outputs: dict[str, str] = {}

    def write_text(self, directory: Path, name: str, text: str) -> Path:
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / name
        data = text.encode()
        path.write_bytes(data)
        self.outputs[name] = hashlib.sha256(data).hexdigest()
        print(f"wrote {path}")
        return path

    def finish(self, directory: Path) -> None:
        seed = self.config.get("seed")
        body = {
            "subcommand": self.subcommand,
            "config": self.config,
            "seed": None if seed in (None, "None") else int(seed),
            "version": __version__,
            "duration_s": round(time.time() - self.started, 3),
            "outputs": self.outputs,
        }
        path = directory / "manifest.json"
        path.write_text(json.dumps(body, indent=2, sort_keys=True) + "\n")
        print(f"wrote {path}")


def _signature(text: str) -> GroupSignature:
    try:
        return parse_signature(text)
    except (MalformedWordError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


# -- census -------------------------------------------------------------------

def _cmd_census(args) -> int:
    sig = args.group
    lengths = range(2, args.max_length + 1, 2)
    try:
        census = take_census(sig, lengths, budget=args.budget)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    print(f"group {sig}, lengths {lengths.start}..{args.max_length}")
    print(f"{'length':>6} {'valid':>14} {'bad':>8} {'kernels':>8} {'frequency':>12}")
    for length in census.lengths():
        e = census.entries[length]
        freq = float(e.frequency)
        print(f"{length:>6} {e.total_valid:>14} {e.bad:>8} {e.kernels:>8} {freq:>12.3e}")
    if args.out:
        manifest = _Manifest("census", args)
        buf = io.StringIO()
        write_census_csv(census, buf)
        if args.format == "csv":
            manifest.write_text(args.out, "census.csv", buf.getvalue())
        else:
            rows = [
                {
                    "length": length,
                    "total_valid": census.entries[length].total_valid,
                    "bad": census.entries[length].bad,
                    "kernels": census.entries[length].kernels,
                    "frequency": str(census.entries[length].frequency),
                }
                for length in census.lengths()
            ]
            manifest.write_text(args.out, "census.json", json.dumps(rows, indent=2) + "\n")
        manifest.finish(args.out)
    return EXIT_OK


# -- sample -------------------------------------------------------------------

def _cmd_sample(args) -> int:
    _ensure_seed(args)
    sig = args.group
    rows = []
    for length in range(2, args.max_length + 1, 2):
        config = SampleConfig(
            signature=sig, length=length, samples=args.samples, seed=args.seed
        )
        report = estimate_bad_frequency(config)
        lo, hi = report.wilson_interval_95
        rows.append(
            {
                "length": length,
                "samples": args.samples,
                "bad": report.bad_count,
                "freq": float(report.frequency),
                "wilson_lo": lo,
                "wilson_hi": hi,
            }
        )
    print(f"group {sig}, {args.samples} samples per length, seed {args.seed}")
    print(f"{'length':>6} {'bad':>8} {'freq':>12} {'wilson95':>28}")
    for r in rows:
        print(
            f"{r['length']:>6} {r['bad']:>8} {r['freq']:>12.3e} "
            f"[{r['wilson_lo']:.3e}, {r['wilson_hi']:.3e}]"
        )
    if args.out:
        manifest = _Manifest("sample", args)
        if args.format == "csv":
            buf = io.StringIO()
            buf.write("length,samples,bad,freq,wilson_lo,wilson_hi\n")
            for r in rows:
                buf.write(
                    f"{r['length']},{r['samples']},{r['bad']},"
                    f"{r['freq']:.12g},{r['wilson_lo']:.12g},{r['wilson_hi']:.12g}\n"
                )
            manifest.write_text(args.out, "sample.csv", buf.getvalue())
        else:
            manifest.write_text(args.out, "sample.json", json.dumps(rows, indent=2) + "\n")
        manifest.finish(args.out)
    return EXIT_OK


# -- verify-series ------------------------------------------------------------

def _cmd_verify_series(args) -> int:
    sig = args.group
    total = sig.total_generators
    if args.a is None:
        args.a = (1 - args.alpha0) / (2 * total)
    weights = WalkWeights(args.alpha0, {base: args.a for base in sig.bases()})
    try:
        tables = dp_tables(sig, weights, args.n_max)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    residuals = verify_recurrences(tables)
    bundle = generating_functions(tables)
    mode = "probability" if weights.is_probability_mode else "norm"
    print(f"group {sig}, alpha0={weights.alpha0}, a={args.a} ({mode} mode), n_max={args.n_max}")
    print("recurrence residuals (exact):")
    for name, value in residuals.items():
        print(f"  {name:>16}: {value}")
    print("generating-function residuals (exact):")
    for name, value in bundle.residuals.items():
        print(f"  {name:>20}: {value}")
    if args.out:
        manifest = _Manifest("verify-series", args)
        payload = {
            "tables": tables_to_json(tables),
            "series": bundle_to_json(bundle),
            "recurrence_residuals": {k: str(v) for k, v in residuals.items()},
        }
        manifest.write_text(
            args.out, "series_tables.json", json.dumps(payload, indent=2) + "\n"
        )
        manifest.finish(args.out)
    return EXIT_OK


# -- radius and bounds --------------------------------------------------------

def _cmd_radius(args) -> int:
    problem = RadiusProblem(s=args.s, a=args.a, d_bound=args.d_bound)
    z = radius_from_discriminant(problem)
    if math.isinf(z):
        print("no breakdown point below the decay radius (diverges nowhere)")
        return EXIT_OK
    print(f"s={args.s} a={args.a} d-bound={args.d_bound.kind.value}")
    print(f"z = {z:.10g}   (z^-1 = {1.0 / z:.10g})")
    roots = discriminant_roots(problem)
    if len(roots) > 1:
        pretty = ", ".join(f"{r:.10g}" for r in roots)
        print(f"all discriminant roots: {pretty}")
    return EXIT_OK


def _cmd_bounds(args) -> int:
    problem = RadiusProblem(s=args.s, a=args.a, d_bound=args.d_bound)
    try:
        report = bound_report(problem)
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    print(f"s={args.s} a={args.a} d-bound={args.d_bound.kind.value}")
    print(f"r_lower = {report.r_lower:.10g}  (decay-corrected)")
    print(f"r_upper = {report.r_upper:.10g}  (trivially-decaying ideal, theta={report.theta:.6g})")
    print(f"gap = {report.gap:.4g} absolute, {report.relative_gap:.4g} relative")
    if args.out:
        manifest = _Manifest("bounds", args)
        rows = curve_points(args.s_range, d_bound=args.d_bound)
        buf = io.StringIO()
        write_curve_csv(rows, buf)
        manifest.write_text(args.out, "curve_points.csv", buf.getvalue())
        manifest.finish(args.out)
    return EXIT_OK


# -- spectral -----------------------------------------------------------------

def _cmd_spectral(args) -> int:
    _ensure_seed(args)
    config = SpectralConfig(
        s=args.s,
        N=args.N,
        a=args.a,
        trials=args.trials,
        seed=args.seed,
        power_tol=args.tol,
    )
    estimate = estimate_z_inverse(config)
    print(
        f"s={args.s} N={args.N} a={args.a} trials={args.trials} seed={args.seed}"
    )
    print(f"norms: {', '.join(f'{x:.6f}' for x in estimate.norms)}")
    print(
        f"mean = {estimate.mean:.6f}  std = {estimate.std:.3e}  "
        f"free limit = {free_limit(args.s, args.a):.6f}"
    )
    if args.out:
        manifest = _Manifest("spectral", args)
        buf = io.StringIO()
        write_spectral_csv(estimate, buf)
        manifest.write_text(args.out, "spectral.csv", buf.getvalue())
        manifest.write_text(
            args.out,
            "spectral_summary.json",
            json.dumps(spectral_summary(estimate), indent=2) + "\n",
        )
        manifest.finish(args.out)
    if not estimate.all_converged:
        print("warning: some trials did not converge", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


# -- figure -------------------------------------------------------------------

def _cmd_figure(args) -> int:
    _ensure_seed(args)
    manifest = _Manifest("figure", args)
    out = args.out

    # bound curves: the a=1 prediction, its reciprocal display, and the
    # decay-corrected discriminant point, per generator count
    lines = ["# s  z_inv_free_a1  y_reciprocal  z_inv_disc_a1"]
    for s in args.s_range:
        z_free = free_radius(s, 1.0)
        problem = RadiusProblem(s=s, a=1.0, d_bound=args.d_bound)
        z_disc = radius_from_discriminant(problem)
        z_disc_inv = 0.0 if math.isinf(z_disc) else 1.0 / z_disc
        lines.append(
            f"{s} {1.0 / z_free:.12g} {z_free:.12g} {z_disc_inv:.12g}"
        )
    manifest.write_text(out, "figure_bounds.dat", "\n".join(lines) + "\n")

    lines = ["# s  N  trials  mean_norm  std"]
    for s in args.s_range:
        est = estimate_z_inverse(
            SpectralConfig(s=s, N=args.N, a=1.0, trials=args.trials, seed=args.seed)
        )
        lines.append(f"{s} {args.N} {args.trials} {est.mean:.12g} {est.std:.12g}")
    manifest.write_text(out, "figure_spectral.dat", "\n".join(lines) + "\n")

    sig = parse_signature("F2xF2")
    census = take_census(sig, range(2, args.max_length + 1, 2))
    lines = ["# length  exact_freq  sampled_freq  wilson_lo  wilson_hi"]
    for length in census.lengths():
        exact = float(census.entries[length].frequency)
        config = SampleConfig(
            signature=sig, length=length, samples=args.samples, seed=args.seed
        )
        report = estimate_bad_frequency(config)
        lo, hi = report.wilson_interval_95
        lines.append(
            f"{length} {exact:.12g} {float(report.frequency):.12g} {lo:.12g} {hi:.12g}"
        )
    manifest.write_text(out, "figure_decay.dat", "\n".join(lines) + "\n")
    manifest.finish(out)
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leinert",
        description="Bad-string statistics in products of free groups: "
        "exact censuses, Monte Carlo sampling, walk recurrences, radius "
        "bounds, and Haar-unitary norm experiments.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p):
        p.add_argument("--out", type=Path, default=None, help="output directory")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument(
            "--threads",
            type=int,
            default=os.cpu_count() or 1,
            help="worker budget (current implementations are serial)",
        )

    p = sub.add_parser("census", help="exact bad-string counts by length")
    p.add_argument("--group", type=_signature, required=True)
    p.add_argument("--max-length", type=int, default=12)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    add_common(p)
    p.set_defaults(func=_cmd_census)

    p = sub.add_parser("sample", help="Monte Carlo bad-string frequencies")
    p.add_argument("--group", type=_signature, required=True)
    p.add_argument("--max-length", type=int, default=12)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=None)
    add_common(p)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser(
        "verify-series", help="exact walk tables and recurrence residuals"
    )
    p.add_argument("--group", type=_signature, required=True)
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--alpha0", type=_parse_rational, default=Fraction(0))
    p.add_argument(
        "--a",
        type=_parse_rational,
        default=None,
        help="per-generator weight; default fills probability mode",
    )
    add_common(p)
    p.set_defaults(func=_cmd_verify_series)

    p = sub.add_parser("radius", help="discriminant breakdown radius")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--d-bound", type=_parse_d_bound, default=DBound.zero())
    add_common(p)
    p.set_defaults(func=_cmd_radius)

    p = sub.add_parser("bounds", help="radius bound report and curve table")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--d-bound", type=_parse_d_bound, default=DBound.zero())
    p.add_argument("--s-range", type=_parse_range, default=range(2, 9))
    add_common(p)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("spectral", help="Haar-unitary norm experiment")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--N", type=int, default=75)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=4)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-6)
    add_common(p)
    p.set_defaults(func=_cmd_spectral)

    p = sub.add_parser("figure", help="emit the three figure data tables")
    p.add_argument("--s-range", type=_parse_range, default=range(2, 7))
    p.add_argument("--N", type=int, default=40)
    p.add_argument("--trials", type=int, default=2)
    p.add_argument("--samples", type=int, default=20_000)
    p.add_argument("--max-length", type=int, default=12)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--d-bound", type=_parse_d_bound, default=DBound.zero())
    p.add_argument("--out", type=Path, default=Path("figures"))
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=_cmd_figure)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_BUDGET


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
