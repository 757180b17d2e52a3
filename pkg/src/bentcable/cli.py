"""Command-line interface.

Subcommands: ``fit``, ``compare``, ``surface``, ``simulate``, ``verify``.
Human-readable tables go to stdout; ``--out`` writes a machine-readable
JSON document (byte-identical across runs with the same seed and config);
``--plot-data`` writes tidy CSV for external plotting.

Exit codes: 0 success, 2 input error, 3 fit failure, 4 verification failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np
from scipy import special

from . import dataio
from .bends import FAMILY_TABLE, make_family
from .errors import (
    BentCableError,
    FitFailureError,
    InputFormatError,
    InsufficientDataError,
    OptimizationFailureError,
    ParameterDomainError,
    SingularDesignError,
    ZoneOverlapError,
)
from .estimation import Dataset, GAConfig, deviance_surface, fit
from .inference import compare, confidence_region, lack_of_fit, lrt, transition_zone
from .model import Bend, ParamVector, eta
from .montecarlo import SimSpec, run_verification, simulate_mixture

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_FIT = 3
EXIT_VERIFY = 4

_INPUT_ERRORS = (
    InputFormatError,
    InsufficientDataError,
    ParameterDomainError,
    ZoneOverlapError,
    FileNotFoundError,
)
_FIT_ERRORS = (FitFailureError, SingularDesignError, OptimizationFailureError)

_CURVE_POINTS = 400


def _families_arg(value: str):
    names = [n.strip() for n in value.split(",") if n.strip()]
    for name in names:
        if name not in FAMILY_TABLE:
            raise argparse.ArgumentTypeError(
                f"unknown family {name!r}; choose from {sorted(FAMILY_TABLE)}"
            )
    if not names:
        raise argparse.ArgumentTypeError("no family names given")
    return names


def _quantiles_arg(value: str):
    try:
        lo, hi = (float(v) for v in value.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected 'lo,hi' (e.g. 0.025,0.975)")
    if not 0.0 < lo < hi < 1.0:
        raise argparse.ArgumentTypeError("quantiles must satisfy 0 < lo < hi < 1")
    return lo, hi


def _grid_arg(value: str):
    try:
        a, b = (int(v) for v in value.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected 'NxM' (e.g. '40x40')")
    if a < 2 or b < 2:
        raise argparse.ArgumentTypeError("grid must be at least 2x2")
    return a, b


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bentcable",
        description="Smooth piecewise-linear (bent-cable) regression toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, families_default=None):
        p.add_argument("--seed", type=int, default=0, help="RNG seed (reproducibility)")
        p.add_argument("--out", help="write machine-readable JSON here")
        p.add_argument("--plot-data", dest="plot_data", help="write tidy plot CSV here")

    p_fit = sub.add_parser("fit", help="fit one family by maximum likelihood")
    p_fit.add_argument("--input", required=True, help="x,y CSV file")
    p_fit.add_argument("--family", type=_families_arg, default=["BC"])
    p_fit.add_argument("--generations", type=int, default=5000, help="GA generation floor")
    p_fit.add_argument("--population", type=int, default=100)
    p_fit.add_argument("--quantiles", type=_quantiles_arg, default=(0.025, 0.975))
    add_common(p_fit)

    p_cmp = sub.add_parser("compare", help="fit several families and rank by AIC")
    p_cmp.add_argument("--input", required=True)
    p_cmp.add_argument("--family", type=_families_arg, required=True)
    p_cmp.add_argument("--generations", type=int, default=5000)
    p_cmp.add_argument("--population", type=int, default=100)
    p_cmp.add_argument("--quantiles", type=_quantiles_arg, default=(0.025, 0.975))
    add_common(p_cmp)

    p_surf = sub.add_parser("surface", help="profiled deviance surface around the fit")
    p_surf.add_argument("--input", required=True)
    p_surf.add_argument("--family", type=_families_arg, default=["BC"])
    p_surf.add_argument("--generations", type=int, default=5000)
    p_surf.add_argument("--population", type=int, default=100)
    p_surf.add_argument("--grid", type=_grid_arg, default=(40, 40))
    p_surf.add_argument("--level", type=float, default=0.95)
    add_common(p_surf)

    p_sim = sub.add_parser("simulate", help="simulate a sub-unit mixture dataset")
    p_sim.add_argument("--family", type=_families_arg, default=["BC"])
    p_sim.add_argument("--alpha", type=float, default=0.0, help="first-phase intercept")
    p_sim.add_argument("--beta", type=float, default=0.0, help="first-phase slope")
    p_sim.add_argument("--delta", type=float, default=1.0, help="slope change")
    p_sim.add_argument("--location", type=float, default=0.0, help="bend location")
    p_sim.add_argument("--scale", type=float, default=1.0, help="bend scale")
    p_sim.add_argument("--shape", type=float, default=None, help="slant/exponent, when used")
    p_sim.add_argument("--n", type=int, default=100, help="number of x points")
    p_sim.add_argument("--x-min", dest="x_min", type=float, default=-3.0)
    p_sim.add_argument("--x-max", dest="x_max", type=float, default=3.0)
    p_sim.add_argument("--subunits", type=int, default=1000, help="sub-units per observation")
    p_sim.add_argument("--sigma", type=float, default=0.0, help="observation noise sd")
    add_common(p_sim)

    p_ver = sub.add_parser("verify", help="run the numerical verification suites")
    p_ver.add_argument("--family", type=_families_arg, default=None)
    p_ver.add_argument("--draws", type=int, default=1_000_000)
    add_common(p_ver)

    return parser


def _config_echo(args) -> dict:
    skip = {"command"}
    config = {k: v for k, v in vars(args).items() if k not in skip}
    config["subcommand"] = args.command
    config["tool_version"] = dataio.tool_version()
    return dataio.json_ready(config)


def _fit_document(args, data: Dataset, result, quantiles) -> dict:
    params = result.params
    bend = params.bends[0]
    zone = transition_zone(result, *quantiles)
    grid = np.linspace(data.xs.min(), data.xs.max(), _CURVE_POINTS)
    curve = eta(params, result.family, grid)
    fitted = eta(params, result.family, data.xs)
    residuals = data.ys - fitted
    order = residuals.argsort().argsort()  # ranks, 0-based
    normal_scores = special.ndtri((order + 1 - 0.375) / (data.n + 0.25))
    doc = {
        "family": result.family.name,
        "estimates": {
            "alpha1": params.alpha1,
            "beta1": params.beta1,
            "delta": params.deltas[0],
            "slopes": list(params.slopes()),
            "location": bend.location,
            "scale": bend.scale,
            "shape": bend.shape,
            "change_point": result.family.change_point,
            "sigma2": params.sigma2,
        },
        "loglik": result.loglik,
        "aic": result.aic,
        "n_free_params": result.n_free_params,
        "n_obs": result.n_obs,
        "converged": result.converged,
        "generations": result.generations,
        "transition_zone": list(zone),
        "dataset_sha256": result.dataset_fingerprint,
        "fitted_curve": {"x": grid, "eta": curve},
        "residual_table": {
            "x": data.xs,
            "y": data.ys,
            "fitted": fitted,
            "residual": residuals,
            "normal_score": normal_scores,
        },
    }
    return dataio.json_ready(doc)


def _print_fit_summary(result, zone):
    params = result.params
    bend = params.bends[0]
    print(f"family            {result.family.name}")
    print(f"log-likelihood    {result.loglik:.5f}")
    print(f"AIC               {result.aic:.3f}")
    print(f"alpha1            {params.alpha1:.4f}")
    print(f"beta1             {params.beta1:.4f}")
    print(f"delta             {params.deltas[0]:.4f}")
    print(f"location          {bend.location:.4f}")
    print(f"scale             {bend.scale:.4f}")
    if bend.shape is not None:
        print(f"shape             {bend.shape:.4f}")
    print(f"sigma2            {params.sigma2:.6g}")
    print(f"transition zone   [{zone[0]:.4f}, {zone[1]:.4f}]")
    print(f"converged         {result.converged} ({result.generations} generations)")


def _ga_config(args) -> GAConfig:
    return GAConfig(
        population=args.population,
        min_generations=args.generations,
        max_generations=max(5 * args.generations, args.generations),
        seed=args.seed,
    )


def cmd_fit(args) -> int:
    data = dataio.read_xy_csv(args.input)
    family = make_family(args.family[0])
    result = fit(data, family, _ga_config(args))
    zone = transition_zone(result, *args.quantiles)
    _print_fit_summary(result, zone)
    try:
        lof = lack_of_fit(data, result)
        print(
            f"lack-of-fit       F({lof.df_lof},{lof.df_pe}) = {lof.statistic:.3f}, "
            f"p = {lof.p_value:.3f}"
        )
        lof_doc = dataio.json_ready(
            {
                "statistic": lof.statistic,
                "df": [lof.df_lof, lof.df_pe],
                "p_value": lof.p_value,
            }
        )
    except BentCableError:
        lof_doc = None
    if args.out:
        doc = _fit_document(args, data, result, args.quantiles)
        doc["lack_of_fit"] = lof_doc
        doc["config"] = _config_echo(args)
        dataio.write_json(args.out, doc)
    if args.plot_data:
        grid = np.linspace(data.xs.min(), data.xs.max(), _CURVE_POINTS)
        curve = eta(result.params, result.family, grid)
        with open(args.plot_data, "w", encoding="utf-8") as handle:
            handle.write("kind,x,y\n")
            for x, y in zip(data.xs, data.ys):
                handle.write(f"data,{float(x)!r},{float(y)!r}\n")
            for x, y in zip(grid, curve):
                handle.write(f"fit,{float(x)!r},{float(y)!r}\n")
    return EXIT_OK


def cmd_compare(args) -> int:
    data = dataio.read_xy_csv(args.input)
    cfg = _ga_config(args)
    fits = {}
    for name in args.family:
        fits[name] = fit(data, make_family(name), cfg)
    table = compare(fits.values())
    print(f"{'model':10s} {'loglik':>12s} {'AIC':>12s} {'Pr(model)':>10s}")
    for row in table:
        print(
            f"{row.name:10s} {row.loglik:12.5f} {row.aic:12.3f} "
            f"{row.relative_likelihood:10.3f}"
        )
    doc = {
        "comparison": [
            {
                "family": row.name,
                "loglik": row.loglik,
                "aic": row.aic,
                "relative_likelihood": row.relative_likelihood,
            }
            for row in table
        ]
    }
    if "SN-BC" in fits and "N-BC" in fits:
        try:
            asym = lrt(fits["SN-BC"], fits["N-BC"])
            print(
                f"asymmetry LRT     {asym.statistic:.4f} on {asym.df} df, "
                f"p = {asym.p_value:.3f}"
            )
            doc["asymmetry_lrt"] = {
                "statistic": asym.statistic,
                "df": asym.df,
                "p_value": asym.p_value,
            }
        except OptimizationFailureError as exc:
            print(f"asymmetry LRT     unavailable ({exc})")
            doc["asymmetry_lrt"] = {"error": str(exc)}
    if args.out:
        doc["config"] = _config_echo(args)
        dataio.write_json(args.out, dataio.json_ready(doc))
    return EXIT_OK


def cmd_surface(args) -> int:
    data = dataio.read_xy_csv(args.input)
    family = make_family(args.family[0])
    result = fit(data, family, _ga_config(args))
    surface = deviance_surface(data, family, result, grid=args.grid)
    region = confidence_region(surface, args.level)
    i, j, top = surface.max_node()
    inside = int(region.mask.sum())
    print(f"family            {family.name}")
    print(f"grid              {args.grid[0]}x{args.grid[1]}")
    print(f"max deviance node {top:.6f} at location={surface.locations[i]:.4f}, "
          f"scale={surface.scales[j]:.4f}")
    print(f"region threshold  {region.threshold:.3f} (level {args.level})")
    print(f"nodes in region   {inside} / {surface.deviance.size}")
    print(f"caveat            {region.caveat}")
    if args.out:
        doc = dataio.json_ready(
            {
                "family": family.name,
                "locations": surface.locations,
                "scales": surface.scales,
                "deviance": surface.deviance,
                "region_mask": region.mask,
                "region_threshold": region.threshold,
                "level": args.level,
                "caveat": region.caveat,
                "fitted_loglik": surface.fitted_loglik,
                "optimum": list(surface.optimum),
                "config": _config_echo(args),
            }
        )
        dataio.write_json(args.out, doc)
    if args.plot_data:
        with open(args.plot_data, "w", encoding="utf-8") as handle:
            handle.write("location,scale,deviance,in_region\n")
            for a, loc in enumerate(surface.locations):
                for b, sc in enumerate(surface.scales):
                    d = surface.deviance[a, b]
                    d_txt = "" if np.isnan(d) else repr(float(d))
                    handle.write(
                        f"{float(loc)!r},{float(sc)!r},{d_txt},{int(region.mask[a, b])}\n"
                    )
    return EXIT_OK


def cmd_simulate(args) -> int:
    family = make_family(args.family[0], args.location, args.scale, shape=args.shape)
    params = ParamVector(
        alpha1=args.alpha,
        beta1=args.beta,
        deltas=(args.delta,),
        bends=(Bend(args.location, args.scale, family.shape),),
        sigma2=max(args.sigma, 1e-12) ** 2,
    )
    xs = np.linspace(args.x_min, args.x_max, args.n)
    spec = SimSpec(family, params, xs, args.subunits, args.sigma, args.seed)
    data = simulate_mixture(spec)
    comments = [
        f"simulated sub-unit mixture: family={family.name} alpha={args.alpha!r} "
        f"beta={args.beta!r} delta={args.delta!r}",
        f"location={args.location!r} scale={args.scale!r} shape={args.shape!r} "
        f"M={args.subunits} sigma={args.sigma!r} seed={args.seed}",
        f"tool_version={dataio.tool_version()}",
    ]
    if args.out:
        dataio.write_xy_csv(args.out, data, comments)
        print(f"wrote {data.n} observations to {args.out}")
    else:
        for comment in comments:
            print(f"# {comment}")
        print("x,y")
        for x, y in zip(data.xs, data.ys):
            print(f"{float(x)!r},{float(y)!r}")
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_verification(
        family_names=args.family, n_draws=args.draws, seed=args.seed
    )
    for line in report.lines():
        print(line)
    n_surprising = sum(c.surprising for c in report.checks)
    print(
        f"{len(report.checks)} checks, "
        f"{sum(c.passed for c in report.checks)} passed, "
        f"{n_surprising} unexpected outcomes"
    )
    if args.out:
        doc = dataio.json_ready(
            {
                "checks": [
                    {
                        "name": c.name,
                        "passed": c.passed,
                        "expect_pass": c.expect_pass,
                        "residual": c.residual,
                        "detail": c.detail,
                    }
                    for c in report.checks
                ],
                "ok": report.ok,
                "config": _config_echo(args),
            }
        )
        dataio.write_json(args.out, doc)
    return EXIT_OK if report.ok else EXIT_VERIFY


_COMMANDS = {
    "fit": cmd_fit,
    "compare": cmd_compare,
    "surface": cmd_surface,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _INPUT_ERRORS as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except _FIT_ERRORS as exc:
        print(f"fit failure: {exc}", file=sys.stderr)
        return EXIT_FIT
    except BentCableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
