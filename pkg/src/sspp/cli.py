"""Command-line interface: fit, simulate, summarize, envelope, csr-test, report.

Every run is seeded (default 0) and writes deterministic CSV/JSON/SVG
artifacts. Option precedence: command-line flags > config file
(key=value lines) > built-in defaults.
"""

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, csr, inference, io, model, sampler, summaries, svgplot
from .errors import ConfigError, ParseError, SSPPError
from .geometry import default_cell_size
from .model import ModelParams, pi_of_r_report
from .summaries import KINDS


def _parse_start(spec):
    if not spec:
        return None
    try:
        pts = []
        for part in spec.split(";"):
            x, y = part.split(",")
            pts.append((float(x), float(y)))
        return tuple(pts)
    except ValueError as exc:
        raise ParseError(f"bad start spec {spec!r}, expected 'x,y;x,y'") from exc


def _parse_grid(spec, name):
    try:
        lo_s, hi_s, step_s = spec.split(",")
        lo = None if lo_s.strip() == "auto" else float(lo_s)
        return (lo, float(hi_s), float(step_s))
    except ValueError as exc:
        raise ParseError(f"bad {name} grid {spec!r}, expected 'lo,hi,step'") from exc


def _load_config_file(path):
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(f"{path}: line {lineno}: expected key=value")
        key, _, value = line.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _resolve(args, defaults):
    """flags > config file > defaults; argparse leaves unset flags as None."""
    file_values = _load_config_file(args.config) if getattr(args, "config", None) else {}
    for key, default in defaults.items():
        if getattr(args, key, None) is not None:
            continue
        if key in file_values:
            raw = file_values[key]
            if isinstance(default, bool):
                value = raw.lower() in ("1", "true", "yes", "on")
            elif isinstance(default, int) and not isinstance(default, bool):
                value = int(raw)
            elif isinstance(default, float):
                value = float(raw)
            else:
                value = raw
            setattr(args, key, value)
        else:
            setattr(args, key, default)
    return args


def _outdir(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_sequence(args):
    record = io.ingest_csv(args.input, window_spec=args.window)
    return record, io.order_sequence(record, args.order)


def _run_config_dict(args, keys):
    return {key: getattr(args, key, None) for key in keys}


# ---------------------------------------------------------------- commands


def cmd_simulate(args):
    _resolve(args, {
        "theta": 0.5, "r": 0.1, "n": 100, "window": "0,0,1,1", "start": "",
        "seed": 0, "max_rejects": 1_000_000, "out": "out",
    })
    window = io.parse_window_spec(args.window)
    config = sampler.SimulationConfig(
        params=ModelParams(args.theta, args.r, window),
        n_points=args.n,
        start_points=_parse_start(args.start),
        seed=args.seed,
        max_rejects_per_point=args.max_rejects,
    )
    seq = sampler.simulate(config)
    out = _outdir(args)
    io.write_sequence_csv(out / "points.csv", seq)
    svgplot.pattern_svg(out / "pattern.svg", seq, title="simulated pattern")
    io.write_json(out / "simulate.json", {
        "command": "simulate",
        "config": _run_config_dict(args, ["theta", "r", "n", "window", "start", "seed", "max_rejects"]),
        "n_points": len(seq),
        "version": __version__,
    })
    return 0


def cmd_fit(args):
    _resolve(args, {
        "window": None, "order": "descending_mark",
        "theta_grid": "0.025,0.975,0.05", "r_grid": "auto,5.0,0.1",
        "refine": True, "cell_size": 0.0, "bootstrap": 0, "seed": 0,
        "processes": 1, "out": "out",
    })
    record, seq = _load_sequence(args)
    config = inference.FitConfig(
        theta_grid=_parse_grid(args.theta_grid, "theta"),
        r_grid=_parse_grid(args.r_grid, "r"),
        refine=args.refine,
        cell_size=args.cell_size or None,
        bootstrap_replicates=args.bootstrap or 20,
        seed=args.seed,
        processes=args.processes,
    )
    result = inference.fit(seq, config)
    if args.bootstrap:
        inference.bootstrap_ci(seq, result, config)
    out = _outdir(args)
    io.write_surface_csv(out / "surface.csv", result.surface)
    svgplot.surface_svg(out / "surface.svg", result.surface)
    io.write_json(out / "fit.json", _fit_payload(args, result))
    return 0


def _fit_payload(args, result):
    diag = {
        k: v for k, v in result.diagnostics.items()
        if k not in ("refinement_trace", "bootstrap_estimates")
    }
    return {
        "command": "fit",
        "theta_hat": result.theta_hat,
        "r_hat": result.r_hat,
        "max_loglik": result.max_loglik,
        "grid_theta_hat": result.grid_theta_hat,
        "grid_r_hat": result.grid_r_hat,
        "grid_max_loglik": result.grid_max_loglik,
        "theta_ci": result.theta_ci,
        "r_ci": result.r_ci,
        "seed": args.seed,
        "diagnostics": diag,
        "version": __version__,
    }


def cmd_summarize(args):
    _resolve(args, {
        "window": None, "order": "descending_mark", "r": 0.1,
        "cell_size": 0.0, "cumulative": True, "out": "out", "seed": 0,
    })
    record, seq = _load_sequence(args)
    curves = summaries._all_curves(seq, KINDS, args.r, args.cell_size or None, args.cumulative)
    curves = {kind: curves[kind] for kind in KINDS}
    out = _outdir(args)
    for kind, curve in curves.items():
        io.write_curve_csv(out / f"summary_{kind}.csv", curve)
    svgplot.panel_svg(out / "summaries.svg", curves)
    io.write_json(out / "summarize.json", {
        "command": "summarize",
        "curves": {kind: io.curve_metadata(c) for kind, c in curves.items()},
        "config": _run_config_dict(args, ["r", "cell_size", "cumulative", "order", "seed"]),
        "version": __version__,
    })
    return 0


def cmd_envelope(args):
    _resolve(args, {
        "window": None, "order": "descending_mark", "theta": 0.5, "r": 0.1,
        "statistic": "all", "replicates": 999, "level": 0.95, "seed": 0,
        "cell_size": 0.0, "cumulative": True, "processes": 1, "out": "out",
    })
    record, seq = _load_sequence(args)
    kinds = KINDS if args.statistic == "all" else (args.statistic,)
    params = ModelParams(args.theta, args.r, seq.window)
    bands = summaries.envelopes(
        seq, params, kinds, args.replicates, level=args.level, seed=args.seed,
        cell_size=args.cell_size or None, cumulative=args.cumulative,
        processes=args.processes,
    )
    out = _outdir(args)
    for kind, band in bands.items():
        io.write_band_csv(out / f"envelope_{kind}.csv", band)
        io.write_json(out / f"envelope_{kind}.json", io.band_metadata(band, args.seed))
        svgplot.curve_svg(
            out / f"envelope_{kind}.svg", band.data_curve, kind,
            band=(band.lower, band.upper),
        )
    return 0


def cmd_csr_test(args):
    _resolve(args, {
        "window": None, "n_sim": 4999, "r_max": 0.0, "grid_points": 513,
        "level": 0.95, "seed": 0, "out": "out",
    })
    record = io.ingest_csv(args.input, window_spec=args.window)
    r_max = args.r_max or min(5.0, record.window.shorter_side / 2.0)
    result = csr.erl_global_test(
        record.points, record.window, args.n_sim,
        r_grid=csr.default_r_grid(r_max, args.grid_points),
        level=args.level, seed=args.seed,
    )
    out = _outdir(args)
    io.write_lcurve_csv(out / "csr.csv", result)
    svgplot.lcurve_svg(out / "csr.svg", result)
    io.write_json(out / "csr.json", _csr_payload(args, result))
    return 0


def _csr_payload(args, result):
    return {
        "command": "csr-test",
        "p_value": result.p_value,
        "n_sim": result.n_sim,
        "level": result.level,
        "ordering": result.ordering,
        "tie_with_data": result.tie_with_data,
        "n_points": result.diagnostics["n_points"],
        "seed": args.seed,
        "version": __version__,
    }


def cmd_report(args):
    _resolve(args, {
        "window": None, "order": "descending_mark",
        "theta_grid": "0.025,0.975,0.05", "r_grid": "auto,5.0,0.1",
        "refine": True, "cell_size": 0.0, "bootstrap": 20,
        "replicates": 999, "n_sim": 4999, "level": 0.95,
        "seed": 0, "processes": 1, "out": "out",
    })
    record, seq = _load_sequence(args)
    out = _outdir(args)
    cell_size = args.cell_size or default_cell_size(seq.window)

    # exploratory CSR pre-test on the unordered pattern
    r_max = min(5.0, record.window.shorter_side / 2.0)
    csr_result = csr.erl_global_test(
        record.points, record.window, args.n_sim,
        r_grid=csr.default_r_grid(r_max), level=args.level, seed=args.seed,
    )
    io.write_lcurve_csv(out / "csr.csv", csr_result)
    svgplot.lcurve_svg(out / "csr.svg", csr_result)

    # maximum-likelihood fit with bootstrap intervals
    config = inference.FitConfig(
        theta_grid=_parse_grid(args.theta_grid, "theta"),
        r_grid=_parse_grid(args.r_grid, "r"),
        refine=args.refine,
        cell_size=cell_size,
        bootstrap_replicates=args.bootstrap,
        seed=args.seed,
        processes=args.processes,
    )
    result = inference.fit(seq, config)
    inference.bootstrap_ci(seq, result, config)
    io.write_surface_csv(out / "surface.csv", result.surface)
    svgplot.surface_svg(out / "surface.svg", result.surface)

    # envelopes of the four sequential statistics under the fitted model
    params = ModelParams(result.theta_hat, result.r_hat, seq.window)
    bands = summaries.envelopes(
        seq, params, KINDS, args.replicates, level=args.level,
        seed=args.seed, cell_size=cell_size, processes=args.processes,
    )
    envelope_files = []
    for kind, band in bands.items():
        io.write_band_csv(out / f"envelope_{kind}.csv", band)
        envelope_files.append(f"envelope_{kind}.csv")
    svgplot.panel_svg(
        out / "envelopes.svg",
        {kind: band.data_curve for kind, band in bands.items()},
        bands=bands,
    )

    pi_report = None
    if seq.marks is not None:
        pr = pi_of_r_report(params, float(seq.marks.max()))
        pi_report = {
            "stem_radius_m": pr.stem_radius,
            "first_knot_m": pr.first_knot,
            "segments": [
                {"lo": lo, "hi": None if math.isinf(hi) else hi, "value": v}
                for lo, hi, v in pr.segments
            ],
        }

    manifest = {
        "command": "report",
        "inputs": {"csv": str(args.input), "window": args.window, "order": args.order},
        "theta_hat": result.theta_hat,
        "r_hat": result.r_hat,
        "grid_theta_hat": result.grid_theta_hat,
        "grid_r_hat": result.grid_r_hat,
        "max_loglik": result.max_loglik,
        "theta_ci": result.theta_ci,
        "r_ci": result.r_ci,
        "p_csr": csr_result.p_value,
        "csr_n_sim": csr_result.n_sim,
        "cell_size": cell_size,
        "seed": args.seed,
        "n_points": len(seq),
        "envelope_replicates": args.replicates,
        "envelope_files": sorted(envelope_files),
        "envelope_outside_counts": {k: bands[k].n_outside for k in bands},
        "pi_of_r": pi_report,
        "diagnostics": {
            k: v for k, v in result.diagnostics.items()
            if k not in ("refinement_trace", "bootstrap_estimates")
        },
        "version": __version__,
    }
    io.write_json(out / "manifest.json", manifest)
    return 0


# ---------------------------------------------------------------- parser


def _add_common(p):
    p.add_argument("--config", help="key=value config file (flags take precedence)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--seed", type=int, help="RNG seed (default 0)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sspp",
        description="Self-interactive sequential spatial point process toolkit",
    )
    parser.add_argument("--version", action="version", version=f"sspp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate one realization of the model")
    p.add_argument("--theta", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--window")
    p.add_argument("--start", help="fixed starting points 'x,y;x,y'")
    p.add_argument("--max-rejects", dest="max_rejects", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", help="maximum-likelihood fit of (theta, r)")
    p.add_argument("--input", required=True)
    p.add_argument("--window")
    p.add_argument("--order", choices=["descending_mark", "ascending_mark", "given"])
    p.add_argument("--theta-grid", dest="theta_grid")
    p.add_argument("--r-grid", dest="r_grid", help="'auto,hi,step' derives the lower bound from marks")
    p.add_argument("--no-refine", dest="refine", action="store_false", default=None)
    p.add_argument("--cell-size", dest="cell_size", type=float)
    p.add_argument("--bootstrap", type=int, help="bootstrap replicates (0 = skip)")
    p.add_argument("--processes", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("summarize", help="four order-aware summary curves")
    p.add_argument("--input", required=True)
    p.add_argument("--window")
    p.add_argument("--order", choices=["descending_mark", "ascending_mark", "given"])
    p.add_argument("--r", type=float)
    p.add_argument("--cell-size", dest="cell_size", type=float)
    p.add_argument("--per-point", dest="cumulative", action="store_false", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("envelope", help="Monte-Carlo envelope bands for summary curves")
    p.add_argument("--input", required=True)
    p.add_argument("--window")
    p.add_argument("--order", choices=["descending_mark", "ascending_mark", "given"])
    p.add_argument("--theta", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--statistic", choices=list(KINDS) + ["all"])
    p.add_argument("--replicates", type=int)
    p.add_argument("--level", type=float)
    p.add_argument("--cell-size", dest="cell_size", type=float)
    p.add_argument("--per-point", dest="cumulative", action="store_false", default=None)
    p.add_argument("--processes", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_envelope)

    p = sub.add_parser("csr-test", help="CSR global envelope test (centered L, ERL)")
    p.add_argument("--input", required=True)
    p.add_argument("--window")
    p.add_argument("--n-sim", dest="n_sim", type=int)
    p.add_argument("--r-max", dest="r_max", type=float)
    p.add_argument("--grid-points", dest="grid_points", type=int)
    p.add_argument("--level", type=float)
    _add_common(p)
    p.set_defaults(func=cmd_csr_test)

    p = sub.add_parser("report", help="full pipeline: csr-test, fit, bootstrap, envelopes")
    p.add_argument("--input", required=True)
    p.add_argument("--window")
    p.add_argument("--order", choices=["descending_mark", "ascending_mark", "given"])
    p.add_argument("--theta-grid", dest="theta_grid")
    p.add_argument("--r-grid", dest="r_grid")
    p.add_argument("--no-refine", dest="refine", action="store_false", default=None)
    p.add_argument("--cell-size", dest="cell_size", type=float)
    p.add_argument("--bootstrap", type=int)
    p.add_argument("--replicates", type=int, help="envelope replicates")
    p.add_argument("--n-sim", dest="n_sim", type=int, help="CSR simulations")
    p.add_argument("--level", type=float)
    p.add_argument("--processes", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SSPPError as exc:
        message = " ".join(str(exc).split())
        print(f"{exc.code}: {message}", file=sys.stderr)
        return exc.exit_code


def console_main():
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
