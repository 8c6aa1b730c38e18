"""Command-line front end.

Subcommands cover every pipeline: cavity form-factor/coupling evaluation,
exact polarization traces, noise-averaged dynamics with the OU Monte Carlo,
NMR line shapes, pulse-measurement inversion, and the cross-validation
suite.  Options may come from flags or from a plain `key = value` config
file (flags win).  Outputs are deterministic CSV/JSON (see `output`), with
optional matplotlib figures rendered next to them; relative output paths
honor $NANOSPIN_OUTDIR.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import asymptotics, dynamics, geometry, lineshape, noise, output, validate
from .constants import GAMMA_PROTON


def _read_config_file(path: str) -> dict:
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SystemExit(f"{path}:{lineno}: expected 'key = value'")
            key, _, val = line.partition("=")
            values[key.strip().replace("-", "_")] = val.strip()
    return values


def _resolve(args: argparse.Namespace, spec: dict) -> dict:
    """Merge defaults < config file < explicit flags into one dict."""
    file_values = _read_config_file(args.config) if args.config else {}
    resolved = {}
    for name, (caster, default) in spec.items():
        flag_value = getattr(args, name)
        if flag_value is not None:
            resolved[name] = flag_value
        elif name in file_values:
            resolved[name] = caster(file_values[name])
        else:
            resolved[name] = default
    unknown = set(file_values) - set(spec)
    if unknown:
        raise SystemExit(f"unknown config keys: {', '.join(sorted(unknown))}")
    return resolved


def _require(cfg: dict, *names: str):
    missing = [n for n in names if cfg[n] is None]
    if missing:
        raise SystemExit(f"missing required option(s): {', '.join('--' + n.replace('_', '-') for n in missing)}")


# ---------------------------------------------------------------- formfactor

_FORMFACTOR_SPEC = {
    "a": (float, None),
    "b": (float, None),
    "alpha": (float, 0.0),
    "gamma": (float, GAMMA_PROTON),
    "volume_concentration": (float, 1e-3),
    "out": (str, None),
}


def cmd_formfactor(args) -> int:
    cfg = _resolve(args, _FORMFACTOR_SPEC)
    _require(cfg, "a", "b")
    geom = geometry.CavityGeometry(a=cfg["a"], b=cfg["b"], alpha=cfg["alpha"])
    gas = geometry.GasSpec(gamma=cfg["gamma"],
                           concentration=cfg["volume_concentration"])
    shape_i = geometry.shape_integral(geom.aspect)
    form = geometry.form_factor(geom)
    g = geometry.coupling_g(geom, gas)
    notes = []
    if shape_i == 0.0:
        notes.append("spherical cavity: shape integral vanishes, g = 0")
    if abs(geometry.legendre_p2(math.cos(geom.alpha))) < 1e-3:
        notes.append("field at the magic angle: form-factor suppressed to ~0")
    payload = {
        "aspect": geom.aspect,
        "shape_integral": shape_i,
        "form_factor": form,
        "coupling_g_rad_per_s": g,
        "volume_nm3": geom.volume,
        "p2_cos_alpha": geometry.legendre_p2(math.cos(geom.alpha)),
        "notes": notes,
    }
    run_cfg = {"subcommand": "formfactor", **{k: cfg[k] for k in _FORMFACTOR_SPEC if k != "out"}}
    print(output.render_json(payload, run_cfg))
    if cfg["out"]:
        output.write_json(cfg["out"], payload, run_cfg)
    return 0


# ------------------------------------------------------------------ polarize

_POLARIZE_SPEC = {
    "n": (int, None),
    "g": (float, 1.0),
    "tau_max": (float, None),
    "points": (int, 2001),
    "out": (str, None),
    "plot": (str, None),
}


def cmd_polarize(args) -> int:
    cfg = _resolve(args, _POLARIZE_SPEC)
    _require(cfg, "n")
    n = cfg["n"]
    tau_max = cfg["tau_max"]
    if tau_max is None:
        tau_max = 2.0 * math.pi if n % 2 else math.pi
        cfg["tau_max"] = tau_max
    if cfg["points"] < 2:
        raise SystemExit("--points must be >= 2")
    cluster = dynamics.ClusterSpec(n_spins=n, g=cfg["g"])
    taus = np.linspace(0.0, tau_max, cfg["points"])
    tr = dynamics.trace(cluster, tau_grid=taus)
    times = tr.times if tr.times is not None else np.full_like(taus, math.nan)
    run_cfg = {"subcommand": "polarize", **{k: cfg[k] for k in _POLARIZE_SPEC if k not in ("out", "plot")}}
    if cfg["out"]:
        path = output.write_csv(cfg["out"], {
            "t": times, "tau": tr.taus, "p1": tr.p1, "p_other": tr.p_other},
            run_cfg)
        print(f"wrote {path}")
    else:
        print(output.render_json({
            "tau_period": 2.0 * math.pi if n % 2 else math.pi,
            "time_average_p1": dynamics.p1_time_average(n),
            "p1_final": float(tr.p1[-1]),
        }, run_cfg))
    if cfg["plot"]:
        from . import plots
        print(f"wrote {plots.plot_polarization(tr, cfg['plot'])}")
    return 0


# --------------------------------------------------------------------- noise

_NOISE_SPEC = {
    "n": (int, None),
    "mean_g": (float, 1.0),
    "rel_variance": (float, 1e-4),
    "tc": (float, 1.0),
    "t_max": (float, None),
    "points": (int, 801),
    "realizations": (int, 0),
    "seed": (int, 2024),
    "jobs": (int, 1),
    "out": (str, None),
    "plot": (str, None),
}


def cmd_noise(args) -> int:
    cfg = _resolve(args, _NOISE_SPEC)
    _require(cfg, "n")
    n = cfg["n"]
    model = noise.NoiseModel(mean_g=cfg["mean_g"],
                             variance=cfg["rel_variance"] * cfg["mean_g"] ** 2,
                             t_c=cfg["tc"])
    t_max = cfg["t_max"]
    if t_max is None:
        t_max = 20.0 * math.pi / cfg["mean_g"]
        cfg["t_max"] = t_max
    t = np.linspace(0.0, t_max, cfg["points"])
    analytic = noise.p1_noise_analytic(n, t, model)
    approx = noise.p1_noise_gaussian_approx(n, t, model) if n >= 50 else None
    mc = None
    if cfg["realizations"] >= 2:
        mc = noise.monte_carlo(n, t, model, cfg["realizations"], cfg["seed"],
                               n_jobs=cfg["jobs"])
    run_cfg = {"subcommand": "noise", **{k: cfg[k] for k in _NOISE_SPEC if k not in ("out", "plot")}}
    columns = {"t": t, "analytic": analytic}
    columns["approx"] = approx if approx is not None else np.full_like(t, math.nan)
    columns["mc_mean"] = mc.mean if mc else np.full_like(t, math.nan)
    columns["mc_stderr"] = mc.stderr if mc else np.full_like(t, math.nan)
    if cfg["out"]:
        print(f"wrote {output.write_csv(cfg['out'], columns, run_cfg)}")
    else:
        print(output.render_json({
            "plateau": dynamics.p1_time_average(n),
            "gaussian_regime": model.gaussian_regime(),
            "analytic_final": float(np.atleast_1d(analytic)[-1]),
        }, run_cfg))
    if cfg["plot"]:
        from . import plots
        print(f"wrote {plots.plot_noise(t, analytic, approx, mc.mean if mc else None, mc.stderr if mc else None, n, cfg['plot'])}")
    return 0


# ----------------------------------------------------------------- lineshape

_LINESHAPE_SPEC = {
    "n": (int, None),
    "g": (float, 1.0),
    "t2": (float, 2e-3),
    "points": (int, 2001),
    "span_factor": (float, 1.2),
    "out": (str, None),
    "plot": (str, None),
}


def cmd_lineshape(args) -> int:
    cfg = _resolve(args, _LINESHAPE_SPEC)
    _require(cfg, "n")
    shape = lineshape.spectrum(cfg["n"], cfg["g"], t2=cfg["t2"],
                               n_points=cfg["points"],
                               span_factor=cfg["span_factor"])
    run_cfg = {"subcommand": "lineshape", **{k: cfg[k] for k in _LINESHAPE_SPEC if k not in ("out", "plot")}}
    payload = {
        "m2": shape.m2,
        "m4": shape.m4,
        "normalization": float(np.trapezoid(shape.spectrum, shape.omega_grid)),
        "meta": shape.meta,
    }
    print(output.render_json(payload, run_cfg))
    if cfg["out"]:
        print(f"wrote {output.write_csv(cfg['out'], {'omega': shape.omega_grid, 'spectrum': shape.spectrum}, run_cfg)}")
    if cfg["plot"]:
        from . import plots
        print(f"wrote {plots.plot_lineshape(shape, cfg['plot'])}")
    return 0


# -------------------------------------------------------------------- invert

_INVERT_SPEC = {
    "period": (float, None),
    "width": (float, None),
    "concentration": (float, None),
    "alpha": (float, 0.0),
    "gamma": (float, GAMMA_PROTON),
    "out": (str, None),
}


def cmd_invert(args) -> int:
    cfg = _resolve(args, _INVERT_SPEC)
    _require(cfg, "period", "width", "concentration")
    try:
        volume, aspect = geometry.invert_measurement(
            cfg["period"], cfg["width"], cfg["concentration"], cfg["alpha"],
            gamma=cfg["gamma"])
    except geometry.GeometryError as exc:
        print(f"inversion failed: {exc}", file=sys.stderr)
        return 2
    payload = {"volume_nm3": volume, "aspect": aspect}
    run_cfg = {"subcommand": "invert", **{k: cfg[k] for k in _INVERT_SPEC if k != "out"}}
    print(output.render_json(payload, run_cfg))
    if cfg["out"]:
        output.write_json(cfg["out"], payload, run_cfg)
    return 0


# ------------------------------------------------------------------ validate

_VALIDATE_SPEC = {
    "max_n": (int, 10),
    "tolerance": (float, 1e-10),
    "perturb": (float, 0.0),
}


def cmd_validate(args) -> int:
    cfg = _resolve(args, _VALIDATE_SPEC)
    try:
        results = validate.run_validation(max_n=cfg["max_n"],
                                          tolerance=cfg["tolerance"],
                                          weight_perturbation=cfg["perturb"])
    except ValueError as exc:
        print(f"validate: {exc}", file=sys.stderr)
        return 2
    text, ok = validate.report(results)
    print(text)
    return 0 if ok else 1


# ---------------------------------------------------------------------- main

def _add_options(parser: argparse.ArgumentParser, spec: dict):
    parser.add_argument("--config", default=None, metavar="FILE",
                        help="key = value config file; flags override it")
    for name, (caster, default) in spec.items():
        flag = "--" + name.replace("_", "-")
        parser.add_argument(flag, type=caster, default=None,
                            help=f"(default: {default})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nanospin",
        description="Exact spin-polarization dynamics in ellipsoidal nano-cavities")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("formfactor", help="shape integral, form-factor and coupling")
    _add_options(p, _FORMFACTOR_SPEC)
    p.set_defaults(func=cmd_formfactor)

    p = sub.add_parser("polarize", help="exact polarization trace")
    _add_options(p, _POLARIZE_SPEC)
    p.set_defaults(func=cmd_polarize)

    p = sub.add_parser("noise", help="noise-averaged dynamics and OU Monte Carlo")
    _add_options(p, _NOISE_SPEC)
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("lineshape", help="FID, spectrum and moments")
    _add_options(p, _LINESHAPE_SPEC)
    p.set_defaults(func=cmd_lineshape)

    p = sub.add_parser("invert", help="pulse measurement -> cavity volume and shape")
    _add_options(p, _INVERT_SPEC)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("validate", help="cross-validation suite")
    _add_options(p, _VALIDATE_SPEC)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
