"""Command-line front end.

Every computation is exposed as a subcommand writing plot-ready CSV or
JSON; wavelengths on the command line are nm except the pitch and the
sweep axes, which are um (matching the usual figure conventions).

Exit codes: 0 success, 2 configuration or domain error, 3 solver failure.
"""

from __future__ import annotations

import sys

try:
    import tomllib
except ImportError:  # Python 3.10
    import tomli as tomllib

import click
import numpy as np

from . import bsfwm, io
from .compensate import (
    Perturbation,
    compensation_curve,
    perturbed_envelope,
    pump_for_target,
)
from .errors import ConfigError, DomainError, NotFoundError, PcffwmError
from .pcf import DispersionModel, FibreGeometry, omega_from_lambda_um
from .sweep import SweepGrid, extract_zdw_contours, run_sweep

EXIT_CONFIG = 2
EXIT_SOLVER = 3


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc


def _merge(file_cfg: dict, **flags) -> dict:
    """Flags override config-file values; drop unset keys."""
    cfg = dict(file_cfg)
    for key, val in flags.items():
        if val is not None:
            cfg[key] = val
    return cfg


def _require(cfg: dict, *keys):
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise ConfigError("missing configuration: " + ", ".join(missing))


def _model(cfg) -> DispersionModel:
    _require(cfg, "pitch", "ratio")
    geometry = FibreGeometry(float(cfg["pitch"]), float(cfg["ratio"]))
    return DispersionModel(geometry)


def _wavelength_grid_nm(cfg, prefix) -> np.ndarray:
    _require(cfg, f"{prefix}_min", f"{prefix}_max", f"{prefix}_step")
    lo, hi = float(cfg[f"{prefix}_min"]), float(cfg[f"{prefix}_max"])
    step = float(cfg[f"{prefix}_step"])
    if not (step > 0 and lo < hi):
        raise ConfigError(f"invalid {prefix} grid range")
    return np.round(np.arange(lo, hi + step / 2, step), 9)


def _resolve_pump(cfg, model) -> tuple[float, dict]:
    """'auto' resolves the pump from the target; returns (lambda_p_nm,
    resolved-metadata)."""
    _require(cfg, "pump")
    pump = cfg["pump"]
    if isinstance(pump, str) and pump == "auto":
        _require(cfg, "lambda_t")
        sol = pump_for_target(model, float(cfg["lambda_t"]))
        if sol.at_edge:
            click.echo("warning: pump root at validity-window edge", err=True)
        return sol.lambda_p_nm, {"lambda_p_nm": sol.lambda_p_nm, "pump_mode": "auto"}
    return float(pump), {"lambda_p_nm": float(pump), "pump_mode": "fixed"}


def _write(cfg, command, columns, rows, data_json, resolved=None):
    _require(cfg, "out")
    fmt = cfg.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError("format must be 'csv' or 'json'")
    meta = io.metadata(command, {k: v for k, v in sorted(cfg.items())}, resolved)
    if fmt == "csv":
        io.write_csv(cfg["out"], columns, rows, meta)
    else:
        io.write_json(cfg["out"], data_json, meta)


def _common_options(fn):
    for opt in reversed(
        [
            click.option("--config", "config_path", type=click.Path(exists=True)),
            click.option("--out", type=click.Path()),
            click.option("--format", "fmt", type=click.Choice(["csv", "json"])),
            click.option("--threads", type=int),
            click.option(
                "--seedless",
                is_flag=True,
                default=False,
                help="Reserved; rejected (nothing here is randomized).",
            ),
            click.option("--pitch", type=float, help="Hole pitch in um."),
            click.option("--ratio", type=float, help="Hole diameter / pitch."),
        ]
    ):
        fn = opt(fn)
    return fn


def _base_cfg(config_path, out, fmt, threads, seedless, **flags):
    if seedless:
        raise ConfigError(
            "--seedless is reserved: no computation in this tool is randomized"
        )
    cfg = _merge(_load_config(config_path), out=out, format=fmt, threads=threads, **flags)
    cfg.setdefault("format", "csv")
    return cfg


@click.group()
def main():
    """Design toolkit for broadband frequency conversion in PCF."""


@main.command()
@_common_options
@click.option("--lambda-min", type=float, help="Grid start, nm.")
@click.option("--lambda-max", type=float, help="Grid end, nm.")
@click.option("--step", type=float, help="Grid step, nm.")
def dispersion(config_path, out, fmt, threads, seedless, pitch, ratio, lambda_min, lambda_max, step):
    """Dispersion profile (n_eff, beta, beta1, beta2, v_g) plus the ZDW."""
    cfg = _base_cfg(
        config_path, out, fmt, threads, seedless,
        pitch=pitch, ratio=ratio,
        lambda_min=lambda_min, lambda_max=lambda_max, lambda_step=step,
    )
    model = _model(cfg)
    grid_nm = _wavelength_grid_nm(cfg, "lambda")
    lam_um = grid_nm * 1e-3
    for lam in (lam_um.min(), lam_um.max()):
        res = model.check_validity(float(lam))
        if not res:
            raise DomainError(res.reason)
    omega = omega_from_lambda_um(lam_um)
    neff = model.effective_index(lam_um)
    beta = model.beta(omega)
    beta1 = model.beta_n(omega, 1)
    beta2 = model.beta_n(omega, 2)
    vg = 1.0 / beta1
    zdw_um = model.find_zdw()
    click.echo(f"ZDW: {zdw_um:.6f} um")
    columns = [
        "lambda_nm", "n_eff", "beta_rad_per_m",
        "beta1_s_per_m", "beta2_s2_per_m", "v_g_m_per_s",
    ]
    rows = list(zip(grid_nm, neff, beta, beta1, beta2, vg))
    data = {
        "lambda_nm": grid_nm, "n_eff": neff, "beta_rad_per_m": beta,
        "beta1_s_per_m": beta1, "beta2_s2_per_m": beta2,
        "v_g_m_per_s": vg, "zdw_um": zdw_um,
    }
    _write(cfg, "dispersion", columns, rows, data, {"zdw_um": zdw_um})


@main.command("symmetry-map")
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--out", type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]))
@click.option("--threads", type=int)
@click.option("--seedless", is_flag=True, default=False)
@click.option("--pitch-min", type=float, help="um")
@click.option("--pitch-max", type=float, help="um")
@click.option("--pitch-step", type=float, help="um")
@click.option("--ratio-min", type=float)
@click.option("--ratio-max", type=float)
@click.option("--ratio-step", type=float)
@click.option("--threshold", type=float, help="Group-velocity symmetry threshold, m/s.")
@click.option("--levels", type=str, help="Comma-separated ZDW contour levels, um.")
def symmetry_map(config_path, out, fmt, threads, seedless, pitch_min, pitch_max,
                 pitch_step, ratio_min, ratio_max, ratio_step, threshold, levels):
    """Sweep (pitch, d/pitch): symmetry bandwidth map with ZDW contours."""
    cfg = _base_cfg(
        config_path, out, fmt, threads, seedless,
        pitch_min=pitch_min, pitch_max=pitch_max, pitch_step=pitch_step,
        ratio_min=ratio_min, ratio_max=ratio_max, ratio_step=ratio_step,
        threshold=threshold, levels=levels,
    )
    _require(cfg, "pitch_min", "pitch_max", "pitch_step",
             "ratio_min", "ratio_max", "ratio_step", "threshold")
    grid = SweepGrid(
        pitch_range=(float(cfg["pitch_min"]), float(cfg["pitch_max"])),
        pitch_step=float(cfg["pitch_step"]),
        ratio_range=(float(cfg["ratio_min"]), float(cfg["ratio_max"])),
        ratio_step=float(cfg["ratio_step"]),
        threshold=float(cfg["threshold"]),
    )
    result = run_sweep(grid, workers=int(cfg.get("threads") or 1))
    level_list = []
    if cfg.get("levels"):
        level_list = [float(x) for x in str(cfg["levels"]).split(",") if x.strip()]
    contours = extract_zdw_contours(result, level_list) if level_list else {}
    columns = ["pitch_um", "ratio", "status", "zdw_um", "bandwidth_um"]
    rows = [(c.pitch, c.ratio, c.status, c.zdw, c.bandwidth) for c in result.cells]
    contour_data = {
        repr(level): [line.tolist() for line in lines]
        for level, lines in contours.items()
    }
    data = {
        "pitch_axis_um": grid.pitch_axis(),
        "ratio_axis": grid.ratio_axis(),
        "cells": [
            {"pitch_um": c.pitch, "ratio": c.ratio, "status": c.status,
             "zdw_um": c.zdw, "bandwidth_um": c.bandwidth}
            for c in result.cells
        ],
        "zdw_contours_um": contour_data,
    }
    _write(cfg, "symmetry-map", columns, rows, data)
    if cfg["format"] == "csv" and contour_data:
        io.write_json(
            str(cfg["out"]) + ".contours.json",
            {"zdw_contours_um": contour_data},
            io.metadata("symmetry-map", {k: v for k, v in sorted(cfg.items())}),
        )


def _conversion_cfg(cfg, model):
    lam_p, resolved = _resolve_pump(cfg, model)
    _require(cfg, "lambda_t", "fwhm")
    setup = bsfwm.ConversionSetup(fibre_length=float(cfg.get("length", 1.0)))
    pump = bsfwm.PumpSpec(center_wavelength=lam_p, fwhm=float(cfg["fwhm"]))
    return lam_p, float(cfg["lambda_t"]), setup, pump, resolved


@main.command()
@_common_options
@click.option("--lambda-t", type=float, help="Target wavelength, nm.")
@click.option("--pump", type=str, help="Fixed pump wavelength in nm, or 'auto'.")
@click.option("--fwhm", type=float, help="Pump intensity FWHM, nm.")
@click.option("--length", type=float, help="Fibre length, m.")
@click.option("--q-min", type=float)
@click.option("--q-max", type=float)
@click.option("--q-step", type=float)
@click.option("--s-min", type=float)
@click.option("--s-max", type=float)
@click.option("--s-step", type=float)
def phasematch(config_path, out, fmt, threads, seedless, pitch, ratio, lambda_t,
               pump, fwhm, length, q_min, q_max, q_step, s_min, s_max, s_step):
    """Phase-matching intensity map over (lambda_q, lambda_s), with the
    zero-mismatch and energy-conservation loci."""
    cfg = _base_cfg(
        config_path, out, fmt, threads, seedless, pitch=pitch, ratio=ratio,
        lambda_t=lambda_t, pump=pump, fwhm=fwhm, length=length,
        q_min=q_min, q_max=q_max, q_step=q_step,
        s_min=s_min, s_max=s_max, s_step=s_step,
    )
    model = _model(cfg)
    lam_p, lam_t, setup, pump_spec, resolved = _conversion_cfg(cfg, model)
    q_grid = _wavelength_grid_nm(cfg, "q")
    s_grid = _wavelength_grid_nm(cfg, "s")
    pm = bsfwm.phasematch_map(model, setup, q_grid, s_grid, lam_t, lam_p)
    w_t = float(bsfwm.omega_from_nm(lam_t))
    rows, alphas = [], np.zeros_like(pm.phi)
    for i, lq in enumerate(q_grid):
        for j, ls in enumerate(s_grid):
            w_p = float(bsfwm.omega_from_nm(lq)) + float(bsfwm.omega_from_nm(ls)) - w_t
            alpha = bsfwm.pump_envelope(w_p, pump_spec)
            alphas[i, j] = alpha
            rows.append((lq, ls, pm.phi[i, j], alpha, pm.phi[i, j] * alpha))
    columns = ["lambda_q_nm", "lambda_s_nm", "phi", "alpha_p", "product"]
    data = {
        "q_grid_nm": q_grid, "s_grid_nm": s_grid,
        "phi": pm.phi, "alpha_p": alphas,
        "phase_loci_nm": [line.tolist() for line in pm.phase_loci],
        "energy_loci_nm": [line.tolist() for line in pm.energy_loci],
    }
    _write(cfg, "phasematch", columns, rows, data, resolved)


@main.command()
@_common_options
@click.option("--lambda-t", type=float, help="Target wavelength, nm.")
@click.option("--pump", type=str, help="Fixed pump wavelength in nm, or 'auto'.")
@click.option("--fwhm", type=float, help="Pump intensity FWHM, nm.")
@click.option("--length", type=float, help="Fibre length, m.")
@click.option("--s-min", type=float)
@click.option("--s-max", type=float)
@click.option("--s-step", type=float)
def envelope(config_path, out, fmt, threads, seedless, pitch, ratio, lambda_t,
             pump, fwhm, length, s_min, s_max, s_step):
    """Maximum conversion-efficiency envelope versus source wavelength."""
    cfg = _base_cfg(
        config_path, out, fmt, threads, seedless, pitch=pitch, ratio=ratio,
        lambda_t=lambda_t, pump=pump, fwhm=fwhm, length=length,
        s_min=s_min, s_max=s_max, s_step=s_step,
    )
    model = _model(cfg)
    lam_p, lam_t, setup, pump_spec, resolved = _conversion_cfg(cfg, model)
    s_grid = _wavelength_grid_nm(cfg, "s")
    env = bsfwm.efficiency_envelope(model, setup, pump_spec, lam_t, s_grid)
    if env.clipped.any():
        click.echo(
            "warning: tunable-pump search window clipped by validity "
            f"boundary at {int(env.clipped.sum())} source point(s)",
            err=True,
        )
    rows = [
        (env.lambda_q_nm[i], env.lambda_s_nm[i], env.values[i], bool(env.clipped[i]))
        for i in range(len(s_grid))
    ]
    columns = ["lambda_q_nm", "lambda_s_nm", "envelope", "clipped"]
    data = {
        "lambda_s_nm": env.lambda_s_nm,
        "lambda_q_nm": env.lambda_q_nm,
        "envelope": env.values,
        "clipped": env.clipped,
    }
    _write(cfg, "envelope", columns, rows, data, resolved)


@main.command()
@_common_options
@click.option("--lambda-t", type=float, help="Target wavelength, nm.")
@click.option("--axis", type=click.Choice(["pitch", "ratio"]))
@click.option("--fractions", type=str, help="Comma-separated relative changes.")
@click.option("--fwhm", type=float, help="Pump intensity FWHM, nm.")
@click.option("--length", type=float, help="Fibre length, m.")
@click.option("--envelope-at", "envelope_at", type=float,
              help="Also write the perturbed envelope at this fraction.")
@click.option("--s-min", type=float)
@click.option("--s-max", type=float)
@click.option("--s-step", type=float)
def compensate(config_path, out, fmt, threads, seedless, pitch, ratio, lambda_t,
               axis, fractions, fwhm, length, envelope_at, s_min, s_max, s_step):
    """Pump-wavelength compensation curve for geometry perturbations."""
    cfg = _base_cfg(
        config_path, out, fmt, threads, seedless, pitch=pitch, ratio=ratio,
        lambda_t=lambda_t, axis=axis, fractions=fractions, fwhm=fwhm,
        length=length, envelope_at=envelope_at,
        s_min=s_min, s_max=s_max, s_step=s_step,
    )
    model = _model(cfg)
    _require(cfg, "lambda_t", "axis", "fractions")
    fracs = [float(x) for x in str(cfg["fractions"]).split(",") if x.strip()]
    if not fracs:
        raise ConfigError("no perturbation fractions given")
    curve = compensation_curve(model, cfg["axis"], fracs, float(cfg["lambda_t"]))
    if all(p.status != "ok" for p in curve):
        raise NotFoundError("pump solve failed at every perturbation fraction")
    rows = [
        (p.fraction, cfg["axis"], p.lambda_p_nm, p.delta_nm, p.status) for p in curve
    ]
    columns = ["fraction", "axis", "lambda_p_nm", "delta_lambda_p_nm", "status"]
    data = {
        "axis": cfg["axis"],
        "points": [
            {"fraction": p.fraction, "lambda_p_nm": p.lambda_p_nm,
             "delta_lambda_p_nm": p.delta_nm, "status": p.status}
            for p in curve
        ],
    }
    _write(cfg, "compensate", columns, rows, data)
    if cfg.get("envelope_at") is not None:
        _require(cfg, "fwhm")
        s_grid = _wavelength_grid_nm(cfg, "s")
        pe = perturbed_envelope(
            model,
            Perturbation(cfg["axis"], float(cfg["envelope_at"])),
            float(cfg["lambda_t"]),
            float(cfg["fwhm"]),
            s_grid,
            bsfwm.ConversionSetup(fibre_length=float(cfg.get("length", 1.0))),
        )
        io.write_json(
            str(cfg["out"]) + ".envelope.json",
            {
                "lambda_p_nm": pe.lambda_p_nm,
                "summary_bandwidth_nm": pe.summary_bandwidth_nm,
                "lambda_s_nm": pe.envelope.lambda_s_nm,
                "envelope": pe.envelope.values,
            },
            io.metadata("compensate", {k: v for k, v in sorted(cfg.items())}),
        )


def run() -> int:
    try:
        main.main(args=sys.argv[1:], standalone_mode=False)
        return 0
    except click.exceptions.Abort:
        return 130
    except click.ClickException as exc:
        exc.show()
        return EXIT_CONFIG
    except (ConfigError, DomainError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_CONFIG
    except (NotFoundError, PcffwmError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(run())
