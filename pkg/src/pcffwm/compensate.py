"""Fixed-pump selection and its response to fabrication error.

The fixed pump for a given fibre and target is pinned by requiring zero
linear phase mismatch at the point where the tunable pump and the source
become degenerate; energy conservation puts that degeneracy frequency at
the midpoint of the pump and target frequencies, so the pump solves

    f(w_p) = beta(w_p) + beta(w_t) - 2 beta((w_p + w_t) / 2) = 0

with the trivial root w_p = w_t excluded. For a fibre whose group
velocity is exactly symmetric about its zero-dispersion frequency the
implied degeneracy point sits at the ZDW.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .bsfwm import (
    ConversionSetup,
    EnvelopeResult,
    PumpSpec,
    efficiency_envelope,
    nm_from_omega,
    omega_from_nm,
)
from .errors import DomainError, NotFoundError, PcffwmError
from .pcf import DispersionModel, FibreGeometry, lambda_um_from_omega

__all__ = [
    "Perturbation",
    "PumpSolution",
    "pump_for_target",
    "CompensationPoint",
    "compensation_curve",
    "PerturbedEnvelope",
    "perturbed_envelope",
    "summary_bandwidth_nm",
]


@dataclass(frozen=True)
class Perturbation:
    """Signed relative change of one geometry parameter."""

    axis: str  # "pitch" | "ratio"
    fraction: float

    def __post_init__(self):
        if self.axis not in ("pitch", "ratio"):
            raise ValueError("axis must be 'pitch' or 'ratio'")
        if not abs(self.fraction) < 0.1:
            raise ValueError("|fraction| must be below 0.1")

    def apply(self, geometry: FibreGeometry) -> FibreGeometry:
        return geometry.perturbed(self.axis, self.fraction)


@dataclass(frozen=True)
class PumpSolution:
    lambda_p_nm: float
    residual: float  # f at the root, rad/m
    at_edge: bool  # root within one scan step of the window edge


def pump_for_target(
    model: DispersionModel,
    lambda_t_nm: float,
    scan_step_nm: float = 1.0,
) -> PumpSolution:
    """Fixed pump wavelength (nm) for conversion to ``lambda_t_nm``.

    Brackets f over the validity window at ``scan_step_nm`` resolution
    and bisects; the trivial root is deflated by excluding a 0.5 nm
    neighbourhood of the target. If several nontrivial roots exist the
    one whose degeneracy point lies closest to the ZDW is returned.
    """
    w_t = float(omega_from_nm(lambda_t_nm))
    lam_t_um = lambda_t_nm * 1e-3
    res = model.check_validity(lam_t_um)
    if not res:
        raise DomainError(f"target wavelength: {res.reason}")
    b_t = model.beta(w_t)

    def f(lam_nm):
        w_p = float(omega_from_nm(lam_nm))
        return model.beta(w_p) + b_t - 2.0 * model.beta(0.5 * (w_p + w_t))

    vlo, vhi = model.lambda_window()
    lo_nm, hi_nm = vlo * 1e3 + scan_step_nm, vhi * 1e3 - scan_step_nm
    grid = np.arange(lo_nm, hi_nm, scan_step_nm)
    # deflate the trivial root w_p = w_t
    keep = np.abs(grid - lambda_t_nm) > 0.5
    w_grid = omega_from_nm(grid)
    b_grid = model.beta(w_grid)
    b_mid = model.beta(0.5 * (np.asarray(w_grid) + w_t))
    vals = b_grid + b_t - 2.0 * b_mid
    sign = np.sign(vals)
    roots = []
    for i in np.nonzero(np.diff(sign) != 0)[0]:
        if not (keep[i] and keep[i + 1]):
            continue
        roots.append(brentq(f, grid[i], grid[i + 1], xtol=1e-6))
    if not roots:
        raise NotFoundError(
            "no nontrivial pump root in the validity window "
            f"[{lo_nm:.0f}, {hi_nm:.0f}] nm"
        )
    if len(roots) > 1:
        try:
            lam0_nm = model.find_zdw() * 1e3
            deg = lambda lam_p: float(
                nm_from_omega(0.5 * (float(omega_from_nm(lam_p)) + w_t))
            )
            roots.sort(key=lambda lam_p: abs(deg(lam_p) - lam0_nm))
        except (NotFoundError, DomainError):
            roots.sort()
    root = roots[0]
    at_edge = root - lo_nm < scan_step_nm or hi_nm - root < scan_step_nm
    return PumpSolution(lambda_p_nm=float(root), residual=float(f(root)), at_edge=at_edge)


@dataclass(frozen=True)
class CompensationPoint:
    fraction: float
    lambda_p_nm: float | None
    delta_nm: float | None
    status: str  # "ok" | error text


def compensation_curve(
    model_nominal: DispersionModel,
    axis: str,
    fractions,
    lambda_t_nm: float,
) -> list[CompensationPoint]:
    """Required pump wavelength and its shift from nominal for a list of
    relative perturbations of one geometry axis. Failures are recorded
    per point; the remaining points are still computed."""
    nominal = pump_for_target(model_nominal, lambda_t_nm).lambda_p_nm
    points = []
    for frac in fractions:
        try:
            geometry = Perturbation(axis, float(frac)).apply(model_nominal.geometry)
            model = DispersionModel(
                geometry,
                material=model_nominal.material,
                fits=model_nominal.fits,
                derivative_step=model_nominal.derivative_step,
            )
            lam_p = pump_for_target(model, lambda_t_nm).lambda_p_nm
            points.append(
                CompensationPoint(float(frac), lam_p, lam_p - nominal, "ok")
            )
        except (PcffwmError, ValueError) as exc:
            points.append(CompensationPoint(float(frac), None, None, str(exc)))
    return points


def summary_bandwidth_nm(envelope: EnvelopeResult, threshold: float = 0.5) -> float:
    """Longest contiguous source-wavelength span (nm) with envelope value
    at or above ``threshold``."""
    lam = envelope.lambda_s_nm
    above = envelope.values >= threshold
    best = 0.0
    start = None
    for i, flag in enumerate(above):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            best = max(best, lam[i - 1] - lam[start])
            start = None
    if start is not None:
        best = max(best, lam[-1] - lam[start])
    return float(best)


@dataclass(frozen=True)
class PerturbedEnvelope:
    perturbation: Perturbation
    lambda_p_nm: float
    envelope: EnvelopeResult
    summary_bandwidth_nm: float


def perturbed_envelope(
    model_nominal: DispersionModel,
    perturbation: Perturbation,
    lambda_t_nm: float,
    pump_fwhm_nm: float,
    s_grid_nm,
    setup: ConversionSetup | None = None,
) -> PerturbedEnvelope:
    """Apply the perturbation, re-derive the pump for the same target and
    recompute the efficiency envelope."""
    geometry = perturbation.apply(model_nominal.geometry)
    model = DispersionModel(
        geometry,
        material=model_nominal.material,
        fits=model_nominal.fits,
        derivative_step=model_nominal.derivative_step,
    )
    lam_p = pump_for_target(model, lambda_t_nm).lambda_p_nm
    setup = setup or ConversionSetup()
    pump = PumpSpec(center_wavelength=lam_p, fwhm=pump_fwhm_nm)
    env = efficiency_envelope(model, setup, pump, lambda_t_nm, s_grid_nm)
    return PerturbedEnvelope(
        perturbation=perturbation,
        lambda_p_nm=lam_p,
        envelope=env,
        summary_bandwidth_nm=summary_bandwidth_nm(env),
    )
