"""Bragg-scattering four-wave-mixing relations and figure-level maps.

Frequency conventions: the four interacting waves are a fixed pump (p), a
tunable pump (q), the source (s) and the target (t). Wavelengths at this
level are quoted in nm (matching the usual experimental convention);
angular frequencies are rad/s. The dispersion side of every computation
is delegated to a :class:`~pcffwm.pcf.DispersionModel`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c as C_LIGHT
from scipy.optimize import brentq, minimize_scalar

from .errors import ConfigError, DomainError, NotFoundError
from .pcf import DispersionModel, lambda_um_from_omega, omega_from_lambda_um

__all__ = [
    "FourWaveSet",
    "PumpSpec",
    "ConversionSetup",
    "energy_mismatch",
    "linear_phase_mismatch",
    "total_phase_mismatch",
    "phasematch_intensity",
    "pump_envelope",
    "inferred_pump_frequency",
    "gv_symmetry_delta",
    "symmetry_bandwidth",
    "SymmetrySpan",
    "phasematch_map",
    "PhasematchMap",
    "locus_separation",
    "efficiency_envelope",
    "EnvelopeResult",
]


def omega_from_nm(lambda_nm):
    return omega_from_lambda_um(np.asarray(lambda_nm, dtype=float) * 1e-3)


def nm_from_omega(omega):
    return lambda_um_from_omega(omega) * 1e3


@dataclass(frozen=True)
class FourWaveSet:
    """Angular frequencies (rad/s) of one BS-FWM interaction."""

    omega_p: float
    omega_q: float
    omega_s: float
    omega_t: float

    def __post_init__(self):
        for name in ("omega_p", "omega_q", "omega_s", "omega_t"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")

    @classmethod
    def from_wavelengths_nm(cls, p, q, s, t):
        return cls(*(float(omega_from_nm(w)) for w in (p, q, s, t)))


@dataclass(frozen=True)
class PumpSpec:
    """Fixed pump: centre wavelength and intensity FWHM, both in nm."""

    center_wavelength: float
    fwhm: float

    def __post_init__(self):
        if not self.center_wavelength > 0:
            raise ValueError("center_wavelength must be positive")
        if not self.fwhm > 0:
            raise ValueError("fwhm must be positive")

    @property
    def omega_center(self) -> float:
        return float(omega_from_nm(self.center_wavelength))

    @property
    def fwhm_omega(self) -> float:
        """Intensity FWHM mapped to angular frequency (rad/s)."""
        lam_m = self.center_wavelength * 1e-9
        return 2.0 * np.pi * C_LIGHT * self.fwhm * 1e-9 / lam_m ** 2

    @property
    def sigma_omega(self) -> float:
        """Gaussian width of the field envelope such that the intensity
        |alpha|^2 has the configured FWHM."""
        return self.fwhm_omega / np.sqrt(2.0 * np.log(2.0))


@dataclass(frozen=True)
class ConversionSetup:
    """Fibre length plus the optional nonlinear pump-power correction."""

    fibre_length: float = 1.0  # m
    gamma: float | None = None  # 1/(W m)
    p_power: float | None = None  # W
    q_power: float | None = None  # W

    def __post_init__(self):
        if not self.fibre_length > 0:
            raise ConfigError("fibre_length must be positive")
        powers = (self.p_power, self.q_power)
        if any(p is not None for p in powers):
            if any(p is None for p in powers):
                raise ConfigError("p_power and q_power must be given together")
            if any(p < 0 for p in powers):
                raise ConfigError("pump powers must be non-negative")
            if self.gamma is None:
                raise ConfigError("gamma is required when pump powers are set")

    @property
    def has_powers(self) -> bool:
        return self.p_power is not None


def energy_mismatch(fws: FourWaveSet) -> float:
    """(omega_p + omega_t) - (omega_q + omega_s), rad/s; zero iff the
    interaction conserves energy."""
    return (fws.omega_p + fws.omega_t) - (fws.omega_q + fws.omega_s)


def linear_phase_mismatch(fws: FourWaveSet, model: DispersionModel) -> float:
    """Delta beta = beta_p + beta_t - beta_q - beta_s in rad/m."""
    betas = {}
    for leg in ("p", "q", "s", "t"):
        omega = getattr(fws, f"omega_{leg}")
        lam = float(lambda_um_from_omega(omega))
        res = model.check_validity(lam)
        if not res:
            raise DomainError(f"leg {leg!r} (lambda = {lam:g} um): {res.reason}")
        betas[leg] = model.beta(omega)
    return betas["p"] + betas["t"] - betas["q"] - betas["s"]


def total_phase_mismatch(
    fws: FourWaveSet, model: DispersionModel, setup: ConversionSetup
) -> float:
    """Delta kappa_BS in rad/m: half the linear mismatch, plus the
    nonlinear pump-power correction when powers are configured."""
    dk = 0.5 * linear_phase_mismatch(fws, model)
    if setup.has_powers:
        dk += 0.5 * setup.gamma * (setup.q_power - setup.p_power)
    return dk


def phasematch_intensity(delta_kappa, length: float):
    """|sinc(delta_kappa * length / 2)|^2, with sinc(0) = 1."""
    if not length > 0:
        raise ConfigError("length must be positive")
    x = np.asarray(delta_kappa, dtype=float) * length / 2.0
    out = np.sinc(x / np.pi) ** 2
    return float(out) if out.ndim == 0 else out


def inferred_pump_frequency(fws: FourWaveSet) -> float:
    """Fixed-pump frequency implied by energy conservation:
    omega_q + omega_s - omega_t."""
    return fws.omega_q + fws.omega_s - fws.omega_t


def pump_envelope(omega_p, pump: PumpSpec):
    """Gaussian spectral field envelope of the fixed pump, in (0, 1].

    ``omega_p`` may be a frequency (rad/s) or a FourWaveSet, in which
    case the pump frequency is inferred from energy conservation.
    """
    if isinstance(omega_p, FourWaveSet):
        omega_p = inferred_pump_frequency(omega_p)
    d = (np.asarray(omega_p, dtype=float) - pump.omega_center) / pump.sigma_omega
    out = np.exp(-(d ** 2))
    return float(out) if out.ndim == 0 else out


def gv_symmetry_delta(model: DispersionModel, omega0: float, detuning: float) -> float:
    """|v_g(omega0 + detuning) - v_g(omega0 - detuning)| in m/s."""
    vg = model.group_velocity(np.array([omega0 + detuning, omega0 - detuning]))
    return float(abs(vg[0] - vg[1]))


@dataclass(frozen=True)
class SymmetrySpan:
    """Wavelength extent over which the group velocity is symmetric."""

    span_um: float
    truncated: bool
    lambda0_um: float


def symmetry_bandwidth(
    model: DispersionModel,
    threshold: float,
    zdw_window: tuple[float, float] = (0.4, 2.0),
    step_nm: float = 1.0,
) -> SymmetrySpan:
    """Largest total wavelength span (um) about the ZDW over which
    |v_g(omega0 + d) - v_g(omega0 - d)| stays below ``threshold`` for
    every detuning d on a dense grid (wavelength spacing <= step_nm).

    ``truncated`` is set when the symmetric window runs into the
    validity boundary rather than the threshold.
    """
    lam0 = model.find_zdw(zdw_window)
    omega0 = float(omega_from_lambda_um(lam0))
    if threshold <= 0:
        return SymmetrySpan(0.0, False, lam0)
    vlo, vhi = model.lambda_window()
    # keep the derivative stencils inside the validity window
    margin = 2.5 * model.derivative_step
    w_hi_cap = float(omega_from_lambda_um(vlo)) - margin  # short-wavelength edge
    w_lo_cap = float(omega_from_lambda_um(vhi)) + margin  # long-wavelength edge
    d_cap = min(w_hi_cap - omega0, omega0 - w_lo_cap)
    if d_cap <= 0:
        return SymmetrySpan(0.0, True, lam0)
    lam_long = np.arange(lam0 + step_nm * 1e-3, vhi + 1e-12, step_nm * 1e-3)
    det = omega0 - omega_from_lambda_um(lam_long)
    det = det[det < d_cap]
    if len(det) == 0:
        return SymmetrySpan(0.0, True, lam0)
    vg_hi = model.group_velocity(omega0 + det)
    vg_lo = model.group_velocity(omega0 - det)
    dv = np.abs(vg_hi - vg_lo)
    exceeded = np.nonzero(dv >= threshold)[0]
    if len(exceeded) == 0:
        d_edge = det[-1]
        truncated = True
    elif exceeded[0] == 0:
        return SymmetrySpan(0.0, False, lam0)
    else:
        d_edge = det[exceeded[0] - 1]
        truncated = False
    span = float(
        lambda_um_from_omega(omega0 - d_edge) - lambda_um_from_omega(omega0 + d_edge)
    )
    return SymmetrySpan(span, truncated, lam0)


# -- phase-matching maps ---------------------------------------------------


@dataclass(frozen=True)
class PhasematchMap:
    """Phase-matching intensity over a (lambda_q, lambda_s) grid.

    ``phi[i, j]`` belongs to (q_grid_nm[i], s_grid_nm[j]); the two signed
    fields share that layout. Loci are ordered polylines of (lambda_q,
    lambda_s) points in nm.
    """

    q_grid_nm: np.ndarray
    s_grid_nm: np.ndarray
    phi: np.ndarray
    delta_beta: np.ndarray
    energy_residual: np.ndarray
    phase_loci: list = field(default_factory=list)
    energy_loci: list = field(default_factory=list)


def _zero_contours(field_arr, q_grid, s_grid):
    """Marching-squares zero contours of a signed field, mapped from
    index space to wavelength coordinates."""
    from skimage import measure

    lines = []
    for poly in measure.find_contours(field_arr, 0.0):
        qi, sj = poly[:, 0], poly[:, 1]
        lam_q = np.interp(qi, np.arange(len(q_grid)), q_grid)
        lam_s = np.interp(sj, np.arange(len(s_grid)), s_grid)
        lines.append(np.column_stack([lam_q, lam_s]))
    return lines


def phasematch_map(
    model: DispersionModel,
    setup: ConversionSetup,
    q_grid_nm,
    s_grid_nm,
    lambda_t_nm: float,
    lambda_p_nm: float,
) -> PhasematchMap:
    """Phi over the (lambda_q, lambda_s) grid with the fixed pump pinned
    at ``lambda_p_nm``, plus the zero loci of the signed phase-mismatch
    and energy-conservation fields."""
    q_grid = np.asarray(q_grid_nm, dtype=float)
    s_grid = np.asarray(s_grid_nm, dtype=float)
    if q_grid.size == 0 or s_grid.size == 0:
        raise ConfigError("phase-matching map grids must be non-empty")
    w_q = omega_from_nm(q_grid)
    w_s = omega_from_nm(s_grid)
    w_t = float(omega_from_nm(lambda_t_nm))
    w_p = float(omega_from_nm(lambda_p_nm))
    b_q = model.beta(w_q)
    b_s = model.beta(w_s)
    b_p = model.beta(w_p)
    b_t = model.beta(w_t)
    delta_beta = (b_p + b_t) - b_q[:, None] - b_s[None, :]
    dk = 0.5 * delta_beta
    if setup.has_powers:
        dk = dk + 0.5 * setup.gamma * (setup.q_power - setup.p_power)
    phi = phasematch_intensity(dk, setup.fibre_length)
    energy = (w_q[:, None] + w_s[None, :] - w_t) - w_p
    return PhasematchMap(
        q_grid_nm=q_grid,
        s_grid_nm=s_grid,
        phi=phi,
        delta_beta=delta_beta,
        energy_residual=energy,
        phase_loci=_zero_contours(delta_beta, q_grid, s_grid),
        energy_loci=_zero_contours(energy, q_grid, s_grid),
    )


def locus_separation(
    model: DispersionModel,
    s_grid_nm,
    lambda_t_nm: float,
    lambda_p_nm: float,
) -> np.ndarray:
    """Per-source-wavelength gap (nm) between the zero-phase-mismatch
    locus and the energy-conservation locus.

    For each lambda_s the energy locus pins lambda_q; the phase locus is
    the root of Delta beta over lambda_q. NaN where either is missing.
    """
    s_grid = np.asarray(s_grid_nm, dtype=float)
    w_t = float(omega_from_nm(lambda_t_nm))
    w_p = float(omega_from_nm(lambda_p_nm))
    b_p = model.beta(w_p)
    b_t = model.beta(w_t)
    vlo, vhi = model.lambda_window()
    out = np.full(s_grid.shape, np.nan)
    for k, lam_s in enumerate(s_grid):
        w_s = float(omega_from_nm(lam_s))
        try:
            b_s = model.beta(w_s)
        except Exception:
            continue
        w_q_energy = w_p + w_t - w_s
        lam_q_energy = float(nm_from_omega(w_q_energy))
        # bracket the phase root around the energy point
        lo = max(vlo * 1e3 + 1.0, lam_q_energy - 200.0)
        hi = min(vhi * 1e3 - 1.0, lam_q_energy + 200.0)
        if not lo < hi:
            continue

        def g(lam_q):
            return b_p + b_t - model.beta(float(omega_from_nm(lam_q))) - b_s

        grid = np.linspace(lo, hi, 64)
        vals = np.array([g(x) for x in grid])
        idx = np.nonzero(np.diff(np.sign(vals)) != 0)[0]
        if len(idx) == 0:
            continue
        # take the root closest to the energy-conserving point
        roots = [brentq(g, grid[i], grid[i + 1], xtol=1e-4) for i in idx]
        lam_q_phase = min(roots, key=lambda x: abs(x - lam_q_energy))
        out[k] = lam_q_phase - lam_q_energy
    return out


# -- efficiency envelope ---------------------------------------------------


@dataclass(frozen=True)
class EnvelopeResult:
    """Per-source-wavelength maximum of Phi * alpha_p over the tunable
    pump, bounding the achievable conversion efficiency."""

    lambda_s_nm: np.ndarray
    values: np.ndarray
    lambda_q_nm: np.ndarray  # arg max
    clipped: np.ndarray  # search window hit the validity boundary


def efficiency_envelope(
    model: DispersionModel,
    setup: ConversionSetup,
    pump: PumpSpec,
    lambda_t_nm: float,
    s_grid_nm,
) -> EnvelopeResult:
    """Maximise Phi(Delta kappa) * alpha_p over the tunable pump for each
    source wavelength.

    The search covers at least +-5 intensity FWHM of the pump around the
    energy-conserving tunable-pump frequency; besides a coarse scan, the
    zero crossings of Delta beta are located explicitly, because the
    phase-matching ridge can be far narrower than any reasonable scan
    step. Each candidate is polished by bounded golden-section search.
    """
    s_grid = np.asarray(s_grid_nm, dtype=float)
    if s_grid.size == 0:
        raise ConfigError("source grid must be non-empty")
    w_t = float(omega_from_nm(lambda_t_nm))
    b_t = model.beta(w_t)
    w_p0 = pump.omega_center
    fw = pump.fwhm_omega
    sig = pump.sigma_omega
    nl = 0.5 * setup.gamma * (setup.q_power - setup.p_power) if setup.has_powers else 0.0
    vlo, vhi = model.lambda_window()
    margin = 2.5 * model.derivative_step
    w_max = float(omega_from_lambda_um(vlo)) - margin
    w_min = float(omega_from_lambda_um(vhi)) + margin

    values = np.zeros(s_grid.shape)
    arg_q = np.full(s_grid.shape, np.nan)
    clipped = np.zeros(s_grid.shape, dtype=bool)

    for k, lam_s in enumerate(s_grid):
        w_s = float(omega_from_nm(lam_s))
        b_s = model.beta(w_s)
        w_q_ec = w_p0 + w_t - w_s

        def objective(w_q):
            w_p = w_q + w_s - w_t
            db = model.beta(w_p) + b_t - model.beta(w_q) - b_s
            phi = phasematch_intensity(0.5 * db + nl, setup.fibre_length)
            alpha = np.exp(-(((w_p - w_p0) / sig) ** 2))
            return phi * alpha

        lo = w_q_ec - 5.0 * fw
        hi = w_q_ec + 5.0 * fw
        # both the q leg and the implied p leg must stay in-domain
        lo_valid = max(w_min, w_min - (w_s - w_t))
        hi_valid = min(w_max, w_max - (w_s - w_t))
        if lo < lo_valid or hi > hi_valid:
            clipped[k] = True
            lo, hi = max(lo, lo_valid), min(hi, hi_valid)
        if not lo < hi:
            continue

        candidates = []
        if lo <= w_q_ec <= hi:
            candidates.append(w_q_ec)
        # coarse scan at one tenth of the pump FWHM
        n_coarse = max(int(np.ceil((hi - lo) / (fw / 10.0))) + 1, 8)
        w_scan = np.linspace(lo, hi, n_coarse)
        w_p_scan = w_scan + w_s - w_t
        db_scan = model.beta(w_p_scan) + b_t - model.beta(w_scan) - b_s
        vals = phasematch_intensity(0.5 * db_scan + nl, setup.fibre_length) * np.exp(
            -(((w_p_scan - w_p0) / sig) ** 2)
        )
        candidates.append(w_scan[int(np.argmax(vals))])
        # explicit zero crossings of the signed mismatch
        for i in np.nonzero(np.diff(np.sign(db_scan + 2 * nl)) != 0)[0]:
            root = brentq(
                lambda w: model.beta(w + w_s - w_t) + b_t - model.beta(w) - b_s + 2 * nl,
                w_scan[i],
                w_scan[i + 1],
                xtol=1e6,
            )
            candidates.append(root)

        best_val, best_q = 0.0, np.nan
        half = fw / 10.0
        for cand in candidates:
            a, b = max(lo, cand - half), min(hi, cand + half)
            if not a < b:
                continue
            res = minimize_scalar(
                lambda w: -objective(w),
                bounds=(a, b),
                method="bounded",
                options={"xatol": 1e8},
            )
            if -res.fun > best_val:
                best_val, best_q = float(-res.fun), float(res.x)
        values[k] = best_val
        arg_q[k] = nm_from_omega(best_q) if np.isfinite(best_q) else np.nan

    return EnvelopeResult(
        lambda_s_nm=s_grid, values=values, lambda_q_nm=arg_q, clipped=clipped
    )
