"""Empirical dispersion model for hexagonal-lattice photonic crystal fibre.

A geometry is just (pitch, d/pitch). The fitted V and W parameters of the
fundamental mode are evaluated from the bundled coefficient tables, the
effective index is reconstructed against the dispersive silica background,
and everything else (propagation constant, its frequency derivatives,
group velocity, zero-dispersion wavelength) follows numerically.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.constants import c as C_LIGHT
from scipy.optimize import brentq

from . import core
from .errors import DataFileError, DomainError, ModelBreakdownError, NotFoundError
from .material import SellmeierCoefficients, _load_checked, load_silica

__all__ = [
    "FibreGeometry",
    "EmpiricalFitTables",
    "DispersionModel",
    "ValidityResult",
    "load_fits",
    "omega_from_lambda_um",
    "lambda_um_from_omega",
]

TWO_PI_C_UM = 2.0 * np.pi * C_LIGHT * 1e6  # um * rad/s


def omega_from_lambda_um(lambda_um):
    """Angular frequency (rad/s) for a vacuum wavelength in um."""
    return TWO_PI_C_UM / np.asarray(lambda_um, dtype=float)


def lambda_um_from_omega(omega):
    """Vacuum wavelength (um) for an angular frequency in rad/s."""
    return TWO_PI_C_UM / np.asarray(omega, dtype=float)


@dataclass(frozen=True)
class FibreGeometry:
    """Hexagonal-lattice PCF design: hole spacing and relative hole size."""

    pitch: float  # um
    d_over_pitch: float  # dimensionless

    def __post_init__(self):
        if not self.pitch > 0:
            raise ValueError("pitch must be positive")
        if not 0 < self.d_over_pitch < 1:
            raise ValueError("d_over_pitch must lie in (0, 1)")

    def perturbed(self, axis: str, fraction: float) -> "FibreGeometry":
        """Return a copy with ``pitch`` or ``ratio`` scaled by (1 + fraction)."""
        if axis == "pitch":
            return FibreGeometry(self.pitch * (1.0 + fraction), self.d_over_pitch)
        if axis == "ratio":
            return FibreGeometry(self.pitch, self.d_over_pitch * (1.0 + fraction))
        raise ValueError(f"unknown perturbation axis {axis!r}")


@dataclass(frozen=True)
class EmpiricalFitTables:
    """Published coefficient tables for the fitted V and W parameters.

    ``a``/``c`` are the 4x4 coefficient grids, ``b``/``d`` the associated
    3x4 exponent rows; ``ratio_range`` and ``x_range`` bound the
    (d/pitch, lambda/pitch) rectangle over which the fit is valid.
    """

    a: tuple
    b: tuple
    c: tuple
    d: tuple
    ratio_range: tuple[float, float]
    x_range: tuple[float, float]

    def __post_init__(self):
        for name, tab, shape in (
            ("a", self.a, (4, 4)),
            ("b", self.b, (3, 4)),
            ("c", self.c, (4, 4)),
            ("d", self.d, (3, 4)),
        ):
            arr = np.asarray(tab, dtype=float)
            if arr.shape != shape:
                raise DataFileError(f"fit table {name!r} has shape {arr.shape}, want {shape}")

    def sigmoid_constants(self, ratio: float) -> tuple[np.ndarray, np.ndarray]:
        """Collapse the tables over d/pitch: the four V constants and the
        four W constants of the sigmoid in lambda/pitch."""
        a = np.asarray(self.a)
        b = np.asarray(self.b)
        cc = np.asarray(self.c)
        d = np.asarray(self.d)
        av = a[0] + np.sum(a[1:] * ratio ** b, axis=0)
        cw = cc[0] + np.sum(cc[1:] * ratio ** d, axis=0)
        return av, cw


def load_fits() -> EmpiricalFitTables:
    """Load the bundled, checksummed V/W coefficient tables."""
    payload = _load_checked("pcf_empirical_fits.json")
    return EmpiricalFitTables(
        a=tuple(map(tuple, payload["a"])),
        b=tuple(map(tuple, payload["b"])),
        c=tuple(map(tuple, payload["c"])),
        d=tuple(map(tuple, payload["d"])),
        ratio_range=tuple(payload["validity"]["d_over_pitch"]),
        x_range=tuple(payload["validity"]["lambda_over_pitch"]),
    )


@dataclass(frozen=True)
class ValidityResult:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class DispersionModel:
    """Immutable evaluator for n_eff, beta and its derivatives.

    ``derivative_step`` is the angular-frequency step (rad/s) of the
    central finite-difference stencils.
    """

    geometry: FibreGeometry
    material: SellmeierCoefficients = field(default_factory=load_silica)
    fits: EmpiricalFitTables = field(default_factory=load_fits)
    derivative_step: float = 1e11

    def __post_init__(self):
        if not self.derivative_step > 0:
            raise ValueError("derivative_step must be positive")
        lo, hi = self.lambda_window()
        width = omega_from_lambda_um(lo) - omega_from_lambda_um(hi)
        if width > 0 and self.derivative_step * 100 > width:
            raise ValueError(
                "derivative_step must be at least 100x smaller than the "
                "evaluation window width"
            )

    @cached_property
    def _sigmoid(self):
        return self.fits.sigmoid_constants(self.geometry.d_over_pitch)

    # -- validity ---------------------------------------------------------

    def lambda_window(self) -> tuple[float, float]:
        """Wavelength interval (um) on which the model may be evaluated:
        the fit's lambda/pitch range intersected with the glass window."""
        xlo, xhi = self.fits.x_range
        lo = max(xlo * self.geometry.pitch, self.material.window_um[0])
        hi = min(xhi * self.geometry.pitch, self.material.window_um[1])
        return lo, hi

    def check_validity(self, lambda_um: float) -> ValidityResult:
        """Total check of (geometry, wavelength) against the fit domain."""
        r = self.geometry.d_over_pitch
        rlo, rhi = self.fits.ratio_range
        if not rlo <= r <= rhi:
            return ValidityResult(
                False, f"d/pitch = {r:g} outside fit range [{rlo:g}, {rhi:g}]"
            )
        x = lambda_um / self.geometry.pitch
        xlo, xhi = self.fits.x_range
        if not xlo <= x <= xhi:
            return ValidityResult(
                False,
                f"lambda/pitch = {x:g} outside fit range [{xlo:g}, {xhi:g}]",
            )
        glo, ghi = self.material.window_um
        if not glo <= lambda_um <= ghi:
            return ValidityResult(
                False,
                f"lambda = {lambda_um:g} um outside glass window [{glo:g}, {ghi:g}]",
            )
        return ValidityResult(True)

    def _require_valid(self, lambda_um) -> None:
        lams = np.atleast_1d(np.asarray(lambda_um, dtype=float))
        for lam in (lams.min(), lams.max()):
            res = self.check_validity(float(lam))
            if not res:
                raise DomainError(res.reason)

    # -- evaluations ------------------------------------------------------

    def glass_index(self, lambda_um):
        from .material import refractive_index

        return refractive_index(lambda_um, self.material)

    def fsm_index(self, lambda_um):
        """Cladding fundamental-space-filling-mode index from V."""
        self._require_valid(lambda_um)
        av, _ = self._sigmoid
        lam = np.asarray(lambda_um, dtype=float)
        x = lam / self.geometry.pitch
        v = av[0] + av[1] / (1.0 + av[2] * np.exp(av[3] * x))
        u = lam * np.sqrt(3.0) / (2.0 * np.pi * self.geometry.pitch)
        nco = core.sellmeier_n(lam, np.asarray(self.material.b), np.asarray(self.material.c))
        nf2 = np.asarray(nco) ** 2 - (v * u) ** 2
        if np.any(nf2 <= 0):
            raise ModelBreakdownError("negative radicand in FSM reconstruction")
        out = np.sqrt(nf2)
        return float(np.asarray(out).item()) if np.isscalar(lambda_um) else out

    def effective_index(self, lambda_um):
        """Effective index of the fundamental mode at ``lambda_um`` (um)."""
        self._require_valid(lambda_um)
        av, cw = self._sigmoid
        out = core.neff(
            lambda_um,
            self.geometry.pitch,
            av,
            cw,
            np.asarray(self.material.b),
            np.asarray(self.material.c),
        )
        if np.any(np.isnan(out)):
            raise ModelBreakdownError(
                "negative radicand in effective-index reconstruction"
            )
        return out

    def beta(self, omega):
        """Propagation constant n_eff(omega) * omega / c in rad/m."""
        lam = lambda_um_from_omega(omega)
        neff = self.effective_index(lam if lam.ndim else float(lam))
        out = neff * np.asarray(omega, dtype=float) / C_LIGHT
        return float(out) if np.ndim(out) == 0 else out

    _STENCILS = {
        # order n -> (coefficients on f(w + k h), k = -2..2, divisor power)
        1: (np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0, 1),
        2: (np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0, 2),
        3: (np.array([-1.0, 2.0, 0.0, -2.0, 1.0]) / 2.0, 3),
        4: (np.array([1.0, -4.0, 6.0, -4.0, 1.0]), 4),
    }

    def beta_n(self, omega, n: int, step: float | None = None):
        """Central finite-difference estimate of the n-th derivative of
        beta with respect to omega (n in 1..4)."""
        if n not in self._STENCILS:
            raise ValueError("derivative order must be 1..4")
        h = self.derivative_step if step is None else step
        omega = np.asarray(omega, dtype=float)
        offsets = h * np.arange(-2.0, 3.0)
        grid = omega[..., None] + offsets
        lams = lambda_um_from_omega(grid)
        for edge in (lams.min(), lams.max()):
            res = self.check_validity(float(edge))
            if not res:
                raise DomainError(
                    f"derivative stencil leaves validity domain at "
                    f"lambda = {float(edge):g} um: {res.reason}"
                )
        flat = grid.reshape(-1)
        b = self.beta(flat).reshape(grid.shape)
        coeff, power = self._STENCILS[n]
        out = np.sum(coeff * b, axis=-1) / h ** power
        return float(out) if out.ndim == 0 else out

    def group_velocity(self, omega):
        """Group velocity 1/beta_1 in m/s."""
        return 1.0 / self.beta_n(omega, 1)

    # -- zero-dispersion wavelength --------------------------------------

    def find_zdw(
        self,
        search_window: tuple[float, float] = (0.4, 2.0),
        n_scan: int = 400,
    ) -> float:
        """Shortest wavelength (um) in ``search_window`` at which beta_2
        vanishes. Warns if the window holds more than one root."""
        lo, hi = search_window
        vlo, vhi = self.lambda_window()
        # keep the derivative stencil inside the validity window
        margin_lo = lambda_um_from_omega(omega_from_lambda_um(vlo) - 2.5 * self.derivative_step)
        margin_hi = lambda_um_from_omega(omega_from_lambda_um(vhi) + 2.5 * self.derivative_step)
        lo, hi = max(lo, float(margin_lo)), min(hi, float(margin_hi))
        if not lo < hi:
            raise DomainError(
                "ZDW search window does not overlap the validity domain"
            )
        lams = np.linspace(lo, hi, n_scan)
        b2 = self.beta_n(omega_from_lambda_um(lams), 2)
        sign = np.sign(b2)
        brackets = np.nonzero(np.diff(sign) != 0)[0]
        if len(brackets) == 0:
            raise NotFoundError(
                f"beta_2 does not change sign on [{lo:g}, {hi:g}] um"
            )
        roots = []
        for i in brackets:
            f = lambda lam: float(self.beta_n(omega_from_lambda_um(lam), 2))
            roots.append(brentq(f, lams[i], lams[i + 1], xtol=1e-6))
        if len(roots) > 1:
            warnings.warn(
                f"{len(roots)} zero-dispersion roots in window; returning the "
                "shortest-wavelength one",
                stacklevel=2,
            )
        return min(roots)
