"""Wavelength-dependent refractive index of the glass background.

The bundled dataset is a three-term Sellmeier fit for fused silica; the
coefficients live in ``data/silica_sellmeier.json`` together with their
validity window and a checksum, so alternative glasses can be swapped in
without touching code.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import DataFileError, DomainError

__all__ = ["SellmeierCoefficients", "load_silica", "refractive_index"]


@dataclass(frozen=True)
class SellmeierCoefficients:
    """Three-term Sellmeier model n^2 = 1 + sum_i b_i l^2 / (l^2 - c_i).

    b are dimensionless oscillator strengths, c are resonance wavelengths
    squared in um^2, window_um is the transparency window (um) inside
    which the fit may be evaluated.
    """

    b: tuple[float, float, float]
    c: tuple[float, float, float]
    window_um: tuple[float, float]

    def __post_init__(self):
        if len(self.b) != 3 or len(self.c) != 3:
            raise ValueError("exactly three (b, c) pairs required")
        if any(bi < 0 for bi in self.b):
            raise ValueError("oscillator strengths must be non-negative")
        if any(ci <= 0 for ci in self.c):
            raise ValueError("resonance wavelengths squared must be positive")
        if len(set(self.c)) != 3:
            raise ValueError("resonance wavelengths must be pairwise distinct")
        lo, hi = self.window_um
        if not 0 < lo < hi:
            raise ValueError("validity window must satisfy 0 < lo < hi")


def _load_checked(name: str) -> dict:
    """Read a bundled JSON data file and verify its checksum."""
    try:
        text = resources.files("pcffwm.data").joinpath(name).read_text()
        doc = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataFileError(f"cannot read data file {name!r}: {exc}") from exc
    try:
        payload, recorded = doc["payload"], doc["sha256"]
    except KeyError as exc:
        raise DataFileError(f"data file {name!r} missing field {exc}") from exc
    digest = hashlib.sha256(
        json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()
    if digest != recorded:
        raise DataFileError(
            f"checksum mismatch in {name!r}: recorded {recorded}, computed {digest}"
        )
    return payload


def load_silica() -> SellmeierCoefficients:
    """Load the bundled fused-silica Sellmeier data."""
    payload = _load_checked("silica_sellmeier.json")
    return SellmeierCoefficients(
        b=tuple(payload["b"]),
        c=tuple(payload["c"]),
        window_um=tuple(payload["window_um"]),
    )


def refractive_index(lambda_um, coeffs: SellmeierCoefficients):
    """Refractive index at vacuum wavelength ``lambda_um`` (um).

    Accepts a scalar or array; raises DomainError if any wavelength is
    outside the coefficients' transparency window or the radicand of the
    Sellmeier sum turns negative.
    """
    lam = np.asarray(lambda_um, dtype=float)
    lo, hi = coeffs.window_um
    if np.any(lam < lo) or np.any(lam > hi):
        raise DomainError(
            f"wavelength outside Sellmeier validity window [{lo}, {hi}] um"
        )
    l2 = lam[..., None] ** 2
    c = np.asarray(coeffs.c)
    if np.any(l2 == c):
        raise DomainError("wavelength coincides with a Sellmeier resonance")
    n2 = 1.0 + np.sum(np.asarray(coeffs.b) * l2 / (l2 - c), axis=-1)
    if np.any(n2 <= 0):
        raise DomainError("negative radicand in Sellmeier evaluation")
    n = np.sqrt(n2)
    return float(n) if np.isscalar(lambda_um) else n
