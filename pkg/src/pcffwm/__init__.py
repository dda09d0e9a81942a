"""Dispersion engineering of photonic crystal fibre for broadband
Bragg-scattering four-wave-mixing frequency conversion."""

__version__ = "0.1.0"

from .core import BACKEND
from .material import SellmeierCoefficients, load_silica, refractive_index
from .pcf import DispersionModel, EmpiricalFitTables, FibreGeometry, load_fits

__all__ = [
    "BACKEND",
    "SellmeierCoefficients",
    "load_silica",
    "refractive_index",
    "DispersionModel",
    "EmpiricalFitTables",
    "FibreGeometry",
    "load_fits",
    "__version__",
]
