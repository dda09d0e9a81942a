"""Pure-Python (numpy) implementation of the hot evaluation kernels.

Used when the compiled extension is unavailable or explicitly disabled;
``pcffwm.core`` picks between this module and ``pcffwm._core`` at import
time. Both expose the same two functions with identical semantics:

``sellmeier_n(lam, sb, sc)``
    Background-glass index, no domain checks.

``neff(lam, pitch, av, cw, sb, sc)``
    Effective index of the fundamental mode from the fitted V/W
    parameters. ``av`` and ``cw`` are the four V- and W-sigmoid
    constants already collapsed over d/pitch. Points where the
    reconstruction breaks down (negative radicand) come back as NaN;
    the caller decides whether that is an error.

Inputs may be scalars or 1-D arrays; domain validity is the caller's
responsibility.
"""

import numpy as np

_SQRT3 = np.sqrt(3.0)


def sellmeier_n(lam, sb, sc):
    lam = np.asarray(lam, dtype=float)
    l2 = lam[..., None] ** 2
    n2 = 1.0 + np.sum(np.asarray(sb) * l2 / (l2 - np.asarray(sc)), axis=-1)
    return np.sqrt(n2)


def neff(lam, pitch, av, cw, sb, sc):
    lam = np.asarray(lam, dtype=float)
    x = lam / pitch
    v = av[0] + av[1] / (1.0 + av[2] * np.exp(av[3] * x))
    w = cw[0] + cw[1] / (1.0 + cw[2] * np.exp(cw[3] * x))
    # effective core radius pitch/sqrt(3); k = 2 pi / lam
    u = lam * _SQRT3 / (2.0 * np.pi * pitch)
    nco = sellmeier_n(lam, sb, sc)
    ne2 = nco * nco - (v * v - w * w) * u * u
    out = np.where(ne2 > 0.0, np.sqrt(np.abs(ne2)), np.nan)
    return float(out) if out.ndim == 0 else out
