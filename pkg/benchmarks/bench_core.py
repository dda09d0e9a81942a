"""Benchmark the compiled dispersion kernels against the pure-Python
fallback.

The package selects the compiled extension at import time when it is
available (see pcffwm.core); this script times both implementations on
identical workloads so the trade-off is visible:

    python benchmarks/bench_core.py
"""

import importlib
import time

import numpy as np

from pcffwm import core
from pcffwm.material import load_silica
from pcffwm.pcf import DispersionModel, FibreGeometry, load_fits


def _timeit(fn, *, repeat=5, min_time=0.2):
    """Best-of-`repeat` wall time, each sample batched to >= min_time."""
    n = 1
    while True:
        t0 = time.perf_counter()
        for _ in range(n):
            fn()
        dt = time.perf_counter() - t0
        if dt >= min_time:
            break
        n *= 4
    best = dt / n
    for _ in range(repeat - 1):
        t0 = time.perf_counter()
        for _ in range(n):
            fn()
        best = min(best, (time.perf_counter() - t0) / n)
    return best


def _backends():
    out = {"python": importlib.import_module("pcffwm._core_py")}
    try:
        out["cython"] = importlib.import_module("pcffwm._core")
    except ImportError:
        print("compiled extension not built; benchmarking pure python only")
    return out


def main():
    import warnings

    warnings.filterwarnings("ignore", message=".*zero-dispersion roots.*")
    silica = load_silica()
    fits = load_fits()
    geometry = FibreGeometry(1.78, 0.437)
    av, cw = fits.sigmoid_constants(geometry.d_over_pitch)
    sb, sc = np.asarray(silica.b), np.asarray(silica.c)

    lam_scalar = 0.9
    lam_array = np.linspace(0.5, 2.5, 20000)

    backends = _backends()
    rows = []
    for name, mod in backends.items():
        rows.append((f"sellmeier_n scalar [{name}]",
                     _timeit(lambda: mod.sellmeier_n(lam_scalar, sb, sc))))
        rows.append((f"sellmeier_n 20k array [{name}]",
                     _timeit(lambda: mod.sellmeier_n(lam_array, sb, sc))))
        rows.append((f"neff scalar [{name}]",
                     _timeit(lambda: mod.neff(lam_scalar, geometry.pitch, av, cw, sb, sc))))
        rows.append((f"neff 20k array [{name}]",
                     _timeit(lambda: mod.neff(lam_array, geometry.pitch, av, cw, sb, sc))))

    # end-to-end: ZDW search with each backend driving the model
    model = DispersionModel(geometry)
    original = (core.sellmeier_n, core.neff, core.BACKEND)
    try:
        for name, mod in backends.items():
            core.sellmeier_n, core.neff, core.BACKEND = mod.sellmeier_n, mod.neff, name
            rows.append((f"find_zdw end-to-end [{name}]", _timeit(model.find_zdw, repeat=3)))
    finally:
        core.sellmeier_n, core.neff, core.BACKEND = original

    width = max(len(r[0]) for r in rows)
    print(f"active backend at import: {core.BACKEND}\n")
    for label, t in rows:
        print(f"{label:<{width}}  {t * 1e6:10.1f} us")
    if "cython" in backends:
        for kernel in ("sellmeier_n 20k array", "neff 20k array", "find_zdw end-to-end"):
            py = next(t for l, t in rows if l == f"{kernel} [python]")
            cy = next(t for l, t in rows if l == f"{kernel} [cython]")
            print(f"{kernel}: compiled speedup x{py / cy:.1f}")


if __name__ == "__main__":
    main()
