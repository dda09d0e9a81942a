"""Backend selection for the hot evaluation kernels.

Prefers the compiled Cython extension, falling back to the numpy
implementation if the extension was not built. Set ``PCFFWM_PURE_PY=1``
to force the fallback (used by the benchmark and the test suite to
compare both paths).
"""

import os

if os.environ.get("PCFFWM_PURE_PY"):
    from . import _core_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _core_py as _impl

        BACKEND = "python"

sellmeier_n = _impl.sellmeier_n
neff = _impl.neff
