"""Backend selection for the time-stepping kernel.

The compiled extension is used when it imports; set ``WAVEFD_PURE_PYTHON=1``
to force the numpy fallback. Both backends give bitwise-identical results.
"""

import os

from . import _kernels_py

BACKENDS = {"python": _kernels_py.step_levels}

try:
    from . import _kernels
except ImportError:
    _kernels = None
else:
    BACKENDS["compiled"] = _kernels.step_levels

if _kernels is not None and not os.environ.get("WAVEFD_PURE_PYTHON"):
    DEFAULT_BACKEND = "compiled"
else:
    DEFAULT_BACKEND = "python"


def get_kernel(backend=None):
    name = backend or DEFAULT_BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {sorted(BACKENDS)}") from None
