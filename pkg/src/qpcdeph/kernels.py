"""Backend selection and step planning for the integration kernels.

The compiled extension (``_core``, built from ``_core.pyx``) is preferred;
when it is unavailable the pure-Python ``_core_py`` module is used.  Both
expose ``rk4_reduced`` and ``rk4_counting`` with identical semantics.
"""

from __future__ import annotations

import math

try:
    from . import _core as _impl

    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on the build environment
    from . import _core_py as _impl

    BACKEND = "python"

rk4_reduced = _impl.rk4_reduced
rk4_counting = _impl.rk4_counting

# Integration steps are subdivided so that no substep exceeds
# guard / ACCURACY_REFINE.  Stepping exactly at the stability guard
# (0.05 of the fastest time scale) leaves ~1e-6 amplitude error over two
# oscillation periods; one extra factor of 8 brings that below 1e-9.
ACCURACY_REFINE = 8


def substeps_for(interval: float, guard: float) -> int:
    """Number of equal substeps so that interval/n <= guard/ACCURACY_REFINE."""
    if not math.isfinite(guard):
        return 1
    return max(1, math.ceil(interval / (guard / ACCURACY_REFINE) - 1e-9))
