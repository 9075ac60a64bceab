"""Step kernels for the fixed-point solvers.

The compiled extension ``ridgefp.kernels._core`` (Cython) carries the hot
per-iteration loops; ``ridgefp.kernels.pure`` is a numpy implementation
with identical signatures. The compiled backend is preferred when present;
set ``RIDGEFP_PURE=1`` to force the fallback (used by the benchmark).

The two backends apply the same update formulas but accumulate dot
products in different orders, so iterates may differ by rounding noise.
"""

import os

from . import pure

if os.environ.get("RIDGEFP_PURE", "0") not in ("", "0"):
    _impl = pure
    BACKEND = "pure"
else:
    try:
        from . import _core as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = pure
        BACKEND = "pure"

step_pdfp1 = _impl.step_pdfp1
step_pdfp2 = _impl.step_pdfp2
step_qtz = _impl.step_qtz
step_nqtz = _impl.step_nqtz
step_mqtz = _impl.step_mqtz
step_mqtz2 = _impl.step_mqtz2


def backends():
    """Mapping of available backend name -> module (for benchmarks/tests)."""
    found = {"pure": pure}
    try:
        from . import _core

        found["compiled"] = _core
    except ImportError:
        pass
    return found
