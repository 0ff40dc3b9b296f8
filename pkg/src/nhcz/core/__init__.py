"""Sweep-kernel backend selection.

The hot per-center sweeps exist twice: a compiled Cython extension
(``nhcz.core._sweeps``) and a NumPy fallback (``nhcz.core.sweeps_py``).
The compiled lane is preferred when importable. Set ``NHCZ_BACKEND`` to
``python`` or ``compiled`` to force a lane (``compiled`` raises if the
extension is missing); any other value, or unset, means auto.
"""

import os

_requested = os.environ.get("NHCZ_BACKEND", "auto").lower()

if _requested == "python":
    from . import sweeps_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _sweeps as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
        from . import sweeps_py as _impl

        BACKEND = "python"

suffix_abs_max = _impl.suffix_abs_max
prefix_ratio_max = _impl.prefix_ratio_max
radial_ratio_max = _impl.radial_ratio_max
restricted_ratio_max = _impl.restricted_ratio_max
greedy_event_take = _impl.greedy_event_take
batch_prefix_ratio_max = _impl.batch_prefix_ratio_max
batch_restricted_ratio_max = _impl.batch_restricted_ratio_max

__all__ = [
    "BACKEND",
    "suffix_abs_max",
    "prefix_ratio_max",
    "radial_ratio_max",
    "restricted_ratio_max",
    "greedy_event_take",
    "batch_prefix_ratio_max",
    "batch_restricted_ratio_max",
]
