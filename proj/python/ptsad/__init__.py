"""Anomaly detection for uncertain pseudo-periodic time series.

Thin Python wrapper around the C++ core. All operations live in the
compiled ``_ptsad`` extension; this package just re-exports them.
"""

try:
    from ._ptsad import *  # noqa: F401,F403  (installed layout)
    from . import _ptsad as _core
except ImportError:  # pragma: no cover - build-tree layout used by ctest
    from _ptsad import *  # noqa: F401,F403
    import _ptsad as _core

__all__ = [name for name in dir(_core) if not name.startswith("_")]
__version__ = "0.1.0"
