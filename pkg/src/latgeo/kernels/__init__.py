"""Kernel backend selection.

The hot loops (LLL reduction and short-vector enumeration) exist twice: a
compiled Cython extension and a pure-Python reference.  The compiled backend
is used when importable; set ``LATGEO_KERNEL=pure`` to force the fallback,
``LATGEO_KERNEL=compiled`` to fail loudly when the extension is missing.
"""

import os

from latgeo.kernels import pure as _pure

_requested = os.environ.get("LATGEO_KERNEL", "").strip().lower()

if _requested == "pure":
    _impl = _pure
elif _requested == "compiled":
    try:
        from latgeo.kernels import _speedups as _impl
    except ImportError as exc:
        raise ImportError(
            "LATGEO_KERNEL=compiled but the extension is not built"
        ) from exc
else:
    try:
        from latgeo.kernels import _speedups as _impl
    except ImportError:
        _impl = _pure

BACKEND = _impl.BACKEND_NAME
lll_reduce_gram = _impl.lll_reduce_gram
fincke_pohst = _impl.fincke_pohst

__all__ = ["BACKEND", "lll_reduce_gram", "fincke_pohst"]


def _select(name):
    """Rebind the exported kernels; benchmark and test hook."""
    global _impl, BACKEND, lll_reduce_gram, fincke_pohst
    if name == "pure":
        _impl = _pure
    elif name == "compiled":
        from latgeo.kernels import _speedups

        _impl = _speedups
    else:
        raise ValueError("unknown backend %r" % name)
    BACKEND = _impl.BACKEND_NAME
    lll_reduce_gram = _impl.lll_reduce_gram
    fincke_pohst = _impl.fincke_pohst
