"""Select the compiled kernels when available, else the NumPy fallback.

Set ``CSMDS_BACKEND=python`` to force the fallback, ``CSMDS_BACKEND=cython``
to fail loudly when the extension is missing.
"""

import os

from . import _fallback

_choice = os.environ.get("CSMDS_BACKEND", "auto").strip().lower()

if _choice == "python":
    _impl = _fallback
    NAME = "python"
else:
    try:
        from . import _kernels as _impl
        NAME = "cython"
    except ImportError:
        if _choice == "cython":
            raise
        _impl = _fallback
        NAME = "python"

csmds_epoch = _impl.csmds_epoch
dijkstra_all_pairs = _impl.dijkstra_all_pairs
draw_order = _fallback.draw_order

BACKENDS = {"python": _fallback}
try:
    from . import _kernels

    BACKENDS["cython"] = _kernels
except ImportError:
    pass
