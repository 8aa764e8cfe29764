"""Backend selection for the hot kernels.

The compiled extension is used when it imports cleanly; otherwise the
pure-Python twins are used.  Set ``FPCERT_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os

from fpcert import _pykernels

if os.environ.get("FPCERT_PURE"):
    _impl = _pykernels
else:
    try:
        from fpcert import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "compiled" if _impl is not _pykernels else "python"

reduce_word = _impl.reduce_word
substitute = _impl.substitute
compose_images = _impl.compose_images
helly_scan = _impl.helly_scan


def backends():
    """Available kernel modules keyed by name (for tests and benchmarks)."""
    out = {"python": _pykernels}
    try:
        from fpcert import _ckernels
    except ImportError:
        pass
    else:
        out["compiled"] = _ckernels
    return out
