"""Kernel backend selection.

The compiled extension is preferred when it imports cleanly; the
pure-Python module is the fallback.  ``QENTWINE_KERNEL=python`` or
``QENTWINE_KERNEL=cython`` forces a backend (the latter raises if the
extension is unavailable).
"""

import os

_forced = os.environ.get("QENTWINE_KERNEL", "").strip().lower()

if _forced == "python":
    from . import poly_py as _impl
elif _forced == "cython":
    from . import _poly_cy as _impl  # type: ignore[attr-defined]
else:
    try:
        from . import _poly_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import poly_py as _impl

BACKEND = _impl.BACKEND
mono_mul = _impl.mono_mul
poly_add = _impl.poly_add
poly_neg = _impl.poly_neg
poly_mul = _impl.poly_mul
poly_scale = _impl.poly_scale
