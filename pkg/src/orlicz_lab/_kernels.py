"""Backend selection for the hot kernels.

The compiled ``_core`` extension is used when importable, unless the
environment variable ``ORLICZ_LAB_PURE=1`` forces the numpy fallback.
``BACKEND`` names the active implementation.
"""

import os

from . import _fallback

if os.environ.get("ORLICZ_LAB_PURE", "") == "1":
    _impl = _fallback
    BACKEND = "python"
else:
    try:
        from . import _core as _impl

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _fallback
        BACKEND = "python"

increment_kernel_sum = _impl.increment_kernel_sum
ball_max_1d = _impl.ball_max_1d
