"""Select the compiled kernels when available.

Set ``DIFFCOH_PURE_PYTHON=1`` to force the pure-Python implementation.
"""

import os

from . import _kernels_py

kernels = _kernels_py
COMPILED = False

if os.environ.get("DIFFCOH_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        kernels = _compiled
        COMPILED = True


def backend_name() -> str:
    return "compiled" if COMPILED else "python"
