"""Backend selection for the walk-step kernel.

The compiled ``_kernels`` extension is used when it was built; otherwise, or
when ``QW1D_PURE_PYTHON`` is set to a non-empty value, the numpy version in
``_kernels_py`` is used.  Both satisfy the same contract.
"""

import os

from . import _kernels_py

if os.environ.get("QW1D_PURE_PYTHON"):
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
walk_evolve = (_compiled or _kernels_py).walk_evolve
walk_evolve_python = _kernels_py.walk_evolve
walk_evolve_compiled = _compiled.walk_evolve if _compiled is not None else None
