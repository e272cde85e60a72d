"""Backend selection for the subset-enumeration kernels.

The compiled extension is used when it was built; otherwise the numpy
fallback. Set ``POLYGAME_PURE_PYTHON=1`` to force the fallback.
"""

import os

from polygame import _pykernels

python_backend = _pykernels

try:
    from polygame import _ckernels as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

_force_python = os.environ.get("POLYGAME_PURE_PYTHON", "") in ("1", "true", "yes")
if compiled_backend is None or _force_python:
    _impl = python_backend
    BACKEND = "python"
else:
    _impl = compiled_backend
    BACKEND = "cython"

subset_sums = _impl.subset_sums
submask_index = _impl.submask_index
ratio_extremize = _impl.ratio_extremize
pairwise_violation = _impl.pairwise_violation
monotone_violation = _impl.monotone_violation
zeta_violation = _impl.zeta_violation

__all__ = [
    "BACKEND",
    "compiled_backend",
    "python_backend",
    "subset_sums",
    "submask_index",
    "ratio_extremize",
    "pairwise_violation",
    "monotone_violation",
    "zeta_violation",
]
