"""Backend selection for the Monte-Carlo kernel.

The compiled extension is used when it imports; set
``PILOTREUSE_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
trial_rates = _pykernels.trial_rates

if os.environ.get("PILOTREUSE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        trial_rates = _kernels.trial_rates


def get_kernel(backend=None):
    """Return ``trial_rates`` for ``backend`` ("cython", "python" or None for the default)."""
    if backend is None:
        return trial_rates
    if backend == "python":
        return _pykernels.trial_rates
    if backend == "cython":
        from . import _kernels  # type: ignore[attr-defined]

        return _kernels.trial_rates
    raise ValueError(f"unknown backend {backend!r}")
