"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; setting the
environment variable ``CANONHAM_PURE`` (to anything nonempty) forces the
pure-NumPy fallback.  Both backends expose the same three functions with
identical numerics contracts; ``benchmarks/bench_kernels.py`` compares them.
"""

import os

from . import _kernels_py

if os.environ.get("CANONHAM_PURE"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

levinson_sweep = _impl.levinson_sweep
szego_eval = _impl.szego_eval
moments_from_alphas = _impl.moments_from_alphas


def backend_name():
    """Name of the active kernel backend ('cython' or 'python')."""
    return _impl.BACKEND
