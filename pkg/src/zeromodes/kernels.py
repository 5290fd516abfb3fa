"""Kernel selection: the compiled extension when importable, else numpy.

Set ``ZEROMODES_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
matching_function = _kernels_py.matching_function
integrate_path = _kernels_py.integrate_path

if not os.environ.get("ZEROMODES_PURE_PYTHON"):
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        matching_function = _kernels.matching_function
        integrate_path = _kernels.integrate_path
