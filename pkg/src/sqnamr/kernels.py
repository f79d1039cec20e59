"""Kernel backend selection.

The compiled extension is used when it was built; setting
``SQNAMR_PURE_PYTHON=1`` forces the pure-Python twin.
"""

import os

from . import _kernels_py
from ._errors import IntegrationError  # noqa: F401

BACKEND = "python"
_impl = _kernels_py
if not os.environ.get("SQNAMR_PURE_PYTHON"):
    try:
        from . import _kernels as _impl  # noqa: F811
    except ImportError:
        _impl = _kernels_py
    else:
        BACKEND = "cython"

moment_rhs = _impl.moment_rhs
integrate_moments = _impl.integrate_moments
integrate_to_steady = _impl.integrate_to_steady
potential_grid = _impl.potential_grid


def backends():
    """Mapping of available backend name -> module."""
    found = {"python": _kernels_py}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        found["cython"] = _kernels
    return found
