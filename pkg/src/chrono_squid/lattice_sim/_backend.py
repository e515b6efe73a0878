"""Selects the leapfrog kernel: compiled extension if importable, else NumPy.

Set ``CHRONO_SQUID_BACKEND`` to ``python`` or ``cython`` to force one.
"""

import os

from . import _kernel_py

try:
    from . import _kernel as _kernel_c
except ImportError:  # extension not built
    _kernel_c = None

KERNELS = {"python": _kernel_py.leapfrog}
if _kernel_c is not None:
    KERNELS["cython"] = _kernel_c.leapfrog


def select(name=None):
    """Return ``(name, kernel)`` for ``name`` or the environment default."""
    name = name or os.environ.get("CHRONO_SQUID_BACKEND", "auto")
    if name == "auto":
        name = "cython" if "cython" in KERNELS else "python"
    try:
        return name, KERNELS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable lattice backend {name!r}; have {sorted(KERNELS)}") from None


BACKEND, leapfrog = select()
