"""Design and verification toolkit for dc-SQUID-array analogue-gravity simulators.

Submodules:

``squid_model``
    flux <-> effective speed algebra of a SQUID cell.
``spacetime``
    null geodesics, round-trip times and horizons of ds^2 = -c(x)^2 dt^2 + dx^2.
``array_designer``
    per-SQUID flux designs, feasibility and critical-flux diagnostics.
``lattice_sim``
    LC-ladder time-domain oracle (compiled kernel with a NumPy fallback).
``cli``
    the ``chrono-squid`` command.
"""

__version__ = "0.1.0"
