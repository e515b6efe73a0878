"""LC-ladder time-domain oracle for flux-designed SQUID arrays."""

from ._backend import BACKEND, KERNELS
from .sim import (
    Boundary,
    DispersionReport,
    LatticeSpec,
    LatticeState,
    ProbeRecord,
    PulseSpec,
    TimeOfFlight,
    advance,
    build_lattice,
    continuum_delay,
    dispersion_report,
    lattice_energy,
    predicted_delay,
    run_time_of_flight,
    step,
    uniform_lattice,
    zero_state,
)

__all__ = [
    "BACKEND",
    "KERNELS",
    "Boundary",
    "DispersionReport",
    "LatticeSpec",
    "LatticeState",
    "ProbeRecord",
    "PulseSpec",
    "TimeOfFlight",
    "advance",
    "build_lattice",
    "continuum_delay",
    "dispersion_report",
    "lattice_energy",
    "predicted_delay",
    "run_time_of_flight",
    "step",
    "uniform_lattice",
    "zero_state",
]
