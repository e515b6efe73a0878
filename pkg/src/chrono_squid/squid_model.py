"""Flux to effective-speed algebra of a dc-SQUID array transmission line.

All fluxes are dimensionless ratios ``f = phi_ext / phi_0`` restricted to the
principal window ``[0, 1]``.  Speeds are returned as non-negative magnitudes;
the negative root introduced by squaring the speed-flux relation is never
produced.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy import constants

from .errors import CriticalFluxError, FluxDomainError

#: Magnetic flux quantum h / 2e in webers.
FLUX_QUANTUM = constants.h / (2 * constants.e)

#: |cos(pi f)| at or below this raises CriticalFluxError.
CRITICAL_FLOOR = 1e-9

# Rounding slack accepted on speed-squared inputs before clamping into [0, 1].
_SPEED_SQ_SLACK = 1e-12


class Branch(enum.Enum):
    """Sign of cos(pi f), which disambiguates the arccos inversion."""

    COS_POSITIVE = "cos_positive"
    COS_NEGATIVE = "cos_negative"


@dataclass(frozen=True)
class SquidParams:
    """Physical constants of one SQUID cell (SI units)."""

    critical_current: float
    cell_capacitance: float
    cell_length: float
    flux_quantum: float = FLUX_QUANTUM

    def __post_init__(self):
        for name in ("critical_current", "cell_capacitance", "cell_length", "flux_quantum"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")

    @property
    def capacitance_per_length(self) -> float:
        return self.cell_capacitance / self.cell_length


def _check_flux(f: float, name: str = "f") -> float:
    f = float(f)
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"{name} must lie in the principal window [0, 1], got {f!r}")
    return f


def abs_cos_pi(f: float) -> float:
    """|cos(pi f)| on [0, 1], exactly symmetric under f -> 1 - f.

    Folds onto [0, 1/2] (1 - f is exact there) and switches to
    sin(pi (1/2 - g)) near the critical flux for relative accuracy.
    """
    g = min(f, 1.0 - f)
    if g < 0.25:
        return math.cos(math.pi * g)
    return math.sin(math.pi * (0.5 - g))


def branch_of(f: float) -> Branch:
    """Branch that contains flux ``f``; ``f == 1/2`` belongs to neither."""
    f = _check_flux(f)
    if f < 0.5:
        return Branch.COS_POSITIVE
    if f > 0.5:
        return Branch.COS_NEGATIVE
    raise CriticalFluxError("f = 1/2 is the critical flux and has no branch")


def squid_inductance(
    params: SquidParams,
    f: float,
    cos_psi: float = 1.0,
    floor: float = CRITICAL_FLOOR,
) -> float:
    """Inductance of one SQUID at flux ratio ``f``.

    ``cos_psi`` carries the weak-signal assumption on the SQUID phase and
    defaults to 1.

    Raises:
        CriticalFluxError: if ``|cos(pi f)| <= floor``.
    """
    f = _check_flux(f)
    if not 0.0 < cos_psi <= 1.0:
        raise ValueError(f"cos_psi must lie in (0, 1], got {cos_psi!r}")
    c = abs_cos_pi(f)
    if c <= floor:
        raise CriticalFluxError(
            f"|cos(pi f)| = {c:.3e} at f = {f!r}: inductance diverges near half a flux quantum"
        )
    return params.flux_quantum / (4.0 * math.pi * params.critical_current * c * cos_psi)


def base_speed(params: SquidParams) -> float:
    """Propagation speed c0 (m/s) of the array at zero external flux."""
    return params.cell_length * math.sqrt(
        4.0 * math.pi * params.critical_current / (params.flux_quantum * params.cell_capacitance)
    )


def effective_speed(f: float) -> float:
    """Speed relative to c0 at flux ``f``: sqrt|cos(pi f)|."""
    return math.sqrt(abs_cos_pi(_check_flux(f)))


def background_speed(f_dc: float) -> float:
    """Background speed relative to c0 produced by a DC bias alone."""
    return effective_speed(f_dc)


def speed_with_dc(f_dc: float, f_total: float) -> float:
    """Speed in units of the DC-reduced background speed.

    Returns ``sqrt(|sec(pi f_dc)| |cos(pi f_total)|)``.
    """
    f_dc = _check_flux(f_dc, "f_dc")
    f_total = _check_flux(f_total, "f_total")
    c_dc = abs_cos_pi(f_dc)
    if c_dc <= CRITICAL_FLOOR:
        raise CriticalFluxError("a DC bias of half a flux quantum leaves no background speed")
    return math.sqrt(abs_cos_pi(f_total) / c_dc)


def _clamp_speed_sq(c_tilde_sq: float, upper: float = 1.0) -> float:
    s = float(c_tilde_sq)
    if not math.isfinite(s) or s < -_SPEED_SQ_SLACK or s > upper + _SPEED_SQ_SLACK:
        raise FluxDomainError(
            f"squared speed {s!r} is outside the realizable range [0, {upper!r}]"
        )
    return min(max(s, 0.0), upper)


def flux_for_speed(c_tilde_sq: float, branch: Branch) -> float:
    """Flux ratio realizing squared speed ``c_tilde_sq`` (units of c0) on ``branch``.

    COS_POSITIVE returns f in [0, 1/2], COS_NEGATIVE returns f in [1/2, 1].

    Raises:
        FluxDomainError: if ``c_tilde_sq`` is outside [0, 1].
    """
    s = _clamp_speed_sq(c_tilde_sq)
    if branch is Branch.COS_POSITIVE:
        return math.acos(s) / math.pi
    if branch is Branch.COS_NEGATIVE:
        # arccos(-s) / pi, written to keep full precision as f -> 1
        return 1.0 - math.acos(s) / math.pi
    raise TypeError(f"unknown branch {branch!r}")


def ac_flux_for_speed(f_dc: float, c_tilde_sq: float, branch: Branch) -> float:
    """AC flux to add on top of ``f_dc`` so that the speed relative to the
    DC background squares to ``c_tilde_sq``.

    The returned AC part may be negative; ``f_dc + f_ac`` always lies in
    [0, 1] and on the requested branch.

    Raises:
        CriticalFluxError: if ``f_dc`` is critical.
        FluxDomainError: if the speed exceeds the branch reach ``|sec(pi f_dc)|``.
    """
    f_dc = _check_flux(f_dc, "f_dc")
    c_dc = abs_cos_pi(f_dc)
    if c_dc <= CRITICAL_FLOOR:
        raise CriticalFluxError("a DC bias of half a flux quantum leaves no background speed")
    arg = c_dc * float(c_tilde_sq)
    if not -_SPEED_SQ_SLACK <= arg <= 1.0 + _SPEED_SQ_SLACK:
        raise FluxDomainError(
            f"c_tilde_sq = {c_tilde_sq!r} exceeds the reach {1.0 / c_dc!r} of a DC bias f_dc = {f_dc!r}"
        )
    return flux_for_speed(arg, branch) - f_dc
