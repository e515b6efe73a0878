"""Null geodesics of the static 1+1D line element ds^2 = -c(x)^2 dt^2 + dx^2.

Positions are dimensionless (x / a for the cubic profile), speeds are in
units of the background propagation speed, and coordinate times are in
units of ``a / c_background``.  Null curves obey dx/dt = +-c(x), so the
coordinate time to cross ``[x1, x2]`` is the integral of 1/c.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import HorizonInPathError, HorizonSingularityError, OutOfDomainError
from .numerics import adaptive_simpson, find_root, sign_change_roots

#: Number of interior samples scanned for horizons before integrating.
GUARD_SAMPLES = 256
#: |c| below this counts as touching a horizon.
HORIZON_EPS = 1e-12
QUAD_TOL = 1e-10
CLOSED_FORM_RTOL = 1e-8


class SpeedProfile:
    """Signed metric speed c(x) as a callable.

    Subclasses implement :meth:`__call__`; :meth:`speed_squared` may be
    overridden when a more accurate closed form exists.
    """

    kind = "abstract"
    domain = (-math.inf, math.inf)

    def __call__(self, x: float) -> float:
        raise NotImplementedError

    def speed_squared(self, x: float) -> float:
        c = self(x)
        return c * c

    def contains(self, x: float) -> bool:
        lo, hi = self.domain
        return lo <= x <= hi


@dataclass(frozen=True)
class CubicProfile(SpeedProfile):
    """c(x) = -x^3 / 2: backward-in-time null geodesics for x < 0, horizon at 0.

    ``scale_a`` is the length scale a in metres; it only matters when
    converting to SI units.
    """

    scale_a: float = 1.0
    kind = "cubic"

    def __post_init__(self):
        if not self.scale_a > 0:
            raise ValueError(f"scale_a must be positive, got {self.scale_a!r}")

    def __call__(self, x):
        return -(x**3) / 2.0

    def speed_squared(self, x):
        return x**6 / 4.0


@dataclass(frozen=True)
class TabulatedProfile(SpeedProfile):
    """Piecewise-linear interpolation through ``(x, c)`` samples."""

    xs: tuple[float, ...]
    cs: tuple[float, ...]
    kind = "tabulated"

    def __post_init__(self):
        xs = tuple(float(x) for x in self.xs)
        cs = tuple(float(c) for c in self.cs)
        if len(xs) != len(cs) or len(xs) < 2:
            raise ValueError("need at least two (x, c) samples of equal length")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("tabulated positions must be strictly increasing")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "cs", cs)

    @property
    def domain(self):
        return (self.xs[0], self.xs[-1])

    def __call__(self, x):
        lo, hi = self.domain
        if np.any(np.asarray(x) < lo) or np.any(np.asarray(x) > hi):
            raise OutOfDomainError(f"x = {x!r} outside tabulated range [{lo}, {hi}]")
        y = np.interp(x, self.xs, self.cs)
        return float(y) if np.ndim(y) == 0 else y


@dataclass(frozen=True)
class AnalyticProfile(SpeedProfile):
    """Wraps any deterministic callable x -> signed c."""

    evaluator: Callable[[float], float]
    label: str = "analytic"
    kind = "analytic"

    def __call__(self, x):
        return self.evaluator(x)


def flat_profile() -> AnalyticProfile:
    """Constant unit speed: flat spacetime, no horizon."""
    return AnalyticProfile(_unit_speed, label="flat")


def _unit_speed(x):
    return np.ones_like(x, dtype=float) if np.ndim(x) else 1.0


class TimeMethod(enum.Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class TripReport:
    """Out-and-back null trip between ``x1`` and ``x2``."""

    x1: float
    x2: float
    one_way_time: float
    round_trip_time: float
    causal: bool
    method: TimeMethod
    closed_form_round_trip: float | None = field(default=None)


class Region(NamedTuple):
    lower: float
    upper: float
    speed_sign: int
    time_orientation: int


def metric_speed(profile: SpeedProfile, x: float) -> float:
    """Signed metric speed of ``profile`` at ``x``."""
    if not profile.contains(x):
        raise OutOfDomainError(f"x = {x!r} outside profile domain {profile.domain}")
    return profile(x)


def coordinate_time_cubic(x: float) -> float:
    """Closed-form antiderivative of 1/c for the cubic profile: 1 / x^2."""
    if x == 0:
        raise HorizonSingularityError("coordinate time diverges at the horizon x = 0")
    return 1.0 / (x * x)


def _guard_interval(profile: SpeedProfile, lo: float, hi: float) -> None:
    xs = np.linspace(lo, hi, GUARD_SAMPLES + 2)
    cs = [metric_speed(profile, float(x)) for x in xs]
    for x, c in zip(xs, cs):
        if abs(c) < HORIZON_EPS:
            raise HorizonInPathError(
                f"metric speed vanishes at x = {x:.12g} inside [{lo}, {hi}]", horizon=float(x)
            )
    for (xa, ca), (xb, cb) in zip(zip(xs, cs), zip(xs[1:], cs[1:])):
        if (ca > 0) != (cb > 0):
            root = find_root(profile, float(xa), float(xb))
            raise HorizonInPathError(
                f"metric speed changes sign at x = {root:.12g} inside [{lo}, {hi}]", horizon=root
            )


def elapsed_time(profile: SpeedProfile, x1: float, x2: float) -> float:
    """Coordinate time for a null curve to go from ``x1`` to ``x2``.

    Antisymmetric in its endpoints.

    Raises:
        HorizonInPathError: when c vanishes or changes sign on the interval.
    """
    if x1 == x2:
        return 0.0
    _guard_interval(profile, min(x1, x2), max(x1, x2))
    return adaptive_simpson(lambda x: 1.0 / profile(x), x1, x2, rel_tol=QUAD_TOL, abs_tol=QUAD_TOL)


def round_trip_time(
    profile: SpeedProfile,
    x1: float,
    x2: float,
    method: TimeMethod = TimeMethod.QUADRATURE,
) -> TripReport:
    """Round trip x1 -> x2 -> x1, i.e. twice the one-way time.

    For the cubic profile the closed form ``2 (1/x2^2 - 1/x1^2)`` is always
    evaluated and cross-checked against quadrature.
    """
    closed = None
    if isinstance(profile, CubicProfile):
        closed = 0.0 if x1 == x2 else 2.0 * (coordinate_time_cubic(x2) - coordinate_time_cubic(x1))
    elif method is TimeMethod.CLOSED_FORM:
        raise ValueError("closed-form times exist only for the cubic profile")

    one_way = elapsed_time(profile, x1, x2)
    if closed is not None and abs(2.0 * one_way - closed) > CLOSED_FORM_RTOL * abs(closed):
        raise ArithmeticError(
            f"quadrature {2.0 * one_way!r} disagrees with closed form {closed!r} on [{x1}, {x2}]"
        )
    if method is TimeMethod.CLOSED_FORM:
        one_way = closed / 2.0
    total = 2.0 * one_way
    return TripReport(
        x1=x1,
        x2=x2,
        one_way_time=one_way,
        round_trip_time=total,
        causal=total > 0,
        method=method,
        closed_form_round_trip=closed,
    )


def find_horizons(
    profile: SpeedProfile, window: tuple[float, float], grid_points: int = 1025
) -> list[float]:
    """Zeros of c in ``window``: sign-change scan plus bisection to 1e-12."""
    lo, hi = window
    if not lo < hi:
        raise ValueError(f"empty window {window!r}")
    if grid_points < 2:
        raise ValueError("grid_points must be at least 2")
    roots = sorted(sign_change_roots(profile, np.linspace(lo, hi, grid_points)))
    merged: list[float] = []
    for r in roots:
        if not merged or r - merged[-1] > 2e-12:
            merged.append(r)
    return merged


def classify_regions(
    profile: SpeedProfile, window: tuple[float, float], grid_points: int = 1025
) -> list[Region]:
    """Split ``window`` at horizons; report sign of c and of 1/c per piece.

    ``time_orientation`` is +1 where right-moving null curves advance the
    coordinate time and -1 where they rewind it.
    """
    lo, hi = window
    cuts = [h for h in find_horizons(profile, window, grid_points) if lo < h < hi]
    edges = [lo, *cuts, hi]
    regions = []
    for a, b in zip(edges, edges[1:]):
        c = profile(0.5 * (a + b))
        sign = 1 if c > 0 else -1 if c < 0 else 0
        regions.append(Region(a, b, sign, sign))
    return regions
