"""Per-SQUID flux designs for a target speed profile, plus the feasibility
diagnostics that limit how close a design may get to a chronological horizon.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import CriticalFluxError, EmptyDesignError, EmptyWindowError
from .numerics import find_root
from .spacetime import CubicProfile, SpeedProfile
from .squid_model import Branch, SquidParams, effective_speed, flux_for_speed, squid_inductance

DEFAULT_MARGIN = 0.05
SCAN_POINTS = 2049
CUBIC_FLAT_EDGE = -(2.0 ** (1.0 / 3.0))


class BranchPolicy(enum.Enum):
    AUTO = "auto"
    FORCE_COS_POSITIVE = "cos_positive"
    FORCE_COS_NEGATIVE = "cos_negative"

    @property
    def branch(self) -> Branch:
        # AUTO follows the flux down from phi_0 toward phi_0/2 as the horizon nears.
        if self is BranchPolicy.FORCE_COS_POSITIVE:
            return Branch.COS_POSITIVE
        return Branch.COS_NEGATIVE


class Window(NamedTuple):
    lower: float
    upper: float

    @property
    def width(self) -> float:
        return self.upper - self.lower


@dataclass(frozen=True)
class DesignRequest:
    profile: SpeedProfile
    window: tuple[float, float]
    cell_count: int
    params: SquidParams
    branch_policy: BranchPolicy = BranchPolicy.AUTO
    margin_delta: float = DEFAULT_MARGIN

    def __post_init__(self):
        lo, hi = self.window
        if not lo < hi:
            raise ValueError(f"window lower bound must be below upper bound, got {self.window!r}")
        if self.cell_count < 1:
            raise ValueError("cell_count must be at least 1")
        if not 0 < self.margin_delta < 0.5:
            raise ValueError("margin_delta must lie in (0, 1/2)")


class Cell(NamedTuple):
    index: int
    position: float
    target_speed: float
    speed_squared: float
    flux: float
    inductance: float
    critical: bool
    feasible: bool


@dataclass(frozen=True)
class ArrayDesign:
    """Column-oriented per-cell design.

    Infeasible cells keep NaN flux and inductance.  Feasible cells whose
    flux falls on the critical floor get an infinite inductance.
    """

    request: DesignRequest
    positions: np.ndarray
    target_speed: np.ndarray
    speed_squared: np.ndarray
    flux: np.ndarray
    inductance: np.ndarray
    critical: np.ndarray
    feasible: np.ndarray

    @property
    def spacing(self) -> float:
        lo, hi = self.request.window
        return (hi - lo) / self.request.cell_count

    def __len__(self):
        return len(self.positions)

    @property
    def cells(self) -> list[Cell]:
        return [
            Cell(i, *(col[i].item() for col in (
                self.positions, self.target_speed, self.speed_squared, self.flux,
                self.inductance, self.critical, self.feasible,
            )))
            for i in range(len(self))
        ]

    @property
    def all_feasible(self) -> bool:
        return bool(self.feasible.all())


class Proximity(NamedTuple):
    count: int
    fraction: float
    positions: list[float]


def _is_feasible(c: float) -> bool:
    return c > 0 and c * c <= 1.0


def _boundary(profile: SpeedProfile, inside: float, outside: float) -> float:
    """Locate the feasibility edge between a feasible and an infeasible point."""
    if profile(outside) <= 0:
        # Horizon side: speed hits zero.
        return find_root(profile, *sorted((inside, outside)))
    return find_root(lambda x: profile.speed_squared(x) - 1.0, *sorted((inside, outside)))


def _windows_where(ok, grid, edge) -> list[Window]:
    windows = []
    start = None
    for i, x in enumerate(grid):
        if ok[i] and start is None:
            start = x if i == 0 else edge(x, grid[i - 1])
        if start is not None and (not ok[i] or i == len(grid) - 1):
            stop = x if ok[i] else edge(grid[i - 1], x)
            windows.append(Window(float(start), float(stop)))
            start = None
    return windows


def feasibility_window(
    profile: SpeedProfile, search_window: tuple[float, float], grid_points: int = SCAN_POINTS
) -> list[Window]:
    """Maximal sub-windows where 0 < c and c^2 <= 1.

    Edges are refined by bisection to 1e-12.  A horizon edge (c = 0) is an
    open end: it is reported as the window bound but is itself infeasible.
    """
    lo, hi = search_window
    grid = np.linspace(lo, hi, grid_points)
    ok = [_is_feasible(profile(float(x))) for x in grid]
    return _windows_where(ok, grid, lambda a, b: _boundary(profile, float(a), float(b)))


def design_array(request: DesignRequest) -> ArrayDesign:
    """Assign a flux to every cell centre of the request window.

    Raises:
        EmptyDesignError: if no cell is feasible.
    """
    profile = request.profile
    lo, hi = request.window
    n = request.cell_count
    spacing = (hi - lo) / n
    positions = lo + spacing * (np.arange(n) + 0.5)
    branch = request.branch_policy.branch

    target = np.empty(n)
    speed_sq = np.empty(n)
    flux = np.full(n, np.nan)
    inductance = np.full(n, np.nan)
    critical = np.zeros(n, dtype=bool)
    feasible = np.zeros(n, dtype=bool)
    for i, x in enumerate(positions):
        c = float(profile(float(x)))
        s = float(profile.speed_squared(float(x)))
        target[i], speed_sq[i] = c, s
        if not (c > 0 and s <= 1.0):
            continue
        f = flux_for_speed(s, branch)
        flux[i] = f
        feasible[i] = True
        critical[i] = abs(f - 0.5) < request.margin_delta
        try:
            inductance[i] = squid_inductance(request.params, f)
        except CriticalFluxError:
            inductance[i] = math.inf
    if not feasible.any():
        raise EmptyDesignError(
            f"no cell in window {request.window!r} maps to a positive speed at most the array speed"
        )
    return ArrayDesign(request, positions, target, speed_sq, flux, inductance, critical, feasible)


def critical_proximity(design: ArrayDesign, delta: float = DEFAULT_MARGIN) -> Proximity:
    """Feasible cells whose flux lies within ``delta`` of half a flux quantum."""
    if not 0 < delta < 0.5:
        raise ValueError("delta must lie in (0, 1/2)")
    mask = design.feasible & (np.abs(np.where(design.feasible, design.flux, 0.0) - 0.5) < delta)
    feasible_count = int(design.feasible.sum())
    count = int(mask.sum())
    return Proximity(count, count / feasible_count if feasible_count else 0.0, design.positions[mask].tolist())


def safe_window(
    profile: SpeedProfile,
    delta_f: float,
    search_window: tuple[float, float] | None = None,
    grid_points: int = SCAN_POINTS,
) -> Window:
    """Widest feasible sub-window whose flux keeps ``delta_f`` away from 1/2.

    On either branch ``|f - 1/2| >= delta_f`` is equivalent to
    ``c^2 >= sin(pi delta_f)``.

    Raises:
        EmptyWindowError: if no point satisfies the margin.
    """
    if not 0 < delta_f < 0.5:
        raise ValueError("delta_f must lie in (0, 1/2)")
    if search_window is None:
        search_window = _default_search(profile)
    threshold = math.sin(math.pi * delta_f)

    def margin(x):
        return profile.speed_squared(x) - threshold

    candidates = []
    for fw in feasibility_window(profile, search_window, grid_points):
        grid = np.linspace(fw.lower, fw.upper, grid_points)
        # Open horizon ends sit at c = 0, which never satisfies a positive margin.
        ok = [margin(float(x)) >= 0 for x in grid]
        candidates += _windows_where(ok, grid, lambda a, b: find_root(margin, *sorted((float(a), float(b)))))
    if not candidates:
        raise EmptyWindowError(f"no point keeps the flux {delta_f!r} away from half a flux quantum")
    return max(candidates, key=lambda w: w.width)


def _default_search(profile: SpeedProfile) -> tuple[float, float]:
    lo, hi = profile.domain
    if math.isfinite(lo) and math.isfinite(hi):
        return (lo, hi)
    if isinstance(profile, CubicProfile):
        return (-2.0, 2.0)
    raise ValueError("an explicit search window is required for unbounded profiles")


def figure1_curve(point_count: int) -> np.ndarray:
    """Flux profile of the cubic spacetime on the cos-negative branch.

    Returns an array of rows ``(x/a, pi f, pi/2)`` on a uniform grid over
    ``[-2^(1/3), 0)``; the last column is the critical threshold.
    """
    if point_count < 2:
        raise ValueError("point_count must be at least 2")
    profile = CubicProfile()
    xs = np.linspace(CUBIC_FLAT_EDGE, 0.0, point_count, endpoint=False)
    flux_pi = [math.pi * flux_for_speed(profile.speed_squared(float(x)), Branch.COS_NEGATIVE) for x in xs]
    return np.column_stack([xs, flux_pi, np.full(point_count, math.pi / 2)])


def check_round_trip(design: ArrayDesign) -> float:
    """Largest |effective_speed(f) - |c|| over feasible cells."""
    worst = 0.0
    for f, c, ok in zip(design.flux, design.target_speed, design.feasible):
        if ok:
            worst = max(worst, abs(effective_speed(float(f)) - abs(float(c))))
    return worst
