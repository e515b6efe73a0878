"""Time-domain LC-ladder simulation of a flux-designed SQUID array.

The ladder has one series SQUID inductance and one shunt capacitance per
cell.  Node ``n`` carries voltage ``V[n]``; inductor ``n`` joins nodes ``n``
and ``n + 1`` and carries current ``I[n]``.  A lattice of ``N`` cells
therefore has ``N + 1`` nodes.  Time integration is the staggered leapfrog
scheme: currents first, from the old voltages, then voltages from the new
currents.

Pulse arrival is measured with the energy (V^2) centroid at two probe
nodes and compared with the per-cell delay sum ``sum sqrt(L_n C)``, the
discrete form of the coordinate time integral of 1/c.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from ..array_designer import ArrayDesign
from ..errors import CriticalCellError, CriticalFluxError, NoArrivalError, NumericalBlowupError
from ..spacetime import SpeedProfile, elapsed_time
from ..squid_model import SquidParams, base_speed, squid_inductance
from . import _backend

DEFAULT_CFL = 0.5
CAP_FACTOR = 1e3
BLOWUP_FACTOR = 1e12
MIN_PROBE_SEPARATION = 16
# Half-width of the probe gates in envelope widths.
GATE_WIDTHS = 6.0


class Boundary(enum.Enum):
    MATCHED = "matched"
    REFLECTIVE = "reflective"


@dataclass(frozen=True, eq=False)
class LatticeSpec:
    """Discrete ladder: per-cell inductances plus shared C, cell length and step.

    ``build_lattice`` enforces ``time_step <= cfl_factor * sqrt(L_min C)``;
    direct construction does not, so unstable lattices can be studied.
    ``origin`` and ``spacing`` map node indices to dimensionless positions
    when the lattice came from a design (node ``graded_start`` sits at
    ``origin``).
    """

    cell_inductances: np.ndarray
    cell_capacitance: float
    cell_length: float
    time_step: float
    boundary: Boundary = Boundary.MATCHED
    inductance_cap: float = math.inf
    cfl_factor: float = DEFAULT_CFL
    graded_start: int = 0
    graded_cells: int | None = None
    origin: float | None = None
    spacing: float | None = None

    def __post_init__(self):
        L = np.ascontiguousarray(self.cell_inductances, dtype=float)
        if L.ndim != 1 or len(L) < 2:
            raise ValueError("need at least two cells")
        if not np.all(np.isfinite(L) & (L > 0)):
            raise ValueError("cell inductances must be positive and finite")
        if np.any(L > self.inductance_cap):
            raise CriticalCellError(
                "inductance above cap", np.flatnonzero(L > self.inductance_cap).tolist()
            )
        if not (self.cell_capacitance > 0 and self.cell_length > 0 and self.time_step > 0):
            raise ValueError("capacitance, cell length and time step must be positive")
        if not 0 < self.cfl_factor <= 1:
            raise ValueError("cfl_factor must lie in (0, 1]")
        L.setflags(write=False)
        object.__setattr__(self, "cell_inductances", L)
        if self.graded_cells is None:
            object.__setattr__(self, "graded_cells", len(L) - self.graded_start)

    @property
    def n_cells(self) -> int:
        return len(self.cell_inductances)

    @property
    def n_nodes(self) -> int:
        return self.n_cells + 1

    @property
    def cell_delays(self) -> np.ndarray:
        """Per-cell transit time sqrt(L_n C) in seconds."""
        return np.sqrt(self.cell_inductances * self.cell_capacitance)

    @property
    def courant_number(self) -> float:
        return self.time_step / float(self.cell_delays.min())

    def node_position(self, node: int) -> float:
        """Dimensionless position of ``node`` (designed lattices only)."""
        if self.origin is None or self.spacing is None:
            raise ValueError("lattice carries no position mapping")
        return self.origin + (node - self.graded_start) * self.spacing

    def graded_node(self, fraction: float) -> int:
        """Node index a given fraction of the way through the graded section."""
        return self.graded_start + int(round(fraction * self.graded_cells))

    def uniform_padding_value(self) -> tuple[float, float]:
        return float(self.cell_inductances[0]), float(self.cell_inductances[-1])


@dataclass
class LatticeState:
    voltages: np.ndarray
    currents: np.ndarray
    step_index: int = 0

    def copy(self) -> LatticeState:
        return LatticeState(self.voltages.copy(), self.currents.copy(), self.step_index)


@dataclass(frozen=True)
class PulseSpec:
    """Gaussian-enveloped current injection at one node.

    ``amplitude`` is the launched voltage amplitude; ``envelope_width`` is
    the standard deviation of the envelope in seconds.
    """

    carrier_angular_frequency: float
    envelope_width: float
    amplitude: float
    injection_cell: int

    def __post_init__(self):
        if self.carrier_angular_frequency < 0 or self.envelope_width <= 0 or self.amplitude <= 0:
            raise ValueError("carrier must be non-negative, envelope width and amplitude positive")

    @classmethod
    def for_lattice(
        cls,
        spec: LatticeSpec,
        injection_cell: int,
        width_cells: float = 8.0,
        carrier_fraction: float = 0.0,
        amplitude: float = 1.0,
    ) -> PulseSpec:
        """Pulse sized in units of the transit time of the injection cell."""
        tau = float(spec.cell_delays[min(injection_cell, spec.n_cells - 1)])
        carrier = carrier_fraction * dispersion_report(spec).min_cutoff
        return cls(carrier, width_cells * tau, amplitude, injection_cell)


@dataclass(frozen=True)
class ProbeRecord:
    steps: np.ndarray
    times: np.ndarray
    voltage_a: np.ndarray
    voltage_b: np.ndarray


@dataclass(frozen=True)
class TimeOfFlight:
    probe_a: int
    probe_b: int
    measured_delay: float
    predicted_delay: float
    relative_error: float
    record: ProbeRecord | None = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class DispersionReport:
    cutoffs: np.ndarray
    min_cutoff: float
    min_cutoff_cell: int
    recommended_max_carrier: float


def build_lattice(
    design: ArrayDesign,
    params: SquidParams,
    padding_cells: int = 0,
    boundary: Boundary = Boundary.MATCHED,
    cfl_factor: float = DEFAULT_CFL,
    inductance_cap: float | None = None,
) -> LatticeSpec:
    """Ladder realizing ``design`` with ``params``, padded with uniform cells.

    Padding repeats the inductance of the first (last) designed cell.  The
    default cap is 10^3 times the zero-flux inductance.

    Raises:
        ValueError: if the design has infeasible cells.
        CriticalCellError: if any designed cell exceeds the cap.
    """
    if not design.all_feasible:
        bad = np.flatnonzero(~design.feasible).tolist()
        raise ValueError(f"design has {len(bad)} infeasible cells, first at index {bad[0]}")
    if padding_cells < 0:
        raise ValueError("padding_cells must be non-negative")
    if inductance_cap is None:
        inductance_cap = CAP_FACTOR * squid_inductance(params, 0.0)
    flux = design.flux
    graded = np.array([_inductance_or_inf(params, float(f)) for f in flux])
    over = np.flatnonzero(graded > inductance_cap)
    if len(over):
        raise CriticalCellError(
            f"{len(over)} cells exceed the inductance cap {inductance_cap:.4g} H "
            f"(first at x/a = {design.positions[over[0]]:.6g}, f = {flux[over[0]]:.6g})",
            over.tolist(),
        )
    L = np.concatenate([np.full(padding_cells, graded[0]), graded, np.full(padding_cells, graded[-1])])
    dt = cfl_factor * math.sqrt(float(L.min()) * params.cell_capacitance)
    return LatticeSpec(
        cell_inductances=L,
        cell_capacitance=params.cell_capacitance,
        cell_length=params.cell_length,
        time_step=dt,
        boundary=boundary,
        inductance_cap=inductance_cap,
        cfl_factor=cfl_factor,
        graded_start=padding_cells,
        graded_cells=len(graded),
        origin=design.request.window[0],
        spacing=design.spacing,
    )


def _inductance_or_inf(params: SquidParams, f: float) -> float:
    try:
        return squid_inductance(params, f)
    except CriticalFluxError:
        return math.inf


def uniform_lattice(
    params: SquidParams,
    n_cells: int,
    flux: float = 0.0,
    boundary: Boundary = Boundary.MATCHED,
    cfl_factor: float = DEFAULT_CFL,
) -> LatticeSpec:
    """Homogeneous ladder with every SQUID at the same flux."""
    L = squid_inductance(params, flux)
    return LatticeSpec(
        cell_inductances=np.full(n_cells, L),
        cell_capacitance=params.cell_capacitance,
        cell_length=params.cell_length,
        time_step=cfl_factor * math.sqrt(L * params.cell_capacitance),
        boundary=boundary,
        cfl_factor=cfl_factor,
    )


def _coefficients(spec: LatticeSpec):
    L = spec.cell_inductances
    C = spec.cell_capacitance
    dt = spec.time_step
    k_current = dt / L
    k_voltage = np.full(spec.n_nodes, dt / C)
    if spec.boundary is Boundary.REFLECTIVE:
        ends = np.array([1.0, dt / C, 1.0, dt / C])
    else:
        # Semi-implicit resistive load R = sqrt(L/C) at each end node.
        coeffs = []
        for L_end in (L[0], L[-1]):
            g = dt / (2.0 * math.sqrt(L_end / C) * C)
            coeffs += [(1.0 - g) / (1.0 + g), (dt / C) / (1.0 + g)]
        ends = np.array(coeffs)
    return k_current, k_voltage, ends


def zero_state(spec: LatticeSpec) -> LatticeState:
    return LatticeState(np.zeros(spec.n_nodes), np.zeros(spec.n_cells))


def _check_state(state: LatticeState, spec: LatticeSpec) -> None:
    if state.voltages.shape != (spec.n_nodes,) or state.currents.shape != (spec.n_cells,):
        raise ValueError(
            f"state shapes {state.voltages.shape}/{state.currents.shape} do not fit a "
            f"{spec.n_cells}-cell lattice"
        )


def advance(
    state: LatticeState,
    spec: LatticeSpec,
    n_steps: int,
    amplitude: float = 1.0,
    backend: str | None = None,
) -> LatticeState:
    """``n_steps`` source-free leapfrog steps from ``state`` (not modified).

    Raises:
        NumericalBlowupError: once any voltage exceeds 10^12 x ``amplitude``.
    """
    _check_state(state, spec)
    _, kernel = _backend.select(backend)
    new = state.copy()
    new.voltages = np.ascontiguousarray(new.voltages, dtype=float)
    new.currents = np.ascontiguousarray(new.currents, dtype=float)
    k_current, k_voltage, ends = _coefficients(spec)
    blown = kernel(
        new.voltages, new.currents, k_current, k_voltage, ends,
        np.zeros(n_steps), -1, np.zeros(0, dtype=np.intp), np.zeros((n_steps, 0)),
        BLOWUP_FACTOR * amplitude,
    )
    if blown >= 0:
        raise NumericalBlowupError(
            f"lattice diverged at step {state.step_index + blown + 1} "
            f"(Courant number {spec.courant_number:.3g})",
            step_index=state.step_index + blown + 1,
        )
    new.step_index += n_steps
    return new


def step(state: LatticeState, spec: LatticeSpec, amplitude: float = 1.0, backend: str | None = None) -> LatticeState:
    """One leapfrog step; see :func:`advance`."""
    return advance(state, spec, 1, amplitude, backend)


def lattice_energy(state: LatticeState, spec: LatticeSpec) -> float:
    """Stored energy sum(C V^2 / 2 + L I^2 / 2) with time-centred currents.

    The inductive term pairs the stored current ``I`` (half a step behind
    the voltages) with the current half a step ahead, which makes this the
    quantity leapfrog conserves exactly on a lossless ladder.
    """
    _check_state(state, spec)
    V, I = state.voltages, state.currents
    L = spec.cell_inductances
    ahead = I + spec.time_step / L * (V[:-1] - V[1:])
    return 0.5 * spec.cell_capacitance * float(V @ V) + 0.5 * float(np.sum(L * I * ahead))


def dispersion_report(spec: LatticeSpec) -> DispersionReport:
    """Per-cell ladder cutoffs 2 / sqrt(L_n C) and the carrier guard."""
    cutoffs = 2.0 / spec.cell_delays
    i = int(np.argmin(cutoffs))
    return DispersionReport(cutoffs, float(cutoffs[i]), i, 0.1 * float(cutoffs[i]))


def predicted_delay(spec: LatticeSpec, probe_a: int, probe_b: int) -> float:
    """Signed sum of sqrt(L_n C) over the cells between two nodes."""
    lo, hi = sorted((probe_a, probe_b))
    total = float(np.sum(spec.cell_delays[lo:hi]))
    return total if probe_b >= probe_a else -total


def continuum_delay(
    spec: LatticeSpec, profile: SpeedProfile, params: SquidParams, probe_a: int, probe_b: int
) -> float:
    """Coordinate-time integral of 1/c between two probe nodes, in seconds.

    The length scale is one cell per ``spacing`` (a = cell_length / spacing)
    and the speed scale is the zero-flux array speed.
    """
    xa, xb = spec.node_position(probe_a), spec.node_position(probe_b)
    time_unit = spec.cell_length / spec.spacing / base_speed(params)
    return elapsed_time(profile, xa, xb) * time_unit


def _cumulative_delay(spec: LatticeSpec) -> np.ndarray:
    """Transit time from node 0 to every node."""
    return np.concatenate([[0.0], np.cumsum(spec.cell_delays)])


def run_time_of_flight(
    spec: LatticeSpec,
    pulse: PulseSpec,
    probe_a: int,
    probe_b: int,
    backend: str | None = None,
) -> TimeOfFlight:
    """Launch ``pulse`` and time its energy centroid between two probes.

    Each probe integrates V^2 over a gate of +-6 envelope widths around the
    expected passage, and the run stops once the later gate closes.  Both
    probes must lie on the same side of the injection node.

    Raises:
        ValueError: on invalid probes, a carrier above the dispersion guard,
            or a lattice too short to keep boundary echoes out of the gates.
        NoArrivalError: if probe_b sees under 10^-6 of probe_a's energy.
        NumericalBlowupError: if the run diverges.
    """
    n_nodes = spec.n_nodes
    src = pulse.injection_cell
    for name, node in (("probe_a", probe_a), ("probe_b", probe_b), ("injection_cell", src)):
        if not 0 < node < n_nodes - 1:
            raise ValueError(f"{name} = {node} must be an interior node of 0..{n_nodes - 1}")
    if abs(probe_b - probe_a) < MIN_PROBE_SEPARATION:
        raise ValueError(f"probes must be at least {MIN_PROBE_SEPARATION} cells apart")
    if (probe_a - src) * (probe_b - src) <= 0:
        raise ValueError("both probes must lie strictly on the same side of the injection node")
    guard = dispersion_report(spec).recommended_max_carrier
    if pulse.carrier_angular_frequency > guard:
        raise ValueError(
            f"carrier {pulse.carrier_angular_frequency:.4g} rad/s exceeds the dispersion guard {guard:.4g} rad/s"
        )

    dt = spec.time_step
    sigma = pulse.envelope_width
    gate = GATE_WIDTHS * sigma
    t0 = gate
    cum = _cumulative_delay(spec)

    def transit(a, b):
        return abs(cum[b] - cum[a])

    def arrival(node):
        return t0 + transit(src, node)

    # Earliest echo at a probe: the backward-launched half reflecting off its
    # end, or the forward half reflecting off the far end.
    for node in (probe_a, probe_b):
        forward_end, backward_end = (n_nodes - 1, 0) if node > src else (0, n_nodes - 1)
        echo = t0 + min(
            transit(src, backward_end) + transit(backward_end, node),
            transit(src, forward_end) + transit(forward_end, node),
        )
        if echo - gate < arrival(node) + gate:
            raise ValueError(
                f"boundary echoes reach node {node} inside its gate; add padding or narrow the pulse"
            )

    t_end = max(arrival(probe_a), arrival(probe_b)) + gate
    n_steps = int(math.ceil(t_end / dt)) + 1

    L = spec.cell_inductances
    z_inj = math.sqrt(0.5 * (L[src - 1] + L[src]) / spec.cell_capacitance)
    t_src = (np.arange(n_steps) + 0.5) * dt
    envelope = np.exp(-0.5 * ((t_src - t0) / sigma) ** 2)
    source = (2.0 * pulse.amplitude / z_inj) * envelope * np.cos(pulse.carrier_angular_frequency * (t_src - t0))

    _, kernel = _backend.select(backend)
    V = np.zeros(n_nodes)
    I = np.zeros(spec.n_cells)
    probes = np.array([probe_a, probe_b], dtype=np.intp)
    record = np.zeros((n_steps, 2))
    k_current, k_voltage, ends = _coefficients(spec)
    blown = kernel(V, I, k_current, k_voltage, ends, source, src, probes, record, BLOWUP_FACTOR * pulse.amplitude)
    if blown >= 0:
        raise NumericalBlowupError(
            f"lattice diverged at step {blown + 1} (Courant number {spec.courant_number:.3g})",
            step_index=blown + 1,
        )

    times = (np.arange(n_steps) + 1) * dt
    centroids, energies = [], []
    for j, node in enumerate((probe_a, probe_b)):
        w = record[:, j] ** 2 * (np.abs(times - arrival(node)) <= gate)
        energy = float(w.sum())
        energies.append(energy)
        centroids.append(float(times @ w) / energy if energy > 0 else math.nan)
    if not energies[1] >= 1e-6 * energies[0]:
        raise NoArrivalError(f"probe {probe_b} captured {energies[1]:.3g} vs {energies[0]:.3g} at probe {probe_a}")

    measured = centroids[1] - centroids[0]
    predicted = predicted_delay(spec, probe_a, probe_b)
    return TimeOfFlight(
        probe_a=probe_a,
        probe_b=probe_b,
        measured_delay=measured,
        predicted_delay=predicted,
        relative_error=(measured - predicted) / abs(predicted),
        record=ProbeRecord(np.arange(n_steps), times, record[:, 0].copy(), record[:, 1].copy()),
    )
