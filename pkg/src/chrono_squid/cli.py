"""Command-line front end: ``chrono-squid {design,geodesics,figure1,simulate}``.

Configuration is an INI file (``--config``); command-line flags override
it.  Keys and units::

    [squid]
    critical_current = 1.25e-6   # A
    cell_capacitance = 90e-15    # F
    cell_length = 10e-6          # m
    [profile]
    kind = cubic                 # cubic | flat | tabulated
    scale_a =                    # m; empty = cell_length * cells / window width
    path =                       # tabulated CSV with columns x_over_a,c_tilde
    [design]
    window = -1.26:-1.0          # dimensionless x/a
    cells = 64
    margin_delta = 0.05
    branch_policy = auto         # auto | cos_positive | cos_negative
    [lattice]
    padding =                    # cells per side; empty = cells // 2
    boundary = matched           # matched | reflective
    cfl_factor = 0.5
    pulse_width_cells =          # envelope std in transit times of the injection cell;
                                 # empty = min(8, cells / 32), which keeps echoes out of the gates
    carrier_fraction = 0         # carrier as a fraction of the lowest ladder cutoff
    probe_a = 0.25               # fractions of the graded section
    probe_b = 0.75
    [figure1]
    points = 200
    [output]
    dir =                        # default $CHRONO_SQUID_OUT, else the working directory

Exit codes: 0 success, 1 configuration error, 2 design has infeasible
cells, 3 no feasible cell, 4 horizon in the geodesic path, 5 lattice
disagrees with the continuum by more than 5%, 6 cells too close to the
critical flux to simulate.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import array_designer as ad
from . import lattice_sim as ls
from . import spacetime as st
from .errors import CriticalCellError, EmptyDesignError, EmptyWindowError, HorizonInPathError
from .squid_model import SquidParams, base_speed

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INFEASIBLE = 2
EXIT_EMPTY_DESIGN = 3
EXIT_HORIZON = 4
EXIT_MISMATCH = 5
EXIT_CRITICAL = 6

SIMULATE_TOLERANCE = 0.05

DEFAULTS = {
    "squid": {"critical_current": "1.25e-6", "cell_capacitance": "90e-15", "cell_length": "10e-6"},
    "profile": {"kind": "cubic", "scale_a": "", "path": ""},
    "design": {"window": "-1.26:-1.0", "cells": "64", "margin_delta": "0.05", "branch_policy": "auto"},
    "lattice": {
        "padding": "",
        "boundary": "matched",
        "cfl_factor": "0.5",
        "pulse_width_cells": "",
        "carrier_fraction": "0",
        "probe_a": "0.25",
        "probe_b": "0.75",
    },
    "figure1": {"points": "200"},
    "output": {"dir": ""},
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    params: SquidParams
    profile: st.SpeedProfile
    scale_a: float | None
    window: tuple[float, float]
    cells: int
    margin_delta: float
    branch_policy: ad.BranchPolicy
    padding: int
    boundary: ls.Boundary
    cfl_factor: float
    pulse_width_cells: float
    carrier_fraction: float
    probe_a: float
    probe_b: float
    points: int
    out_dir: Path

    @property
    def length_scale(self) -> float:
        """a in metres: configured, or one cell length per design cell."""
        if self.scale_a is not None:
            return self.scale_a
        lo, hi = self.window
        return self.params.cell_length * self.cells / (hi - lo)

    def request(self) -> ad.DesignRequest:
        return ad.DesignRequest(
            self.profile, self.window, self.cells, self.params, self.branch_policy, self.margin_delta
        )


def parse_window(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(part) for part in text.split(":"))
    except ValueError:
        raise ConfigError(f"window must look like MIN:MAX, got {text!r}") from None
    if not lo < hi:
        raise ConfigError(f"window minimum must be below maximum, got {text!r}")
    return lo, hi


def load_profile(kind: str, path: str, scale_a: float | None) -> st.SpeedProfile:
    if kind == "cubic":
        return st.CubicProfile(scale_a if scale_a is not None else 1.0)
    if kind == "flat":
        return st.flat_profile()
    if kind == "tabulated":
        if not path:
            raise ConfigError("a tabulated profile needs [profile] path")
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        try:
            xs = [float(r["x_over_a"]) for r in rows]
            cs = [float(r["c_tilde"]) for r in rows]
            return st.TabulatedProfile(tuple(xs), tuple(cs))
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad tabulated profile {path}: {exc}") from None
    raise ConfigError(f"unknown profile kind {kind!r}")


def load_config(args: argparse.Namespace) -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.read_dict(DEFAULTS)
    if args.config:
        if not Path(args.config).is_file():
            raise ConfigError(f"config file {args.config} not found")
        parser.read(args.config)
    if args.window is not None:
        parser["design"]["window"] = args.window
    if args.cells is not None:
        parser["design"]["cells"] = str(args.cells)
    if getattr(args, "points", None) is not None:
        parser["figure1"]["points"] = str(args.points)

    try:
        params = SquidParams(
            parser.getfloat("squid", "critical_current"),
            parser.getfloat("squid", "cell_capacitance"),
            parser.getfloat("squid", "cell_length"),
        )
        raw_a = parser.get("profile", "scale_a").strip()
        scale_a = float(raw_a) if raw_a else None
        if scale_a is not None and not scale_a > 0:
            raise ConfigError("scale_a must be positive")
        cells = parser.getint("design", "cells")
        if cells < 1:
            raise ConfigError("cells must be at least 1")
        raw_pad = parser.get("lattice", "padding").strip()
        padding = int(raw_pad) if raw_pad else cells // 2
        raw_width = parser.get("lattice", "pulse_width_cells").strip()
        pulse_width = float(raw_width) if raw_width else min(8.0, cells / 32)
        out = args.out or parser.get("output", "dir").strip() or os.environ.get("CHRONO_SQUID_OUT") or "."
        cfg = RunConfig(
            params=params,
            profile=load_profile(parser.get("profile", "kind").strip(), parser.get("profile", "path").strip(), scale_a),
            scale_a=scale_a,
            window=parse_window(parser.get("design", "window")),
            cells=cells,
            margin_delta=parser.getfloat("design", "margin_delta"),
            branch_policy=ad.BranchPolicy(parser.get("design", "branch_policy").strip()),
            padding=padding,
            boundary=ls.Boundary(parser.get("lattice", "boundary").strip()),
            cfl_factor=parser.getfloat("lattice", "cfl_factor"),
            pulse_width_cells=pulse_width,
            carrier_fraction=parser.getfloat("lattice", "carrier_fraction"),
            probe_a=parser.getfloat("lattice", "probe_a"),
            probe_b=parser.getfloat("lattice", "probe_b"),
            points=parser.getint("figure1", "points"),
            out_dir=Path(out),
        )
    except ConfigError:
        raise
    except (ValueError, configparser.Error) as exc:
        raise ConfigError(str(exc)) from None
    if not 0 < cfg.margin_delta < 0.5:
        raise ConfigError("margin_delta must lie in (0, 1/2)")
    if cfg.points < 2:
        raise ConfigError("points must be at least 2")
    return cfg


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.17g" % value


def write_csv(path: Path, header: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _emit(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def cmd_design(cfg: RunConfig) -> int:
    try:
        design = ad.design_array(cfg.request())
    except EmptyDesignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY_DESIGN

    write_csv(
        cfg.out_dir / "design.csv",
        ["index", "x_over_a", "c_tilde", "flux_over_phi0", "inductance_H", "critical_flag", "feasible_flag"],
        (
            (c.index, c.position, c.target_speed, c.flux, c.inductance, c.critical, c.feasible)
            for c in design.cells
        ),
    )
    windows = ad.feasibility_window(cfg.profile, cfg.window)
    try:
        safe = list(ad.safe_window(cfg.profile, cfg.margin_delta, cfg.window))
    except EmptyWindowError:
        safe = None
    prox = ad.critical_proximity(design, cfg.margin_delta)
    summary = {
        "cells": len(design),
        "feasible_cells": int(design.feasible.sum()),
        "infeasible_cells": int((~design.feasible).sum()),
        "feasibility_windows": [list(w) for w in windows],
        "safe_window": safe,
        "margin_delta": cfg.margin_delta,
        "critical_proximity": {"count": prox.count, "fraction": prox.fraction},
    }
    write_json(cfg.out_dir / "feasibility.json", summary)
    _emit(summary)
    return EXIT_OK if design.all_feasible else EXIT_INFEASIBLE


def cmd_geodesics(cfg: RunConfig, x1: float, x2: float) -> int:
    span = (min(x1, x2, cfg.window[0]), max(x1, x2, cfg.window[1]))
    horizons = st.find_horizons(cfg.profile, span)
    time_unit = cfg.length_scale / base_speed(cfg.params)
    try:
        report = st.round_trip_time(cfg.profile, x1, x2)
    except HorizonInPathError as exc:
        _emit({"error": "horizon_in_path", "horizon": exc.horizon, "horizons": horizons, "x1": x1, "x2": x2})
        return EXIT_HORIZON
    _emit(
        {
            "x1": x1,
            "x2": x2,
            "one_way_time": report.one_way_time,
            "round_trip_time": report.round_trip_time,
            "closed_form_round_trip": report.closed_form_round_trip,
            "causal": report.causal,
            "method": report.method.value,
            "horizons": horizons,
            "time_unit_s": time_unit,
            "one_way_time_s": report.one_way_time * time_unit,
            "round_trip_time_s": report.round_trip_time * time_unit,
        }
    )
    return EXIT_OK


def cmd_figure1(cfg: RunConfig) -> int:
    table = ad.figure1_curve(cfg.points)
    path = cfg.out_dir / "figure1.csv"
    write_csv(path, ["x_over_a", "flux_pi", "threshold"], table)
    _emit({"figure1": str(path), "points": cfg.points})
    return EXIT_OK


def cmd_simulate(cfg: RunConfig) -> int:
    try:
        design = ad.design_array(cfg.request())
    except EmptyDesignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY_DESIGN
    try:
        spec = ls.build_lattice(design, cfg.params, cfg.padding, cfg.boundary, cfg.cfl_factor)
    except CriticalCellError as exc:
        print(f"error: analogue chronology protection: {exc}", file=sys.stderr)
        _emit({"error": "critical_cells", "critical_cells": len(exc.cells)})
        return EXIT_CRITICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE

    probe_a, probe_b = spec.graded_node(cfg.probe_a), spec.graded_node(cfg.probe_b)
    injection = max(1, spec.graded_start // 2)
    try:
        pulse = ls.PulseSpec.for_lattice(
            spec, injection, width_cells=cfg.pulse_width_cells, carrier_fraction=cfg.carrier_fraction
        )
        tof = ls.run_time_of_flight(spec, pulse, probe_a, probe_b)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    continuum = ls.continuum_delay(spec, cfg.profile, cfg.params, probe_a, probe_b)
    continuum_error = (tof.measured_delay - continuum) / abs(continuum)

    rec = tof.record
    write_csv(
        cfg.out_dir / "probes.csv",
        ["step", "time_s", "voltage_a", "voltage_b"],
        zip(rec.steps, rec.times, rec.voltage_a, rec.voltage_b),
    )
    summary = {
        "measured_delay": tof.measured_delay,
        "predicted_delay": tof.predicted_delay,
        "relative_error": tof.relative_error,
        "continuum_delay": continuum,
        "continuum_relative_error": continuum_error,
        "cells": spec.n_cells,
        "graded_cells": spec.graded_cells,
        "dt": spec.time_step,
        "probe_a": probe_a,
        "probe_b": probe_b,
        "backend": ls.BACKEND,
    }
    write_json(cfg.out_dir / "tof.json", summary)
    _emit(summary)
    worst = max(abs(tof.relative_error), abs(continuum_error))
    return EXIT_OK if worst <= SIMULATE_TOLERANCE else EXIT_MISMATCH


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="INI configuration file")
    common.add_argument("--window", metavar="MIN:MAX", help="design window in x/a (write --window=-1.26:-1.0)")
    common.add_argument("--cells", type=int, metavar="N", help="number of SQUID cells")
    common.add_argument("--out", metavar="DIR", help="output directory (default $CHRONO_SQUID_OUT or .)")

    parser = _Parser(prog="chrono-squid", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("design", parents=[common], help="per-cell flux design and feasibility report")
    geo = sub.add_parser("geodesics", parents=[common], help="null round-trip times between two positions")
    geo.add_argument("--x1", type=float, required=True, metavar="V")
    geo.add_argument("--x2", type=float, required=True, metavar="V")
    fig = sub.add_parser("figure1", parents=[common], help="flux versus position for the cubic spacetime")
    fig.add_argument("--points", type=int, metavar="N")
    sub.add_parser("simulate", parents=[common], help="lattice time-of-flight check of a design")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "design":
        return cmd_design(cfg)
    if args.command == "geodesics":
        return cmd_geodesics(cfg, args.x1, args.x2)
    if args.command == "figure1":
        return cmd_figure1(cfg)
    return cmd_simulate(cfg)


if __name__ == "__main__":
    sys.exit(main())
