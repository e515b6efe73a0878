import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chrono_squid.array_designer import (
    BranchPolicy,
    DesignRequest,
    check_round_trip,
    critical_proximity,
    design_array,
    feasibility_window,
    figure1_curve,
    safe_window,
)
from chrono_squid.errors import EmptyDesignError, EmptyWindowError
from chrono_squid.spacetime import AnalyticProfile, CubicProfile, flat_profile
from chrono_squid.squid_model import effective_speed, squid_inductance

FLAT_EDGE = -(2.0 ** (1 / 3))

# High-precision references (mpmath, 30 digits).
SAFE_EDGE_0_1 = -1.03595381139728277
SAFE_EDGE_0_49 = -1.25981741275470349
FOUR_CELL_FLUX = [0.826390002114327, 0.711595814706865, 0.643893314694241, 0.597944610461583]
FLUX_AT_MINUS_ONE = 0.580430623255166
FIG1_AT_MINUS_0_9 = 1.7040505860817212
PROXIMITY_EDGE_0_05 = -0.924837445457492


def request(profile, window, cells, params, **kw):
    return DesignRequest(profile, window, cells, params, **kw)


class TestFeasibilityWindow:
    def test_cubic(self, cubic):
        (w,) = feasibility_window(cubic, (-3, 3))
        assert abs(w.lower - FLAT_EDGE) <= 1e-12
        assert abs(w.upper) <= 1e-12

    def test_cubic_positive_side_empty(self, cubic):
        assert feasibility_window(cubic, (1, 2)) == []

    def test_flat(self):
        assert feasibility_window(flat_profile(), (0, 1)) == [(0.0, 1.0)]

    def test_two_windows(self):
        prof = AnalyticProfile(lambda x: math.sin(x) * 0.9, "sine")
        windows = feasibility_window(prof, (-1.0, 7.0))
        assert len(windows) == 2
        assert windows[0] == pytest.approx((0.0, math.pi), abs=1e-12)
        assert windows[1].lower == pytest.approx(2 * math.pi, abs=1e-12)


class TestDesign:
    def test_four_cell_example(self, cubic, params):
        design = design_array(request(cubic, (-1.259921, -1.0), 4, params))
        assert design.all_feasible
        np.testing.assert_allclose(design.flux, FOUR_CELL_FLUX, atol=1e-12)
        assert np.all(np.diff(design.flux) < 0)
        assert FLUX_AT_MINUS_ONE < design.flux.min() and design.flux.max() < 1.0

    def test_cell_centres_uniform(self, cubic, params):
        design = design_array(request(cubic, (-1.2, -1.0), 8, params))
        np.testing.assert_allclose(np.diff(design.positions), 0.025, rtol=1e-12)
        assert design.positions[0] == pytest.approx(-1.1875)
        assert design.spacing == pytest.approx(0.025)

    def test_positive_window_is_empty(self, cubic, params):
        with pytest.raises(EmptyDesignError):
            design_array(request(cubic, (0.1, 1.0), 7, params))

    def test_flat_design(self, params):
        design = design_array(request(flat_profile(), (-3, 5), 5, params))
        assert np.all(design.flux == 1.0)
        assert not design.critical.any()
        np.testing.assert_allclose(design.inductance, squid_inductance(params, 0.0), rtol=1e-15)

    def test_infeasible_cells_kept(self, cubic, params):
        design = design_array(request(cubic, (-1.26, 0.5), 64, params))
        assert not design.all_feasible
        bad = design.positions[~design.feasible]
        assert np.all(bad > 0)
        assert np.all(np.isnan(design.flux[~design.feasible]))
        assert len(design.cells) == 64

    def test_force_positive_branch(self, cubic, params):
        neg = design_array(request(cubic, (-1.2, -1.0), 4, params))
        pos = design_array(request(cubic, (-1.2, -1.0), 4, params, branch_policy=BranchPolicy.FORCE_COS_POSITIVE))
        np.testing.assert_allclose(pos.flux, 1.0 - neg.flux, atol=1e-15)
        np.testing.assert_allclose(pos.inductance, neg.inductance, rtol=1e-12)

    def test_request_validation(self, cubic, params):
        with pytest.raises(ValueError):
            request(cubic, (-1.0, -1.2), 4, params)
        with pytest.raises(ValueError):
            request(cubic, (-1.2, -1.0), 0, params)
        with pytest.raises(ValueError):
            request(cubic, (-1.2, -1.0), 4, params, margin_delta=0.5)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(-1.2599, -0.09), st.floats(0.01, 1.2), st.integers(1, 64))
    def test_round_trip_fidelity(self, lo, width, cells):
        from chrono_squid.squid_model import SquidParams

        params = SquidParams(1.25e-6, 90e-15, 10e-6)
        # Stay where the flux spacing near 1/2 (5.5e-17) maps to < 1e-12 in speed.
        hi = min(lo + width, -0.08)
        design = design_array(request(CubicProfile(), (lo, hi), cells, params))
        assert check_round_trip(design) <= 1e-12
        for f, c, ok in zip(design.flux, design.target_speed, design.feasible):
            if ok:
                assert abs(effective_speed(float(f)) - abs(c)) <= 1e-12

    def test_round_trip_conditioning_near_horizon(self, cubic, params):
        design = design_array(request(cubic, (-0.06, -1e-3), 64, params))
        c = design.target_speed
        err = np.abs([effective_speed(float(f)) for f in design.flux] - c)
        # Below c ~ 4e-8 the flux rounds to exactly 1/2 and the speed to 0.
        tol = np.where(c > 4e-8, np.maximum(1e-12, 3e-16 / c), c + 2e-8)
        assert np.all(err <= tol)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 200))
    def test_cubic_flux_monotone(self, cells):
        from chrono_squid.squid_model import SquidParams

        params = SquidParams(1.25e-6, 90e-15, 10e-6)
        design = design_array(request(CubicProfile(), (FLAT_EDGE, 0.0), cells, params))
        x, flux = design.positions[design.feasible], design.flux[design.feasible]
        # f - 1/2 ~ x^6 / (4 pi) drops below the float spacing at 1/2 for |x| < ~3.4e-3.
        resolved = x**6 / (4 * math.pi) > 2.3e-16
        assert np.all(np.diff(flux[resolved]) < 0)
        assert np.all((flux[resolved] > 0.5) & (flux[resolved] <= 1.0))
        assert np.all(np.diff(flux) <= 0) and np.all(flux >= 0.5)

    @settings(max_examples=20, deadline=None)
    @given(st.floats(0.01, 1.9), st.integers(1, 32))
    def test_positive_side_always_empty(self, lo, cells):
        from chrono_squid.squid_model import SquidParams

        params = SquidParams(1.25e-6, 90e-15, 10e-6)
        with pytest.raises(EmptyDesignError):
            design_array(request(CubicProfile(), (lo, lo + 0.1), cells, params))


class TestProximity:
    def test_matches_closed_form_measure(self, cubic, params):
        window = (-1.259921, -0.05)
        design = design_array(request(cubic, window, 256, params))
        prox = critical_proximity(design, 0.05)
        measure = (window[1] - PROXIMITY_EDGE_0_05) / (window[1] - window[0])
        assert abs(prox.fraction - measure) <= 1 / 256
        # brute force: cell centres whose x^6 lies under the threshold
        brute = sum(1 for x in design.positions if x**6 < 4 * math.sin(0.05 * math.pi))
        assert prox.count == brute

    def test_tiny_delta_and_flat(self, cubic, params):
        design = design_array(request(cubic, (-1.259921, -0.05), 256, params))
        assert critical_proximity(design, 1e-12).count == 0
        flat = design_array(request(flat_profile(), (0, 1), 16, params))
        assert critical_proximity(flat, 0.3) == (0, 0.0, [])

    def test_delta_validation(self, cubic, params):
        design = design_array(request(cubic, (-1.2, -1.0), 4, params))
        with pytest.raises(ValueError):
            critical_proximity(design, 0.0)


class TestSafeWindow:
    def test_delta_0_1(self, cubic):
        w = safe_window(cubic, 0.1)
        assert abs(w.lower - FLAT_EDGE) <= 1e-10
        assert abs(w.upper - SAFE_EDGE_0_1) <= 1e-10

    def test_sliver(self, cubic):
        w = safe_window(cubic, 0.49)
        assert abs(w.upper - SAFE_EDGE_0_49) <= 1e-10
        assert 0 < w.width < 3e-4

    def test_small_delta_approaches_feasibility_window(self, cubic):
        uppers = [safe_window(cubic, d).upper for d in (1e-3, 1e-6, 1e-9, 1e-12)]
        assert all(b > a for a, b in zip(uppers, uppers[1:]))
        assert -0.02 < uppers[-1] < 0
        for d, u in zip((1e-3, 1e-6, 1e-9, 1e-12), uppers):
            assert u == pytest.approx(-((4 * math.sin(math.pi * d)) ** (1 / 6)), rel=1e-10)

    def test_monotone_in_delta(self, cubic):
        windows = [safe_window(cubic, d) for d in np.linspace(0.01, 0.49, 25)]
        for wide, narrow in zip(windows, windows[1:]):
            assert wide.lower <= narrow.lower and narrow.upper <= wide.upper

    def test_empty(self):
        slow = AnalyticProfile(lambda x: 0.1, "slow")
        with pytest.raises(EmptyWindowError):
            safe_window(slow, 0.2, (0, 1))

    def test_needs_search_window_for_unbounded_profile(self):
        with pytest.raises(ValueError):
            safe_window(flat_profile(), 0.1)


class TestFigure1:
    def test_against_closed_form(self):
        table = figure1_curve(200)
        x, flux_pi, threshold = table.T
        oracle = np.arccos(np.clip(-(x**6) / 4, -1.0, 1.0))
        np.testing.assert_allclose(flux_pi, oracle, rtol=0, atol=1e-12)
        assert np.all(threshold == math.pi / 2)

    def test_endpoints(self):
        table = figure1_curve(10_000)
        assert table[0, 0] == pytest.approx(FLAT_EDGE, abs=1e-15)
        assert abs(table[0, 1] - math.pi) <= 1e-12
        assert table[-1, 0] < 0
        assert table[-1, 1] - math.pi / 2 < 1e-12
        resolved = table[:, 0] <= -0.05
        assert np.all(np.diff(table[resolved, 1]) < 0)
        assert np.all(np.diff(table[:, 1]) <= 0)

    def test_minus_0_9(self):
        n = 12_600
        table = figure1_curve(n)
        i = int(np.argmin(np.abs(table[:, 0] + 0.9)))
        grid_slope = 6 * 0.9**5 / 4 / math.sqrt(1 - (0.9**6 / 4) ** 2)
        tol = 1.01 * grid_slope * abs(table[i, 0] + 0.9) + 1e-12
        assert abs(table[i, 1] - FIG1_AT_MINUS_0_9) <= tol
        assert abs(table[i, 1] / math.pi - 0.6) <= 0.06

    def test_point_count(self):
        with pytest.raises(ValueError):
            figure1_curve(1)
