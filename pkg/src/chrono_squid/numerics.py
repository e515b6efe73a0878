"""Quadrature and root-location primitives shared by the geometry modules."""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np
from scipy.optimize import bisect

MAX_SUBINTERVALS = 1_000_000


class QuadratureError(ArithmeticError):
    """Adaptive quadrature hit its subinterval cap before converging."""


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-10,
    max_subintervals: int = MAX_SUBINTERVALS,
) -> float:
    """Integrate ``f`` over ``[a, b]`` by adaptive Simpson bisection.

    A panel is accepted once the two-half Simpson estimate differs from the
    whole-panel estimate by less than 15x its share of the tolerance budget;
    accepted panels carry the Richardson correction.  The budget is
    ``max(abs_tol, rel_tol * |I|)`` with ``|I|`` taken from the coarse
    three-panel estimate and refreshed as panels are accepted.

    Reversed limits give the negated integral.
    """
    if a == b:
        return 0.0
    if a > b:
        return -adaptive_simpson(f, b, a, rel_tol, abs_tol, max_subintervals)

    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    scale = abs(whole)
    length = b - a

    total = 0.0
    compensation = 0.0
    panels = 1
    # Explicit stack of (lo, hi, f_lo, f_mid, f_hi, estimate); depth-first keeps it short.
    stack = [(a, b, fa, fm, fb, whole)]
    while stack:
        lo, hi, flo, fmid, fhi, est = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        h = hi - lo
        left = h / 12.0 * (flo + 4.0 * flm + fmid)
        right = h / 12.0 * (fmid + 4.0 * frm + fhi)
        refined = left + right
        diff = refined - est
        budget = max(abs_tol, rel_tol * scale) * (h / length)
        if abs(diff) <= 15.0 * budget or h <= 4.0 * math.ulp(max(abs(lo), abs(hi))):
            # Kahan summation keeps 10^5 accepted panels from eroding the tolerance.
            y = refined + diff / 15.0 - compensation
            t = total + y
            compensation = (t - total) - y
            total = t
            scale = max(scale, abs(total))
            continue
        panels += 1
        if panels > max_subintervals:
            raise QuadratureError(
                f"adaptive Simpson exceeded {max_subintervals} subintervals on [{a}, {b}]"
            )
        stack.append((mid, hi, fmid, frm, fhi, right))
        stack.append((lo, mid, flo, flm, fmid, left))
    return total


def find_root(f: Callable[[float], float], lo: float, hi: float, xtol: float = 2e-14) -> float:
    """Root of ``f`` bracketed by ``[lo, hi]`` (sign change or endpoint zero)."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    return bisect(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=400)


def sign_change_roots(
    f: Callable[[float], float], grid: np.ndarray, xtol: float = 2e-14
) -> list[float]:
    """All zeros of ``f`` detectable on ``grid``: exact node zeros plus one
    bisection-refined root per strict sign change between neighbours."""
    values = [f(float(x)) for x in grid]
    roots = []
    for i, (x, v) in enumerate(zip(grid, values)):
        if v == 0.0:
            roots.append(float(x))
        elif i + 1 < len(grid):
            w = values[i + 1]
            if w != 0.0 and (v > 0) != (w > 0):
                roots.append(find_root(f, float(x), float(grid[i + 1]), xtol))
    return roots
