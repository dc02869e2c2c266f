"""Quadrature and root bracketing used by the density machinery."""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np


class QuadratureError(RuntimeError):
    pass


class BisectionError(RuntimeError):
    pass


def adaptive_simpson(f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
                     tol: float = 1e-12, breakpoints: Sequence[float] = (),
                     max_depth: int = 60, initial_panels: int = 16) -> float:
    """Integrate ``f`` over [lo, hi] by adaptive composite Simpson.

    ``f`` must accept and return numpy arrays.  Refinement runs level by level
    over all unconverged panels at once, so each level costs one vectorized
    call.  A panel is accepted when the Richardson estimate ``|S2 - S1| / 15``
    falls under its share of ``tol``.  ``breakpoints`` (kinks, grid nodes) seed
    the initial panel edges.
    """
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise QuadratureError("integration limits must be finite")
    if hi <= lo:
        return 0.0
    edges = np.unique(np.concatenate([
        np.linspace(lo, hi, initial_panels + 1),
        [b for b in breakpoints if lo < b < hi],
    ]))
    a, b = edges[:-1], edges[1:]
    m = 0.5 * (a + b)
    fa, fm, fb = (np.asarray(f(v), dtype=float) for v in (a, m, b))
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    ptol = tol * (b - a) / (hi - lo)
    parts = []
    for _ in range(max_depth):
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        f_lm = np.asarray(f(lm), dtype=float)
        f_rm = np.asarray(f(rm), dtype=float)
        left = (m - a) / 6.0 * (fa + 4.0 * f_lm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * f_rm + fb)
        delta = left + right - whole
        if not np.all(np.isfinite(delta)):
            raise QuadratureError("integrand produced non-finite values")
        done = np.abs(delta) <= 15.0 * ptol
        parts.append(left[done] + right[done] + delta[done] / 15.0)
        keep = ~done
        if not keep.any():
            break
        # split surviving panels into their halves
        a = np.concatenate([a[keep], m[keep]])
        b = np.concatenate([m[keep], b[keep]])
        fa, fb, fm_new = (np.concatenate([fa[keep], fm[keep]]),
                          np.concatenate([fm[keep], fb[keep]]),
                          np.concatenate([f_lm[keep], f_rm[keep]]))
        whole = np.concatenate([left[keep], right[keep]])
        ptol = np.concatenate([ptol[keep], ptol[keep]]) / 2.0
        m = 0.5 * (a + b)
        fm = fm_new
    else:
        raise QuadratureError(f"adaptive Simpson did not converge within depth {max_depth}")
    return math.fsum(np.concatenate(parts))


def bisect(g: Callable[[float], float], lo: float, hi: float, ftol: float = 1e-10,
           max_iter: int = 200) -> tuple[float, float, int]:
    """Find a root of ``g`` in [lo, hi] by bisection.

    Stops once ``|g(x)| <= ftol`` or the bracket can no longer shrink.

    Returns
    -------
    (x, g(x), iterations)
    """
    g_lo, g_hi = g(lo), g(hi)
    if abs(g_lo) <= ftol:
        return lo, g_lo, 0
    if abs(g_hi) <= ftol:
        return hi, g_hi, 0
    if (g_lo > 0) == (g_hi > 0):
        raise BisectionError(f"root not bracketed: g({lo})={g_lo}, g({hi})={g_hi}")
    best = (lo, g_lo) if abs(g_lo) < abs(g_hi) else (hi, g_hi)
    for it in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        g_mid = g(mid)
        if abs(g_mid) < abs(best[1]):
            best = (mid, g_mid)
        if abs(g_mid) <= ftol:
            return mid, g_mid, it
        if (g_mid > 0) == (g_lo > 0):
            lo, g_lo = mid, g_mid
        else:
            hi, g_hi = mid, g_mid
    return best[0], best[1], it
