"""One-dimensional search: dense grid scan followed by golden-section refinement."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(
    f: Callable[[float], float], a: float, b: float, xtol: float = 0.0, maxiter: int = 200
):
    """Maximize a unimodal ``f`` on ``[a, b]``.

    Iterates until the bracket is narrower than ``xtol`` or stops shrinking
    in floating point. Returns ``(x, f(x))`` for the best point evaluated.
    """
    a, b = min(a, b), max(a, b)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if b - a <= xtol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            if not a < c < d:
                break
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            if not c < d < b:
                break
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _clean(values: np.ndarray, sign: float) -> np.ndarray:
    out = sign * np.asarray(values, dtype=float)
    out[~np.isfinite(out)] = -np.inf
    return out


def scan_and_refine(f: Callable, grid: np.ndarray, maximize: bool = True, xtol: float = 0.0):
    """Global optimum of ``f`` over ``grid`` refined inside the neighbouring cells.

    ``f`` must accept numpy arrays. Non-finite values never win. Ties on the
    grid go to the smallest index. Returns ``(x, f(x), index)`` where index
    is the winning grid index (used by callers to detect boundary optima).
    """
    sign = 1.0 if maximize else -1.0
    grid = np.asarray(grid, dtype=float)
    vals = _clean(f(grid), sign)
    i = int(np.argmax(vals))
    if not np.isfinite(vals[i]):
        return float("nan"), float("nan"), i
    best_x, best_v = float(grid[i]), float(vals[i])
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]
    if hi > lo:
        def g(x):
            v = float(sign * f(np.float64(x)))
            return v if math.isfinite(v) else -math.inf

        x, v = golden_section_max(g, float(lo), float(hi), xtol)
        if v > best_v:
            best_x, best_v = float(x), v
    return best_x, sign * best_v, i
