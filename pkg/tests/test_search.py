from __future__ import annotations

import math

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from hlpineq._search import golden_section_max, scan_and_refine


@given(st.floats(-5, 5))
def test_golden_finds_parabola_peak(c):
    x, v = golden_section_max(lambda x: -(x - c) ** 2, -10, 10)
    assert abs(x - c) < 1e-7 and v <= 0


def test_scan_prefers_global_over_local():
    f = lambda x: np.sin(x) + 0.1 * x  # noqa: E731
    x, v, _ = scan_and_refine(f, np.linspace(0, 20, 400))
    dense = np.linspace(0, 20, 2_000_001)
    assert v >= f(dense).max() - 1e-12
    assert x > 14  # last peak, not the first local one


def test_ties_go_to_smallest_index():
    x, v, i = scan_and_refine(lambda x: np.zeros_like(np.asarray(x, dtype=float)), np.linspace(0, 1, 11))
    assert i == 0 and x == 0.0 and v == 0.0


def test_non_finite_values_never_win():
    def f(x):
        x = np.asarray(x, dtype=float)
        return np.where(x > 0.5, np.inf, x)

    x, v, _ = scan_and_refine(f, np.linspace(0, 1, 101))
    assert x <= 0.5 and math.isfinite(v)


def test_minimize():
    x, v, _ = scan_and_refine(lambda x: (x - 0.3) ** 2, np.linspace(-1, 1, 21), maximize=False)
    assert abs(x - 0.3) < 1e-7 and v < 1e-14
