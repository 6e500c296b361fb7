from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hlpineq import hlp, recovery, stechkin
from hlpineq import spectral_core as sc
from hlpineq import symbols as S
from hlpineq.errors import InvalidDelta

P12 = S.power_pair(1, 2)
IDENT = S.make_pair(S.power(1), S.power(1))


@pytest.mark.parametrize("delta,b,value", [(0.25, 4.0, 0.5), (1.0, 2.0, 1.0)])
def test_l_delta_examples(delta, b, value):
    plan = recovery.l_delta(P12, delta)
    assert plan.b_star == pytest.approx(b, rel=1e-6)
    assert plan.value == pytest.approx(value, rel=1e-12)


def test_l_delta_vanishes_with_noise():
    vals = [recovery.l_delta(P12, d).value for d in (1e-2, 1e-4, 1e-6)]
    assert vals[0] > vals[1] > vals[2] > 0
    assert vals[2] == pytest.approx(1e-3, rel=1e-8)


@given(st.floats(1e-3, 10.0), st.sampled_from([(1, 2), (1, 3), (2, 3)]))
def test_optimal_error_equals_modulus_of_continuity(delta, kr):
    pair = S.power_pair(*kr)
    omega = hlp.modulus_of_continuity(pair.link, delta)
    assert abs(recovery.l_delta(pair, delta).value - omega) < 1e-6 * omega


def test_recovery_value_examples():
    assert recovery.recovery_value(P12.link, 0.25, P12) == 0.5
    assert recovery.recovery_value(IDENT.link, 0.7) == pytest.approx(1.0)
    assert recovery.recovery_value(IDENT.link, 0.7, IDENT) == pytest.approx(1.0)


def test_recovery_with_non_power_pairs():
    for pair in (S.named_pair("log1p_abs", "power(1)"), S.named_pair("power(1)", "exp_abs")):
        for d in (0.01, 0.3, 2.0):
            recovery.recovery_value(pair.link, d, pair)


def test_zero_signal_error_is_bounded():
    op = sc.from_fourier_grid(1024, 2 * math.pi * 10)
    delta = 0.25
    rng = np.random.default_rng(0)
    for _ in range(20):
        v = rng.standard_normal(1024) + 1j * rng.standard_normal(1024)
        eta = sc.element_from_vector(op, delta * v / np.linalg.norm(v))
        err = recovery.recover(op, P12, delta, eta).norm()
        assert err <= hlp.modulus_of_continuity(P12.link, delta) * (1 + 1e-8)


def test_noiseless_recovery_is_exact():
    op = sc.from_eigenvalues(np.linspace(-3, 3, 13))
    x = sc.element(op, np.random.default_rng(1).standard_normal(13))
    assert np.allclose(recovery.recover(op, P12, 0.0, x).coeffs, sc.apply_symbol(op, P12.phi, x).coeffs)
    with pytest.raises(InvalidDelta):
        recovery.recover(op, P12, -1.0, x)


def test_small_noise_error_shrinks_on_covered_spectrum():
    op = sc.from_eigenvalues(np.linspace(-3, 3, 13))
    x = sc.element(op, np.ones(13) * 0.01)
    errs = []
    for d in (1e-2, 1e-4, 1e-6):
        y = recovery.recover(op, P12, d, x)
        errs.append((sc.apply_symbol(op, P12.phi, x) - y).norm())
    assert errs[0] > errs[1] > errs[2]


def test_adversarial_element_is_near_optimal():
    op = sc.from_fourier_grid(4096, 2 * math.pi * 100)
    delta, eps = 0.25, 0.01
    plan = recovery.l_delta(P12, delta)
    x = hlp.extremal_element(op, P12, delta, eps)
    phib = sc.symbol_values(op, stechkin.truncated_symbol(P12, plan.b_star))
    u = (sc.symbol_values(op, P12.phi) - phib) * x.coeffs
    e = delta * np.conj(phib) * u / np.linalg.norm(np.conj(phib) * u)
    err = np.linalg.norm(u + phib * e)
    assert 0.5 * (1 - 2 * eps) <= err <= 0.5 * (1 + 1e-8)


def test_deviation_with_noise_report():
    op = sc.from_fourier_grid(4096, 2 * math.pi * 100)
    rep = recovery.deviation_with_noise(op, P12, 4.0, 0.25, samples=200, seed=7)
    again = recovery.deviation_with_noise(op, P12, 4.0, 0.25, samples=200, seed=7)
    assert rep.to_json() == again.to_json()
    assert rep.empirical_sup <= rep.analytic_cap == pytest.approx(0.5)
    assert rep.witness >= 0.5 * (1 - 0.02)
    assert set(json.loads(rep.to_json())) == {
        "delta", "b_star", "value", "empirical_sup", "analytic_cap", "witness", "samples", "seed"
    }
