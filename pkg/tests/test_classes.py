from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hlpineq import classes
from hlpineq import spectral_core as sc
from hlpineq import symbols as S
from hlpineq.errors import ClassViolation, DomainViolation
from hlpineq.verification import fixture_operators, random_class_element

P12 = S.power_pair(1, 2)
IDENT = S.make_pair(S.power(1), S.power(1))


def test_eta_values():
    assert classes.eta_eval(P12, 1.0, 0.5) == 0.5
    assert classes.eta_eval(P12, 1.0, 1.0) == 0.0
    assert classes.eta_eval(P12, 1.0, 0.0) == 1.0
    assert classes.eta_eval(P12, 1.0, -3.0) == 0.0


def test_ratio_without_declared_limit_is_rejected_at_zero():
    pair = S.make_pair(S.power(1), S.power(2))
    assert pair.ratio_at_zero is None
    with pytest.raises(DomainViolation):
        classes.eta_eval(pair, 1.0, 0.0)
    assert classes.eta_eval(pair, 1.0, 0.5) == 0.5


def test_projection_of_atom_at_half():
    op = sc.from_eigenvalues([0.5, 2.0])
    res = classes.project_to_homothet(op, P12, 1.0, sc.element(op, [1, 0]))
    assert np.allclose(res.element.coeffs, [0.5, 0])
    assert res.distance_lhs == 0.5 and res.membership_lhs == 0.125
    assert res.passed


def test_projection_beyond_cut_is_zero():
    op = sc.from_eigenvalues([2.0, 3.0])
    x = sc.element(op, [0.2, 0.1])
    res = classes.project_to_homothet(op, P12, 1.0, x)
    assert res.element.norm() == 0.0
    assert res.distance_lhs == pytest.approx(x.norm())
    member = sc.symbol_norm(op, lambda t: classes.ratio_modulus(P12, t), x)
    assert res.distance_lhs <= res.slope * member


def test_projection_of_zero():
    op = sc.from_eigenvalues([0.5, 2.0])
    res = classes.project_to_homothet(op, P12, 1.0, sc.zero_element(op))
    assert res.element.norm() == 0.0 and res.distance_lhs == 0.0


def test_projection_rejects_non_members():
    op = sc.from_eigenvalues([3.0])
    with pytest.raises(ClassViolation):
        classes.project_to_homothet(op, P12, 1.0, sc.element(op, [1.0]))


def test_class_approx_values():
    assert classes.class_approx_value(P12, 1.0) == 1.0
    assert classes.class_approx_value(P12, 4.0) == 0.25
    assert classes.class_approx_value(IDENT, 7.0) == 1.0


@pytest.mark.parametrize("pair", [P12, S.power_pair(1, 3), S.power_pair(2, 3), S.named_pair("power(1)", "exp_abs")],
                         ids=lambda p: p.name)
@given(seed=st.integers(0, 2**32 - 1), b=st.floats(0.1, 10.0))
def test_projection_certificates_hold(pair, seed, b):
    rng = np.random.default_rng(seed)
    for op in fixture_operators(1).values():
        res = classes.project_to_homothet(op, pair, b, random_class_element(op, pair, rng))
        assert res.passed


def test_class_sharpness_exact_atom():
    op = sc.from_eigenvalues([0.25, 0.5, 0.75])
    pr = classes.class_sharpness_probe(op, P12, 1.0, 0.01)
    assert pr.value == pytest.approx(pr.slope, rel=1e-12)
    assert sc.symbol_norm(op, P12.psi, pr.witness) == pytest.approx(1.0)


def test_class_sharpness_coarse_band_is_below_slope():
    op = sc.from_eigenvalues([0.3])
    pr = classes.class_sharpness_probe(op, P12, 1.0, 0.5)
    assert 0 < pr.value < pr.slope


def test_class_sharpness_identical_symbols():
    op = sc.from_eigenvalues([1.3])
    pr = classes.class_sharpness_probe(op, IDENT, 2.0, 0.2)
    assert pr.value >= 1 - 0.2


def test_projection_json():
    op = sc.from_eigenvalues([0.5])
    res = classes.project_to_homothet(op, P12, 1.0, sc.element(op, [1.0]))
    data = json.loads(res.to_json())
    assert data["pass"] is True and math.isclose(data["budget"], 0.25)
