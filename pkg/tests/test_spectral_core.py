from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hlpineq import spectral_core as sc
from hlpineq.errors import (
    BindingError,
    DomainViolation,
    EmptyBand,
    EmptySpectrum,
    InvalidSpectrum,
    NotSelfAdjoint,
)
from hlpineq.verification import random_hermitian

finite = st.floats(-1e3, 1e3, allow_nan=False)
complexes = st.builds(complex, finite, finite)


def test_explicit_points_kept():
    op = sc.from_eigenvalues([1, 2, 3])
    assert op.points.tolist() == [1.0, 2.0, 3.0]
    assert op.origin == "explicit"


def test_empty_and_nonfinite_rejected():
    with pytest.raises(EmptySpectrum):
        sc.from_eigenvalues([])
    with pytest.raises(InvalidSpectrum):
        sc.from_eigenvalues([1.0, math.inf])


def test_unsorted_input_records_permutation():
    op = sc.from_eigenvalues([3, 1, 2])
    assert op.points.tolist() == [1.0, 2.0, 3.0]
    # user basis vector e_0 carries eigenvalue 3
    x = sc.element_from_vector(op, [1, 0, 0])
    y = sc.apply_symbol(op, lambda t: t, x)
    assert np.allclose(y.to_vector(), [3, 0, 0])


def test_points_are_read_only():
    op = sc.from_eigenvalues([1, 2])
    with pytest.raises(ValueError):
        op.points[0] = 5.0


def test_hermitian_swap_matrix():
    op = sc.from_hermitian([[0, 1], [1, 0]])
    assert np.allclose(op.points, [-1, 1])


def test_hermitian_scalar():
    op = sc.from_hermitian([[5.0]])
    assert op.points.tolist() == [5.0]
    assert np.allclose(np.abs(op.transform_matrix()), [[1.0]])


def test_hermitian_reconstruction():
    m = random_hermitian(5, 7)
    op = sc.from_hermitian(m)
    assert np.max(np.abs(op.matrix() - m)) < 1e-10


def test_non_hermitian_rejected():
    with pytest.raises(NotSelfAdjoint):
        sc.from_hermitian([[0, 1], [0, 0]])


def test_fourier_points():
    assert sc.from_fourier_grid(1, 2 * math.pi).points.tolist() == [0.0]
    assert np.allclose(sc.from_fourier_grid(4, 2 * math.pi).points, [-2, -1, 0, 1])
    with pytest.raises(EmptySpectrum):
        sc.from_fourier_grid(0, 2 * math.pi)


@pytest.mark.parametrize("s", [-5, -1, 0, 3, 7])
def test_fourier_symbol_t_differentiates_exponential(s):
    n, L = 32, 2 * math.pi
    op = sc.from_fourier_grid(n, L)
    grid = L * np.arange(n) / n
    x = sc.element_from_vector(op, np.exp(1j * s * grid))
    y = sc.apply_symbol(op, lambda t: t, x)
    # A acts as -i d/dt, so e^{ist} is an eigenvector with eigenvalue s
    assert np.max(np.abs(y.to_vector() - s * np.exp(1j * s * grid))) < 1e-10


def test_fourier_transform_matrix_matches_fft():
    op = sc.from_fourier_grid(8, 3.0)
    v = np.random.default_rng(1).standard_normal(8)
    assert np.allclose(op.transform_matrix().conj().T @ v, op.to_diagonal(v))


@pytest.mark.parametrize(
    "op",
    [sc.from_eigenvalues([3, 1, 2]), sc.from_hermitian(random_hermitian(4, 3)), sc.from_fourier_grid(6, 5.0)],
    ids=["explicit", "hermitian", "fourier"],
)
def test_json_round_trip(op):
    text = op.to_json()
    back = sc.SpectralOperator.from_json(text)
    assert np.array_equal(back.points, op.points)
    assert np.allclose(back.transform_matrix(), op.transform_matrix())
    assert back.origin == op.origin
    assert set(json.loads(text)) >= {"points", "transform", "origin"}


def test_apply_symbol_on_eigenvectors():
    op = sc.from_eigenvalues([1, 2])
    y = sc.apply_symbol(op, lambda t: t, sc.element(op, [1, 0]))
    assert np.allclose(y.coeffs, [1, 0]) and y.norm() == 1.0
    op3 = sc.from_eigenvalues([1, 2, 3])
    y = sc.apply_symbol(op3, lambda t: t**2, sc.element(op3, [0, 0, 1]))
    assert np.allclose(y.coeffs, [0, 0, 9]) and math.isclose(y.norm(), 9.0)


def test_binding_and_domain_errors():
    a, b = sc.from_eigenvalues([1, 2]), sc.from_eigenvalues([1, 2])
    with pytest.raises(BindingError):
        sc.apply_symbol(b, abs, sc.element(a, [1, 0]))
    with pytest.raises(BindingError):
        sc.element(a, [1, 0]) + sc.element(b, [1, 0])
    op = sc.from_eigenvalues([0.0, 1.0])
    with pytest.raises(DomainViolation):
        sc.apply_symbol(op, lambda t: 1.0 / t, sc.element(op, [1, 1]))


@given(st.lists(complexes, min_size=4, max_size=4), st.lists(complexes, min_size=4, max_size=4), complexes)
def test_symbol_application_is_linear(u, v, a):
    op = sc.from_eigenvalues([-1.5, 0.0, 0.5, 2.0])
    g = lambda t: t**3 - 2 * t  # noqa: E731
    x, y = sc.element(op, u), sc.element(op, v)
    lhs = sc.apply_symbol(op, g, x * a + y).coeffs
    rhs = (sc.apply_symbol(op, g, x) * a + sc.apply_symbol(op, g, y)).coeffs
    assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-6)


@given(st.lists(complexes, min_size=5, max_size=5))
def test_symbol_application_is_multiplicative(c):
    op = sc.from_hermitian(random_hermitian(5, 11))
    x = sc.element(op, c)
    f = lambda t: np.sin(t)  # noqa: E731
    g = lambda t: t**2 + 1  # noqa: E731
    lhs = sc.apply_symbol(op, lambda t: f(t) * g(t), x).coeffs
    rhs = sc.apply_symbol(op, f, sc.apply_symbol(op, g, x)).coeffs
    assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-9)


@given(st.lists(complexes, min_size=6, max_size=6))
def test_norm_equals_measure_integral(c):
    op = sc.from_eigenvalues([-2, -1, 0, 1, 1, 3])
    x = sc.element(op, c)
    g = lambda t: np.abs(t) + 0.5  # noqa: E731
    integral = sum(float(g(lam)) ** 2 * w for lam, w in sc.spectral_measure(op, x))
    assert math.isclose(sc.symbol_norm(op, g, x) ** 2, integral, rel_tol=1e-10, abs_tol=1e-12)


def test_element_vector_round_trip():
    op = sc.from_hermitian(random_hermitian(6, 2))
    v = np.random.default_rng(0).standard_normal(6) + 0j
    assert np.allclose(sc.element_from_vector(op, v).to_vector(), v)
    assert math.isclose(sc.element_from_vector(op, v).norm(), np.linalg.norm(v))


def test_spectral_measure_examples():
    op = sc.from_eigenvalues([1, 2])
    assert sc.spectral_measure(op, sc.element(op, [1, 1])) == [(1.0, 1.0), (2.0, 1.0)]
    assert sc.spectral_measure(op, sc.zero_element(op)) == []
    dup = sc.from_eigenvalues([2, 2])
    assert sc.spectral_measure(dup, sc.element(dup, [1, 1])) == [(2.0, 2.0)]


def test_band_element_examples():
    op = sc.from_eigenvalues([1, 2, 3])
    x = sc.band_element(op, 1.5, 2.5, 0.5)
    assert np.allclose(x.coeffs, [0, 0.5, 0])
    with pytest.raises(EmptyBand):
        sc.band_element(op, 4, 5, 1.0)


def test_band_element_on_fourier_grid_is_class_feasible():
    op = sc.from_fourier_grid(64, 2 * math.pi)
    delta, eps = 0.5, 0.5
    t = math.sqrt(1 / delta)
    x = sc.band_element(op, (1 - eps) * t, t, delta)
    psi_norm = math.sqrt(sum(lam**4 * w for lam, w in sc.spectral_measure(op, x)))
    assert psi_norm <= 1 + 1e-12


def test_band_nonempty_examples():
    op = sc.from_eigenvalues([1, 2, 3])
    assert sc.band_nonempty(op, 0, 1)
    assert not sc.band_nonempty(op, 3, 9)
    for n in (2, 3, 16):
        L = 7.0
        assert sc.band_nonempty(sc.from_fourier_grid(n, L), 0, 2 * math.pi / L)
