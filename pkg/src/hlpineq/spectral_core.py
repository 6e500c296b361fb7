"""Self-adjoint operators in diagonal (spectral) form.

An operator is reduced at construction to sorted spectral points plus the
unitary whose columns are the corresponding eigenvectors, so that
``A = V diag(points) V*``. Elements are stored by their coefficients in the
eigenbasis; the measure d(E_t x, x) is then the atomic measure
``sum_j |c_j|^2 delta_{lambda_j}`` and every function of the operator is a
coefficient-wise multiplication.

Fourier grids keep the transform implicit and go through the FFT:
the atom at frequency ``2*pi*m/L`` corresponds to the sampled exponential
``exp(i*2*pi*m*t/L)`` on ``t_j = j*L/n``, with
``m = -floor(n/2), ..., ceil(n/2) - 1``. The operator acts as ``-i d/dt`` on
band-limited samples (spectrum symmetric up to one end frequency).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    BindingError,
    DecompositionFailure,
    DomainViolation,
    EmptyBand,
    EmptySpectrum,
    InvalidSpectrum,
    NotSelfAdjoint,
)

HERMITIAN_TOL = 1e-12
RECONSTRUCTION_TOL = 1e-10
ATOM_MERGE_TOL = 1e-12
ORIGINS = ("explicit", "hermitian", "fourier_grid")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SpectralOperator:
    """Self-adjoint operator ``V diag(points) V*``.

    ``transform`` is ``None`` for the identity (and for Fourier grids, where
    the DFT is applied implicitly).
    """

    points: np.ndarray
    transform: np.ndarray | None = None
    origin: str = "explicit"
    period: float | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1:
            raise InvalidSpectrum("points must be one-dimensional")
        if pts.size == 0:
            raise EmptySpectrum("operator needs at least one spectral point")
        if not np.all(np.isfinite(pts)):
            raise InvalidSpectrum("spectral points must be finite")
        if np.any(np.diff(pts) < 0):
            raise InvalidSpectrum("spectral points must be sorted")
        if self.origin not in ORIGINS:
            raise InvalidSpectrum(f"unknown origin {self.origin!r}")
        object.__setattr__(self, "points", _frozen(pts))
        if self.transform is not None:
            v = np.asarray(self.transform, dtype=complex)
            if v.shape != (pts.size, pts.size):
                raise InvalidSpectrum("transform shape does not match points")
            gram = v.conj().T @ v
            if np.max(np.abs(gram - np.eye(pts.size))) > RECONSTRUCTION_TOL:
                raise InvalidSpectrum("transform is not unitary")
            object.__setattr__(self, "transform", _frozen(v))

    @property
    def size(self) -> int:
        return int(self.points.size)

    def to_diagonal(self, v) -> np.ndarray:
        """Coefficients ``V* v`` of a user-basis vector."""
        v = np.asarray(v, dtype=complex)
        if v.shape != (self.size,):
            raise BindingError(f"vector of length {v.shape} for operator of size {self.size}")
        if self.origin == "fourier_grid":
            return np.fft.fftshift(np.fft.fft(v, norm="ortho"))
        if self.transform is None:
            return v.copy()
        return self.transform.conj().T @ v

    def from_diagonal(self, c) -> np.ndarray:
        c = np.asarray(c, dtype=complex)
        if self.origin == "fourier_grid":
            return np.fft.ifft(np.fft.ifftshift(c), norm="ortho")
        if self.transform is None:
            return c.copy()
        return self.transform @ c

    def transform_matrix(self) -> np.ndarray:
        """Dense eigenvector matrix (materializes the DFT for Fourier grids)."""
        if self.origin == "fourier_grid":
            n = self.size
            m = np.arange(-(n // 2), -(n // 2) + n)
            j = np.arange(n)
            return np.exp(2j * np.pi * np.outer(j, m) / n) / math.sqrt(n)
        if self.transform is None:
            return np.eye(self.size, dtype=complex)
        return np.array(self.transform)

    def matrix(self) -> np.ndarray:
        v = self.transform_matrix()
        return (v * self.points) @ v.conj().T

    def to_json(self) -> str:
        if self.transform is None:
            tr = None
        else:
            tr = [[float(z.real), float(z.imag)] for z in self.transform.ravel()]
        doc = {"points": [float(p) for p in self.points], "transform": tr, "origin": self.origin}
        if self.period is not None:
            doc["period"] = float(self.period)
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "SpectralOperator":
        doc = json.loads(text)
        pts = np.asarray(doc["points"], dtype=float)
        tr = doc.get("transform")
        if tr is not None:
            pairs = np.asarray(tr, dtype=float)
            tr = (pairs[:, 0] + 1j * pairs[:, 1]).reshape(pts.size, pts.size)
        return cls(pts, tr, doc.get("origin", "explicit"), doc.get("period"))


@dataclass(frozen=True, eq=False)
class SpectralElement:
    """Element of H given by its eigenbasis coefficients, bound to ``op``."""

    op: SpectralOperator
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (self.op.size,):
            raise BindingError(f"{c.size} coefficients for operator of size {self.op.size}")
        if not np.all(np.isfinite(c)):
            raise InvalidSpectrum("coefficients must be finite")
        object.__setattr__(self, "coeffs", _frozen(c))

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def to_vector(self) -> np.ndarray:
        return self.op.from_diagonal(self.coeffs)

    def _check(self, other: "SpectralElement"):
        if not isinstance(other, SpectralElement) or other.op is not self.op:
            raise BindingError("elements belong to different operators")

    def __add__(self, other):
        self._check(other)
        return SpectralElement(self.op, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return SpectralElement(self.op, self.coeffs - other.coeffs)

    def __mul__(self, alpha):
        return SpectralElement(self.op, complex(alpha) * self.coeffs)

    __rmul__ = __mul__

    def __neg__(self):
        return SpectralElement(self.op, -self.coeffs)


def from_eigenvalues(points) -> SpectralOperator:
    pts = np.asarray(points, dtype=float).ravel()
    if pts.size == 0:
        raise EmptySpectrum("no spectral points given")
    if not np.all(np.isfinite(pts)):
        raise InvalidSpectrum("spectral points must be finite")
    order = np.argsort(pts, kind="stable")
    if np.array_equal(order, np.arange(pts.size)):
        return SpectralOperator(pts)
    perm = np.zeros((pts.size, pts.size), dtype=complex)
    perm[order, np.arange(pts.size)] = 1.0
    return SpectralOperator(pts[order], perm)


def from_hermitian(matrix) -> SpectralOperator:
    m = np.atleast_2d(np.asarray(matrix, dtype=complex))
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSelfAdjoint("matrix must be square")
    if m.size == 0:
        raise EmptySpectrum("empty matrix")
    if not np.all(np.isfinite(m)):
        raise InvalidSpectrum("matrix entries must be finite")
    if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
        raise NotSelfAdjoint("matrix is not Hermitian")
    h = (m + m.conj().T) / 2
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise DecompositionFailure(str(exc)) from exc
    scale = max(1.0, float(np.max(np.abs(h))))
    if np.max(np.abs((v * w) @ v.conj().T - m)) > RECONSTRUCTION_TOL * scale:
        raise DecompositionFailure("eigendecomposition does not reconstruct the matrix")
    return SpectralOperator(w, v, "hermitian")


def from_fourier_grid(n: int, period: float) -> SpectralOperator:
    if n < 1:
        raise EmptySpectrum("grid size must be at least 1")
    if not period > 0:
        raise InvalidSpectrum("period must be positive")
    m = np.arange(-(n // 2), -(n // 2) + n)
    # m * (2 pi / L) keeps integer frequencies exact when L = 2 pi
    return SpectralOperator(m * (2 * np.pi / period), None, "fourier_grid", float(period))


def element(op: SpectralOperator, coeffs) -> SpectralElement:
    return SpectralElement(op, coeffs)


def element_from_vector(op: SpectralOperator, v) -> SpectralElement:
    return SpectralElement(op, op.to_diagonal(v))


def zero_element(op: SpectralOperator) -> SpectralElement:
    return SpectralElement(op, np.zeros(op.size, dtype=complex))


def symbol_values(op: SpectralOperator, g: Callable) -> np.ndarray:
    """Values of ``g`` at the spectral points; raises if any is non-finite."""
    pts = op.points
    with np.errstate(all="ignore"):
        vals = np.asarray(g(pts))
        if vals.shape != pts.shape:
            vals = np.array([g(p) for p in pts])
    if not np.all(np.isfinite(vals)):
        bad = pts[~np.isfinite(vals)][0]
        raise DomainViolation(f"symbol is not finite at spectral point {bad!r}")
    return vals


def apply_symbol(op: SpectralOperator, g: Callable, x: SpectralElement) -> SpectralElement:
    """``g(A) x``: multiply each eigen-coefficient by ``g(lambda_j)``."""
    if x.op is not op:
        raise BindingError("element is not bound to this operator")
    return SpectralElement(op, symbol_values(op, g) * x.coeffs)


def symbol_norm(op: SpectralOperator, g: Callable, x: SpectralElement) -> float:
    """``||g(A) x||`` without building the image element."""
    if x.op is not op:
        raise BindingError("element is not bound to this operator")
    return float(np.linalg.norm(symbol_values(op, g) * x.coeffs))


def spectral_measure(op: SpectralOperator, x: SpectralElement) -> list[tuple[float, float]]:
    """Atoms ``(lambda, |c|^2)`` of d(E_t x, x); near-equal points merged, null atoms dropped."""
    if x.op is not op:
        raise BindingError("element is not bound to this operator")
    mass = np.abs(x.coeffs) ** 2
    atoms: list[tuple[float, float]] = []
    start = 0
    pts = op.points
    for j in range(1, pts.size + 1):
        if j == pts.size or pts[j] - pts[j - 1] > ATOM_MERGE_TOL:
            m = math.fsum(mass[start:j])
            if m > 0:
                atoms.append((float(pts[start]), m))
            start = j
    return atoms


def band_mask(op: SpectralOperator, s: float, t: float) -> np.ndarray:
    """Points with s < |lambda| <= t; bands live on the spectrum of |A|."""
    u = np.abs(op.points)
    return (u > s) & (u <= t)


def band_nonempty(op: SpectralOperator, s: float, t: float) -> bool:
    return bool(np.any(band_mask(op, s, t)))


def band_element(op: SpectralOperator, s: float, t: float, target_norm: float) -> SpectralElement:
    """Element of norm ``target_norm`` carried by the largest |lambda| in (s, t], split evenly over +-lambda."""
    if not s < t:
        raise EmptyBand(f"band ({s}, {t}] is empty")
    if not target_norm > 0:
        raise ValueError("target_norm must be positive")
    mask = band_mask(op, s, t)
    if not mask.any():
        raise EmptyBand(f"no spectral point in ({s}, {t}]")
    u = np.abs(op.points)
    top = u[mask].max()
    ties = u == top
    c = np.zeros(op.size, dtype=complex)
    c[ties] = target_norm / math.sqrt(int(ties.sum()))
    return SpectralElement(op, c)
