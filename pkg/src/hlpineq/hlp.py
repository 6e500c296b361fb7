"""Multiplicative and additive norm bounds for phi(A)x in terms of psi(A)x and x.

Multiplicative form:  ||phi(A)x||^2 <= ||x||^2 F(||psi(A)x||^2 / ||x||^2)
Modulus of continuity on W^psi:  omega(delta) = delta sqrt(F(1/delta^2))
Additive form:  ||phi(A)x|| <= (|phi(b)|/|psi(b)|) ||psi(A)x|| + N(b) ||x||
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

from . import stechkin
from .errors import EmptyBand, InvalidDelta, ZeroElement
from .spectral_core import (
    SpectralElement,
    SpectralOperator,
    band_element,
    band_nonempty,
    symbol_norm,
)
from .symbols import ConcaveLink, Symbol, SymbolPair, inverse_modulus

VERDICT_TOL = 1e-10
# inverse_modulus may land one ulp below an exact spectral point
BAND_TOP_SLACK = 1e-14
# golden-section maximizers are only resolved to ~sqrt(machine eps)
PROBE_TOP_SLACK = 1e-7


@dataclass(frozen=True)
class OperatorClass:
    """{x : ||sigma(A) x|| <= radius}."""

    sigma: Symbol
    radius: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("class radius must be positive")

    def contains(self, op: SpectralOperator, x: SpectralElement, tol: float = VERDICT_TOL) -> bool:
        return symbol_norm(op, self.sigma.modulus, x) <= self.radius * (1 + tol)


@dataclass(frozen=True)
class InequalityVerdict:
    lhs: float
    rhs: float
    witness: SpectralElement | None = None

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.slack >= -VERDICT_TOL * max(1.0, self.rhs)

    def to_json(self) -> str:
        return json.dumps({"lhs": self.lhs, "rhs": self.rhs, "slack": self.slack, "holds": self.holds})


@dataclass(frozen=True)
class SharpnessProbe:
    """Achieved ratio of a sharpness probe.

    ``value`` never exceeds ``slope``; ``c`` is the constant in the
    guaranteed lower bound ``value >= slope * (1 - c * epsilon)``.
    """

    value: float
    slope: float
    c: float
    epsilon: float
    witness: SpectralElement


def multiplicative_bound(link: ConcaveLink, norm_x: float, norm_psi_x: float) -> float:
    """||x|| sqrt(F(||psi(A)x||^2 / ||x||^2))."""
    if not norm_x > 0:
        raise ZeroElement("the multiplicative inequality needs x != 0")
    return norm_x * math.sqrt(float(link((norm_psi_x / norm_x) ** 2)))


def check_multiplicative(op: SpectralOperator, pair: SymbolPair, x: SpectralElement) -> InequalityVerdict:
    link = pair.require_link()
    nx = x.norm()
    if nx == 0:
        raise ZeroElement("the multiplicative inequality needs x != 0")
    lhs = symbol_norm(op, pair.phi, x)
    rhs = multiplicative_bound(link, nx, symbol_norm(op, pair.psi, x))
    return InequalityVerdict(lhs, rhs)


def modulus_of_continuity(link: ConcaveLink, delta: float) -> float:
    if not delta > 0:
        raise InvalidDelta(f"delta must be positive, got {delta!r}")
    return delta * math.sqrt(float(link(1.0 / (delta * delta))))


def _band_top(t: float) -> float:
    return t * (1 + BAND_TOP_SLACK)


def extremal_element(
    op: SpectralOperator, pair: SymbolPair, delta: float, epsilon: float
) -> SpectralElement:
    """Element of norm delta carried by the band ((1-eps) t, t], t = |psi|^{-1}(1/delta).

    It lies in W^psi and ||phi(A)x|| >= |phi((1-eps) t)| delta.
    """
    if not delta > 0:
        raise InvalidDelta(f"delta must be positive, got {delta!r}")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    t = inverse_modulus(pair.psi, 1.0 / delta)
    return band_element(op, (1 - epsilon) * t, _band_top(t), delta)


def additive_coefficients(pair: SymbolPair, b: float) -> tuple[float, float]:
    """(slope, intercept) = (|phi(b)|/|psi(b)|, N(b))."""
    bundle = stechkin.operator_budget(pair, b)
    return bundle.slope, bundle.budget


def check_additive(op: SpectralOperator, pair: SymbolPair, x: SpectralElement, b: float) -> InequalityVerdict:
    nx = x.norm()
    if nx == 0:
        raise ZeroElement("the additive check needs x != 0")
    slope, intercept = additive_coefficients(pair, b)
    lhs = symbol_norm(op, pair.phi, x)
    rhs = slope * symbol_norm(op, pair.psi, x) + intercept * nx
    return InequalityVerdict(lhs, rhs)


def probe_band(bundle: stechkin.TruncationBundle, epsilon: float) -> tuple[float, float]:
    """Band ((1-eps) xi, xi] around the maximizer of |phi_b|.

    When N(b) = 0 every point of (0, b] is a maximizer and the whole band is used.
    """
    xi = bundle.maximizer
    if xi <= 0 or bundle.budget == 0:
        return 0.0, bundle.b
    return (1 - epsilon) * xi, xi * (1 + PROBE_TOP_SLACK)


def sharpness_probe(op, pair, b, epsilon, scale_to_class: bool = False) -> SharpnessProbe:
    """Ratio achieved by the maximizer band; shared by the additive and class probes."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    bundle = stechkin.operator_budget(pair, b)
    s, t = probe_band(bundle, epsilon)
    if not band_nonempty(op, s, t):
        raise EmptyBand(f"no spectral point in ({s}, {t}]")
    x = band_element(op, s, t, 1.0)
    npsi = symbol_norm(op, pair.psi, x)
    if scale_to_class:
        x = x * (1.0 / npsi)
        npsi = 1.0
    nphi = symbol_norm(op, pair.phi, x)
    value = (nphi - bundle.budget * x.norm()) / npsi
    top = t if s > 0 else b
    lo = s if s > 0 else 0.0
    drop = float(pair.phi.modulus(top) - pair.phi.modulus(lo)) / float(pair.psi.modulus(top))
    c = drop / (epsilon * bundle.slope) if bundle.slope > 0 else 0.0
    return SharpnessProbe(value, bundle.slope, c, epsilon, x)


def additive_sharpness_probe(op: SpectralOperator, pair: SymbolPair, b: float, epsilon: float) -> SharpnessProbe:
    """(||phi(A)x|| - N(b)||x||) / ||psi(A)x|| for a band element at the maximizer of |phi_b|."""
    return sharpness_probe(op, pair, b, epsilon)
