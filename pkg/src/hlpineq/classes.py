"""Best approximation of the class W^{psi/phi} by the homothet N(b) W^psi.

The approximant of x is eta_b(A) x with
``eta_b(t) = 1 - (|phi(b)|/|psi(b)|) |psi(t)|/|phi(t)|`` on |t| <= b, 0 outside.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import hlp, stechkin
from .errors import ClassViolation, DomainViolation
from .spectral_core import SpectralElement, SpectralOperator, apply_symbol, symbol_norm
from .symbols import Symbol, SymbolPair

CLASS_TOL = 1e-10


def ratio_modulus(pair: SymbolPair, t):
    """|psi(t)|/|phi(t)|, extended at t = 0 by the pair's declared limit."""
    u = np.abs(np.asarray(t, dtype=float))
    with np.errstate(all="ignore"):
        num = pair.psi.modulus(u)
        den = pair.phi.modulus(u)
        out = num / den
    zero = den == 0
    if np.any(zero):
        if pair.ratio_at_zero is None or np.any(u[zero] != 0):
            raise DomainViolation("psi/phi is undefined where phi vanishes and no extension is declared")
        out = np.where(zero, pair.ratio_at_zero, out)
    return float(out) if np.ndim(out) == 0 else out


def ratio_symbol(pair: SymbolPair) -> Symbol:
    """psi/phi as a Symbol, defining the class W^{psi/phi}."""
    return Symbol(
        f"{pair.psi.name}/{pair.phi.name}",
        lambda t: ratio_modulus(pair, t),
        lambda u: ratio_modulus(pair, u),
    )


def eta_eval(pair: SymbolPair, b: float, t):
    slope = stechkin.cut_slope(pair, b)
    u = np.abs(np.asarray(t, dtype=float))
    inside = u <= b
    # only evaluate the ratio where it is needed so the t=0 policy applies inside the cut
    ratio = np.zeros_like(u)
    if np.any(inside):
        ratio = np.where(inside, ratio_modulus(pair, np.where(inside, u, b)), 0.0)
    out = np.where(inside, 1.0 - slope * ratio, 0.0)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class HomothetProjection:
    """eta_b(A) x together with both certificates."""

    element: SpectralElement
    b: float
    slope: float
    budget: float
    membership_lhs: float  # ||psi(A) y||, must be <= budget
    distance_lhs: float  # ||x - y||, must be <= slope

    @property
    def passed(self) -> bool:
        return (
            self.membership_lhs <= self.budget * (1 + CLASS_TOL)
            and self.distance_lhs <= self.slope * (1 + CLASS_TOL)
        )

    def to_json(self) -> str:
        return json.dumps(
            {
                "b": self.b,
                "slope": self.slope,
                "budget": self.budget,
                "membership_lhs": self.membership_lhs,
                "distance_lhs": self.distance_lhs,
                "pass": self.passed,
            }
        )


def project_to_homothet(
    op: SpectralOperator, pair: SymbolPair, b: float, x: SpectralElement
) -> HomothetProjection:
    member = symbol_norm(op, lambda t: ratio_modulus(pair, t), x)
    if member > 1 + CLASS_TOL:
        raise ClassViolation(f"||(psi/phi)(A)x|| = {member!r} > 1")
    bundle = stechkin.operator_budget(pair, b)
    y = apply_symbol(op, lambda t: eta_eval(pair, b, t), x)
    return HomothetProjection(
        element=y,
        b=float(b),
        slope=bundle.slope,
        budget=bundle.budget,
        membership_lhs=symbol_norm(op, pair.psi, y),
        distance_lhs=(x - y).norm(),
    )


def class_approx_value(pair: SymbolPair, b: float) -> float:
    """E(W^{psi/phi}, N(b) W^psi) = |phi(b)|/|psi(b)|."""
    return stechkin.cut_slope(pair, b)


def class_sharpness_probe(op: SpectralOperator, pair: SymbolPair, b: float, epsilon: float) -> hlp.SharpnessProbe:
    """||phi(A)v|| - N(b)||v|| for a band element v scaled onto ||psi(A)v|| = 1."""
    return hlp.sharpness_probe(op, pair, b, epsilon, scale_to_class=True)
