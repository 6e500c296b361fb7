"""Best approximation of phi(A) on W^psi by bounded operators.

The extremal operator is phi_b(A) with the truncated symbol
``phi_b(t) = phi(t) - (phi(b)/psi(b)) psi(t)`` on |t| <= b and 0 outside.
Its norm is the budget N(b) = max |phi_b|, and the error it achieves is the
slope |phi(b)|/|psi(b)|. Stechkin's dual bound sup_delta {omega(delta) - N delta}
is computed independently from the link F for the duality check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._search import scan_and_refine
from .errors import BudgetUnreachable, DegenerateCut, LinkInconsistency, UnboundedSup
from .spectral_core import SpectralElement, SpectralOperator, apply_symbol
from .symbols import ConcaveLink, SymbolPair

GRID_POINTS = 4096
BRACKET_GROWTH = 4.0
B_CAP = 1e12
B_FLOOR = 1e-12
DELTA_GRID = np.linspace(math.log(1e-12), math.log(1e12), 2401)


@dataclass(frozen=True)
class TruncationBundle:
    """The construction at cut level ``b``.

    ``exact`` is True when the pair has a concave link, i.e. when the slope is
    the best-approximation value and not only an upper bound for it.
    """

    b: float
    slope: float
    budget: float
    maximizer: float
    exact: bool = True

    def as_dict(self) -> dict:
        return {
            "b": self.b,
            "N": self.budget,
            "E": self.slope,
            "maximizer": self.maximizer,
            "exact": self.exact,
        }


def cut_slope(pair: SymbolPair, b: float) -> float:
    """|phi(b)| / |psi(b)|, rejecting cuts where psi vanishes."""
    if not b > 0:
        raise DegenerateCut(f"cut level must be positive, got {b!r}")
    pb = float(pair.psi.modulus(b))
    if pb == 0 or not math.isfinite(pb):
        raise DegenerateCut(f"|psi(b)| = {pb!r} at b = {b!r}")
    return float(pair.phi.modulus(b)) / pb


def _truncated_modulus(pair: SymbolPair, b: float, slope: float, u):
    u = np.abs(np.asarray(u, dtype=float))
    val = pair.phi.modulus(u) - slope * pair.psi.modulus(u)
    return np.where(u <= b, val, 0.0)


def truncated_symbol_eval(pair: SymbolPair, b: float, t):
    """|phi(t)| - slope |psi(t)| on |t| <= b, 0 beyond."""
    out = _truncated_modulus(pair, b, cut_slope(pair, b), t)
    return float(out) if np.ndim(out) == 0 else out


def truncated_symbol(pair: SymbolPair, b: float):
    """phi_b as an applicable function: phase of phi times the modulus-channel value."""
    slope = cut_slope(pair, b)

    def phi_b(t):
        t = np.asarray(t, dtype=float)
        val = np.asarray(pair.phi(t), dtype=complex)
        mod = np.abs(val)
        phase = np.where(mod > 0, val / np.where(mod > 0, mod, 1.0), 1.0)
        return phase * _truncated_modulus(pair, b, slope, t)

    return phi_b


def operator_budget(pair: SymbolPair, b: float, grid_points: int = GRID_POINTS) -> TruncationBundle:
    """N(b) = max_{0<=u<=b} |phi_b(u)| by grid scan plus golden-section refinement."""
    slope = cut_slope(pair, b)
    u = np.linspace(0.0, b, grid_points)

    def h(x):
        return np.abs(_truncated_modulus(pair, b, slope, x))

    xi, _, _ = scan_and_refine(h, u, maximize=True, xtol=1e-10 * b)
    budget = float(h(xi))
    return TruncationBundle(float(b), slope, budget, float(xi), pair.link is not None)


def power_budget_closed_form(k: float, r: float, b: float) -> tuple[float, float]:
    """(N(b), maximizer) for phi = |t|^k, psi = |t|^r."""
    xi = b * (k / r) ** (1.0 / (r - k))
    return b**k * (k / r) ** (k / (r - k)) * (1.0 - k / r), xi


def best_approx_value(pair: SymbolPair, b: float) -> float:
    """E(N(b)) = |phi(b)|/|psi(b)|, cross-checked against sqrt(F(|psi(b)|^2))/|psi(b)|."""
    slope = cut_slope(pair, b)
    if pair.link is not None:
        pb = float(pair.psi.modulus(b))
        other = math.sqrt(float(pair.link(pb * pb))) / pb
        if abs(other - slope) > 1e-10 * max(slope, 1e-300):
            raise LinkInconsistency(f"slope {slope!r} vs link value {other!r} at b={b!r}")
    return slope


def solve_budget(pair: SymbolPair, N: float, grid_points: int = GRID_POINTS) -> TruncationBundle:
    """Cut level b with N(b) = N (N(b) is continuous and strictly increasing)."""
    if not N > 0:
        raise BudgetUnreachable(f"budget must be positive, got {N!r}")

    def nb(b):
        return operator_budget(pair, b, grid_points).budget

    lo = hi = 1.0
    if nb(hi) < N:
        while nb(hi) < N:
            lo = hi
            hi *= BRACKET_GROWTH
            if hi > B_CAP:
                raise BudgetUnreachable(f"N(b) < {N!r} for all b <= {B_CAP:g}")
    else:
        while nb(lo) > N:
            hi = lo
            lo /= BRACKET_GROWTH
            if lo < B_FLOOR:
                raise BudgetUnreachable(f"N(b) > {N!r} for all b >= {B_FLOOR:g}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        val = nb(mid)
        if abs(val - N) <= 1e-13 * N:
            lo = hi = mid
            break
        if val < N:
            lo = mid
        else:
            hi = mid
    cands = [operator_budget(pair, x, grid_points) for x in {lo, hi}]
    return min(cands, key=lambda bun: abs(bun.budget - N))


def apply_truncated(
    op: SpectralOperator, pair: SymbolPair, b: float, x: SpectralElement
) -> SpectralElement:
    return apply_symbol(op, truncated_symbol(pair, b), x)


def dual_sup(link: ConcaveLink, N: float) -> tuple[float, float]:
    """(argmax delta, sup_delta {omega(delta) - N delta}) over a log grid plus refinement."""
    if N < 0:
        raise ValueError("N must be non-negative")

    def f(s):
        d = np.exp(s)
        with np.errstate(all="ignore"):
            return d * np.sqrt(link(1.0 / (d * d))) - N * d

    vals = f(DELTA_GRID)
    finite = np.flatnonzero(np.isfinite(vals))
    last = finite[-1]
    if last > 0 and vals[last] > vals[last - 1] + 1e-12 * max(1.0, abs(vals[last])):
        if int(np.argmax(np.where(np.isfinite(vals), vals, -np.inf))) == last:
            raise UnboundedSup(f"sup of omega(delta) - {N!r} delta is +inf")
    s, v, _ = scan_and_refine(f, DELTA_GRID, maximize=True)
    if not v > 0:
        return 0.0, 0.0
    return math.exp(s), v


def stechkin_lower_bound(link: ConcaveLink, N: float) -> float:
    """Delta(N) = sup_{delta > 0} {omega(delta) - N delta}."""
    return dual_sup(link, N)[1]

