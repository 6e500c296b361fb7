"""Optimal recovery of phi(A) on W^psi from data known up to an error delta.

The optimal method is the bounded operator phi_{b*}(A) with
b* = argmin_b {|phi(b)|/|psi(b)| + N(b) delta}; its worst-case error l(delta)
equals the modulus of continuity omega(delta).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import hlp, stechkin
from ._search import scan_and_refine
from .errors import BracketExhausted, DegenerateCut, EmptyBand, InvalidDelta, TheoremViolation
from .spectral_core import (
    SpectralElement,
    SpectralOperator,
    apply_symbol,
    band_element,
    symbol_values,
)
from .symbols import ConcaveLink, SymbolPair, inverse_modulus

IDENTITY_RTOL = 1e-6
DEFAULT_SEED = 42


@dataclass(frozen=True)
class RecoveryPlan:
    delta: float
    b_star: float
    value: float
    bundle: stechkin.TruncationBundle | None

    def as_dict(self) -> dict:
        return {"delta": self.delta, "b_star": self.b_star, "value": self.value}


def _objective(pair: SymbolPair, delta: float):
    def f(s):
        s = np.asarray(s, dtype=float)
        out = np.empty(s.shape)
        for i, si in np.ndenumerate(s):
            try:
                bun = stechkin.operator_budget(pair, math.exp(si))
            except DegenerateCut:
                out[i] = math.inf
                continue
            out[i] = bun.slope + bun.budget * delta
        return out if out.ndim else out[()]

    return f


def _flat(f, grid, v: float) -> bool:
    ends = (float(f(grid[0])), float(f(grid[len(grid) // 2])), float(f(grid[-1])))
    return all(abs(e - v) <= 1e-12 * max(1.0, abs(v)) for e in ends)


def l_delta(pair: SymbolPair, delta: float, points_per_decade: int = 10) -> RecoveryPlan:
    """inf_b {|phi(b)|/|psi(b)| + N(b) delta} by a log-grid scan over b plus golden refinement.

    The scan is centred on |psi|^{-1}(1/delta), the level at which the
    extremal elements for omega(delta) live, and widened when the minimum
    sits on an edge.
    """
    if not delta > 0:
        raise InvalidDelta(f"delta must be positive, got {delta!r}")
    center = math.log(inverse_modulus(pair.psi, 1.0 / delta))
    f = _objective(pair, delta)
    lo_dec, hi_dec = -1.0, 3.0
    for _ in range(6):
        n = int(round((hi_dec - lo_dec) * points_per_decade)) + 1
        grid = center + np.log(10.0) * np.linspace(lo_dec, hi_dec, n)
        s, v, idx = scan_and_refine(f, grid, maximize=False, xtol=1e-10)
        if idx in (0, n - 1) and _flat(f, grid, v):
            # constant objective (e.g. phi = psi): every b is optimal
            b = math.exp(grid[idx])
            return RecoveryPlan(float(delta), b, float(v), stechkin.operator_budget(pair, b))
        if idx == 0:
            lo_dec -= 2.0
        elif idx == n - 1:
            hi_dec += 2.0
        else:
            b = math.exp(s)
            return RecoveryPlan(float(delta), b, float(v), stechkin.operator_budget(pair, b))
    raise BracketExhausted(f"no interior minimum of l(delta) objective for delta={delta!r}")


def recovery_value(link: ConcaveLink, delta: float, pair: SymbolPair | None = None) -> float:
    """omega(delta); with ``pair`` given, also verified against l(delta)."""
    omega = hlp.modulus_of_continuity(link, delta)
    if pair is not None:
        lv = l_delta(pair, delta).value
        if abs(omega - lv) > IDENTITY_RTOL * omega:
            raise TheoremViolation(f"omega={omega!r} but l={lv!r} at delta={delta!r}")
    return omega


def recover(op: SpectralOperator, pair: SymbolPair, delta: float, eta: SpectralElement) -> SpectralElement:
    """phi_{b*}(A) eta.

    With delta = 0 the cut moves past the whole (finite) spectrum and the
    method is phi(A) itself.
    """
    if delta < 0:
        raise InvalidDelta("delta must be non-negative")
    if delta == 0:
        return apply_symbol(op, pair.phi, eta)
    plan = l_delta(pair, delta)
    return stechkin.apply_truncated(op, pair, plan.b_star, eta)


@dataclass(frozen=True)
class NoiseReport:
    delta: float
    b: float
    analytic_cap: float
    empirical_sup: float
    witness: float
    samples: int
    seed: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "delta": self.delta,
                "b_star": self.b,
                "value": self.analytic_cap,
                "empirical_sup": self.empirical_sup,
                "analytic_cap": self.analytic_cap,
                "witness": self.witness,
                "samples": self.samples,
                "seed": self.seed,
            }
        )


def _random_coeffs(rng: np.random.Generator, n: int) -> np.ndarray:
    if rng.random() < 0.5:
        scale = 10.0 ** rng.uniform(-3.0, 0.0, n)
        return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * scale
    c = np.zeros(n, dtype=complex)
    idx = rng.choice(n, size=min(n, int(rng.integers(1, 4))), replace=False)
    c[idx] = rng.standard_normal(idx.size) + 1j * rng.standard_normal(idx.size)
    return c


def _worst_noise(u: np.ndarray, phib: np.ndarray, delta: float, fallback: np.ndarray) -> np.ndarray:
    """Noise of norm delta along the first-order ascent direction of ||u + phi_b e||."""
    w = np.conj(phib) * u
    nw = np.linalg.norm(w)
    if nw == 0:
        w, nw = fallback, np.linalg.norm(fallback)
    return delta * w / nw if nw > 0 else np.zeros_like(u)


def _witness(op, pair, bundle, delta, phi, phib) -> float:
    """Largest error among the constructed adversarial elements (0.0 if none fit the spectrum)."""
    best = 0.0
    # class-boundary element at the maximizer of |phi_b| with aligned noise: attains the cap
    s, t = hlp.probe_band(bundle, 0.02)
    try:
        x = band_element(op, s, t, 1.0).coeffs
    except EmptyBand:
        x = None
    if x is not None:
        npsi = np.linalg.norm(symbol_values(op, pair.psi) * x)
        if npsi > 0:
            x = x / npsi
            u = (phi - phib) * x
            e = _worst_noise(u, phib, delta, x)
            best = max(best, float(np.linalg.norm(u + phib * e)))
    # extremal element for omega(delta) observed as zero data
    if delta > 0:
        for eps in (0.01, 0.02, 0.05, 0.1, 0.2, 0.5):
            try:
                xe = hlp.extremal_element(op, pair, delta, eps).coeffs
            except EmptyBand:
                continue
            best = max(best, float(np.linalg.norm(phi * xe)))
            break
    return best


def deviation_with_noise(
    op: SpectralOperator,
    pair: SymbolPair,
    b: float,
    delta: float,
    samples: int = 1000,
    seed: int = DEFAULT_SEED,
) -> NoiseReport:
    """Empirical sup of ||phi(A)x - phi_b(A)eta|| over x in W^psi, ||x - eta|| <= delta.

    Each sample draws x on the class boundary (sometimes inside it) from its
    own generator seeded by (seed, index), then tries a random noise
    direction and the aligned one.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if delta < 0:
        raise InvalidDelta("delta must be non-negative")
    bundle = stechkin.operator_budget(pair, b)
    cap = bundle.slope + bundle.budget * delta
    phi = symbol_values(op, pair.phi).astype(complex)
    phib = symbol_values(op, stechkin.truncated_symbol(pair, b)).astype(complex)
    psi = np.abs(symbol_values(op, pair.psi))
    n = op.size
    sup = 0.0
    for i in range(samples):
        rng = np.random.default_rng([seed, i])
        x = _random_coeffs(rng, n)
        npsi = np.linalg.norm(psi * x)
        if npsi == 0:
            continue
        x *= (1.0 if rng.random() < 0.5 else rng.uniform(0.1, 1.0)) / npsi
        u = (phi - phib) * x
        r = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        e_rand = delta * r / np.linalg.norm(r)
        for e in (e_rand, _worst_noise(u, phib, delta, r)):
            sup = max(sup, float(np.linalg.norm(u + phib * e)))
    witness = _witness(op, pair, bundle, delta, phi, phib)
    return NoiseReport(float(delta), float(b), cap, sup, witness, samples, seed)
