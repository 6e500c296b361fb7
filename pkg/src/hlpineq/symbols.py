"""Scalar symbols, the concave link between a pair of them, and hypothesis checks.

All constants and bounds are computed from the moduli |phi| and |psi|; the
signed/complex channel of a symbol is only used when it is applied to an
operator.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .errors import InvalidOrder, NotConcaveLink, OutOfRange

VALIDATION_GRID = np.geomspace(1e-6, 1e6, 512)
EVEN_TOL = 1e-10
CONCAVE_TOL = 1e-10
LINK_REL_TOL = 1e-8
RATIO_REL_TOL = 1e-12
T_EXPAND = 4.0
T_CAP = 1e12


@dataclass(frozen=True)
class Symbol:
    """A scalar function of the spectral parameter.

    ``fn`` gives the (possibly complex) value used when the symbol is applied
    to an operator; ``modulus_fn`` gives |value| on u >= 0 and defaults to
    ``abs(fn(u))``.
    """

    name: str
    fn: Callable = field(repr=False)
    modulus_fn: Callable | None = field(default=None, repr=False)
    tends_to_infinity: bool = True

    def __call__(self, t):
        with np.errstate(over="ignore"):
            return self.fn(np.asarray(t, dtype=float))

    def modulus(self, u):
        u = np.abs(np.asarray(u, dtype=float))
        with np.errstate(over="ignore"):
            if self.modulus_fn is not None:
                return self.modulus_fn(u)
            return np.abs(self.fn(u))

    def even_modulus(self, t):
        """|fn(t)| evaluated through the signed channel (for the evenness check)."""
        with np.errstate(over="ignore"):
            return np.abs(self.fn(np.asarray(t, dtype=float)))

    @cached_property
    def strictly_increasing_modulus(self) -> bool:
        return _increase_violation(self, VALIDATION_GRID) == 0.0


def power(k: float) -> Symbol:
    k = float(k)
    return Symbol(f"power({k:g})", lambda t: np.abs(t) ** k, lambda u: u**k)


def signed_power(k: float) -> Symbol:
    """``sign(t) |t|^k``: same modulus as ``power(k)`` but odd."""
    k = float(k)
    return Symbol(f"signed_power({k:g})", lambda t: np.sign(t) * np.abs(t) ** k, lambda u: u**k)


def exp_abs() -> Symbol:
    return Symbol("exp_abs", lambda t: np.expm1(np.abs(t)), lambda u: np.expm1(u))


def log1p_abs() -> Symbol:
    return Symbol("log1p_abs", lambda t: np.log1p(np.abs(t)), lambda u: np.log1p(u))


REGISTRY: dict[str, Callable[..., Symbol]] = {
    "power": power,
    "signed_power": signed_power,
    "exp_abs": exp_abs,
    "log1p_abs": log1p_abs,
}

_NAME_RE = re.compile(r"^\s*([a-z_0-9]+)\s*(?:[(:]\s*([-+0-9.eE]+)\s*\)?)?\s*$")


def symbol_from_name(spec: str) -> Symbol:
    """Look up ``"power(2)"``, ``"power:2"``, ``"exp_abs"`` ... in the registry."""
    m = _NAME_RE.match(spec)
    if not m or m.group(1) not in REGISTRY:
        raise KeyError(f"unknown symbol {spec!r}; known: {sorted(REGISTRY)}")
    factory = REGISTRY[m.group(1)]
    return factory(float(m.group(2))) if m.group(2) is not None else factory()


def inverse_modulus(s: Symbol, y, t_max: float = 1.0, strict: bool = True):
    """t >= 0 with |s(t)| = y, by bisection on a geometrically expanded bracket.

    Accepts scalars or arrays. The bracket ``[0, t_max]`` grows by a factor
    of 4 up to 1e12 while the modulus stays below ``y``; unreachable targets
    raise ``OutOfRange``, or give nan when ``strict`` is false.
    """
    y_arr = np.asarray(y, dtype=float)
    scalar = y_arr.ndim == 0
    y_arr = np.atleast_1d(y_arr)
    if np.any(y_arr < 0) or not np.all(np.isfinite(y_arr)):
        raise OutOfRange("target modulus must be finite and non-negative")
    lo = np.zeros_like(y_arr)
    hi = np.full_like(y_arr, float(t_max))
    lost = np.zeros(y_arr.shape, dtype=bool)
    while True:
        short = (s.modulus(hi) < y_arr) & ~lost
        if not short.any():
            break
        stuck = short & ((hi >= T_CAP) | (not s.tends_to_infinity))
        if stuck.any():
            if strict:
                raise OutOfRange(f"modulus of {s.name} does not reach {y_arr[stuck].max()!r}")
            lost |= stuck
            short &= ~stuck
        hi[short] = np.minimum(hi[short] * T_EXPAND, T_CAP)
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        active = (mid > lo) & (mid < hi)
        if not active.any():
            break
        below = s.modulus(mid) < y_arr
        lo = np.where(active & below, mid, lo)
        hi = np.where(active & ~below, mid, hi)
    # return whichever end of the final bracket is closer in value
    err_lo = np.abs(s.modulus(lo) - y_arr)
    err_hi = np.abs(s.modulus(hi) - y_arr)
    t = np.where(err_lo <= err_hi, lo, hi)
    t[y_arr == 0] = 0.0
    t[lost] = np.nan
    return float(t[0]) if scalar else t


@dataclass(frozen=True)
class ConcaveLink:
    """F with |phi|^2 = F(|psi|^2); ``provenance`` is closed_form or derived_from_pair."""

    F: Callable = field(repr=False)
    provenance: str = "closed_form"
    name: str = ""

    def __call__(self, v):
        return self.F(np.asarray(v, dtype=float))


_ROOTS = {1: lambda v: v, 2: np.sqrt, 3: np.cbrt}


def power_link(k: float, r: float) -> ConcaveLink:
    """v^(k/r), evaluated as an exact root power when k/r = p/q with q <= 3.

    Rounding the exponent itself (2/3 is not a double) costs ~1e-15 relative,
    which breaks the atom equality |phi|^2 = F(|psi|^2) at large eigenvalues.
    """
    e = k / r
    frac = Fraction(e).limit_denominator(64)
    if float(frac) == e and frac.denominator in _ROOTS:
        root, p = _ROOTS[frac.denominator], frac.numerator

        def F(v):
            return root(v) ** p

    else:

        def F(v):
            return v**e

    return ConcaveLink(F, "closed_form", f"v^({k:g}/{r:g})")


def _link_grid(psi: Symbol, grid: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        v = psi.modulus(grid) ** 2
    v = v[np.isfinite(v) & (v > 0)]
    return np.unique(v)


def concavity_violation(link: ConcaveLink, vgrid: np.ndarray) -> float:
    """Worst midpoint-concavity defect over grid pairs at strides 1, 2, 4, ...

    Measured relative to max(1, |F(mid)|); 0.0 means no violation.
    """
    vgrid = np.asarray(vgrid, dtype=float)
    fv = link(vgrid)
    worst = 0.0
    stride = 1
    while stride < vgrid.size:
        a, b = vgrid[:-stride], vgrid[stride:]
        fa, fb = fv[:-stride], fv[stride:]
        fm = link(0.5 * (a + b))
        ok = np.isfinite(fm) & np.isfinite(fa) & np.isfinite(fb)
        defect = ((fa + fb) / 2 - fm)[ok] / np.maximum(1.0, np.abs(fm[ok]))
        if defect.size:
            worst = max(worst, float(defect.max()))
        stride *= 2
    return max(worst, 0.0)


def _check_link(link: ConcaveLink, vgrid: np.ndarray) -> dict[str, float]:
    fv = link(vgrid)
    scale = np.maximum(1.0, np.abs(fv))
    dec = -np.diff(fv) / scale[1:]
    return {
        "link_zero": abs(float(link(0.0))),
        "link_concave": concavity_violation(link, vgrid),
        "link_increasing": max(0.0, float(dec.max())) if dec.size else 0.0,
    }


def derive_link(phi: Symbol, psi: Symbol, grid: np.ndarray | None = None) -> ConcaveLink:
    """Numerical F(v) = |phi|(|psi|^{-1}(sqrt v))^2, rejected unless concave on ``grid``."""

    def F(v):
        v = np.asarray(v, dtype=float)
        t = inverse_modulus(psi, np.sqrt(v), strict=False)
        return phi.modulus(t) ** 2

    link = ConcaveLink(F, "derived_from_pair", f"derived[{phi.name},{psi.name}]")
    vgrid = _link_grid(psi, VALIDATION_GRID if grid is None else np.asarray(grid))
    checks = _check_link(link, vgrid)
    if checks["link_zero"] > 1e-12:
        raise NotConcaveLink(f"F(0) = {checks['link_zero']!r} != 0")
    if checks["link_concave"] > CONCAVE_TOL:
        raise NotConcaveLink(f"midpoint concavity violated by {checks['link_concave']:.3g}")
    if checks["link_increasing"] > CONCAVE_TOL:
        raise NotConcaveLink("F is not increasing")
    return link


def _increase_violation(s: Symbol, grid: np.ndarray) -> float:
    """Largest drop of the modulus between successive samples (0.0 when strictly increasing).

    A flat step is reported as the smallest positive float so the flag still fails.
    """
    refined = np.sort(np.concatenate([grid, np.sqrt(grid[:-1] * grid[1:])]))
    worst = 0.0
    for g in (grid, refined):
        m = s.modulus(g)
        d = np.diff(m[np.isfinite(m)])
        if d.size == 0:
            continue
        if d.min() < 0:
            worst = max(worst, float(-d.min()))
        elif d.min() == 0:
            worst = max(worst, float(np.finfo(float).tiny))
    return worst


def _ratio(phi: Symbol, psi: Symbol, u) -> np.ndarray:
    with np.errstate(all="ignore"):
        return phi.modulus(u) / psi.modulus(u)


@dataclass(frozen=True)
class SymbolPair:
    """The pair (phi, psi); ``link`` is None when F is not concave."""

    phi: Symbol
    psi: Symbol
    link: ConcaveLink | None
    ratio_nonincreasing: bool
    ratio_to_zero: bool = False
    ratio_at_zero: float | None = None  # value of |psi|/|phi| at t = 0
    exponents: tuple[float, float] | None = None

    @property
    def name(self) -> str:
        if self.exponents is not None:
            return "power(%g,%g)" % self.exponents
        return f"{self.phi.name}/{self.psi.name}"

    def require_link(self) -> ConcaveLink:
        if self.link is None:
            raise NotConcaveLink(f"pair {self.name} has no concave link")
        return self.link

    def slope(self, b: float) -> float:
        """|phi(b)| / |psi(b)|."""
        return float(_ratio(self.phi, self.psi, b))


def ratio_checks(phi: Symbol, psi: Symbol, grid: np.ndarray = VALIDATION_GRID):
    """(worst relative increase of |phi|/|psi| on grid, ratio decays to zero)."""
    q = _ratio(phi, psi, grid)
    q = q[np.isfinite(q)]
    if q.size < 2:
        return 0.0, False
    rel = np.diff(q) / np.maximum(q[1:], np.finfo(float).tiny)
    worst = max(0.0, float(rel.max()))
    return worst, bool(q[-1] < 1e-3 * q[0])


def make_pair(
    phi: Symbol,
    psi: Symbol,
    link: ConcaveLink | None = None,
    ratio_at_zero: float | None = None,
    grid: np.ndarray | None = None,
) -> SymbolPair:
    grid = VALIDATION_GRID if grid is None else np.asarray(grid)
    if link is None:
        try:
            link = derive_link(phi, psi, grid)
        except NotConcaveLink:
            link = None
    if ratio_at_zero is None:
        with np.errstate(all="ignore"):
            p0 = float(phi.modulus(0.0))
        if p0 > 0:
            ratio_at_zero = float(psi.modulus(0.0)) / p0
    worst, to_zero = ratio_checks(phi, psi, grid)
    return SymbolPair(phi, psi, link, worst <= RATIO_REL_TOL, to_zero, ratio_at_zero)


def power_pair(k: float, r: float) -> SymbolPair:
    """phi = |t|^k, psi = |t|^r with the closed-form link v^(k/r)."""
    if not (k > 0 and r > k):
        raise InvalidOrder(f"need 0 < k < r, got k={k!r}, r={r!r}")
    return SymbolPair(
        power(k),
        power(r),
        power_link(k, r),
        ratio_nonincreasing=True,
        ratio_to_zero=True,
        ratio_at_zero=0.0,
        exponents=(float(k), float(r)),
    )


# |psi|/|phi| at t = 0 for registry pairs whose phi vanishes there
_ZERO_LIMITS = {
    ("log1p_abs", "power(1)"): 1.0,
    ("power(1)", "exp_abs"): 1.0,
}


def named_pair(phi_name: str, psi_name: str) -> SymbolPair:
    """Pair built from registry names; power/power pairs get the closed-form link."""
    phi, psi = symbol_from_name(phi_name), symbol_from_name(psi_name)
    kp = re.match(r"power\((.*)\)$", phi.name)
    kq = re.match(r"power\((.*)\)$", psi.name)
    if kp and kq and float(kp.group(1)) < float(kq.group(1)):
        return power_pair(float(kp.group(1)), float(kq.group(1)))
    return make_pair(phi, psi, ratio_at_zero=_ZERO_LIMITS.get((phi.name, psi.name)))


@dataclass
class CheckResult:
    passed: bool
    worst: float


@dataclass
class ValidationReport:
    checks: dict[str, CheckResult]
    warnings: list[str]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def failed(self) -> list[str]:
        return [k for k, c in self.checks.items() if not c.passed]


def _evenness(s: Symbol, grid: np.ndarray) -> float:
    a, b = s.even_modulus(grid), s.even_modulus(-grid)
    ok = np.isfinite(a) & np.isfinite(b)
    rel = np.abs(a[ok] - b[ok]) / np.maximum(1.0, np.abs(a[ok]))
    return float(rel.max()) if rel.size else 0.0


def _phase_spread(pair: SymbolPair, grid: np.ndarray) -> float:
    t = np.concatenate([-grid[::-1], grid])
    with np.errstate(all="ignore"):
        q = np.asarray(pair.phi(t), dtype=complex) / np.asarray(pair.psi(t), dtype=complex)
    q = q[np.isfinite(q) & (q != 0)]
    if q.size == 0:
        return 0.0
    unit = q / np.abs(q)
    return float(np.max(np.abs(unit - unit[0])))


def validate_pair(pair: SymbolPair, grid: np.ndarray | None = None) -> ValidationReport:
    """Check every assumption the inequalities rely on; failures are reported, not raised."""
    grid = VALIDATION_GRID if grid is None else np.asarray(grid)
    checks: dict[str, CheckResult] = {}
    for label, s in (("phi", pair.phi), ("psi", pair.psi)):
        ev = _evenness(s, grid)
        checks[f"{label}_even"] = CheckResult(ev <= EVEN_TOL, ev)
        inc = _increase_violation(s, grid)
        checks[f"{label}_increasing"] = CheckResult(inc == 0.0, inc)

    worst, _ = ratio_checks(pair.phi, pair.psi, grid)
    checks["ratio_nonincreasing"] = CheckResult(worst <= RATIO_REL_TOL, worst)

    if pair.link is None:
        try:
            link = derive_link(pair.phi, pair.psi, grid)
        except NotConcaveLink:
            link = None
    else:
        link = pair.link
    if link is None:
        checks["link_concave"] = CheckResult(False, math.inf)
    else:
        vgrid = _link_grid(pair.psi, grid)
        for name, val in _check_link(link, vgrid).items():
            tol = 1e-12 if name == "link_zero" else CONCAVE_TOL
            checks[name] = CheckResult(val <= tol, val)
        with np.errstate(over="ignore"):
            t = grid[np.isfinite(pair.psi.modulus(grid) ** 2)]
            lhs = pair.phi.modulus(t) ** 2
            rhs = link(pair.psi.modulus(t) ** 2)
        ok = np.isfinite(lhs) & np.isfinite(rhs)
        rel = np.abs(lhs - rhs)[ok] / np.maximum(np.abs(lhs[ok]), np.finfo(float).tiny)
        cons = float(rel.max()) if rel.size else 0.0
        checks["link_consistent"] = CheckResult(cons <= LINK_REL_TOL, cons)

    notes = []
    spread = _phase_spread(pair, grid)
    if spread > 1e-8:
        msg = (
            f"phi/psi is not phase-coherent for {pair.name} (spread {spread:.3g}); "
            "results hold for the moduli |phi|(A), |psi|(A)"
        )
        notes.append(msg)
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
    return ValidationReport(checks, notes)
