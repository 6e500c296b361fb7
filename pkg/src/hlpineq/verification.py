"""Verification suites run by ``hlpineq verify``.

Each suite returns rows ``(suite, check, fixture, value, threshold, passed)``;
``value`` is the worst observed quantity and ``threshold`` the bound it is
compared against.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from . import classes, hlp, recovery, stechkin
from .spectral_core import (
    SpectralElement,
    SpectralOperator,
    element_from_vector,
    from_eigenvalues,
    from_fourier_grid,
    from_hermitian,
    symbol_norm,
)
from .symbols import SymbolPair, power_pair

DEFAULT_PAIRS = ((1.0, 2.0), (1.0, 3.0), (2.0, 3.0))
B_GRID = (0.25, 0.5, 1.0, 2.0, 4.0, 8.0)
IDENTITY_DELTAS = tuple(2.0 ** np.linspace(-8, 3, 50))


@dataclass(frozen=True)
class Row:
    suite: str
    check: str
    fixture: str
    value: float
    threshold: float
    passed: bool

    HEADER = ("suite", "check", "fixture", "value", "threshold", "passed")

    def cells(self) -> list[str]:
        return [
            self.suite,
            self.check,
            self.fixture,
            format(self.value, ".17g"),
            format(self.threshold, ".17g"),
            "1" if self.passed else "0",
        ]


def random_hermitian(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (m + m.conj().T) / 2


def fixture_operators(seed: int) -> dict[str, SpectralOperator]:
    """Diagonal, 16x16 Hermitian and 256-point Fourier fixtures."""
    return {
        "diagonal": from_eigenvalues(np.linspace(-4.0, 4.0, 33)),
        "hermitian16": from_hermitian(random_hermitian(16, seed)),
        "fourier256": from_fourier_grid(256, 2 * math.pi),
    }


def random_element(op: SpectralOperator, rng: np.random.Generator) -> SpectralElement:
    """Random element drawn in the user basis (dense with spread magnitudes, or 1-3 atoms)."""
    n = op.size
    if rng.random() < 0.7:
        scale = 10.0 ** rng.uniform(-3.0, 0.0, n)
        v = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * scale
        return element_from_vector(op, v)
    c = np.zeros(n, dtype=complex)
    idx = rng.choice(n, size=min(n, int(rng.integers(1, 4))), replace=False)
    c[idx] = rng.standard_normal(idx.size) + 1j * rng.standard_normal(idx.size)
    return SpectralElement(op, c)


def _nonzero(op, rng) -> SpectralElement:
    while True:
        x = random_element(op, rng)
        if x.norm() > 0:
            return x


def _pairs(pairs) -> list[SymbolPair]:
    return [p if isinstance(p, SymbolPair) else power_pair(*p) for p in pairs]


def suite_multiplicative(seed: int = 42, trials: int = 1000, pairs=DEFAULT_PAIRS) -> list[Row]:
    rows = []
    ops = fixture_operators(seed)
    for pair in _pairs(pairs):
        for k, (name, op) in enumerate(ops.items()):
            rng = np.random.default_rng([seed, 1, k])
            worst = math.inf
            for _ in range(trials):
                v = hlp.check_multiplicative(op, pair, _nonzero(op, rng))
                worst = min(worst, v.slack / max(1.0, v.rhs))
            rows.append(Row("multiplicative", "min_rel_slack", f"{name}:{pair.name}", worst, -1e-10, worst >= -1e-10))
        # single atoms: Jensen equality
        worst = 0.0
        for op in ops.values():
            for j in range(op.size):
                c = np.zeros(op.size, dtype=complex)
                c[j] = 1.0
                v = hlp.check_multiplicative(op, pair, SpectralElement(op, c))
                worst = max(worst, abs(v.slack))
        rows.append(Row("multiplicative", "atom_abs_slack", f"all:{pair.name}", worst, 1e-12, worst < 1e-12))
    return rows


def suite_additive(seed: int = 42, trials: int = 1000, pairs=DEFAULT_PAIRS) -> list[Row]:
    rows = []
    ops = fixture_operators(seed)
    for pair in _pairs(pairs):
        for k, (name, op) in enumerate(ops.items()):
            rng = np.random.default_rng([seed, 2, k])
            worst = math.inf
            for _ in range(trials):
                b = float(rng.uniform(0.1, 10.0))
                v = hlp.check_additive(op, pair, _nonzero(op, rng), b)
                worst = min(worst, v.slack / max(1.0, v.rhs))
            rows.append(Row("additive", "min_rel_slack", f"{name}:{pair.name}", worst, -1e-10, worst >= -1e-10))
    pair = power_pair(1, 2)
    op = from_eigenvalues(np.round(np.arange(0, 4001) * 0.001, 12))
    for b in (1.0, 2.0):
        pr = hlp.additive_sharpness_probe(op, pair, b, 0.01)
        ok = 0.98 * pr.slope <= pr.value <= pr.slope + 1e-10
        rows.append(Row("additive", f"sharpness_b={b:g}", "grid0.001:power(1,2)", pr.value / pr.slope, 0.98, ok))
    return rows


def suite_duality(pairs=DEFAULT_PAIRS, b_grid=B_GRID) -> list[Row]:
    rows = []
    for pair in _pairs(pairs):
        worst = 0.0
        for b in b_grid:
            bundle = stechkin.operator_budget(pair, b)
            lower = stechkin.stechkin_lower_bound(pair.require_link(), bundle.budget)
            worst = max(worst, abs(lower - stechkin.best_approx_value(pair, b)))
        rows.append(Row("duality", "max_abs_gap", pair.name, worst, 1e-8, worst < 1e-8))
    p12 = power_pair(1, 2)
    worst = max(
        abs(stechkin.best_approx_value(p12, b) - 1 / (4 * stechkin.operator_budget(p12, b).budget)) for b in b_grid
    )
    rows.append(Row("duality", "E_equals_1/(4N)", p12.name, worst, 1e-8, worst < 1e-8))
    p13 = power_pair(1, 3)
    gap = abs(stechkin.operator_budget(p13, 1.0).budget - 2 / (3 * math.sqrt(3)))
    rows.append(Row("duality", "N(1)_closed_form", p13.name, gap, 1e-10, gap < 1e-10))
    return rows


def suite_omega(seed: int = 42) -> list[Row]:
    p12 = power_pair(1, 2)
    deltas = np.geomspace(1e-3, 10.0, 50)
    worst = max(abs(hlp.modulus_of_continuity(p12.link, d) - math.sqrt(d)) for d in deltas)
    rows = [Row("omega", "formula_sqrt_delta", p12.name, worst, 1e-12, worst < 1e-12)]
    op = from_fourier_grid(4096, 2 * math.pi * 100)
    ratio = min(
        symbol_norm(op, p12.phi, hlp.extremal_element(op, p12, d, 0.01)) / math.sqrt(d)
        for d in np.geomspace(1e-2, 1.0, 50)
    )
    rows.append(Row("omega", "extremal_ratio", f"fourier4096:{p12.name}", ratio, 0.99, ratio >= 0.99))
    return rows


def suite_recovery_identity(pairs=DEFAULT_PAIRS, deltas=IDENTITY_DELTAS) -> list[Row]:
    rows = []
    for pair in _pairs(pairs):
        link = pair.require_link()
        worst = 0.0
        worst_b = 0.0
        for d in deltas:
            plan = recovery.l_delta(pair, d)
            w = hlp.modulus_of_continuity(link, d)
            worst = max(worst, abs(w - plan.value) / w)
            if pair.exponents == (1.0, 2.0):
                worst_b = max(worst_b, abs(plan.b_star * math.sqrt(d) / 2 - 1))
        rows.append(Row("theorem8", "max_rel_gap", pair.name, worst, 1e-6, worst < 1e-6))
        if pair.exponents == (1.0, 2.0):
            rows.append(Row("theorem8", "b_star_rel_err", pair.name, worst_b, 1e-6, worst_b < 1e-6))
    return rows


def random_class_element(op, pair, rng) -> SpectralElement:
    """Random x with ||(psi/phi)(A)x|| <= 1."""
    ratio = lambda t: classes.ratio_modulus(pair, t)  # noqa: E731
    while True:
        x = random_element(op, rng)
        m = symbol_norm(op, ratio, x)
        if m > 0:
            return x * (float(rng.uniform(0.1, 1.0)) / m)


def suite_classes(seed: int = 42, trials: int = 1000, pairs=DEFAULT_PAIRS) -> list[Row]:
    rows = []
    ops = fixture_operators(seed)
    for pair in _pairs(pairs):
        rng = np.random.default_rng([seed, 3])
        worst_m = worst_d = 0.0
        ok = True
        names = list(ops)
        for i in range(trials):
            op = ops[names[i % len(names)]]
            b = float(rng.uniform(0.1, 10.0))
            res = classes.project_to_homothet(op, pair, b, random_class_element(op, pair, rng))
            ok &= res.passed
            if res.budget > 0:
                worst_m = max(worst_m, res.membership_lhs / res.budget)
            worst_d = max(worst_d, res.distance_lhs / res.slope)
        rows.append(Row("classes", "membership_ratio", f"all:{pair.name}", worst_m, 1 + 1e-10, ok and worst_m <= 1 + 1e-10))
        rows.append(Row("classes", "distance_ratio", f"all:{pair.name}", worst_d, 1 + 1e-10, ok and worst_d <= 1 + 1e-10))
    pair = power_pair(1, 2)
    op = from_eigenvalues(np.round(np.arange(0, 4001) * 0.001, 12))
    pr = classes.class_sharpness_probe(op, pair, 1.0, 0.01)
    ok = 0.98 * pr.slope <= pr.value <= pr.slope + 1e-10
    rows.append(Row("classes", "sharpness_b=1", f"grid0.001:{pair.name}", pr.value / pr.slope, 0.98, ok))
    return rows


def suite_recovery(seed: int = 42, trials: int = 1000) -> list[Row]:
    pair = power_pair(1, 2)
    op = from_fourier_grid(4096, 2 * math.pi * 100)
    delta = 0.25
    plan = recovery.l_delta(pair, delta)
    rep = recovery.deviation_with_noise(op, pair, 4.0, delta, trials, seed)
    omega = hlp.modulus_of_continuity(pair.link, delta)
    rows = [
        Row("recovery", "b_star", pair.name, plan.b_star, 4.0, abs(plan.b_star / 4 - 1) < 1e-6),
        Row("recovery", "empirical_sup", f"fourier4096:{pair.name}", rep.empirical_sup, 0.5, rep.empirical_sup <= 0.5),
        Row("recovery", "witness", f"fourier4096:{pair.name}", rep.witness, 0.49, rep.witness >= 0.49),
        Row(
            "recovery",
            "sandwich_upper",
            f"fourier4096:{pair.name}",
            max(rep.empirical_sup, rep.witness),
            omega * (1 + 1e-8),
            max(rep.empirical_sup, rep.witness) <= omega * (1 + 1e-8),
        ),
    ]
    return rows


SUITES = {
    "multiplicative": lambda cfg: suite_multiplicative(cfg["seed"], cfg["trials"], cfg["pairs"]),
    "additive": lambda cfg: suite_additive(cfg["seed"], cfg["trials"], cfg["pairs"]),
    "duality": lambda cfg: suite_duality(cfg["pairs"], cfg["b_grid"]),
    "theorem8": lambda cfg: suite_recovery_identity(cfg["pairs"]),
    "classes": lambda cfg: suite_classes(cfg["seed"], cfg["trials"], cfg["pairs"]),
    "recovery": lambda cfg: suite_recovery(cfg["seed"], cfg["trials"]),
}


def run(name: str, seed: int = 42, trials: int = 1000, pairs=DEFAULT_PAIRS, b_grid=B_GRID) -> list[Row]:
    cfg = {"seed": seed, "trials": trials, "pairs": pairs, "b_grid": b_grid}
    if name == "all":
        rows = suite_omega(seed)
        for fn in SUITES.values():
            rows.extend(fn(cfg))
        return rows
    return SUITES[name](cfg)


SWEEP_HEADER = ("seed", "trial", "lhs", "rhs", "slack")


def sweep(op: SpectralOperator, pair: SymbolPair, seed: int = 42, trials: int = 100, b: float | None = None) -> list[list[str]]:
    """Per-trial verdict rows; additive form when ``b`` is given, multiplicative otherwise."""
    rows = []
    for i in range(trials):
        x = _nonzero(op, np.random.default_rng([seed, i]))
        v = hlp.check_multiplicative(op, pair, x) if b is None else hlp.check_additive(op, pair, x, b)
        rows.append([str(seed), str(i), format(v.lhs, ".17g"), format(v.rhs, ".17g"), format(v.slack, ".17g")])
    return rows


def sweep_csv(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    w.writerows(rows)
    return buf.getvalue()
