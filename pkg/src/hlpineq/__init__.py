"""Sharp norm inequalities between functions of one self-adjoint operator.

Operators are held in spectral form (eigenvalues plus a unitary), symbols are
even-modulus functions on the real line, and every constant is computed from
the moduli |phi|, |psi|.
"""
from __future__ import annotations

from .errors import HLPError
from .spectral_core import (
    SpectralElement,
    SpectralOperator,
    apply_symbol,
    element,
    element_from_vector,
    from_eigenvalues,
    from_fourier_grid,
    from_hermitian,
    spectral_measure,
    symbol_norm,
)
from .symbols import ConcaveLink, Symbol, SymbolPair, derive_link, make_pair, named_pair, power_pair, validate_pair
from .stechkin import TruncationBundle, best_approx_value, operator_budget, solve_budget, stechkin_lower_bound
from .hlp import (
    InequalityVerdict,
    additive_sharpness_probe,
    check_additive,
    check_multiplicative,
    extremal_element,
    modulus_of_continuity,
)
from .classes import class_approx_value, class_sharpness_probe, project_to_homothet
from .recovery import deviation_with_noise, l_delta, recover, recovery_value

__all__ = [
    "annotations",
    "HLPError",
    "SpectralElement",
    "SpectralOperator",
    "apply_symbol",
    "element",
    "element_from_vector",
    "from_eigenvalues",
    "from_fourier_grid",
    "from_hermitian",
    "spectral_measure",
    "symbol_norm",
    "ConcaveLink",
    "Symbol",
    "SymbolPair",
    "derive_link",
    "make_pair",
    "named_pair",
    "power_pair",
    "validate_pair",
    "TruncationBundle",
    "best_approx_value",
    "operator_budget",
    "solve_budget",
    "stechkin_lower_bound",
    "InequalityVerdict",
    "additive_sharpness_probe",
    "check_additive",
    "check_multiplicative",
    "extremal_element",
    "modulus_of_continuity",
    "class_approx_value",
    "class_sharpness_probe",
    "project_to_homothet",
    "deviation_with_noise",
    "l_delta",
    "recover",
    "recovery_value",
]
