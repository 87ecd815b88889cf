"""Formal Brauer groups of K3 families: logarithms, heights, unit roots and slopes."""

from __future__ import annotations

from .exact import BigRational, DomainError, FpPoly, fp_factor, is_irreducible
from .fgl import (
    CongruenceViolation,
    DivisibilityViolation,
    FormalGroupLogarithm,
    HeightReport,
    IdentityViolation,
    UnitRootReport,
    build_group_law,
    check_group_axioms,
    gamma_check,
    height_classify,
    limit_identity_check,
    supersingular_divisibility,
    unit_root_sb,
    v_polynomials,
)
from .hyperfam import CATALOG, K3FamilySpec, family_log_coeff, get_family, multinomial_oracle
from .padic import PadicInt, PrecisionError, padic_gamma, teichmuller
from .weil import WeilPoly, functional_equation_check, possible_r, power_structure, slope_factorize

__version__ = "0.1.0"

__all__ = [
    "BigRational", "CATALOG", "CongruenceViolation", "DivisibilityViolation", "DomainError",
    "FormalGroupLogarithm", "FpPoly", "HeightReport", "IdentityViolation", "K3FamilySpec",
    "PadicInt", "PrecisionError", "UnitRootReport", "WeilPoly", "build_group_law",
    "check_group_axioms", "family_log_coeff", "fp_factor", "functional_equation_check",
    "gamma_check", "get_family", "height_classify", "is_irreducible", "limit_identity_check",
    "multinomial_oracle", "padic_gamma", "possible_r", "power_structure", "slope_factorize",
    "supersingular_divisibility", "teichmuller", "unit_root_sb", "v_polynomials",
]
