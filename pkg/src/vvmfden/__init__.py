"""Exact q-expansions of solutions of rank-two modular differential equations
and the arithmetic of their Fourier-coefficient denominators."""

from .denominators import analyze, bounded_check, classify, verify_prop2
from .forms import eisenstein, eta_power, form_cache, j_inverse, j_series, serre_derivative
from .hypergeom import C_n, closed_form_solution, f21_coefficients, lemma_valuation_check, pochhammer
from .mlde import MLDEParams, derive_params, frobenius_solve, indicial_roots, mlde_residual
from .rational import factor_rational, padic_valuation, primes_in_progression
from .series import QExpansion

__all__ = [
    "C_n",
    "MLDEParams",
    "QExpansion",
    "analyze",
    "bounded_check",
    "classify",
    "closed_form_solution",
    "derive_params",
    "eisenstein",
    "eta_power",
    "f21_coefficients",
    "factor_rational",
    "form_cache",
    "frobenius_solve",
    "indicial_roots",
    "j_inverse",
    "j_series",
    "lemma_valuation_check",
    "mlde_residual",
    "padic_valuation",
    "pochhammer",
    "primes_in_progression",
    "serre_derivative",
    "verify_prop2",
]
