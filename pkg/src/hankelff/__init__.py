"""Exact Hankel-matrix and divisor-variance computations over finite fields."""

from .census import (
    CensusQuery,
    CensusRecord,
    CensusReport,
    cache_roundtrip,
    census_enumerate,
    census_reconcile,
    formula_H,
    formula_L_r,
    formula_L_rho_pi,
)
from .cyclosum import CycInt, cyc_arith, cyc_from_exponent, expsum_lemma_check, inner_hankel_sum
from .divisor import (
    divisor_table,
    interval_sum,
    summation_identity_check,
    variance_bruteforce,
    variance_formula,
    variance_report,
)
from .errors import *  # noqa: F401,F403
from .ffield import FieldElement, FieldSpec, elem_arith, elem_inv, field_enumerate, field_make
from .fpoly import EuclidChain, Poly, euclid_chain, monic_enumerate, poly_divmod, poly_gcd, poly_mul
from .hankel import (
    CharPair,
    HankelView,
    RhoPiProfile,
    SymbolSeq,
    char_polys,
    euclid_correspondence_check,
    extend_profile,
    extension_check,
    hankel_kernel_basis,
    hankel_rank,
    kernel_predict,
    rho_pi_form,
    rho_pi_profile,
    seq_from_charpolys,
)

__version__ = "0.1.0"
