"""Exact tools for a trace-masked authentication code over F_{p^n}.

The code encrypts a source s under a key k as (s + k^(p^r), Tr(s*k)).
This package provides exact finite-field and cyclotomic arithmetic, the
special Weil sums behind the code's security analysis (brute force and
closed form, cross-checked), the exact impersonation and substitution
deception probabilities, and the entropy bounds they are measured
against, plus a CLI for reproducible desk-scale tables.
"""

from .authcode import (CodeParams, Message, PsBound, SubstitutionQuery,
                       case_id, count_keys_bruteforce, count_keys_closed,
                       count_keys_joint_bruteforce, count_table, encode,
                       lambda_of, pi_closed, pi_exact, ps_bound, ps_exact,
                       ps_exact_details, verify)
from .bounds import (EntropyReport, MessageDistribution, combinatorial_bound,
                     conditional_entropy, distribution_census, entropy_report,
                     h_e, h_e_given_m, h_e_given_mm, message_distribution,
                     optimality_report)
from .caps import (DEFAULT_ENUM_CAP, DEFAULT_PAIR_CAP, DEFAULT_PS_CAP,
                   DEFAULT_SCAN_CAP, CapExceeded)
from .charsum import (WeilSumParams, additive_char, count_solvable_b,
                      frobenius_affine_solve, frobenius_kernel,
                      gauss_sum_bruteforce, gauss_sum_closed,
                      is_permutation_f, quadratic_gauss_sum,
                      weil_sum_bruteforce, weil_sum_closed)
from .cyclotomic import CyclotomicInt
from .field import FieldCtx, is_irreducible, is_prime, legendre, make_field

__version__ = "0.1.0"

__all__ = [
    "CapExceeded", "CodeParams", "CyclotomicInt", "EntropyReport",
    "FieldCtx", "Message", "MessageDistribution", "PsBound",
    "SubstitutionQuery", "WeilSumParams", "additive_char", "case_id",
    "combinatorial_bound", "conditional_entropy", "count_keys_bruteforce",
    "count_keys_closed", "count_keys_joint_bruteforce", "count_solvable_b",
    "count_table", "distribution_census", "encode", "entropy_report",
    "frobenius_affine_solve", "frobenius_kernel", "gauss_sum_bruteforce",
    "gauss_sum_closed", "h_e", "h_e_given_m", "h_e_given_mm",
    "is_irreducible", "is_permutation_f", "is_prime", "lambda_of",
    "legendre", "make_field", "message_distribution", "optimality_report",
    "pi_closed", "pi_exact", "ps_bound", "ps_exact", "ps_exact_details",
    "quadratic_gauss_sum", "verify", "weil_sum_bruteforce",
    "weil_sum_closed",
    "DEFAULT_ENUM_CAP", "DEFAULT_SCAN_CAP", "DEFAULT_PS_CAP",
    "DEFAULT_PAIR_CAP",
]
