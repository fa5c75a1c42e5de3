"""Exact-arithmetic toolkit for superelliptic Jacobians.

Curves y^m = F(x) with F separable: ramification-divisor torsion
presentations, character-sum zeta functions for y^q = x^p - x + a,
brute-force Picard group structure over small fields, and rank
certificates for families with many rational Weierstrass-type points.
"""

__version__ = "0.1.0"

from .curves import (CurveSpec, Divisor, FunctionRep, base_change,
                     make_curve, principal_divisor, splitting_extension)
from .delta import (decide_principal_delta, delta_presentation,
                    delta_structure, replay_proof)
from .picard import conjecture_check, is_principal, picard_group
from .rank import certify_rank, check_freeness_hypotheses, find_witness_prime
from .zeta import (counts_by_charsum, lpoly_from_counts, power_law_check,
                   torsion_criterion, zeta_numerator_charsum)

__all__ = [
    "CurveSpec", "Divisor", "FunctionRep", "base_change", "make_curve",
    "principal_divisor", "splitting_extension",
    "decide_principal_delta", "delta_presentation", "delta_structure",
    "replay_proof",
    "conjecture_check", "is_principal", "picard_group",
    "certify_rank", "check_freeness_hypotheses", "find_witness_prime",
    "counts_by_charsum", "lpoly_from_counts", "power_law_check",
    "torsion_criterion", "zeta_numerator_charsum",
    "__version__",
]
