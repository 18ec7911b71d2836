"""Exact computations with graded Artinian algebras over prime fields.

Inverse systems of forms, minimal graded free resolutions over the
polynomial ring and of the residue field over the algebra, truncated
Poincare series and Backelin rates, Groebner bases and a regression corpus.
"""

from .groebner import TermOrder, buchberger, ci_lgt_certificate, initial_ideal, rate_sandwich
from .inverse_system import (
    ArtinAlgebra,
    ConfigurationError,
    GradedIdeal,
    QuotientAlgebra,
    annihilator_ideal,
    compressed_hf,
    generic_algebra,
    inverse_system_algebra,
    is_compressed,
    random_form,
)
from .linalg import DEFAULT_PRIME, PrimeField
from .monomial import MonomialIdeal, lemma1_even, lemma1_odd, socle_report
from .poincare import (
    SeriesTruncation,
    betti_recursion,
    golod_inequality_check,
    n3_parity_verdict,
    poincare_formula_PS,
    rate_truncated,
    theorem_main_verdict,
)
from .resolution import (
    BettiTable,
    TruncationUnsoundError,
    betti_K_over_A,
    betti_over_R,
    cone_comparison,
    socle_quotient_betti,
    t_vector,
)
from .rings import Form, parse_form

__version__ = "0.1.0"
