"""Exact lcm computations for integer sequence families, plus a catalog of
effective bounds and identities verified by exact or certified-interval
arithmetic."""

from .exact_arith import (
    BoundVerdict,
    FactoredInteger,
    LogExpr,
    QuadraticInteger,
    QuadRational,
    Verdict,
    exact_lcm,
    gcd_factored,
    is_multiple_of_rational,
    lcm_factored,
    log_compare,
    quad_product,
)
from .prime_toolkit import (
    PrimeTable,
    chebyshev,
    chebyshev_progression,
    factorial_valuation,
    kummer_borrows,
    max_binomial_valuation,
)
from .sequences import (
    Arithmetic,
    Explicit,
    FIBONACCI,
    Lucas,
    Naturals,
    Polynomial,
    QPower,
    Quadratic,
    QuadraticGeneral,
    SequenceSpec,
    champions,
    extract_u,
    generate,
    is_strong_divisibility,
    lcm_via_u,
    myerson_divisor,
    parse_spec,
    sylvester,
)
from .identities import (
    a_binomial,
    a_binomial_row,
    corollary_310_check,
    corollary_39_check,
    farhi_identity_check,
    general_identity_check,
    hanson_C,
    nair_divisor_check,
)
from .quadratic_lcm import (
    BezoutCoefficients,
    QuadraticLcmInstance,
    L_quadratic,
    L_quadratic_int,
    bezout_coefficients,
    h_c,
    hc_multiple_check,
    quadratic_divisor,
    quadratic_lower_bounds,
)
from .bounds_catalog import M_of, REGISTRY, check, list_checks, probe, scan
from .report import BoundReport, ProbeSeries

__version__ = "0.1.0"
