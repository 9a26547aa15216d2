"""Dominated splittings for matrix cocycles over subshifts of finite type.

The package extracts periodic eigenvalue data of a finite-range GL(d,R)
cocycle, classifies it as constant or delta-narrow, tests the
singular-value-gap criterion for domination, constructs the splitting from
singular subspaces, and checks the shadowing estimates and parameter
inequalities that connect the two.
"""

__version__ = "0.1.0"

from .bounds import (
    FeasibilityParams,
    FeasibilityResult,
    conjugacy_delta,
    conjugacy_threshold,
    delta_max,
    gamma_feasible_constant,
    gamma_feasible_narrow,
    sl2_feasible,
)
from .cocycle import (
    FiniteRangeCocycle,
    ScaledMatrix,
    SingularSpectrum,
    build_cocycle,
    compound_matrix,
    evaluate,
    exterior_power,
    holder_constant,
    locally_constant,
    log_singular_values,
    product,
    scaled_product,
    singular_values,
    spectral_norm,
)
from .domination import (
    DominationCertificate,
    DominationCheck,
    SplittingFrame,
    construct_splitting,
    domination_test,
    gap_series,
    log_gap_series,
    max_principal_angle,
    min_principal_angle,
    verify_domination_inequality,
)
from .fileio import check_cocycle_domain, load_cocycle, load_shift
from .sampling import SamplePlan, collect_samples
from .sft import (
    CyclicWord,
    DistanceBound,
    ShiftSpace,
    Word,
    build_shift,
    close_word,
    enumerate_periodic,
    enumerate_words,
    is_admissible,
    periodic_count,
    random_word,
    shift_distance,
)
from .shadowlab import (
    BinomBound,
    ShadowPair,
    binom_bound_check,
    error_terms,
    kalinin_gap,
    shadow_pair,
    singular_comparison,
)
from .spectrum import (
    Classification,
    PeriodicExponents,
    SpectrumReport,
    classify,
    periodic_exponents,
    spectrum_report,
)
