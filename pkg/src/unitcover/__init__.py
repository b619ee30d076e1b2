"""Exact computational laboratory for linear equations with unknowns from
a finitely generated multiplicative group: solution enumeration, vanishing
subsum classification, degenerate-direction analysis with its covering
family of hyperplanes, exact minimal subspace covers, and permutation
instances that force covers of size n.
"""

__version__ = "0.1.0"

from .covers import Cover, FlatCandidate, Hyperplane, candidate_flats, greedy_cover, min_cover, verify_cover
from .degeneracy import (
    BVector,
    ClassLabel,
    DirectionMatrix,
    EpsilonMatrix,
    check_nonproportional,
    classify_tuple,
    cover_family,
    deformed_matrix,
    find_direction,
    is_degenerate_direction,
    lambda_kernel,
    specialize_at_minus_one,
    verify_sign_identities,
)
from .equations import (
    Equation,
    Solution,
    SolutionSet,
    classify_solution,
    degenerate_subsum_hyperplanes,
    enumerate_solutions,
    point_matrix,
    solution_matrix,
    solution_set_from_tuples,
)
from .exact import (
    LaurentPoly,
    RatMatrix,
    Rational,
    UniPoly,
    det,
    kernel_basis,
    laurent_is_zero,
    parse_rational,
    poly_gcd,
    poly_kernel_vector,
    rank_of,
)
from .groups import (
    FinRankGroup,
    GroupElement,
    PrimeBasis,
    canonical_rep,
    factorize,
    gamma_equivalent,
    product_group,
)
from .lowerbound import (
    DetPattern,
    LowerBoundInstance,
    PatternSet,
    SumSample,
    WitnessReport,
    check_genericity,
    expand_pattern,
    explicit_n_cover,
    generate_instance,
    max_points_per_subspace,
    nonzero_patterns,
    sample_inequivalent_sums,
    verify_pattern_witnesses,
)
