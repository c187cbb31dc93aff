"""Brute-force representation censuses over prime fields."""

from .census import (
    CensusReport,
    census_abs_indec,
    conjugacy_orbits,
    flavored_volume,
    group_order,
    lambda_count,
    mu_fiber_count,
    nakajima_count,
    rank_orbits,
)
from .predicates import (
    CapacityError,
    FFRep,
    end_algebra,
    is_absolutely_indecomposable,
    is_nilpotent_rep,
    is_one_nilpotent,
    is_semi_nilpotent,
    is_strongly_semi_nilpotent,
    local_residue_is_prime_field,
    radical_and_units,
)
