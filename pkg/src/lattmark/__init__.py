"""lattmark: finite lattices as stable-matching lattices, and the antimatroid
reduction to minimum-cost stable matching, with brute-force verification."""

from .antimatroids import (
    AntimatroidFamily,
    PathPoset,
    ReductionBundle,
    antimatroid_constraints,
    compute_path_poset,
    endpoints,
    family_from_path_poset,
    independent_set_antimatroid,
    min_cost_feasible,
    min_cost_stable,
    reduce_to_matching,
    transfer_costs,
    validate_antimatroid,
)
from .augment import (
    ExtendableMarket,
    RotationJoinConstraint,
    SynthesisResult,
    augment,
    derive_sets,
    extendable_from_base,
    omega_extend,
    project_to_base,
    project_once,
    synthesize_from_lattice,
    verify_extension,
)
from .constraints import (
    ComplementJoinConstraint,
    JoinConstraint,
    complement,
    constraints_from_lattice,
    eval_join_constraint,
    filter_lower_sets,
    satisfies_complement,
    uncomplement,
    validate_join_constraint,
)
from .markets import (
    FirmOrder,
    TriggerRule,
    IfElse,
    Matching,
    MatchingMarket,
    PreferenceList,
    Regular,
    Triggered,
    firm_order_compare,
    blocking_pairs,
    check_path_independence,
    choose,
    deferred_acceptance,
    enumerate_stable,
    is_individually_rational,
    is_stable,
    stable_lattice,
)
from .orders import (
    Lattice,
    Poset,
    canonical_partial_rep,
    check_order_embedding,
    check_order_isomorphism,
    is_distributive,
    join_irreducibles,
    lattice_from_order,
    lattice_from_tables,
    lower_sets,
    maximal_elements,
    poset_from_pairs,
    validate_poset,
)
from .rotations import (
    RealizedBase,
    Rotation,
    RotationPoset,
    antichain_base,
    extract_rotations,
    matching_to_rotations,
    rotations_to_matching,
)

__version__ = "0.1.0"
