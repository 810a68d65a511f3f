"""Nested matroids, flag matroids and the k-bin tennis ball problem."""

from .diagram import (
    STAR,
    DiagramMatrix,
    brute_force_matrix,
    contains_point,
    diagram_matrix,
    min_height,
    paths_in_diagram_are_configurations,
)
from .enumeration import (
    BoundsReport,
    bounds,
    count_by_filter,
    count_configurations,
    exponent_estimate,
    standard_young_tableaux,
    tbp_count,
)
from .errors import *  # noqa: F401,F403
from .flag import (
    FlagBasisFamily,
    FlagMatroid,
    FlagVerdict,
    MoveSchedule,
    is_flag_matroid,
    movement_counts,
    reachable_configurations,
    realize,
    simulate,
    tbp_flag,
)
from .lattice import (
    BinSpec,
    StepSequence,
    complete_to_configuration,
    is_configuration_path,
    partition_from_path,
    path_from_partition,
    prefix_counts,
    switch_steps,
)
from .matroid import (
    ExplicitMatroid,
    NestedMatroid,
    cyclic_flats,
    flats,
    is_quotient,
    nested_from_path,
    rank,
    tbp_matroid,
    truncate,
    verify_matroid_axioms,
)
from .partition import OrderedPartition

__version__ = "0.1.0"
