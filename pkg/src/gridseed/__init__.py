"""gridseed: statistically realistic generation capacities and loads
for synthetic transmission-grid topologies.

The library evaluates size-scaling laws for aggregate MW totals, samples
exponential-with-heavy-tail value sets, places them on buses so that the
joint distribution of (normalized value, normalized degree) follows an
embedded 13x13 probability table, and validates finished cases with a
DC power flow plus statistical conformance reports.
"""

from .assignment import (
    Assignment,
    AssignmentOptions,
    assign_generation,
    assign_loads,
    derive_beta,
    largest_remainder_counts,
    match_values_to_buses,
    reconcile_balance,
    rescale_if_exceeds,
)
from .defaults import (
    BIN_EDGES,
    GENERATION_SCALING_LAW,
    LOAD_BETA,
    LOAD_SCALING_LAW,
    generation_defaults,
    generation_table,
    load_defaults,
    load_table,
)
from .empirical import (
    CaseSnapshot,
    EmpiricalReport,
    Histogram,
    analyze_case,
    empirical_pdf,
    extract_joint_table,
    fit_exponential_with_tail,
    fit_scaling_law,
    measure_axis,
    pearson_correlation,
)
from .errors import GridSeedError, ParseError
from .fileio import (
    StatsData,
    TopologyData,
    parse_topology,
    read_assignment,
    read_stats,
    write_assignment,
    write_stats,
    write_topology,
)
from .models import (
    ProbabilityTable,
    ScalingLaw,
    TailedExponentialModel,
    ValueAxis,
    ValueSample,
    bin_index,
    bin_indices,
    conditional_value_distribution,
    evaluate_scaling_law,
    normalize_values,
    sample_tailed_exponential,
    tail_count,
    validate_table,
)
from .powerflow import (
    ConstraintReport,
    FlowSolution,
    StatReport,
    build_injections,
    check_constraints,
    dc_power_flow,
    default_slack,
    statistical_report,
)
from .topology import (
    Branch,
    Bus,
    BusType,
    Grid,
    admittance_matrix,
    build_grid,
    node_degrees,
    normalized_degrees,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "AssignmentOptions",
    "BIN_EDGES",
    "Branch",
    "Bus",
    "BusType",
    "CaseSnapshot",
    "ConstraintReport",
    "EmpiricalReport",
    "FlowSolution",
    "GENERATION_SCALING_LAW",
    "Grid",
    "GridSeedError",
    "Histogram",
    "LOAD_BETA",
    "LOAD_SCALING_LAW",
    "ParseError",
    "ProbabilityTable",
    "ScalingLaw",
    "StatReport",
    "StatsData",
    "TailedExponentialModel",
    "TopologyData",
    "ValueAxis",
    "ValueSample",
    "admittance_matrix",
    "analyze_case",
    "assign_generation",
    "assign_loads",
    "bin_index",
    "bin_indices",
    "build_grid",
    "build_injections",
    "check_constraints",
    "conditional_value_distribution",
    "dc_power_flow",
    "default_slack",
    "derive_beta",
    "empirical_pdf",
    "evaluate_scaling_law",
    "extract_joint_table",
    "fit_exponential_with_tail",
    "fit_scaling_law",
    "generation_defaults",
    "generation_table",
    "largest_remainder_counts",
    "load_defaults",
    "load_table",
    "match_values_to_buses",
    "measure_axis",
    "node_degrees",
    "normalize_values",
    "normalized_degrees",
    "parse_topology",
    "pearson_correlation",
    "read_assignment",
    "read_stats",
    "reconcile_balance",
    "rescale_if_exceeds",
    "sample_tailed_exponential",
    "statistical_report",
    "tail_count",
    "validate_table",
    "write_assignment",
    "write_stats",
    "write_topology",
]
