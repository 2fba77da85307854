"""Rate analysis: expected rates, idle slots, rate regions and multicast gain"""
from .expected_rate import (
    ClosedFormConvention,
    brute_force_rate,
    build_stage_chain,
    expected_rate,
    resolve_closed_form_convention,
    two_user_group_rate,
)
from .idle_slots import (
    WorkloadCondition,
    all_workload_conditions,
    expected_idle_slots,
    workload_condition,
)
from .rate_region import (
    CornerPoint,
    HullFeasibility,
    LPSolverError,
    RateRegion,
    RegionContainment,
    SeparatingCertificate,
    build_rate_region,
    export_region_csv,
    hull_feasible,
    pareto_prune,
    region_contains,
)
from .multicast_gain import (
    MulticastGain,
    combine_pair,
    factor_n_gain,
    multicast_gain_holds,
    pairwise_enhancements,
)

__all__ = [
    'ClosedFormConvention',
    'brute_force_rate',
    'build_stage_chain',
    'expected_rate',
    'resolve_closed_form_convention',
    'two_user_group_rate',
    'WorkloadCondition',
    'all_workload_conditions',
    'expected_idle_slots',
    'workload_condition',
    'CornerPoint',
    'HullFeasibility',
    'LPSolverError',
    'RateRegion',
    'RegionContainment',
    'SeparatingCertificate',
    'build_rate_region',
    'export_region_csv',
    'hull_feasible',
    'pareto_prune',
    'region_contains',
    'MulticastGain',
    'combine_pair',
    'factor_n_gain',
    'multicast_gain_holds',
    'pairwise_enhancements',
]
