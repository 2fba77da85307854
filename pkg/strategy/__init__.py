"""Per-frame schedulers"""

from .selection import CandidateSet, weighted_argmax
from .max_weight import VirtualQueueState, maxweight_select, update_virtual_queues
from .proportional_fair import FairnessState, pf_select, update_fairness
from .candidates import GreedyCandidateGenerator, weighted_polling_order
from .policy_runner import (
    InfeasibleTargetError,
    PolicyRunResult,
    PolicySpec,
    PolicyType,
    run_policy,
)

__all__ = [
    # Selection
    'CandidateSet',
    'weighted_argmax',
    # Max-weight
    'VirtualQueueState',
    'maxweight_select',
    'update_virtual_queues',
    # Proportional fair
    'FairnessState',
    'pf_select',
    'update_fairness',
    # Candidates
    'GreedyCandidateGenerator',
    'weighted_polling_order',
    # Runner
    'InfeasibleTargetError',
    'PolicyRunResult',
    'PolicySpec',
    'PolicyType',
    'run_policy',
]
