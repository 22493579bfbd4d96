"""Rollup data posting economics under a fixed-price blob market."""

from .bargaining import (
    BargainInput,
    BargainOutcome,
    NoDeal,
    disagreement_point,
    nash_split,
    nash_split_multi,
    structural_ratio_bound,
)
from .cost_model import (
    MarketParams,
    PostingPolicy,
    Rollup,
    Venue,
    blob_policy,
    capped_blob_policy,
    choose_strategy,
    indifference_price,
    l1_policy,
)
from .equilibrium import (
    Equilibrium,
    clearing_price,
    solve_equilibrium,
    solve_equilibrium_capped,
)
from .errors import (
    BlobMarketError,
    EmptyParticipationError,
    InfeasibleTargetError,
    InvalidParameterError,
    NumericalError,
    UnsortedRatesError,
)
from .merging import MergeCase, MergeOutcome, joint_policy, merge_price
from .simulate import SimConfig, SimReport, grid_optimize, run

__version__ = "0.1.0"
