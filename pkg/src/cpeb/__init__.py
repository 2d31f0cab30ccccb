"""Pure exploration of combinatorial bandits under the bottleneck (min-weight) reward."""

from .analysis import GapProfile, compute_gap_profile, validate_unique_optimum
from .classes import (
    BipartiteMatching,
    CapacityError,
    DecisionClass,
    SpanningTree,
    STPath,
    TopK,
    build_class,
)
from .env import EmpiricalState, Environment, radius
from .fb import BsarState, FbResult, bsar, uniform_fb
from .fc import ExploreResult, FcResult, blucb, blucb_explore, blucb_parallel, blucb_verify, uniform_fc
from .gen import RewardFunction, genlucb, make_reward
from .model import DecisionClassSpec, DomainError, Instance, ValidationError, min_arm, min_weight
from .oracles import ArOracleQuery, ar_oracle, bottleneck_search, max_oracle_excluding

__version__ = "0.1.0"
