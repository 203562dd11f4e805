"""Shadow symbolic interpreter and plain symbolic execution."""

from .choices import branch_choices
from .session import SolverSession
from .shadow import ConcolicResult, bse_explore, concolic_run, run_plain, run_shadow
from .state import (
    BranchCondition,
    Choice,
    DivergencePoint,
    EngineConfig,
    ExecState,
    PathConditionPair,
    PathRecord,
    Terminal,
)

__all__ = [
    "BranchCondition",
    "Choice",
    "ConcolicResult",
    "DivergencePoint",
    "EngineConfig",
    "ExecState",
    "PathConditionPair",
    "PathRecord",
    "SolverSession",
    "Terminal",
    "branch_choices",
    "bse_explore",
    "concolic_run",
    "run_plain",
    "run_shadow",
]
