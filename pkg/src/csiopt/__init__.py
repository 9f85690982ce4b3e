"""csi-opt - Approval committee rules and discrimination-minimizing social choice."""

from .descent import coordinate_descent
from .discrimination import evaluate_sd, scalarize, social_power_order
from .election import approval_score, disapproval_score, validate_election
from .graph import compact_history, derogation_check, shortest_path
from .pipelines import minimax_tav, oav_csi, pa_step, pm_run, pnm_tav
from .rules import av_top_k, pav_exact, pav_greedy, pav_score
from .scenario import run_traffic_scenario
from .models.election import ApprovalElection, Committee, PavWeights
from .models.graph import PreferenceGraph
from .models.pipeline import PolicyState, StageParams
from .models.universe import SocialUniverse

__version__ = "0.1.0"

__all__ = [
    "approval_score",
    "disapproval_score",
    "validate_election",
    "av_top_k",
    "pav_score",
    "pav_exact",
    "pav_greedy",
    "evaluate_sd",
    "scalarize",
    "social_power_order",
    "coordinate_descent",
    "shortest_path",
    "compact_history",
    "derogation_check",
    "minimax_tav",
    "oav_csi",
    "pnm_tav",
    "pa_step",
    "pm_run",
    "run_traffic_scenario",
    "ApprovalElection",
    "Committee",
    "PavWeights",
    "PreferenceGraph",
    "PolicyState",
    "StageParams",
    "SocialUniverse",
]
