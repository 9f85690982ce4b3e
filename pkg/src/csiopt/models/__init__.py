"""Data models for csi-opt."""

from .descent import DescentConfig, DescentTrace, ObjectiveHandle
from .election import ApprovalElection, Ballot, Committee, PavWeights, RuleResult, Violation
from .graph import PathHistory, PathResult, PrefEdge, PrefNode, PreferenceGraph
from .pipeline import PipelineReport, PolicyState, RetainedCandidate, SpSelector, StageParams
from .profile import RunProfile
from .scenario import Report, ScenarioSpec
from .universe import (
    Agent,
    DiscriminationFunction,
    KnowledgeMap,
    PowerOrder,
    Scalarization,
    SdProfile,
    Society,
    SocialUniverse,
    TraitVector,
)

__all__ = [
    "Agent",
    "ApprovalElection",
    "Ballot",
    "Committee",
    "DescentConfig",
    "DescentTrace",
    "DiscriminationFunction",
    "KnowledgeMap",
    "ObjectiveHandle",
    "PathHistory",
    "PathResult",
    "PavWeights",
    "PipelineReport",
    "PolicyState",
    "PowerOrder",
    "PrefEdge",
    "PrefNode",
    "PreferenceGraph",
    "Report",
    "RetainedCandidate",
    "RuleResult",
    "RunProfile",
    "Scalarization",
    "ScenarioSpec",
    "SdProfile",
    "Society",
    "SocialUniverse",
    "SpSelector",
    "StageParams",
    "TraitVector",
    "Violation",
]
