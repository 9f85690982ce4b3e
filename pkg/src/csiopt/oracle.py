"""Brute-force reference answers for testing the fast paths.

Each oracle enumerates its whole search space and returns the same result
shape as the fast implementation, so the two can be compared directly.
"""

import itertools
import logging
from fractions import Fraction
from typing import Iterable, Optional

import networkx as nx

from .config import get_oracle_max_candidates, get_oracle_max_nodes
from .election import approval_score, disapproval_score, ensure_valid
from .errors import CapacityError, InvalidParameterError
from .graph import path_cost
from .models.election import ApprovalElection, Committee, PavWeights, RuleResult
from .models.graph import PathResult, PreferenceGraph
from .models.pipeline import PipelineReport
from .models.universe import KnowledgeMap, Scalarization
from .rules import pav_score

logger = logging.getLogger(__name__)


def _check_candidates(election: ApprovalElection) -> None:
    cap = get_oracle_max_candidates()
    if len(election.candidates) > cap:
        raise CapacityError(f"Oracle refuses {len(election.candidates)} candidates", cap)


def oracle_pav(election: ApprovalElection, k: int, w: Optional[PavWeights] = None) -> RuleResult:
    """PAV by scoring every size-k committee."""
    _check_candidates(election)
    if not 1 <= k <= len(election.candidates):
        raise InvalidParameterError(f"Committee size k={k} out of range")
    w = w or PavWeights.harmonic(k)
    best: Optional[Fraction] = None
    best_committee: Optional[Committee] = None
    ties = 0
    # combinations() yields in lexicographic order of candidate positions
    for members in itertools.combinations(election.candidates, k):
        committee = Committee.of(election, members)
        score = pav_score(election, committee, w)
        if best is None or score > best:
            best, best_committee, ties = score, committee, 1
        elif score == best:
            ties += 1
    return RuleResult(rule="oracle-pav", committee=best_committee, objective=best, ties=ties)


def _best_subset(
    election: ApprovalElection,
    pool: tuple[str, ...],
    size: int,
    score,
    maximize: bool,
) -> tuple[str, ...]:
    best_key = None
    best: tuple[str, ...] = ()
    for members in itertools.combinations(pool, size):
        total = sum(score(election, c) for c in members)
        key = -total if maximize else total
        if best_key is None or key < best_key:
            best_key, best = key, members
    return best


def oracle_tav(election: ApprovalElection, l: int, k: int) -> PipelineReport:
    """Minimax TAV by enumerating every stage-one and stage-two committee."""
    ensure_valid(election)
    _check_candidates(election)
    if not len(election.candidates) >= l > k >= 1:
        raise InvalidParameterError(f"Need |C| >= l > k >= 1, got l={l} k={k}")
    stage1 = _best_subset(election, election.candidates, l, approval_score, maximize=True)
    final = _best_subset(election, stage1, k, disapproval_score, maximize=False)
    return PipelineReport(
        pipeline="oracle-tav",
        stage1=Committee.of(election, stage1),
        final=Committee.of(election, final),
    )


def oracle_path(
    g: PreferenceGraph,
    sources: Iterable[str],
    target: str,
    s: Scalarization,
    km: Optional[KnowledgeMap] = None,
) -> PathResult:
    """Shortest path by enumerating every simple path from every source."""
    cap = get_oracle_max_nodes()
    if len(g.nodes) > cap:
        raise CapacityError(f"Oracle refuses {len(g.nodes)} nodes", cap)
    best_key = None
    best = PathResult()
    for src in sorted(set(sources)):
        if src == target:
            candidates = [[target]]
        else:
            candidates = nx.all_simple_paths(g.digraph, src, target)
        for path in candidates:
            cost = path_cost(g, path, s, km)
            key = (cost, len(path), tuple(path))
            if best_key is None or key < best_key:
                best_key, best = key, PathResult(path=tuple(path), cost=cost)
    logger.debug(f"Path oracle best: {best.path} @ {best.cost}")
    return best
