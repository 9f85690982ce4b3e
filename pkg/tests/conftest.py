"""Shared fixtures and random instance generators."""

import random
from pathlib import Path

import pytest

from csiopt.models.election import ApprovalElection, Ballot
from csiopt.models.graph import PrefEdge, PrefNode, PreferenceGraph
from csiopt.models.universe import SocialUniverse

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def small_election() -> ApprovalElection:
    """v1:{a,b} v2:{a} v3:{b} v4:{c}."""
    return ApprovalElection.from_json(FIXTURES / "election_small.json")


@pytest.fixture
def minimax_election() -> ApprovalElection:
    """Approvals a5 b4 c3 d1, disapprovals a4 b0 c1 d0."""
    return ApprovalElection.from_json(FIXTURES / "election_minimax.json")


@pytest.fixture
def diamond() -> PreferenceGraph:
    """A->B 0.1, B->D 0.1, A->C 0.3, C->D 0.05."""
    return PreferenceGraph.from_json(FIXTURES / "diamond_graph.json")


@pytest.fixture
def diamond_universe() -> SocialUniverse:
    return SocialUniverse.from_json(FIXTURES / "diamond_universe.json")


@pytest.fixture
def diamond_election() -> ApprovalElection:
    return ApprovalElection.from_json(FIXTURES / "diamond_election.json")


def random_election(
    rng: random.Random,
    max_candidates: int = 12,
    max_voters: int = 20,
    disapprovals: bool = False,
) -> ApprovalElection:
    """A valid election with random approvals (and optional disapprovals)."""
    candidates = [f"c{i}" for i in range(rng.randint(2, max_candidates))]
    ballots = []
    for v in range(rng.randint(0, max_voters)):
        approve = {c for c in candidates if rng.random() < 0.4}
        disapprove = set()
        if disapprovals:
            disapprove = {c for c in candidates if c not in approve and rng.random() < 0.3}
        ballots.append(Ballot(voter=f"v{v}", approve=frozenset(approve), disapprove=frozenset(disapprove)))
    return ApprovalElection(candidates=tuple(candidates), ballots=tuple(ballots))


def random_graph(rng: random.Random, max_nodes: int = 8, density: float = 0.35) -> PreferenceGraph:
    """Random 2-axis graph with costs in multiples of 1/8 so sums stay exact."""
    ids = [f"n{i}" for i in range(rng.randint(1, max_nodes))]
    edges = []
    for u in ids:
        for v in ids:
            if u != v and rng.random() < density:
                edges.append(
                    PrefEdge(
                        source=u,
                        target=v,
                        cost=(rng.randint(0, 8) / 8, rng.randint(0, 8) / 8),
                        irreversible=rng.random() < 0.2,
                    )
                )
    return PreferenceGraph(dimension=2, nodes=tuple(PrefNode(id=i) for i in ids), edges=tuple(edges))
