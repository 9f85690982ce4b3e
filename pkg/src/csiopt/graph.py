"""Shortest paths, history compaction and derogation checks on preference graphs."""

import heapq
import logging
from typing import Iterable, Optional

import networkx as nx

from .discrimination import pessimistic_cost, scalarize
from .errors import DomainError, InvalidParameterError
from .models.graph import PathHistory, PathResult, PreferenceGraph
from .models.universe import KnowledgeMap, Scalarization

logger = logging.getLogger(__name__)


def _require_node(g: PreferenceGraph, node: str) -> None:
    if not g.has_node(node):
        raise DomainError(f"Unknown preference node '{node}'")


def edge_cost(
    g: PreferenceGraph,
    u: str,
    v: str,
    s: Scalarization,
    km: Optional[KnowledgeMap] = None,
) -> float:
    """Scalar cost of transiting u -> v.

    With a knowledge map the uncertainty-penalised cost is used, looked up
    under ``"u->v"`` first and the target node second.
    """
    edge = g.edge(u, v)
    if edge is None:
        raise DomainError(f"No edge {u}->{v}")
    if km is None:
        return scalarize(edge.cost, s)
    key = f"{u}->{v}"
    return pessimistic_cost(km, key if key in km.entries else v, s)


def shortest_path(
    g: PreferenceGraph,
    sources: Iterable[str],
    target: str,
    s: Scalarization,
    km: Optional[KnowledgeMap] = None,
    avoid: Iterable[str] = (),
) -> PathResult:
    """Cheapest directed path from any source to the target.

    Labels compare by (cost, edge count, node sequence), so ties go to the
    shorter path and then to the lexicographically smaller one. Nodes in
    ``avoid`` are never entered.
    """
    starts = sorted(set(sources))
    if not starts:
        raise InvalidParameterError("Shortest path needs at least one source")
    for node in starts + [target]:
        _require_node(g, node)

    digraph = g.digraph
    queue: list[tuple[float, int, tuple[str, ...]]] = [(0.0, 0, (src,)) for src in starts]
    heapq.heapify(queue)
    settled: set[str] = set(avoid) - set(starts)

    while queue:
        cost, hops, path = heapq.heappop(queue)
        node = path[-1]
        if node in settled:
            continue
        settled.add(node)
        if node == target:
            logger.debug(f"Shortest path to {target}: {'->'.join(path)} cost {cost}")
            return PathResult(path=path, cost=cost)
        for succ in sorted(digraph.successors(node)):
            if succ not in settled:
                heapq.heappush(
                    queue, (cost + edge_cost(g, node, succ, s, km), hops + 1, path + (succ,))
                )

    logger.debug(f"No path from {starts} to {target}")
    return PathResult()


def reachable(g: PreferenceGraph, u: str, v: str, avoid: Iterable[str] = ()) -> bool:
    _require_node(g, u)
    _require_node(g, v)
    blocked = set(avoid) - {u}
    if v in blocked:
        return False
    return nx.has_path(nx.restricted_view(g.digraph, blocked, []), u, v)


def path_cost(
    g: PreferenceGraph,
    path: Iterable[str],
    s: Scalarization,
    km: Optional[KnowledgeMap] = None,
) -> float:
    """Cost of an explicit path, summed in transit order."""
    nodes = list(path)
    total = 0.0
    for u, v in zip(nodes, nodes[1:]):
        total = total + edge_cost(g, u, v, s, km)
    return total


def compact_history(h: PathHistory) -> PathHistory:
    """Cut every cycle at the first revisit, scanning left to right."""
    kept: list[str] = []
    position: dict[str, int] = {}
    for node in h.steps:
        if node in position:
            cut = position[node] + 1
            for dropped in kept[cut:]:
                del position[dropped]
            del kept[cut:]
        else:
            position[node] = len(kept)
            kept.append(node)
    return PathHistory(steps=tuple(kept))


def validate_history(g: PreferenceGraph, h: PathHistory) -> None:
    """Raise DomainError unless consecutive steps are joined by edges."""
    for node in h.steps:
        _require_node(g, node)
    for u, v in zip(h.steps, h.steps[1:]):
        if g.edge(u, v) is None:
            raise DomainError(f"History step {u}->{v} is not an edge")


def derogation_check(g: PreferenceGraph, h: PathHistory, back_to: str) -> bool:
    """Whether the history can be walked back from its current node to ``back_to``.

    Undoing a step u -> v needs the forward edge to be reversible and a
    reversible reverse edge v -> u to exist.
    """
    if back_to not in h.steps:
        raise InvalidParameterError(f"'{back_to}' does not appear in the history")
    start = len(h.steps) - 1 - h.steps[::-1].index(back_to)
    for u, v in zip(h.steps[start:], h.steps[start + 1:]):
        forward = g.edge(u, v)
        reverse = g.edge(v, u)
        if forward is not None and forward.irreversible:
            return False
        if reverse is None or reverse.irreversible:
            return False
    return True
