"""Preference graph data models using Pydantic."""

import json
import math
from functools import cached_property
from pathlib import Path
from typing import Optional, Union

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, model_validator


class PrefNode(BaseModel):
    """A preference (candidate or norm) as a graph vertex."""

    model_config = ConfigDict(frozen=True)

    id: str
    payload: Optional[str] = Field(default=None, description="Preference descriptor, defaults to id")


class PrefEdge(BaseModel):
    """Directed transition with its own discrimination cost vector."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    source: str = Field(alias="from")
    target: str = Field(alias="to")
    cost: tuple[float, ...]
    irreversible: bool = False

    @model_validator(mode="after")
    def _unit_cost(self) -> "PrefEdge":
        for v in self.cost:
            if not math.isfinite(v) or not 0.0 <= v <= 1.0:
                raise ValueError(
                    f"Edge {self.source}->{self.target} cost component {v} outside [0, 1]"
                )
        return self


class PreferenceGraph(BaseModel):
    """Directed graph over preferences; (u, v) and (v, u) are independent."""

    model_config = ConfigDict(frozen=True)

    dimension: int = Field(ge=1)
    nodes: tuple[PrefNode, ...] = ()
    edges: tuple[PrefEdge, ...] = ()

    @model_validator(mode="after")
    def _check(self) -> "PreferenceGraph":
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise ValueError("Node ids must be unique")
        known = set(ids)
        pairs = set()
        for e in self.edges:
            if e.source not in known or e.target not in known:
                raise ValueError(f"Edge {e.source}->{e.target} has an unknown endpoint")
            if e.source == e.target:
                raise ValueError(f"Self-loop on '{e.source}'")
            if (e.source, e.target) in pairs:
                raise ValueError(f"Duplicate edge {e.source}->{e.target}")
            if len(e.cost) != self.dimension:
                raise ValueError(
                    f"Edge {e.source}->{e.target} cost has {len(e.cost)} components, "
                    f"expected {self.dimension}"
                )
            pairs.add((e.source, e.target))
        return self

    @cached_property
    def digraph(self) -> nx.DiGraph:
        """networkx view; edge data carries the PrefEdge under ``edge``."""
        g = nx.DiGraph()
        for n in self.nodes:
            g.add_node(n.id, payload=n.payload or n.id)
        for e in self.edges:
            g.add_edge(e.source, e.target, edge=e)
        return g

    def to_networkx(self) -> nx.DiGraph:
        return self.digraph.copy()

    def node_ids(self) -> list[str]:
        return [n.id for n in self.nodes]

    def has_node(self, node: str) -> bool:
        return node in self.digraph

    def edge(self, u: str, v: str) -> Optional[PrefEdge]:
        data = self.digraph.get_edge_data(u, v)
        return None if data is None else data["edge"]

    @classmethod
    def from_json(cls, path: Union[Path, str]) -> "PreferenceGraph":
        with open(path, "r") as f:
            return cls.from_dict(json.load(f))

    @classmethod
    def from_dict(cls, data: dict) -> "PreferenceGraph":
        return cls(
            dimension=int(data["dimension"]),
            nodes=tuple(PrefNode(**n) for n in data.get("nodes", [])),
            edges=tuple(PrefEdge(**e) for e in data.get("edges", [])),
        )

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "nodes": [{"id": n.id} for n in self.nodes],
            "edges": [
                {"from": e.source, "to": e.target, "cost": list(e.cost), "irreversible": e.irreversible}
                for e in self.edges
            ],
        }


class PathHistory(BaseModel):
    """Nodes actually transited, in order."""

    model_config = ConfigDict(frozen=True)

    steps: tuple[str, ...] = ()

    @property
    def current(self) -> Optional[str]:
        return self.steps[-1] if self.steps else None

    def extend(self, path: list[str]) -> "PathHistory":
        """Append a path, merging its first node with the current one."""
        if self.steps and path and path[0] == self.steps[-1]:
            path = path[1:]
        return PathHistory(steps=self.steps + tuple(path))


class PathResult(BaseModel):
    """Outcome of a shortest-path query; ``path`` is None when unreachable."""

    model_config = ConfigDict(frozen=True)

    path: Optional[tuple[str, ...]] = None
    cost: Optional[float] = None

    @property
    def found(self) -> bool:
        return self.path is not None
