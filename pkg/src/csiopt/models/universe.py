"""Social universe data models using Pydantic.

A universe holds agents with trait vectors, the societies grouping them, and
the Social Discrimination (SD) function mapping preferences to vectors in
[0,1]^n, where n is the number of discrimination axes.
"""

import json
import math
from pathlib import Path
from typing import Callable, Literal, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# Context key holding a context-free SD vector
ANY_CONTEXT = "*"

UTILITY_TRAIT = "utility"
PARTICIPATION_TRAIT = "participation"


def _check_unit_vector(values: Sequence[float], what: str) -> None:
    for v in values:
        if not math.isfinite(v) or not 0.0 <= v <= 1.0:
            raise ValueError(f"{what} component {v} outside [0, 1]")


class TraitVector(BaseModel):
    """Named real-valued traits of one agent, including its utility."""

    model_config = ConfigDict(frozen=True)

    values: dict[str, float]
    utility_trait: str = UTILITY_TRAIT

    @model_validator(mode="after")
    def _check(self) -> "TraitVector":
        if self.utility_trait not in self.values:
            raise ValueError(f"Trait vector lacks utility trait '{self.utility_trait}'")
        for name, v in self.values.items():
            if not math.isfinite(v):
                raise ValueError(f"Trait '{name}' is not finite")
        return self

    @property
    def utility(self) -> float:
        return self.values[self.utility_trait]

    def get(self, name: str) -> float:
        return self.values.get(name, 0.0)


class SdProfile(BaseModel):
    """Per-role weighting over the discrimination axes, agreed in advance."""

    model_config = ConfigDict(frozen=True)

    vector: tuple[float, ...]

    @field_validator("vector")
    @classmethod
    def _unit(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        _check_unit_vector(v, "SDP")
        return v


class DiscriminationFunction(BaseModel):
    """Table-driven SD function with an optional programmatic override.

    ``table[point][context]`` is a vector in [0,1]^n. The ``"*"`` context holds
    a context-free vector; otherwise context-free evaluation aggregates the
    per-context vectors with ``context_aggregation``.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    axes: tuple[str, ...]
    table: dict[str, dict[str, tuple[float, ...]]] = Field(default_factory=dict)
    context_aggregation: Literal["max", "mean"] = "max"
    fn: Optional[Callable[[str, Optional[str]], Sequence[float]]] = Field(
        default=None, exclude=True, description="Programmatic SD, takes precedence over the table"
    )

    @model_validator(mode="after")
    def _check_table(self) -> "DiscriminationFunction":
        if not self.axes:
            raise ValueError("SD needs at least one axis")
        for point, contexts in self.table.items():
            if not contexts:
                raise ValueError(f"SD point '{point}' has no vectors")
            for context, vector in contexts.items():
                if len(vector) != len(self.axes):
                    raise ValueError(
                        f"SD vector for ({point}, {context}) has {len(vector)} components, "
                        f"expected {len(self.axes)}"
                    )
                _check_unit_vector(vector, f"SD({point}, {context})")
        return self

    @property
    def dimension(self) -> int:
        return len(self.axes)

    @property
    def points(self) -> list[str]:
        return list(self.table)


class KnowledgeMap(BaseModel):
    """Per-point (uncertainty U, discrimination D) pairs."""

    model_config = ConfigDict(frozen=True)

    entries: dict[str, tuple[float, float]] = Field(default_factory=dict)

    @field_validator("entries")
    @classmethod
    def _unit(cls, v: dict[str, tuple[float, float]]) -> dict[str, tuple[float, float]]:
        for point, pair in v.items():
            _check_unit_vector(pair, f"KM({point})")
        return v


class Scalarization(BaseModel):
    """Reduction of an SD vector to a single cost."""

    model_config = ConfigDict(frozen=True)

    mode: Literal["weighted-sum", "max"] = "weighted-sum"
    weights: Optional[tuple[float, ...]] = Field(
        default=None, description="Axis weights; uniform when omitted"
    )
    lambda_u: float = Field(default=0.0, ge=0.0, description="Uncertainty penalty coefficient")

    @field_validator("weights")
    @classmethod
    def _simplex(cls, v: Optional[tuple[float, ...]]) -> Optional[tuple[float, ...]]:
        if v is None:
            return v
        if any(w < 0 or not math.isfinite(w) for w in v):
            raise ValueError("Scalarization weights must be nonnegative")
        if not math.isclose(sum(v), 1.0, abs_tol=1e-9):
            raise ValueError(f"Scalarization weights sum to {sum(v)}, expected 1")
        return v


class Agent(BaseModel):
    """An agent: traits, the SDP it follows, and optionally its own PD function."""

    model_config = ConfigDict(frozen=True)

    id: str
    traits: TraitVector
    sdp: str = Field(default="default", description="Name of an SdProfile in the universe bank")
    pd: Optional[DiscriminationFunction] = None


class Society(BaseModel):
    """A named group of agents and the trait weights it values."""

    model_config = ConfigDict(frozen=True)

    id: str
    members: frozenset[str]
    trait_weights: dict[str, float] = Field(default_factory=lambda: {UTILITY_TRAIT: 1.0})

    @model_validator(mode="after")
    def _check(self) -> "Society":
        if not self.members:
            raise ValueError(f"Society '{self.id}' has no members")
        if any(w < 0 for w in self.trait_weights.values()):
            raise ValueError(f"Society '{self.id}' has negative trait weights")
        if not math.isclose(sum(self.trait_weights.values()), 1.0, abs_tol=1e-9):
            raise ValueError(f"Society '{self.id}' trait weights must sum to 1")
        return self


class SocialUniverse(BaseModel):
    """Agents, societies and the discrimination machinery attached to them."""

    model_config = ConfigDict(frozen=True)

    dimension: int = Field(ge=1)
    agents: tuple[Agent, ...] = ()
    societies: tuple[Society, ...] = ()
    sd: DiscriminationFunction
    sdp_bank: dict[str, SdProfile] = Field(default_factory=dict)
    knowledge_map: Optional[KnowledgeMap] = None
    embedding: Optional[dict[str, tuple[float, ...]]] = Field(
        default=None, description="Optional coordinates of SD points for continuous descent"
    )

    @model_validator(mode="after")
    def _check(self) -> "SocialUniverse":
        if self.sd.dimension != self.dimension:
            raise ValueError(
                f"SD has {self.sd.dimension} axes but the universe has dimension {self.dimension}"
            )
        for name, profile in self.sdp_bank.items():
            if len(profile.vector) != self.dimension:
                raise ValueError(f"SDP '{name}' does not have dimension {self.dimension}")
        for agent in self.agents:
            if agent.sdp not in self.sdp_bank and agent.sdp != "default":
                raise ValueError(f"Agent '{agent.id}' references unknown SDP '{agent.sdp}'")
            if agent.pd is not None and agent.pd.dimension != self.dimension:
                raise ValueError(f"Agent '{agent.id}' PD does not have dimension {self.dimension}")
        return self

    def agent(self, agent_id: str) -> Optional[Agent]:
        for a in self.agents:
            if a.id == agent_id:
                return a
        return None

    def society(self, society_id: str) -> Optional[Society]:
        for s in self.societies:
            if s.id == society_id:
                return s
        return None

    def sdp_of(self, agent: Agent) -> SdProfile:
        """The SDP an agent follows; unlisted ``default`` means all ones."""
        if agent.sdp in self.sdp_bank:
            return self.sdp_bank[agent.sdp]
        return SdProfile(vector=(1.0,) * self.dimension)

    @classmethod
    def from_json(cls, path: Union[Path, str]) -> "SocialUniverse":
        """Load a universe from the JSON schema used by the CLI."""
        with open(path, "r") as f:
            data = json.load(f)
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: dict) -> "SocialUniverse":
        dimension = int(data["dimension"])
        sd_data = data.get("sd", {})
        axes = tuple(sd_data.get("axes") or (f"axis{i}" for i in range(dimension)))
        sd = DiscriminationFunction(
            axes=axes,
            table=sd_data.get("points", {}),
            context_aggregation=sd_data.get("context_aggregation", "max"),
        )
        agents = []
        for a in data.get("agents", []):
            pd = None
            if "pd" in a:
                pd = DiscriminationFunction(axes=axes, table=a["pd"])
            agents.append(
                Agent(
                    id=a["id"],
                    traits=TraitVector(values=a.get("traits", {})),
                    sdp=a.get("sdp", "default"),
                    pd=pd,
                )
            )
        km = None
        if "knowledge_map" in data:
            km = KnowledgeMap(entries=data["knowledge_map"])
        return cls(
            dimension=dimension,
            agents=tuple(agents),
            societies=tuple(Society(**s) for s in data.get("societies", [])),
            sd=sd,
            sdp_bank={k: SdProfile(vector=v) for k, v in data.get("sdp_bank", {}).items()},
            knowledge_map=km,
            embedding=data.get("embedding"),
        )


class PowerOrder(BaseModel):
    """Societies in descending Social Utility, with tied groups flagged."""

    model_config = ConfigDict(frozen=True)

    order: tuple[str, ...]
    utilities: dict[str, float]
    tied_groups: tuple[tuple[str, ...], ...] = ()

    def rank(self, society_id: str) -> int:
        return self.order.index(society_id)

    def is_tied(self, a: str, b: str) -> bool:
        return any(a in g and b in g for g in self.tied_groups)
