"""Pipeline parameter, state and report models using Pydantic."""

from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .election import Committee
from .graph import PathHistory


class StageParams(BaseModel):
    """Committee sizes of the two-stage pipelines, l > j > k >= 1."""

    model_config = ConfigDict(frozen=True)

    l: int = Field(default=3, description="Stage-one committee size")
    j: int = Field(default=2, description="Number of least discriminatory stage-one members kept")
    k: int = Field(default=1, description="Final committee size")

    @model_validator(mode="after")
    def _ordered(self) -> "StageParams":
        if not self.l > self.j > self.k >= 1:
            raise ValueError(f"Stage sizes must satisfy l > j > k >= 1, got l={self.l} j={self.j} k={self.k}")
        return self


class SpSelector(BaseModel):
    """Which preferences are put to the stage-one vote."""

    model_config = ConfigDict(frozen=True)

    mode: Literal["all", "explicit", "random"] = "all"
    nodes: tuple[str, ...] = Field(default=(), description="Preference ids for explicit mode")
    size: Optional[int] = Field(default=None, ge=1, description="Subset size for random mode")


class RetainedCandidate(BaseModel):
    """A candidate kept by the discrimination filter, with its scalar SD."""

    model_config = ConfigDict(frozen=True)

    candidate: str
    sd: float


class PolicyState(BaseModel):
    """Adopted preferences and the path walked to adopt them."""

    model_config = ConfigDict(frozen=True)

    adopted: tuple[str, ...] = ()
    history: PathHistory = Field(default_factory=PathHistory)
    step_count: int = 0

    @model_validator(mode="after")
    def _unique(self) -> "PolicyState":
        if len(set(self.adopted)) != len(self.adopted):
            raise ValueError("Adopted preferences must be unique")
        return self


class PipelineReport(BaseModel):
    """What one pipeline run chose at each stage, with a full audit."""

    model_config = ConfigDict(frozen=True)

    pipeline: str
    stage1: Committee
    argmin_set: tuple[RetainedCandidate, ...] = ()
    path: Optional[tuple[str, ...]] = None
    path_cost: Optional[float] = None
    final: Committee
    audit: dict[str, Any] = Field(default_factory=dict)

    def to_output(self) -> dict:
        return {
            "pipeline": self.pipeline,
            "stage1": list(self.stage1.members),
            "argmin_set": [{"candidate": r.candidate, "sd": r.sd} for r in self.argmin_set],
            "path": list(self.path) if self.path is not None else None,
            "path_cost": self.path_cost,
            "final": list(self.final.members),
            "audit": self.audit,
        }
