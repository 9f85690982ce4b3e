"""Coordinate descent data models using Pydantic."""

from typing import Callable, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import InvalidParameterError


class ObjectiveHandle(BaseModel):
    """A real-valued objective over R^n with optional box bounds."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    dimension: int = Field(ge=1)
    eval: Callable[[Sequence[float]], float]
    bounds: Optional[tuple[tuple[float, float], ...]] = None

    @model_validator(mode="after")
    def _check_bounds(self) -> "ObjectiveHandle":
        if self.bounds is not None:
            if len(self.bounds) != self.dimension:
                raise ValueError(f"{len(self.bounds)} bounds for dimension {self.dimension}")
            for lo, hi in self.bounds:
                if lo > hi:
                    raise ValueError(f"Empty bound [{lo}, {hi}]")
        return self


class DescentConfig(BaseModel):
    """Step adaptation and stopping parameters."""

    model_config = ConfigDict(frozen=True)

    initial_step: Union[float, tuple[float, ...]] = Field(
        default=1.0, description="Initial probe step, scalar or per coordinate"
    )
    grow: float = Field(default=2.0, gt=1.0)
    shrink: float = Field(default=0.5, gt=0.0, lt=1.0)
    tol: float = Field(default=1e-8, gt=0.0)
    max_evals: int = Field(default=100_000, ge=1)
    seed: int = 0
    restarts: int = Field(default=0, ge=0, description="Extra random starts drawn inside bounds")

    @model_validator(mode="after")
    def _positive_steps(self) -> "DescentConfig":
        steps = self.initial_step if isinstance(self.initial_step, tuple) else (self.initial_step,)
        if any(s <= 0 for s in steps):
            raise ValueError("Initial steps must be positive")
        return self

    def steps_for(self, dimension: int) -> list[float]:
        if isinstance(self.initial_step, tuple):
            if len(self.initial_step) != dimension:
                raise InvalidParameterError(
                    f"{len(self.initial_step)} initial steps for dimension {dimension}"
                )
            return list(self.initial_step)
        return [float(self.initial_step)] * dimension


class DescentTrace(BaseModel):
    """Accepted iterates of a descent run."""

    iterates: list[tuple[tuple[float, ...], float]] = Field(default_factory=list)
    evals_used: int = 0
    converged: bool = False

    @property
    def accepted_moves(self) -> int:
        return max(len(self.iterates) - 1, 0)

    @property
    def values(self) -> list[float]:
        return [value for _, value in self.iterates]
