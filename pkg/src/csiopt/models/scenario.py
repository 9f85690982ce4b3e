"""Traffic-signal scenario data models using Pydantic."""

from pathlib import Path
from typing import Any, Literal, Optional
import yaml
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .pipeline import StageParams
from .profile import find_yaml
from .universe import PowerOrder, Scalarization

CARS = "cars"
PEDESTRIANS = "pedestrians"
TRAFFIC_OPTIONS = ("none", "cross-walks", "traffic-lights", "mixed")


class BallotTemplate(BaseModel):
    """What every member of one society approves and disapproves."""

    model_config = ConfigDict(frozen=True)

    approve: tuple[str, ...] = ()
    disapprove: tuple[str, ...] = ()


def _default_templates() -> dict[str, BallotTemplate]:
    return {
        CARS: BallotTemplate(approve=("none", "cross-walks"), disapprove=("traffic-lights",)),
        PEDESTRIANS: BallotTemplate(approve=("traffic-lights", "mixed"), disapprove=("none",)),
    }


class ScenarioSpec(BaseModel):
    """Car drivers and pedestrians voting on traffic signalling.

    ``sd_table[option][society]`` is the SD vector the option imposes on that
    society; ``utility_table[option][society]`` is each member's utility under
    the option. Both must reproduce the expected orderings, which
    ``scenario.check_scenario`` verifies.
    """

    model_config = ConfigDict(frozen=True)

    id: str = "traffic-signals"
    car_count: int = Field(default=1000, ge=0)
    pedestrian_count: int = Field(default=10, ge=0)
    options: tuple[str, ...] = TRAFFIC_OPTIONS
    axes: tuple[str, ...] = ("mobility", "safety")
    sd_table: dict[str, dict[str, tuple[float, ...]]]
    utility_table: dict[str, dict[str, float]]
    rule: Literal["absolute-majority", "ldm-wsr"] = "ldm-wsr"
    ldm_mode: Literal["oav", "pnm"] = "oav"
    tau: float = Field(default=0.4, ge=0.0, le=1.0)
    params: StageParams = Field(default_factory=StageParams)
    ballot_template: dict[str, BallotTemplate] = Field(default_factory=_default_templates)
    status_quo: str = "none"
    scalarization: Scalarization = Field(default_factory=Scalarization)
    context_aggregation: Literal["max", "mean"] = "max"

    @model_validator(mode="after")
    def _voters(self) -> "ScenarioSpec":
        if self.car_count + self.pedestrian_count == 0:
            raise ValueError("Scenario needs at least one voter")
        return self

    @classmethod
    def from_yaml(cls, path: Path) -> "ScenarioSpec":
        """Load a scenario from a YAML file."""
        with open(path, "r") as f:
            data = yaml.safe_load(f)
        return cls(**data)


def load_scenario(scenario_id: str, scenarios_dir: Optional[Path] = None) -> ScenarioSpec:
    """Load a scenario by ID (or path) from the scenarios directory."""
    from ..config import SCENARIOS_DIR

    direct = Path(scenario_id)
    if direct.suffix in (".yaml", ".yml") and direct.exists():
        return ScenarioSpec.from_yaml(direct)

    search_dir = scenarios_dir or SCENARIOS_DIR
    path = find_yaml(search_dir, scenario_id)
    if path is not None:
        return ScenarioSpec.from_yaml(path)
    raise FileNotFoundError(f"Scenario '{scenario_id}' not found in {search_dir}")


class Report(BaseModel):
    """Scenario outcome, recomputable from the echoed spec."""

    model_config = ConfigDict(frozen=True)

    scenario: str
    rule: str
    winners: tuple[str, ...]
    tallies: list[dict[str, Any]]
    sd_scalars: dict[str, float]
    power_before: PowerOrder
    power_after: PowerOrder
    power_change: dict[str, int]
    audit: dict[str, Any] = Field(default_factory=dict)
    spec: ScenarioSpec

    def to_output(self) -> dict:
        data = self.model_dump(mode="json")
        data["winners"] = list(self.winners)
        return data
