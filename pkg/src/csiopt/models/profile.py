"""Run profile data models using Pydantic."""

from pathlib import Path
from typing import Literal, Optional, Union
import yaml
from pydantic import BaseModel, Field

from .descent import DescentConfig
from .election import PavWeights
from .pipeline import SpSelector, StageParams
from .universe import KnowledgeMap, Scalarization, SocialUniverse


class RunProfile(BaseModel):
    """A reusable bundle of pipeline settings."""

    id: str = Field(description="Unique identifier for the profile")
    name: str = Field(description="Human-readable name")
    description: str = Field(default="", description="Description of the profile")

    scalarization: Scalarization = Field(
        default_factory=Scalarization,
        description="How SD vectors become one cost"
    )
    descent: DescentConfig = Field(
        default_factory=DescentConfig,
        description="Coordinate descent settings"
    )
    stage: StageParams = Field(
        default_factory=StageParams,
        description="Default committee sizes l > j > k"
    )
    tau: float = Field(
        default=0.5, ge=0.0, le=1.0,
        description="Discrimination threshold for one-stage inclusion"
    )
    sp_selector: SpSelector = Field(
        default_factory=SpSelector,
        description="Preferences put to the stage-one vote"
    )
    context_aggregation: Optional[Literal["max", "mean"]] = Field(
        default=None,
        description="Override for context-free SD evaluation"
    )
    use_knowledge_map: bool = Field(
        default=False,
        description="Price graph edges with a knowledge map"
    )
    knowledge_map_source: Literal["universe", "agents"] = Field(
        default="universe",
        description="Use the universe knowledge map, or build one from the agents' PD functions"
    )
    pav_weights: Union[Literal["harmonic"], list[Union[str, float]]] = Field(
        default="harmonic",
        description="'harmonic' or an explicit alpha list"
    )

    def weights(self) -> Optional[PavWeights]:
        """Explicit PAV weights, or None for harmonic."""
        if self.pav_weights == "harmonic":
            return None
        return PavWeights.parse(self.pav_weights)

    def configure_universe(self, u: SocialUniverse) -> SocialUniverse:
        """Apply the profile's context aggregation override, if any."""
        if self.context_aggregation is None or self.context_aggregation == u.sd.context_aggregation:
            return u
        sd = u.sd.model_copy(update={"context_aggregation": self.context_aggregation})
        return u.model_copy(update={"sd": sd})

    def knowledge_map_for(self, u: SocialUniverse) -> Optional[KnowledgeMap]:
        """The knowledge map used to price edges, when the profile asks for one."""
        if not self.use_knowledge_map:
            return None
        if self.knowledge_map_source == "agents":
            from ..discrimination import knowledge_map_from_agents

            return knowledge_map_from_agents(u, self.scalarization)
        return u.knowledge_map

    @classmethod
    def from_yaml(cls, path: Path) -> "RunProfile":
        """Load a profile from a YAML file."""
        with open(path, "r") as f:
            data = yaml.safe_load(f) or {}
        return cls(**data)


def find_yaml(directory: Path, stem: str) -> Optional[Path]:
    """``stem.yaml`` or ``stem.yml`` in ``directory``, preferring ``.yaml``."""
    for suffix in (".yaml", ".yml"):
        path = directory / f"{stem}{suffix}"
        if path.exists():
            return path
    return None


def load_profile(profile_id: str, profiles_dir: Optional[Path] = None) -> RunProfile:
    """Load a run profile by ID from the profiles directory."""
    from ..config import PROFILES_DIR

    search_dir = profiles_dir or PROFILES_DIR
    path = find_yaml(search_dir, profile_id)
    if path is None:
        raise FileNotFoundError(f"Profile '{profile_id}' not found in {search_dir}")
    return RunProfile.from_yaml(path)


def list_profiles(profiles_dir: Optional[Path] = None) -> list[str]:
    """Sorted IDs of every profile file."""
    from ..config import PROFILES_DIR

    search_dir = profiles_dir or PROFILES_DIR
    if not search_dir.exists():
        return []
    return sorted({p.stem for pattern in ("*.yaml", "*.yml") for p in search_dir.glob(pattern)})
