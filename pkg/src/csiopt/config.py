"""Configuration management for csi-opt."""

import os
from pathlib import Path
from dotenv import load_dotenv

# Project root directory
PROJECT_ROOT = Path(__file__).parent.parent.parent

# Load environment variables
load_dotenv(PROJECT_ROOT / ".env")


def get_pav_cap() -> int:
    """Get the candidate cap above which exact PAV refuses to search."""
    return int(os.getenv("CSI_PAV_CAP", "20"))


def get_oracle_max_candidates() -> int:
    """Get the hard candidate cap for brute-force oracles."""
    return int(os.getenv("CSI_ORACLE_MAX_CANDIDATES", "12"))


def get_oracle_max_nodes() -> int:
    """Get the hard node cap for the simple-path oracle."""
    return int(os.getenv("CSI_ORACLE_MAX_NODES", "8"))


def get_default_seed() -> int:
    """Get the seed used when the CLI is not given one."""
    return int(os.getenv("CSI_SEED", "0"))


def get_max_concurrent() -> int:
    """Get the maximum number of concurrent batch checks."""
    return int(os.getenv("CSI_MAX_CONCURRENT", "4"))


def get_default_profile() -> str:
    """Get the run profile used when none is named."""
    return os.getenv("CSI_PROFILE", "default")


# Directory paths
PROFILES_DIR = PROJECT_ROOT / "profiles"
SCENARIOS_DIR = PROJECT_ROOT / "scenarios"


def ensure_profiles_dir() -> Path:
    """Ensure profiles directory exists and return path."""
    PROFILES_DIR.mkdir(parents=True, exist_ok=True)
    return PROFILES_DIR
