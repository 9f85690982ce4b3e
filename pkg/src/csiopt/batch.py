"""Concurrent oracle-versus-fast agreement checks."""

import asyncio
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

from .config import get_max_concurrent
from .errors import CsiError, InvalidParameterError
from .graph import shortest_path
from .models.election import ApprovalElection, PavWeights
from .models.graph import PreferenceGraph
from .models.universe import Scalarization
from .oracle import oracle_path, oracle_pav, oracle_tav
from .pipelines import minimax_tav
from .rules import pav_exact

logger = logging.getLogger(__name__)

CHECKS = ("pav", "tav", "path")


@dataclass
class BatchItem:
    """One agreement check from a manifest."""
    name: str
    check: str
    params: dict[str, Any]


@dataclass
class BatchOutcome:
    """Fast and oracle answers for one item."""
    name: str
    check: str
    agreed: Optional[bool]
    fast: Any = None
    oracle: Any = None
    error: Optional[str] = None


@dataclass
class BatchStats:
    """Statistics from a batch run."""
    total: int = 0
    agreed: int = 0
    disagreed: int = 0
    failed: int = 0
    outcomes: list[BatchOutcome] = field(default_factory=list)

    def to_output(self) -> dict:
        return {
            "total": self.total,
            "agreed": self.agreed,
            "disagreed": self.disagreed,
            "failed": self.failed,
            "items": [
                {
                    "name": o.name,
                    "check": o.check,
                    "agreed": o.agreed,
                    "fast": o.fast,
                    "oracle": o.oracle,
                    "error": o.error,
                }
                for o in self.outcomes
            ],
        }


def _resolve(value: Union[str, dict], base: Path, loader, from_dict):
    if isinstance(value, dict):
        return from_dict(value)
    return loader(base / value)


def load_manifest(path: Union[Path, str]) -> list[BatchItem]:
    """Read a JSON manifest: a list of ``{"check": ..., ...}`` objects.

    ``election`` and ``graph`` entries may be inline objects or file paths
    relative to the manifest.
    """
    path = Path(path)
    with open(path, "r") as f:
        raw = json.load(f)
    if not isinstance(raw, list):
        raise InvalidParameterError("Batch manifest must contain an array of objects")

    base = path.parent
    items = []
    for i, entry in enumerate(raw):
        check = entry.get("check")
        if check not in CHECKS:
            raise InvalidParameterError(f"Manifest item {i}: unknown check {check!r}")
        params = dict(entry)
        if "election" in params:
            params["election"] = _resolve(
                params["election"], base, ApprovalElection.from_json, ApprovalElection.from_dict
            )
        if "graph" in params:
            params["graph"] = _resolve(
                params["graph"], base, PreferenceGraph.from_json, PreferenceGraph.from_dict
            )
        items.append(BatchItem(name=entry.get("name", f"item_{i:04d}"), check=check, params=params))
    return items


def check_item(item: BatchItem) -> BatchOutcome:
    """Run the fast implementation and its oracle on one item."""
    p = item.params
    if item.check == "pav":
        w = PavWeights.parse(p["alpha"]) if "alpha" in p else None
        fast = pav_exact(p["election"], int(p["k"]), w)
        slow = oracle_pav(p["election"], int(p["k"]), w)
        a = {"committee": list(fast.committee.members), "objective": str(fast.objective)}
        b = {"committee": list(slow.committee.members), "objective": str(slow.objective)}
    elif item.check == "tav":
        fast_report = minimax_tav(p["election"], int(p["l"]), int(p["k"]))
        slow_report = oracle_tav(p["election"], int(p["l"]), int(p["k"]))
        a = {"stage1": list(fast_report.stage1.members), "final": list(fast_report.final.members)}
        b = {"stage1": list(slow_report.stage1.members), "final": list(slow_report.final.members)}
    else:
        s = Scalarization(**p.get("scalarization", {}))
        sources = p["sources"]
        fast_path = shortest_path(p["graph"], sources, p["target"], s)
        slow_path = oracle_path(p["graph"], sources, p["target"], s)
        a = {"path": list(fast_path.path) if fast_path.found else None, "cost": fast_path.cost}
        b = {"path": list(slow_path.path) if slow_path.found else None, "cost": slow_path.cost}
    return BatchOutcome(name=item.name, check=item.check, agreed=a == b, fast=a, oracle=b)


async def check_batch(
    items: list[BatchItem],
    max_concurrent: Optional[int] = None,
) -> BatchStats:
    """Run agreement checks concurrently.

    Each check is CPU-bound and runs in a worker thread; a semaphore caps how
    many run at once. Failures are counted, never raised.
    """
    semaphore = asyncio.Semaphore(max_concurrent or get_max_concurrent())
    stats = BatchStats(total=len(items))

    async def process_item(item: BatchItem) -> BatchOutcome:
        async with semaphore:
            try:
                outcome = await asyncio.to_thread(check_item, item)
            except CsiError as e:
                logger.error(f"Failed: {item.name} - {e}")
                return BatchOutcome(name=item.name, check=item.check, agreed=None, error=str(e))
            except Exception as e:
                logger.error(f"Malformed item: {item.name} - {type(e).__name__}: {e}")
                return BatchOutcome(
                    name=item.name, check=item.check, agreed=None, error=f"{type(e).__name__}: {e}"
                )
        if outcome.agreed:
            logger.debug(f"Agreed: {item.name}")
        else:
            logger.warning(f"Disagreed: {item.name} fast={outcome.fast} oracle={outcome.oracle}")
        return outcome

    outcomes = await asyncio.gather(*(process_item(item) for item in items))

    # gather keeps input order
    for outcome in outcomes:
        stats.outcomes.append(outcome)
        if outcome.agreed is None:
            stats.failed += 1
        elif outcome.agreed:
            stats.agreed += 1
        else:
            stats.disagreed += 1

    logger.info(
        f"Batch complete: {stats.agreed}/{stats.total} agreed, "
        f"{stats.disagreed} disagreed, {stats.failed} failed"
    )
    return stats


def run_batch(items: list[BatchItem], max_concurrent: Optional[int] = None) -> BatchStats:
    """Synchronous wrapper for check_batch."""
    return asyncio.run(check_batch(items, max_concurrent=max_concurrent))
