"""Social Discrimination evaluation, scalarization and Social Power ordering."""

import logging
import math
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DomainError, IntegrityError, InvalidParameterError, NumericError
from .models.universe import (
    ANY_CONTEXT,
    PARTICIPATION_TRAIT,
    DiscriminationFunction,
    KnowledgeMap,
    PowerOrder,
    Scalarization,
    SdProfile,
    Society,
    SocialUniverse,
)

logger = logging.getLogger(__name__)


def evaluate_sd(
    sd: DiscriminationFunction,
    point: str,
    context: Optional[str] = None,
) -> tuple[float, ...]:
    """SD vector of a point, optionally as seen from one context (society).

    Without a context the ``"*"`` vector is used when stored, otherwise the
    per-context vectors are aggregated componentwise.
    """
    if sd.fn is not None:
        vector = tuple(float(v) for v in sd.fn(point, context))
        if len(vector) != sd.dimension:
            raise DomainError(f"SD function returned {len(vector)} components for '{point}'")
        if any(not math.isfinite(v) or not 0.0 <= v <= 1.0 for v in vector):
            raise NumericError(f"SD function left [0,1] for '{point}'", vector)
        return vector

    contexts = sd.table.get(point)
    if contexts is None:
        raise DomainError(f"No SD defined for point '{point}'")
    if context is not None:
        if context not in contexts:
            raise DomainError(f"No SD defined for point '{point}' in context '{context}'")
        return tuple(contexts[context])
    if ANY_CONTEXT in contexts:
        return tuple(contexts[ANY_CONTEXT])

    stacked = np.array(list(contexts.values()), dtype=float)
    if sd.context_aggregation == "max":
        return tuple(float(v) for v in stacked.max(axis=0))
    return tuple(float(v) for v in stacked.mean(axis=0))


def scalarize(v: Sequence[float], s: Scalarization) -> float:
    """Reduce an SD vector to one cost in [0,1]."""
    if len(v) == 0:
        raise InvalidParameterError("Cannot scalarize an empty vector")
    if s.mode == "max":
        return float(max(v))
    weights = s.weights if s.weights is not None else (1.0 / len(v),) * len(v)
    if len(weights) != len(v):
        raise InvalidParameterError(
            f"Vector has {len(v)} components but {len(weights)} weights are configured"
        )
    return float(sum(w * x for w, x in zip(weights, v)))


def sd_scalar(
    sd: DiscriminationFunction,
    point: str,
    s: Scalarization,
    context: Optional[str] = None,
) -> float:
    return scalarize(evaluate_sd(sd, point, context), s)


def pessimistic_cost(km: KnowledgeMap, point: str, s: Scalarization) -> float:
    """Uncertainty-penalised cost D + lambda_u * U."""
    if point not in km.entries:
        raise DomainError(f"No knowledge map entry for '{point}'")
    u, d = km.entries[point]
    return d + s.lambda_u * u


def aggregate_sdp(u: SocialUniverse, members: Optional[Iterable[str]] = None) -> SdProfile:
    """Arithmetic mean of the SDP vectors of (a subset of) the universe's agents.

    With no agents the neutral all-ones profile is returned.
    """
    wanted = None if members is None else set(members)
    vectors = [
        u.sdp_of(a).vector for a in u.agents if wanted is None or a.id in wanted
    ]
    if not vectors:
        return SdProfile(vector=(1.0,) * u.dimension)
    mean = np.mean(np.array(vectors, dtype=float), axis=0)
    return SdProfile(vector=tuple(float(x) for x in mean))


def weighted_sd(sdp: SdProfile, vector: Sequence[float]) -> tuple[float, ...]:
    """Componentwise product of an SDP and an SD vector."""
    if len(sdp.vector) != len(vector):
        raise InvalidParameterError(
            f"SDP has {len(sdp.vector)} components but SD vector has {len(vector)}"
        )
    return tuple(float(a * b) for a, b in zip(sdp.vector, vector))


def social_utility(u: SocialUniverse, soc: Society) -> float:
    """Sum over members of their trait values weighted by the society.

    A ``participation`` trait the society does not weight is added as is.
    """
    total = 0.0
    for member_id in sorted(soc.members):
        agent = u.agent(member_id)
        if agent is None:
            raise IntegrityError(f"Society '{soc.id}' lists unknown agent '{member_id}'")
        total += sum(w * agent.traits.get(t) for t, w in soc.trait_weights.items())
        if PARTICIPATION_TRAIT not in soc.trait_weights:
            total += agent.traits.get(PARTICIPATION_TRAIT)
    return total


def social_power_order(u: SocialUniverse) -> PowerOrder:
    """Societies by descending Social Utility, ties by society id."""
    if not u.societies:
        raise InvalidParameterError("Social power needs at least one society")
    utilities = {soc.id: social_utility(u, soc) for soc in u.societies}
    order = sorted(utilities, key=lambda sid: (-utilities[sid], sid))

    tied: list[tuple[str, ...]] = []
    group = [order[0]]
    for sid in order[1:]:
        if utilities[sid] == utilities[group[-1]]:
            group.append(sid)
        else:
            if len(group) > 1:
                tied.append(tuple(group))
            group = [sid]
    if len(group) > 1:
        tied.append(tuple(group))

    return PowerOrder(order=tuple(order), utilities=utilities, tied_groups=tuple(tied))


def compare_power(before: PowerOrder, after: PowerOrder) -> dict[str, int]:
    """Rank change per society between two universe states (positive = rose)."""
    return {
        sid: before.rank(sid) - after.rank(sid)
        for sid in before.order
        if sid in after.order
    }


def knowledge_map_from_agents(
    u: SocialUniverse,
    s: Scalarization,
    points: Optional[Iterable[str]] = None,
) -> KnowledgeMap:
    """Build a knowledge map from the agents' own PD functions.

    D is the mean scalarized PD over the agents that define the point; U is the
    spread (max - min) of those values. Points no agent covers fall back to the
    universe SD with U = 1.
    """
    pds = [a.pd for a in u.agents if a.pd is not None]
    wanted = list(points) if points is not None else sorted(
        set(u.sd.points).union(*(pd.points for pd in pds)) if pds else set(u.sd.points)
    )
    entries: dict[str, tuple[float, float]] = {}
    for point in wanted:
        values = [sd_scalar(pd, point, s) for pd in pds if point in pd.table]
        if values:
            entries[point] = (max(values) - min(values), sum(values) / len(values))
        else:
            entries[point] = (1.0, sd_scalar(u.sd, point, s))
    logger.debug(f"Knowledge map built from {len(pds)} agent PD functions over {len(entries)} points")
    return KnowledgeMap(entries=entries)
