"""Composed decision procedures: minimax TAV and the inclusion pipelines.

* ``minimax_tav``: most approvals first, fewest disapprovals second.
* ``oav_csi``: one stage, discrimination filter then approval vote.
* ``pnm_tav``: PAV, keep the j least discriminatory, PAV again.
* ``pa_step`` / ``pm_run``: preference aggregation over a preference graph,
  iterated with derogation gated by irreversible edges.
"""

import logging
import random
from typing import Mapping, Optional, Sequence

from .descent import locate_least_discriminatory
from .discrimination import aggregate_sdp, evaluate_sd, scalarize, weighted_sd
from .election import disapproval_score, ensure_valid, approval_score
from .errors import DomainError, InvalidParameterError
from .graph import compact_history, derogation_check, reachable, shortest_path
from .models.descent import DescentConfig
from .models.election import ApprovalElection, CandidateId, Committee, PavWeights
from .models.graph import PreferenceGraph
from .models.pipeline import PipelineReport, PolicyState, RetainedCandidate, SpSelector, StageParams
from .models.universe import KnowledgeMap, Scalarization, SocialUniverse
from .rules import av_top_k, pav, restricted_pav

logger = logging.getLogger(__name__)


def _ranked(
    election: ApprovalElection,
    members: Sequence[CandidateId],
    key: Mapping[CandidateId, float],
) -> list[CandidateId]:
    """Members by ascending key, ties by candidate order."""
    order = election.order_key()
    return sorted(members, key=lambda c: (key[c], order[c]))


def _sd_scalars(
    u: SocialUniverse,
    candidates: Sequence[CandidateId],
    s: Scalarization,
) -> dict[CandidateId, float]:
    return {c: scalarize(evaluate_sd(u.sd, c), s) for c in candidates}


def _descent_audit(
    u: SocialUniverse,
    scalars: Mapping[CandidateId, float],
    cfg: Optional[DescentConfig],
) -> dict:
    """Continuous descent over the universe embedding, when one covers the points."""
    if not u.embedding or not all(c in u.embedding for c in scalars):
        return {}
    nearest, x_best, trace = locate_least_discriminatory(u.embedding, scalars, cfg)
    return {
        "descent_minimizer": nearest,
        "descent_point": list(x_best),
        "descent_evals": trace.evals_used,
    }


def _shortfall(audit: dict, k: int, final: Committee) -> None:
    if final.size < k:
        audit["shortfall"] = k - final.size
        logger.warning(f"Final committee has {final.size} members, {k} requested")


def minimax_tav(election: ApprovalElection, l: int, k: int) -> PipelineReport:
    """Two-stage approval vote: top-l by approvals, then the k least disapproved."""
    ensure_valid(election)
    if not len(election.candidates) >= l > k >= 1:
        raise InvalidParameterError(
            f"Need |C| >= l > k >= 1, got |C|={len(election.candidates)} l={l} k={k}"
        )
    stage1 = av_top_k(election, l)
    disapprovals = {c: disapproval_score(election, c) for c in stage1.members}
    final = Committee.of(election, _ranked(election, stage1.members, disapprovals)[:k])
    return PipelineReport(
        pipeline="minimax-tav",
        stage1=stage1,
        final=final,
        audit={
            "approvals": {c: approval_score(election, c) for c in stage1.members},
            "disapprovals": disapprovals,
        },
    )


def oav_csi(
    u: SocialUniverse,
    e: ApprovalElection,
    k: int,
    tau: float,
    s: Optional[Scalarization] = None,
    descent: Optional[DescentConfig] = None,
) -> PipelineReport:
    """One-stage inclusion: keep candidates with SD at most tau, then approval vote.

    When fewer than k candidates pass, tau is relaxed to the k-th smallest SD.
    """
    ensure_valid(e)
    s = s or Scalarization()
    if not 1 <= k <= len(e.candidates):
        raise InvalidParameterError(f"Committee size k={k} out of range 1..{len(e.candidates)}")
    if not 0.0 <= tau <= 1.0:
        raise InvalidParameterError(f"Threshold tau={tau} outside [0, 1]")

    scalars = _sd_scalars(u, e.candidates, s)
    audit: dict = {"tau": tau, **_descent_audit(u, scalars, descent)}

    threshold = tau
    retained = [c for c in e.candidates if scalars[c] <= threshold]
    if len(retained) < k:
        threshold = sorted(scalars.values())[k - 1]
        retained = [c for c in e.candidates if scalars[c] <= threshold]
        audit["tau_relaxed"] = threshold
        logger.warning(f"Only {len(retained)} candidates pass tau={tau}; relaxed to {threshold}")

    final = av_top_k(e.restrict(retained), min(k, len(retained)))
    _shortfall(audit, k, final)
    return PipelineReport(
        pipeline="oav",
        stage1=Committee.of(e, retained),
        argmin_set=tuple(RetainedCandidate(candidate=c, sd=scalars[c]) for c in retained),
        final=Committee.of(e, final.members),
        audit=audit,
    )


def pnm_tav(
    u: SocialUniverse,
    e: ApprovalElection,
    p: StageParams,
    s: Optional[Scalarization] = None,
    w: Optional[PavWeights] = None,
    descent: Optional[DescentConfig] = None,
) -> PipelineReport:
    """Two-stage inclusion: PAV(l), keep the j least SDP-weighted SD, PAV(k) over them."""
    ensure_valid(e)
    s = s or Scalarization()
    if len(e.candidates) < p.l:
        raise InvalidParameterError(f"Stage one needs l={p.l} candidates, election has {len(e.candidates)}")

    first = pav(e, p.l, w)
    sdp = aggregate_sdp(u)
    scalars = {
        c: scalarize(weighted_sd(sdp, evaluate_sd(u.sd, c)), s) for c in first.committee.members
    }
    kept = _ranked(e, first.committee.members, scalars)[: p.j]
    second, _ = restricted_pav(e, kept, p.k, w)

    audit = {
        "stage1_rule": first.rule,
        "stage1_objective": str(first.objective),
        "stage2_rule": second.rule,
        "stage2_objective": str(second.objective),
        "sdp": list(sdp.vector),
        "sdp_composition": "componentwise product of the mean agent SDP and the candidate SD, then scalarized",
        **_descent_audit(u, scalars, descent),
    }
    final = Committee.of(e, second.committee.members)
    _shortfall(audit, p.k, final)
    return PipelineReport(
        pipeline="pnm",
        stage1=first.committee,
        argmin_set=tuple(RetainedCandidate(candidate=c, sd=scalars[c]) for c in kept),
        final=final,
        audit=audit,
    )


def _select_preferences(
    eligible: list[CandidateId],
    selector: SpSelector,
    default_size: int,
    seed: int,
) -> list[CandidateId]:
    if selector.mode == "all":
        return list(eligible)
    if selector.mode == "explicit":
        wanted = set(selector.nodes)
        return [c for c in eligible if c in wanted]
    size = min(selector.size or default_size, len(eligible))
    picked = set(random.Random(seed).sample(eligible, size))
    return [c for c in eligible if c in picked]


def pa_step(
    u: SocialUniverse,
    g: PreferenceGraph,
    e: ApprovalElection,
    state: PolicyState,
    p: StageParams,
    sp_seed: int,
    s: Optional[Scalarization] = None,
    selector: Optional[SpSelector] = None,
    w: Optional[PavWeights] = None,
    km: Optional[KnowledgeMap] = None,
    descent: Optional[DescentConfig] = None,
) -> tuple[PolicyState, PipelineReport]:
    """One preference-aggregation step over the preference graph.

    Stage one votes over the selected, not yet adopted preferences. The least
    discriminatory retained member becomes the goal; the shortest path from the
    current frontier to it is computed and stage two votes over the non-adopted
    candidates on that path. The search never re-enters the compacted history;
    going back is a derogation, handled by ``pm_run``.
    """
    ensure_valid(e)
    s = s or Scalarization()
    selector = selector or SpSelector()
    for c in e.candidates:
        if not g.has_node(c):
            raise DomainError(f"Candidate '{c}' is not a preference graph node")
    for a in state.adopted:
        if not g.has_node(a):
            raise DomainError(f"Adopted preference '{a}' is not a preference graph node")

    adopted = set(state.adopted)
    eligible = [c for c in e.candidates if c not in adopted]
    selected = _select_preferences(eligible, selector, p.l, sp_seed + state.step_count)
    audit: dict = {
        "step": state.step_count,
        "sp_mode": selector.mode,
        "selected": selected,
        "stage2_scope": "non-adopted path nodes",
    }
    if not selected:
        audit["exhausted"] = True
        logger.info("No eligible preferences left to aggregate")
        empty = Committee()
        return state, PipelineReport(pipeline="pa", stage1=empty, final=empty, audit=audit)

    first, _ = restricted_pav(e, selected, p.l, w)
    stage1 = Committee.of(e, first.committee.members)
    scalars = _sd_scalars(u, stage1.members, s)
    kept = _ranked(e, stage1.members, scalars)[: p.j]
    target = kept[0]

    transited: list[str] = []
    if state.history.current is not None:
        sources = [state.history.current]
        transited = [n for n in compact_history(state.history).steps if n != state.history.current]
    else:
        sources = [c for c in stage1.members if c not in kept] or list(stage1.members)

    audit.update(
        {
            "stage1_objective": str(first.objective),
            "target": target,
            "sources": sources,
            "transited": transited,
            **_descent_audit(u, scalars, descent),
        }
    )
    argmin_set = tuple(RetainedCandidate(candidate=c, sd=scalars[c]) for c in kept)

    found = shortest_path(g, sources, target, s, km, avoid=transited)
    if not found.found:
        audit["no_path"] = True
        logger.info(f"Goal '{target}' is unreachable from {sources}")
        return state, PipelineReport(
            pipeline="pa", stage1=stage1, argmin_set=argmin_set, final=Committee(), audit=audit
        )

    candidates = set(e.candidates)
    pool = [n for n in found.path if n in candidates and n not in adopted]
    second, _ = restricted_pav(e, pool, p.k, w)
    final = Committee.of(e, second.committee.members)
    audit["stage2_pool"] = pool
    audit["stage2_objective"] = str(second.objective)
    _shortfall(audit, p.k, final)

    new_state = PolicyState(
        adopted=state.adopted + final.members,
        history=state.history.extend(list(found.path)),
        step_count=state.step_count + 1,
    )
    logger.info(f"Step {state.step_count}: adopted {list(final.members)} via {'->'.join(found.path)}")
    return new_state, PipelineReport(
        pipeline="pa",
        stage1=stage1,
        argmin_set=argmin_set,
        path=found.path,
        path_cost=found.cost,
        final=final,
        audit=audit,
    )


def _derogate(
    g: PreferenceGraph,
    state: PolicyState,
    target: str,
) -> Optional[tuple[PolicyState, str, list[str]]]:
    """Walk back to the latest live history node that can reach the target, if allowed.

    Paths from a candidate may not re-enter the live path before it.
    """
    steps = state.history.steps
    live = compact_history(state.history).steps
    for pos in range(len(live) - 2, -1, -1):
        back_to = live[pos]
        if not reachable(g, back_to, target, avoid=live[:pos]):
            continue
        if not derogation_check(g, state.history, back_to):
            continue
        last = len(steps) - 1 - steps[::-1].index(back_to)
        before = set(steps[: last + 1])
        removed = [a for a in state.adopted if a in steps[last + 1:] and a not in before]
        walked_back = list(reversed(steps[last:]))
        return (
            PolicyState(
                adopted=tuple(a for a in state.adopted if a not in removed),
                history=state.history.extend(walked_back),
                step_count=state.step_count,
            ),
            back_to,
            removed,
        )
    return None


def pm_run(
    u: SocialUniverse,
    g: PreferenceGraph,
    e: ApprovalElection,
    p: StageParams,
    steps: int,
    sp_seed: int,
    s: Optional[Scalarization] = None,
    selector: Optional[SpSelector] = None,
    w: Optional[PavWeights] = None,
    km: Optional[KnowledgeMap] = None,
    descent: Optional[DescentConfig] = None,
    state: Optional[PolicyState] = None,
) -> tuple[PolicyState, list[PipelineReport]]:
    """Iterate preference aggregation, derogating when the goal is out of reach.

    The run stops early when nothing is left to adopt or when a needed
    derogation is blocked by irreversible edges.
    """
    if steps < 1:
        raise InvalidParameterError(f"steps must be >= 1, got {steps}")
    state = state or PolicyState()
    reports: list[PipelineReport] = []

    for _ in range(steps):
        new_state, report = pa_step(u, g, e, state, p, sp_seed, s, selector, w, km, descent)
        if report.audit.get("exhausted"):
            reports.append(report)
            break
        if not report.audit.get("no_path"):
            state = new_state
            reports.append(report)
            continue

        derogation = _derogate(g, state, report.audit["target"])
        if derogation is None:
            logger.warning(f"Derogation towards '{report.audit['target']}' is blocked")
            reports.append(
                report.model_copy(update={"audit": {**report.audit, "derogation": "blocked"}})
            )
            break

        state, back_to, removed = derogation
        logger.info(f"Derogated back to '{back_to}', removing {removed}")
        reports.append(
            report.model_copy(
                update={
                    "audit": {
                        **report.audit,
                        "derogation": "applied",
                        "derogated_to": back_to,
                        "removed": removed,
                    }
                }
            )
        )
        state, report = pa_step(u, g, e, state, p, sp_seed, s, selector, w, km, descent)
        reports.append(report)

    return state, reports
