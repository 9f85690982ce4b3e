"""Multi-winner selection rules over approval elections.

All scores are exact ``Fraction`` values. Ties are always broken by the
election's candidate order; committees compare by the sorted tuple of their
members' positions.
"""

import logging
from fractions import Fraction
from typing import Iterable, Optional

from .config import get_pav_cap
from .election import approval_score
from .errors import CapacityError, InvalidParameterError, InvalidQueryError
from .models.election import ApprovalElection, CandidateId, Committee, PavWeights, RuleResult

logger = logging.getLogger(__name__)


def _check_k(election: ApprovalElection, k: int) -> None:
    if not 1 <= k <= len(election.candidates):
        raise InvalidParameterError(
            f"Committee size k={k} out of range 1..{len(election.candidates)}"
        )


def _check_weights(w: PavWeights, k: int) -> None:
    if len(w) < k:
        raise InvalidParameterError(f"PAV weights cover {len(w)} seats, need {k}")


def av_top_k(election: ApprovalElection, k: int) -> Committee:
    """The k most-approved candidates."""
    _check_k(election, k)
    ranked = sorted(
        range(len(election.candidates)),
        key=lambda i: (-approval_score(election, election.candidates[i]), i),
    )
    return Committee.of(election, (election.candidates[i] for i in ranked[:k]))


def absolute_majority(election: ApprovalElection) -> tuple[Committee, bool]:
    """Single most-approved candidate and whether it holds a strict majority."""
    winner = av_top_k(election, 1)
    score = approval_score(election, winner.members[0])
    return winner, 2 * score > len(election.ballots)


def pav_score(election: ApprovalElection, committee: Committee, w: PavWeights) -> Fraction:
    """Sum over voters of alpha_1 + ... + alpha_t, t = approved members.

    Voter i contributes to term l exactly when it approves at least l members.
    """
    members = set(committee.members)
    unknown = members - set(election.candidates)
    if unknown:
        raise InvalidQueryError(f"Committee contains unknown candidates: {sorted(unknown)}")
    prefix = _prefix_sums(w)
    total = Fraction(0)
    for ballot in election.ballots:
        t = len(ballot.approve & members)
        if t >= len(prefix):
            raise InvalidParameterError(f"PAV weights cover {len(w)} seats, voter approves {t}")
        total += prefix[t]
    return total


def _prefix_sums(w: PavWeights) -> list[Fraction]:
    sums = [Fraction(0)]
    for a in w.alpha:
        sums.append(sums[-1] + a)
    return sums


class _Profile:
    """Index-based view of an election used by the search routines."""

    def __init__(self, election: ApprovalElection, w: PavWeights):
        self.candidates = election.candidates
        index = election.order_key()
        self.approvers: list[list[int]] = [[] for _ in self.candidates]
        for v, ballot in enumerate(election.ballots):
            for c in ballot.approve:
                if c in index:
                    self.approvers[index[c]].append(v)
        self.num_voters = len(election.ballots)
        self.alpha = list(w.alpha) + [Fraction(0)]

    def marginal(self, cand: int, satisfaction: list[int]) -> Fraction:
        """Gain from adding cand given how many members each voter approves."""
        return sum((self.alpha[satisfaction[v]] for v in self.approvers[cand]), Fraction(0))


def pav_greedy(
    election: ApprovalElection,
    k: int,
    w: Optional[PavWeights] = None,
) -> RuleResult:
    """Sequential PAV: k rounds of adding the best marginal candidate."""
    _check_k(election, k)
    w = w or PavWeights.harmonic(k)
    _check_weights(w, k)
    profile = _Profile(election, w)
    chosen = _greedy_indices(profile, k)
    committee = Committee.of(election, (election.candidates[i] for i in chosen))
    objective = pav_score(election, committee, w)
    logger.debug(f"Greedy PAV k={k}: {committee.members} score {objective}")
    return RuleResult(rule="pav-greedy", committee=committee, objective=objective, ties=1)


def _greedy_indices(profile: _Profile, k: int) -> list[int]:
    satisfaction = [0] * profile.num_voters
    chosen: list[int] = []
    for _ in range(k):
        best, best_gain = -1, Fraction(-1)
        for c in range(len(profile.candidates)):
            if c in chosen:
                continue
            gain = profile.marginal(c, satisfaction)
            if gain > best_gain:
                best, best_gain = c, gain
        chosen.append(best)
        for v in profile.approvers[best]:
            satisfaction[v] += 1
    return chosen


def pav_exact(
    election: ApprovalElection,
    k: int,
    w: Optional[PavWeights] = None,
    cap: Optional[int] = None,
) -> RuleResult:
    """Optimal PAV committee by depth-first branch and bound.

    Candidates are branched in election order, so the first optimum reached is
    the lexicographically smallest one. The bound adds the ``missing`` largest
    marginal gains still available, which never underestimates because weights
    are non-increasing.
    """
    _check_k(election, k)
    cap = get_pav_cap() if cap is None else cap
    if len(election.candidates) > cap:
        raise CapacityError(
            f"Exact PAV refuses {len(election.candidates)} candidates; use pav-greedy", cap
        )
    w = w or PavWeights.harmonic(k)
    _check_weights(w, k)
    profile = _Profile(election, w)
    n = len(profile.candidates)

    greedy = _greedy_indices(profile, k)
    satisfaction = [0] * profile.num_voters
    for c in greedy:
        for v in profile.approvers[c]:
            satisfaction[v] += 1
    state = {
        "best": sum(
            (sum(profile.alpha[:s], Fraction(0)) for s in satisfaction), Fraction(0)
        ),
        "committee": None,
        "ties": 0,
        "nodes": 0,
    }

    satisfaction = [0] * profile.num_voters
    partial: list[int] = []

    def search(start: int, score: Fraction) -> None:
        state["nodes"] += 1
        missing = k - len(partial)
        if missing == 0:
            if score > state["best"]:
                state["best"], state["committee"], state["ties"] = score, list(partial), 1
            elif score == state["best"]:
                if state["committee"] is None:
                    state["committee"] = list(partial)
                state["ties"] += 1
            return
        gains = [(profile.marginal(c, satisfaction), c) for c in range(start, n)]
        optimistic = sorted((g for g, _ in gains), reverse=True)[:missing]
        if score + sum(optimistic, Fraction(0)) < state["best"]:
            return
        for gain, c in gains:
            if n - c < missing:
                break
            partial.append(c)
            for v in profile.approvers[c]:
                satisfaction[v] += 1
            search(c + 1, score + gain)
            for v in profile.approvers[c]:
                satisfaction[v] -= 1
            partial.pop()

    search(0, Fraction(0))

    committee = Committee.of(election, (election.candidates[i] for i in state["committee"]))
    logger.debug(
        f"Exact PAV k={k}: {committee.members} score {state['best']} "
        f"({state['ties']} optimal, {state['nodes']} nodes)"
    )
    return RuleResult(
        rule="pav-exact",
        committee=committee,
        objective=pav_score(election, committee, w),
        ties=state["ties"],
    )


def pav(
    election: ApprovalElection,
    k: int,
    w: Optional[PavWeights] = None,
    cap: Optional[int] = None,
) -> RuleResult:
    """Exact PAV when the election fits under the cap, greedy PAV otherwise."""
    cap = get_pav_cap() if cap is None else cap
    if len(election.candidates) > cap:
        logger.warning(
            f"{len(election.candidates)} candidates exceed the exact PAV cap {cap}; using greedy PAV"
        )
        return pav_greedy(election, k, w)
    return pav_exact(election, k, w, cap=cap)


def restricted_pav(
    election: ApprovalElection,
    pool: Iterable[CandidateId],
    k: int,
    w: Optional[PavWeights] = None,
) -> tuple[RuleResult, ApprovalElection]:
    """PAV over a candidate subset, clipping k to the pool size."""
    sub = election.restrict(pool)
    if not sub.candidates:
        raise InvalidParameterError("Cannot vote over an empty candidate pool")
    return pav(sub, min(k, len(sub.candidates)), w), sub
