"""Approval election validation and score tallies."""

import logging

from .errors import InvalidQueryError, ValidationFailed
from .models.election import ApprovalElection, CandidateId, Violation

logger = logging.getLogger(__name__)


def validate_election(election: ApprovalElection) -> list[Violation]:
    """Check every election and ballot invariant.

    Violations are returned as data; an empty list means the election is valid.
    """
    violations: list[Violation] = []
    known = set(election.candidates)

    seen: set[CandidateId] = set()
    for c in election.candidates:
        if not c:
            violations.append(Violation(reason="empty-candidate-id", detail="candidate id is empty"))
        elif c in seen:
            violations.append(Violation(reason="duplicate-candidate", detail=f"'{c}' listed twice"))
        seen.add(c)

    for i, ballot in enumerate(election.ballots):
        for c in sorted((ballot.approve | ballot.disapprove) - known):
            violations.append(
                Violation(ballot=i, reason="unknown-candidate", detail=f"'{c}' is not a candidate")
            )
        for c in sorted(ballot.approve & ballot.disapprove):
            violations.append(
                Violation(ballot=i, reason="overlap", detail=f"'{c}' both approved and disapproved")
            )

    return violations


def ensure_valid(election: ApprovalElection) -> ApprovalElection:
    """Raise ValidationFailed unless the election is valid."""
    violations = validate_election(election)
    if violations:
        raise ValidationFailed(
            f"Election has {len(violations)} violation(s)", violations
        )
    return election


def _require_candidate(election: ApprovalElection, candidate: CandidateId) -> None:
    if candidate not in election.candidates:
        raise InvalidQueryError(f"Unknown candidate: '{candidate}'")


def approval_score(election: ApprovalElection, candidate: CandidateId) -> int:
    """Number of ballots approving a candidate."""
    _require_candidate(election, candidate)
    return sum(1 for b in election.ballots if candidate in b.approve)


def disapproval_score(election: ApprovalElection, candidate: CandidateId) -> int:
    """Number of ballots disapproving a candidate."""
    _require_candidate(election, candidate)
    return sum(1 for b in election.ballots if candidate in b.disapprove)


def tally(election: ApprovalElection) -> list[dict]:
    """Per-candidate approve/disapprove counts in candidate order."""
    return [
        {
            "candidate": c,
            "approve": approval_score(election, c),
            "disapprove": disapproval_score(election, c),
        }
        for c in election.candidates
    ]
