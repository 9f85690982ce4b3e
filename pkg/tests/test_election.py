"""Tests for approval elections: validation, scores and loaders."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from csiopt.election import approval_score, disapproval_score, ensure_valid, tally, validate_election
from csiopt.errors import InvalidQueryError, ValidationFailed
from csiopt.models.election import ApprovalElection, Ballot, Committee

from conftest import random_election


def test_well_formed_election_has_no_violations(small_election):
    assert validate_election(small_election) == []
    assert ensure_valid(small_election) is small_election


def test_unknown_candidate_is_reported_against_its_ballot():
    e = ApprovalElection(
        candidates=("a", "b"),
        ballots=(Ballot(voter="v1", approve=frozenset({"a", "z"})),),
    )
    violations = validate_election(e)
    assert len(violations) == 1
    assert violations[0].ballot == 0
    assert violations[0].reason == "unknown-candidate"


def test_overlap_is_reported():
    e = ApprovalElection(
        candidates=("a", "b"),
        ballots=(Ballot(voter="v1", approve=frozenset({"a"}), disapprove=frozenset({"a"})),),
    )
    assert [v.reason for v in validate_election(e)] == ["overlap"]
    with pytest.raises(ValidationFailed) as info:
        ensure_valid(e)
    assert info.value.exit_code == 2
    assert len(info.value.violations) == 1


def test_duplicate_and_empty_candidates():
    e = ApprovalElection(candidates=("a", "a", ""))
    reasons = sorted(v.reason for v in validate_election(e))
    assert reasons == ["duplicate-candidate", "empty-candidate-id"]


def test_approval_scores(small_election):
    assert approval_score(small_election, "a") == 2
    assert approval_score(small_election, "c") == 1


def test_scores_on_empty_ballot_list():
    e = ApprovalElection(candidates=("a", "b"))
    assert approval_score(e, "a") == 0
    assert disapproval_score(e, "b") == 0


def test_disapproval_scores():
    e = ApprovalElection(
        candidates=("a", "b"),
        ballots=(
            Ballot(voter="1", disapprove=frozenset({"a", "b"})),
            Ballot(voter="2", disapprove=frozenset({"b"})),
            Ballot(voter="3", approve=frozenset({"b"})),
        ),
    )
    assert disapproval_score(e, "a") == 1
    assert disapproval_score(e, "b") == 2


def test_unknown_candidate_query_raises(small_election):
    with pytest.raises(InvalidQueryError):
        approval_score(small_election, "zz")
    with pytest.raises(InvalidQueryError):
        disapproval_score(small_election, "zz")


def test_scores_never_exceed_ballot_count():
    rng = random.Random(11)
    for _ in range(50):
        e = random_election(rng, disapprovals=True)
        for c in e.candidates:
            assert approval_score(e, c) + disapproval_score(e, c) <= len(e.ballots)


def test_scores_ignore_ballot_order():
    rng = random.Random(12)
    for _ in range(30):
        e = random_election(rng, disapprovals=True)
        shuffled = list(e.ballots)
        rng.shuffle(shuffled)
        other = ApprovalElection(candidates=e.candidates, ballots=tuple(shuffled))
        assert tally(other) == tally(e)


@given(st.lists(st.sets(st.sampled_from("abcd")), max_size=8))
@settings(max_examples=60, derandomize=True)
def test_adding_an_approving_ballot_adds_one(approvals):
    ballots = tuple(Ballot(voter=str(i), approve=frozenset(a)) for i, a in enumerate(approvals))
    e = ApprovalElection(candidates=tuple("abcd"), ballots=ballots)
    grown = ApprovalElection(
        candidates=e.candidates,
        ballots=ballots + (Ballot(voter="extra", approve=frozenset({"b"})),),
    )
    assert approval_score(grown, "b") == approval_score(e, "b") + 1
    assert approval_score(grown, "a") == approval_score(e, "a")


def test_tally_is_in_candidate_order(small_election):
    assert tally(small_election) == [
        {"candidate": "a", "approve": 2, "disapprove": 0},
        {"candidate": "b", "approve": 2, "disapprove": 0},
        {"candidate": "c", "approve": 1, "disapprove": 0},
    ]


def test_restrict_keeps_order_and_intersects_ballots(small_election):
    sub = small_election.restrict(["c", "a"])
    assert sub.candidates == ("a", "c")
    assert sub.ballots[0].approve == frozenset({"a"})
    assert sub.ballots[2].approve == frozenset()


def test_csv_loader(fixtures_dir):
    e = ApprovalElection.from_csv(fixtures_dir / "election_small.csv")
    assert e.candidates == ("a", "b", "c")
    assert len(e.ballots) == 4
    assert e.ballots[1].disapprove == frozenset({"c"})
    assert validate_election(e) == []


def test_json_round_trip(small_election):
    assert ApprovalElection.from_dict(small_election.to_dict()) == small_election


def test_committee_uses_candidate_order(small_election):
    committee = Committee.of(small_election, ["c", "a"])
    assert committee.members == ("a", "c")
    assert "a" in committee
    assert committee.issubset(["a", "b", "c"])
    with pytest.raises(ValueError):
        Committee(members=("a", "a"))
