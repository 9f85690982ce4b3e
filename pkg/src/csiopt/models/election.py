"""Approval election data models using Pydantic."""

import csv
import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_serializer, model_validator

CandidateId = str


class Ballot(BaseModel):
    """One voter's approval and disapproval sets.

    A candidate in neither set is an abstention.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    voter_id: str = Field(alias="voter", description="Opaque voter identifier")
    approve: frozenset[CandidateId] = Field(default_factory=frozenset)
    disapprove: frozenset[CandidateId] = Field(default_factory=frozenset)

    @field_serializer("approve", "disapprove")
    def _sorted(self, value: frozenset[CandidateId]) -> list[CandidateId]:
        return sorted(value)


class ApprovalElection(BaseModel):
    """Candidates plus ballots.

    Construction does not enforce ballot invariants; invalid elections must be
    representable so that ``validate_election`` can report on them.
    """

    model_config = ConfigDict(frozen=True)

    candidates: tuple[CandidateId, ...]
    ballots: tuple[Ballot, ...] = ()

    def order_key(self) -> dict[CandidateId, int]:
        """Map candidate -> tie-break position (first occurrence wins)."""
        key: dict[CandidateId, int] = {}
        for i, c in enumerate(self.candidates):
            key.setdefault(c, i)
        return key

    def restrict(self, candidates: Iterable[CandidateId]) -> "ApprovalElection":
        """Sub-election over a candidate subset, keeping the global order."""
        keep = set(candidates)
        return ApprovalElection(
            candidates=tuple(c for c in self.candidates if c in keep),
            ballots=tuple(
                Ballot(
                    voter=b.voter_id,
                    approve=b.approve & keep,
                    disapprove=b.disapprove & keep,
                )
                for b in self.ballots
            ),
        )

    @classmethod
    def from_json(cls, path: Union[Path, str]) -> "ApprovalElection":
        """Load an election from the JSON schema used by the CLI."""
        with open(path, "r") as f:
            data = json.load(f)
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: dict) -> "ApprovalElection":
        return cls(
            candidates=tuple(data.get("candidates", [])),
            ballots=tuple(
                Ballot(
                    voter=str(b["voter"]),
                    approve=frozenset(b.get("approve", [])),
                    disapprove=frozenset(b.get("disapprove", [])),
                )
                for b in data.get("ballots", [])
            ),
        )

    @classmethod
    def from_csv(
        cls,
        path: Union[Path, str],
        candidates: Optional[list[CandidateId]] = None,
    ) -> "ApprovalElection":
        """Load ballots from ``voter,approve|list,disapprove|list`` rows.

        Without an explicit candidate list, candidates are ordered by first
        appearance in the file.
        """
        seen: list[CandidateId] = list(candidates or [])
        ballots = []
        with open(path, "r", newline="") as f:
            for row in csv.reader(f):
                if not row or (not ballots and row[0].strip().lower() == "voter"):
                    continue
                voter = row[0].strip()
                approve = _split_pipe(row[1] if len(row) > 1 else "")
                disapprove = _split_pipe(row[2] if len(row) > 2 else "")
                if candidates is None:
                    for c in approve + disapprove:
                        if c not in seen:
                            seen.append(c)
                ballots.append(
                    Ballot(voter=voter, approve=frozenset(approve), disapprove=frozenset(disapprove))
                )
        return cls(candidates=tuple(seen), ballots=tuple(ballots))

    def to_dict(self) -> dict:
        return {
            "candidates": list(self.candidates),
            "ballots": [
                {
                    "voter": b.voter_id,
                    "approve": self._in_order(b.approve),
                    "disapprove": self._in_order(b.disapprove),
                }
                for b in self.ballots
            ],
        }

    def _in_order(self, members: frozenset[CandidateId]) -> list[CandidateId]:
        key = self.order_key()
        return sorted(members, key=lambda c: (key.get(c, len(key)), c))


def _split_pipe(cell: str) -> list[str]:
    return [part.strip() for part in cell.split("|") if part.strip()]


class Committee(BaseModel):
    """A winner set, stored in the election's candidate order."""

    model_config = ConfigDict(frozen=True)

    members: tuple[CandidateId, ...] = ()

    @model_validator(mode="after")
    def _no_duplicates(self) -> "Committee":
        if len(set(self.members)) != len(self.members):
            raise ValueError(f"Committee has duplicate members: {self.members}")
        return self

    @property
    def size(self) -> int:
        return len(self.members)

    @classmethod
    def of(cls, election: ApprovalElection, members: Iterable[CandidateId]) -> "Committee":
        """Build a committee with members in canonical candidate order."""
        key = election.order_key()
        return cls(members=tuple(sorted(set(members), key=lambda c: key[c])))

    def __contains__(self, candidate: object) -> bool:
        return candidate in self.members

    def issubset(self, other: Union["Committee", Iterable[CandidateId]]) -> bool:
        pool = other.members if isinstance(other, Committee) else other
        return set(self.members) <= set(pool)


class Violation(BaseModel):
    """One invariant violation found by election validation."""

    model_config = ConfigDict(frozen=True)

    ballot: Optional[int] = Field(default=None, description="Ballot index, None for election-level")
    reason: str = Field(description="Short machine-readable reason")
    detail: str = Field(default="", description="Human-readable detail")


class RuleResult(BaseModel):
    """A committee chosen by a multi-winner rule with its exact objective."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rule: str
    committee: Committee
    objective: Fraction
    ties: int = Field(default=1, description="Number of optimal committees found")

    def to_output(self) -> dict:
        """JSON shape emitted by the CLI."""
        return {
            "rule": self.rule,
            "committee": list(self.committee.members),
            "objective_num": self.objective.numerator,
            "objective_den": self.objective.denominator,
            "ties": self.ties,
        }


class PavWeights(BaseModel):
    """Thiele weights alpha_1..alpha_k for proportional approval voting."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    alpha: tuple[Fraction, ...]

    @model_validator(mode="after")
    def _check_shape(self) -> "PavWeights":
        if not self.alpha or self.alpha[0] <= 0:
            raise ValueError("alpha_1 must be positive")
        if any(a < 0 for a in self.alpha):
            raise ValueError("weights must be nonnegative")
        if any(a < b for a, b in zip(self.alpha, self.alpha[1:])):
            raise ValueError("weights must be non-increasing")
        return self

    @classmethod
    def harmonic(cls, k: int) -> "PavWeights":
        """alpha_l = 1/l."""
        return cls(alpha=tuple(Fraction(1, l) for l in range(1, max(k, 1) + 1)))

    @classmethod
    def parse(cls, values: Iterable[Union[str, int, float]]) -> "PavWeights":
        """Build weights from strings like ``"1/2"`` or plain numbers."""
        return cls(alpha=tuple(Fraction(str(v)) for v in values))

    @classmethod
    def from_file(cls, path: Union[Path, str]) -> "PavWeights":
        """Load a JSON list (or ``{"alpha": [...]}``) of weights."""
        with open(path, "r") as f:
            data = json.load(f)
        if isinstance(data, dict):
            data = data["alpha"]
        return cls.parse(data)

    def __len__(self) -> int:
        return len(self.alpha)
