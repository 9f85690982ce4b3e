"""Tests for manifest loading and concurrent agreement checks."""

import json

import pytest

from csiopt.batch import BatchItem, check_item, load_manifest, run_batch
from csiopt.errors import InvalidParameterError
from csiopt.models.election import ApprovalElection
from csiopt.models.graph import PreferenceGraph


def _write(tmp_path, manifest) -> str:
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(manifest))
    return str(path)


def test_load_manifest_resolves_relative_paths(fixtures_dir):
    items = load_manifest(fixtures_dir / "batch_manifest.json")
    assert [i.check for i in items] == ["pav", "tav", "path", "pav"]
    assert isinstance(items[0].params["election"], ApprovalElection)
    assert isinstance(items[2].params["graph"], PreferenceGraph)
    assert items[3].params["election"].candidates == ("x", "y")


def test_default_names(tmp_path):
    election = {"candidates": ["a"], "ballots": []}
    items = load_manifest(_write(tmp_path, [{"check": "pav", "election": election, "k": 1}]))
    assert items[0].name == "item_0000"


def test_unknown_check(tmp_path):
    with pytest.raises(InvalidParameterError):
        load_manifest(_write(tmp_path, [{"check": "magic"}]))


def test_manifest_must_be_a_list(tmp_path):
    with pytest.raises(InvalidParameterError):
        load_manifest(_write(tmp_path, {"check": "pav"}))


def test_shipped_manifest_agrees(fixtures_dir):
    stats = run_batch(load_manifest(fixtures_dir / "batch_manifest.json"), max_concurrent=2)
    assert stats.total == 4
    assert stats.agreed == 4
    assert stats.disagreed == 0
    assert stats.failed == 0
    assert [o.name for o in stats.outcomes] == ["small-pav", "minimax", "diamond", "inline-pav"]


def test_errors_are_counted_not_raised(small_election):
    items = [
        BatchItem(name="ok", check="pav", params={"election": small_election, "k": 2}),
        BatchItem(name="too-big", check="pav", params={"election": small_election, "k": 9}),
    ]
    stats = run_batch(items)
    assert stats.agreed == 1
    assert stats.failed == 1
    assert stats.outcomes[1].agreed is None
    assert stats.outcomes[1].error


def test_check_item_path(diamond):
    outcome = check_item(
        BatchItem(name="d", check="path", params={"graph": diamond, "sources": ["A"], "target": "D"})
    )
    assert outcome.agreed
    assert outcome.fast["path"] == ["A", "B", "D"]


def test_check_item_custom_weights(small_election):
    params = {"election": small_election, "k": 2, "alpha": [1, "1/3"]}
    outcome = check_item(BatchItem(name="w", check="pav", params=params))
    assert outcome.agreed
    assert outcome.fast["objective"] == "10/3"


def test_malformed_items_are_counted(tmp_path, small_election):
    election = small_election.to_dict()
    manifest = [
        {"name": "ok", "check": "pav", "election": election, "k": 2},
        {"name": "no-k", "check": "pav", "election": election},
    ]
    stats = run_batch(load_manifest(_write(tmp_path, manifest)))
    assert stats.agreed == 1
    assert stats.failed == 1
    assert stats.outcomes[1].agreed is None
    assert "KeyError" in stats.outcomes[1].error
