"""Tests for run profiles."""

from fractions import Fraction

import pytest

from csiopt.models.profile import RunProfile, list_profiles, load_profile


def test_shipped_profiles_load():
    ids = list_profiles()
    assert {"default", "uncertain", "worst-axis"} <= set(ids)
    for profile_id in ids:
        assert load_profile(profile_id).id == profile_id


def test_missing_profile():
    with pytest.raises(FileNotFoundError):
        load_profile("does-not-exist")


def test_yml_files_are_found(tmp_path):
    (tmp_path / "short.yml").write_text("id: short\nname: Short\ntau: 0.2\n")
    assert list_profiles(tmp_path) == ["short"]
    assert load_profile("short", tmp_path).tau == 0.2


def test_empty_directory(tmp_path):
    assert list_profiles(tmp_path / "missing") == []


def test_weights():
    assert RunProfile(id="h", name="H").weights() is None
    explicit = RunProfile(id="w", name="W", pav_weights=[1, "1/2", 0])
    assert explicit.weights().alpha == (Fraction(1), Fraction(1, 2), Fraction(0))


def test_context_aggregation_override(diamond_universe):
    mean = RunProfile(id="m", name="M", context_aggregation="mean")
    assert mean.configure_universe(diamond_universe).sd.context_aggregation == "mean"
    assert RunProfile(id="d", name="D").configure_universe(diamond_universe) is diamond_universe


def test_knowledge_map_switch(diamond_universe):
    assert load_profile("uncertain").knowledge_map_for(diamond_universe) is diamond_universe.knowledge_map
    assert load_profile("default").knowledge_map_for(diamond_universe) is None


def test_knowledge_map_from_agents(diamond_universe):
    km = load_profile("agent-knowledge").knowledge_map_for(diamond_universe)
    assert km is not diamond_universe.knowledge_map
    # no agent defines a PD, so every point falls back to the universe SD
    uncertainty, discrimination = km.entries["D"]
    assert uncertainty == 1.0
    assert discrimination == pytest.approx(0.1)
