"""Tests for minimax TAV and the inclusion pipelines (OAV, PNM, PA, PM)."""

import random

import pytest

from csiopt.discrimination import evaluate_sd, scalarize
from csiopt.errors import DomainError, InvalidParameterError
from csiopt.graph import compact_history
from csiopt.models.election import ApprovalElection, Ballot
from csiopt.models.graph import PathHistory, PrefEdge, PrefNode, PreferenceGraph
from csiopt.models.pipeline import PolicyState, SpSelector, StageParams
from csiopt.models.universe import Scalarization, SocialUniverse
from csiopt.oracle import oracle_pav, oracle_tav
from csiopt.pipelines import minimax_tav, oav_csi, pa_step, pm_run, pnm_tav
from csiopt.rules import av_top_k

from conftest import random_election

PARAMS = StageParams(l=3, j=2, k=1)


def _universe(sd: dict[str, float], embedding=None) -> SocialUniverse:
    data = {
        "dimension": 1,
        "sd": {"points": {p: {"*": [v]} for p, v in sd.items()}},
        "agents": [{"id": "x", "traits": {"utility": 1.0}}],
        "societies": [{"id": "all", "members": ["x"]}],
    }
    if embedding:
        data["embedding"] = embedding
    return SocialUniverse.from_dict(data)


def _election(candidates: str, *approvals: str) -> ApprovalElection:
    return ApprovalElection(
        candidates=tuple(candidates),
        ballots=tuple(Ballot(voter=str(i), approve=frozenset(a)) for i, a in enumerate(approvals)),
    )


def _graph(*edges, nodes="ABC") -> PreferenceGraph:
    return PreferenceGraph(
        dimension=1,
        nodes=tuple(PrefNode(id=n) for n in nodes),
        edges=tuple(
            PrefEdge(source=u, target=v, cost=(c,), irreversible=irr) for u, v, c, irr in edges
        ),
    )


def _start(*nodes: str) -> PolicyState:
    return PolicyState(adopted=tuple(nodes), history=PathHistory(steps=tuple(nodes)))


class TestMinimaxTav:
    def test_hand_tally(self, minimax_election):
        report = minimax_tav(minimax_election, 3, 1)
        assert report.stage1.members == ("a", "b", "c")
        assert report.final.members == ("b",)
        assert report.audit["approvals"] == {"a": 5, "b": 4, "c": 3}
        assert report.audit["disapprovals"] == {"a": 4, "b": 0, "c": 1}

    def test_no_disapprovals_falls_back_to_order(self, small_election):
        assert minimax_tav(small_election, 2, 1).final.members == ("a",)

    def test_whole_slate_in_stage_one(self, minimax_election):
        assert minimax_tav(minimax_election, 4, 1).final.members == ("b",)

    @pytest.mark.parametrize("l,k", [(2, 2), (5, 1), (3, 0)])
    def test_sizes_are_strict(self, minimax_election, l, k):
        with pytest.raises(InvalidParameterError):
            minimax_tav(minimax_election, l, k)

    def test_matches_oracle_on_random_instances(self):
        rng = random.Random(31)
        for _ in range(200):
            e = random_election(rng, disapprovals=True)
            l = rng.randint(2, len(e.candidates))
            k = rng.randint(1, l - 1)
            fast = minimax_tav(e, l, k)
            slow = oracle_tav(e, l, k)
            assert fast.stage1 == slow.stage1
            assert fast.final == slow.final


class TestOav:
    def test_zero_discrimination_is_plain_approval_voting(self, small_election):
        u = _universe({"a": 0.0, "b": 0.0, "c": 0.0})
        report = oav_csi(u, small_election, 2, 0.0)
        assert report.final == av_top_k(small_election, 2)

    def test_filter_forces_the_only_fair_candidate(self, small_election):
        u = _universe({"a": 1.0, "b": 1.0, "c": 0.0})
        report = oav_csi(u, small_election, 1, 0.5)
        assert report.final.members == ("c",)
        assert [r.candidate for r in report.argmin_set] == ["c"]

    def test_threshold_is_relaxed_when_too_few_pass(self, small_election):
        u = _universe({"a": 0.9, "b": 0.7, "c": 0.8})
        report = oav_csi(u, small_election, 2, 0.1)
        assert report.audit["tau_relaxed"] == 0.8
        assert report.final.members == ("b", "c")

    def test_tau_one_matches_approval_voting(self):
        rng = random.Random(17)
        for _ in range(50):
            e = random_election(rng)
            u = _universe({c: rng.random() for c in e.candidates})
            k = rng.randint(1, len(e.candidates))
            assert oav_csi(u, e, k, 1.0).final == av_top_k(e, k)

    def test_bad_parameters(self, small_election):
        u = _universe({"a": 0.0, "b": 0.0, "c": 0.0})
        with pytest.raises(InvalidParameterError):
            oav_csi(u, small_election, 0, 0.5)
        with pytest.raises(InvalidParameterError):
            oav_csi(u, small_election, 1, 1.5)

    def test_missing_sd_point(self, small_election):
        with pytest.raises(DomainError):
            oav_csi(_universe({"a": 0.0, "b": 0.0}), small_election, 1, 0.5)

    def test_descent_over_embedding_is_audited(self, small_election):
        u = _universe(
            {"a": 0.8, "b": 0.1, "c": 0.5},
            embedding={"a": [0.0, 0.0], "b": [1.0, 0.0], "c": [0.0, 1.0]},
        )
        report = oav_csi(u, small_election, 1, 0.5)
        assert report.audit["descent_minimizer"] == "b"
        assert report.audit["descent_evals"] >= 1


class TestPnm:
    def test_constant_discrimination(self, small_election):
        u = _universe({"a": 0.4, "b": 0.4, "c": 0.4})
        report = pnm_tav(u, small_election, PARAMS)
        assert report.stage1.members == ("a", "b", "c")
        kept = [r.candidate for r in report.argmin_set]
        assert kept == ["a", "b"]
        assert report.final == oracle_pav(small_election.restrict(kept), 1).committee
        assert report.final.members == ("a",)

    def test_most_discriminatory_stage_one_member_is_dropped(self):
        e = _election("xyz", "xyz", "xyz")
        u = _universe({"x": 0.9, "y": 0.2, "z": 0.1})
        report = pnm_tav(u, e, PARAMS)
        assert [r.candidate for r in report.argmin_set] == ["z", "y"]
        assert "x" not in report.final

    def test_uniform_sdp_is_plain_scalarization(self, small_election):
        u = _universe({"a": 0.3, "b": 0.6, "c": 0.2})
        report = pnm_tav(u, small_election, PARAMS)
        for retained in report.argmin_set:
            assert retained.sd == scalarize(evaluate_sd(u.sd, retained.candidate), Scalarization())
        assert report.audit["sdp"] == [1.0]

    def test_needs_l_candidates(self, small_election):
        u = _universe({"a": 0.0, "b": 0.0, "c": 0.0})
        with pytest.raises(InvalidParameterError):
            pnm_tav(u, small_election, StageParams(l=4, j=2, k=1))

    def test_stage_params_ordering(self):
        with pytest.raises(ValueError):
            StageParams(l=2, j=2, k=1)


class TestPaStep:
    def test_singleton_graph(self):
        g = _graph(nodes="X")
        e = _election("X", "X")
        state, report = pa_step(_universe({"X": 0.3}), g, e, PolicyState(), PARAMS, 0)
        assert report.final.members == ("X",)
        assert state.history.steps == ("X",)
        assert state.adopted == ("X",)
        assert state.step_count == 1

    def test_diamond_from_an_adopted_start(self, diamond_universe, diamond, diamond_election):
        state, report = pa_step(diamond_universe, diamond, diamond_election, _start("A"), PARAMS, 0)
        assert report.audit["target"] == "D"
        assert report.audit["sources"] == ["A"]
        assert report.path == ("A", "B", "D")
        assert report.path_cost == pytest.approx(0.2)
        assert report.audit["stage2_pool"] == ["B", "D"]
        assert report.final.members == ("D",)
        assert report.final.issubset(["A", "B", "D"])
        assert state.adopted == ("A", "D")
        assert state.history.steps == ("A", "B", "D")

    def test_diamond_bootstrap_sources(self, diamond_universe, diamond, diamond_election):
        state, report = pa_step(diamond_universe, diamond, diamond_election, PolicyState(), PARAMS, 0)
        assert report.stage1.members == ("B", "C", "D")
        assert report.audit["sources"] == ["C"]
        assert report.path == ("C", "D")
        assert state.adopted == ("D",)

    def test_explicit_selector(self, diamond_universe, diamond, diamond_election):
        selector = SpSelector(mode="explicit", nodes=("B",))
        state, report = pa_step(
            diamond_universe, diamond, diamond_election, _start("A"), PARAMS, 0, selector=selector
        )
        assert report.audit["selected"] == ["B"]
        assert report.path == ("A", "B")
        assert state.adopted == ("A", "B")

    def test_random_selector_is_seeded(self, diamond_universe, diamond, diamond_election):
        selector = SpSelector(mode="random", size=2)
        runs = [
            pa_step(diamond_universe, diamond, diamond_election, _start("A"), PARAMS, 5, selector=selector)
            for _ in range(2)
        ]
        assert runs[0] == runs[1]
        selected = runs[0][1].audit["selected"]
        assert len(selected) == 2
        assert "A" not in selected

    def test_nothing_left_to_adopt(self, diamond_universe, diamond, diamond_election):
        start = PolicyState(adopted=("A", "B", "C", "D"), history=PathHistory(steps=("A", "B", "D")))
        state, report = pa_step(diamond_universe, diamond, diamond_election, start, PARAMS, 0)
        assert report.audit["exhausted"]
        assert state == start

    def test_candidates_must_be_graph_nodes(self, diamond_universe, diamond):
        e = _election("AZ", "A")
        with pytest.raises(DomainError):
            pa_step(diamond_universe, diamond, e, PolicyState(), PARAMS, 0)

    def test_knowledge_map_prices_edges(self, diamond_universe, diamond, diamond_election):
        s = Scalarization(lambda_u=1.0)
        _, report = pa_step(
            diamond_universe, diamond, diamond_election, _start("A"), PARAMS, 0, s=s,
            km=diamond_universe.knowledge_map,
        )
        # both routes price at 0.6 + 0.5 under the map; node order breaks the tie
        assert report.path == ("A", "B", "D")
        assert report.path_cost == pytest.approx(1.1)


class TestPmRun:
    def test_one_step_is_a_single_pa_step(self, diamond_universe, diamond, diamond_election):
        expected = pa_step(diamond_universe, diamond, diamond_election, _start("A"), PARAMS, 3)
        state, reports = pm_run(
            diamond_universe, diamond, diamond_election, PARAMS, 1, 3, state=_start("A")
        )
        assert (state, reports[0]) == expected
        assert len(reports) == 1

    def test_reaches_the_least_discriminatory_goal(self):
        g = _graph(("A", "B", 0.1, False), ("B", "C", 0.1, False))
        u = _universe({"A": 0.9, "B": 0.5, "C": 0.1})
        e = _election("BC", "B", "B", "C")
        state, reports = pm_run(u, g, e, PARAMS, 2, 0, state=_start("A"))
        assert [r.final.members for r in reports] == [("B",), ("C",)]
        assert state.adopted == ("A", "B", "C")
        assert state.step_count == 2

    def test_stops_when_exhausted(self):
        g = _graph(("A", "B", 0.1, False), ("B", "C", 0.1, False))
        u = _universe({"A": 0.9, "B": 0.5, "C": 0.1})
        e = _election("BC", "B", "B", "C")
        _, reports = pm_run(u, g, e, PARAMS, 5, 0, state=_start("A"))
        assert len(reports) == 3
        assert reports[-1].audit["exhausted"]

    def test_derogation_blocked_by_irreversible_step(self):
        g = _graph(("A", "B", 0.1, True), ("A", "C", 0.2, False))
        u = _universe({"A": 0.9, "B": 0.5, "C": 0.1})
        e = _election("BC", "B", "C")
        start = _start("A", "B")
        state, reports = pm_run(u, g, e, PARAMS, 3, 0, state=start)
        assert state == start
        assert len(reports) == 1
        assert reports[0].audit["no_path"]
        assert reports[0].audit["derogation"] == "blocked"

    def test_derogation_walks_back_and_retries(self):
        g = _graph(("A", "B", 0.1, False), ("B", "A", 0.1, False), ("A", "C", 0.2, False))
        u = _universe({"A": 0.9, "B": 0.5, "C": 0.1})
        e = _election("BC", "B", "C")
        state, reports = pm_run(u, g, e, PARAMS, 1, 0, state=_start("A", "B"))
        assert reports[0].audit["derogation"] == "applied"
        assert reports[0].audit["derogated_to"] == "A"
        assert reports[0].audit["removed"] == ["B"]
        assert reports[1].path == ("A", "C")
        assert state.adopted == ("A", "C")
        assert state.history.steps == ("A", "B", "A", "C")
        assert compact_history(state.history).steps == ("A", "C")

    def test_irreversible_step_blocks_a_walk_through_history(self):
        g = _graph(("A", "B", 0.1, True), ("B", "A", 0.1, False), ("A", "C", 0.2, False))
        u = _universe({"A": 0.9, "B": 0.5, "C": 0.1})
        e = _election("BC", "B", "C")
        start = _start("A", "B")
        state, reports = pm_run(u, g, e, PARAMS, 1, 0, state=start)
        assert state == start
        assert reports[0].path is None
        assert reports[0].audit["transited"] == ["A"]
        assert reports[0].audit["derogation"] == "blocked"

    def test_pa_step_does_not_reenter_history(self):
        g = _graph(("A", "B", 0.1, False), ("B", "A", 0.1, False), ("A", "C", 0.2, False))
        u = _universe({"A": 0.9, "B": 0.5, "C": 0.1})
        e = _election("BC", "B", "C")
        start = _start("A", "B")
        state, report = pa_step(u, g, e, start, PARAMS, 0)
        assert report.audit["no_path"]
        assert state == start

    def test_needs_a_positive_step_count(self, diamond_universe, diamond, diamond_election):
        with pytest.raises(InvalidParameterError):
            pm_run(diamond_universe, diamond, diamond_election, PARAMS, 0, 0)


class TestDiscriminationDominance:
    """Raising one candidate's SD never newly retains it."""

    @staticmethod
    def _instances(seed: int):
        rng = random.Random(seed)
        for _ in range(100):
            e = random_election(rng, max_candidates=8)
            sd = {c: rng.randint(0, 10) / 10 for c in e.candidates}
            raised = rng.choice(e.candidates)
            higher = {**sd, raised: min(1.0, sd[raised] + rng.randint(0, 5) / 10)}
            yield rng, e, _universe(sd), _universe(higher), raised

    @staticmethod
    def _retained(report) -> set[str]:
        return {r.candidate for r in report.argmin_set}

    def test_pnm(self):
        for rng, e, before, after, raised in self._instances(41):
            if len(e.candidates) < 3:
                continue
            l = rng.randint(3, len(e.candidates))
            j = rng.randint(2, l - 1)
            p = StageParams(l=l, j=j, k=rng.randint(1, j - 1))
            if raised not in self._retained(pnm_tav(before, e, p)):
                assert raised not in self._retained(pnm_tav(after, e, p))

    def test_pa_step(self):
        for rng, e, before, after, raised in self._instances(43):
            if len(e.candidates) < 3:
                continue
            g = _graph(nodes=e.candidates)
            l = rng.randint(3, len(e.candidates))
            j = rng.randint(2, l - 1)
            p = StageParams(l=l, j=j, k=rng.randint(1, j - 1))
            _, first = pa_step(before, g, e, PolicyState(), p, 0)
            _, second = pa_step(after, g, e, PolicyState(), p, 0)
            if raised not in self._retained(first):
                assert raised not in self._retained(second)
