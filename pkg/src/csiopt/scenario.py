"""Traffic-signal policy-making scenario.

Two societies vote on four signalling options. Plain majority follows the
larger population; the less-discriminatory rule filters options by their
Social Discrimination first.
"""

import logging

from .discrimination import compare_power, evaluate_sd, scalarize, social_power_order
from .election import tally
from .errors import ValidationFailed
from .models.election import ApprovalElection, Ballot
from .models.scenario import CARS, PEDESTRIANS, TRAFFIC_OPTIONS, Report, ScenarioSpec
from .models.universe import (
    Agent,
    DiscriminationFunction,
    Society,
    SocialUniverse,
    TraitVector,
)
from .pipelines import oav_csi, pnm_tav
from .rules import absolute_majority

logger = logging.getLogger(__name__)


def _dominated(a: tuple[float, ...], b: tuple[float, ...]) -> bool:
    """a < b componentwise-or-equal with at least one strict component."""
    return all(x <= y for x, y in zip(a, b)) and a != b


def check_scenario(spec: ScenarioSpec) -> list[str]:
    """Every violated ordering between the societies, as readable inequalities."""
    problems: list[str] = []
    if set(spec.options) != set(TRAFFIC_OPTIONS) or len(spec.options) != len(TRAFFIC_OPTIONS):
        problems.append(f"options must be {list(TRAFFIC_OPTIONS)}, got {list(spec.options)}")
        return problems
    if spec.status_quo not in spec.options:
        problems.append(f"status quo '{spec.status_quo}' is not an option")

    for option in TRAFFIC_OPTIONS:
        for society in (CARS, PEDESTRIANS):
            vector = spec.sd_table.get(option, {}).get(society)
            if vector is None:
                problems.append(f"missing SD({option}, {society})")
            elif len(vector) != len(spec.axes):
                problems.append(f"SD({option}, {society}) has {len(vector)} components, expected {len(spec.axes)}")
            if society not in spec.utility_table.get(option, {}):
                problems.append(f"missing utility({option}, {society})")
    if problems:
        return problems

    sd = {o: (tuple(spec.sd_table[o][CARS]), tuple(spec.sd_table[o][PEDESTRIANS])) for o in TRAFFIC_OPTIONS}
    ut = {o: (spec.utility_table[o][CARS], spec.utility_table[o][PEDESTRIANS]) for o in TRAFFIC_OPTIONS}

    for option in ("none", "cross-walks"):
        if not _dominated(*sd[option]):
            problems.append(f"{option}: SD(cars) < SD(pedestrians) violated by {sd[option]}")
        if not ut[option][0] > ut[option][1]:
            problems.append(f"{option}: SPwr(cars) > SPwr(pedestrians) violated by {ut[option]}")
    if not _dominated(sd["traffic-lights"][1], sd["traffic-lights"][0]):
        problems.append(f"traffic-lights: SD(cars) > SD(pedestrians) violated by {sd['traffic-lights']}")
    if not ut["traffic-lights"][0] < ut["traffic-lights"][1]:
        problems.append(f"traffic-lights: SPwr(cars) < SPwr(pedestrians) violated by {ut['traffic-lights']}")
    if sd["mixed"][0] != sd["mixed"][1]:
        problems.append(f"mixed: SD(cars) = SD(pedestrians) violated by {sd['mixed']}")
    if ut["mixed"][0] != ut["mixed"][1]:
        problems.append(f"mixed: SPwr(cars) = SPwr(pedestrians) violated by {ut['mixed']}")

    gap_none = ut["none"][0] - ut["none"][1]
    gap_walks = ut["cross-walks"][0] - ut["cross-walks"][1]
    if not gap_none > gap_walks:
        problems.append(
            f"SPwr gap under none ({gap_none}) must exceed the gap under cross-walks ({gap_walks})"
        )
    return problems


def build_election(spec: ScenarioSpec) -> ApprovalElection:
    """One ballot per car driver and per pedestrian, from the templates."""
    ballots = []
    for society, prefix, count in ((CARS, "car", spec.car_count), (PEDESTRIANS, "pedestrian", spec.pedestrian_count)):
        template = spec.ballot_template[society]
        for i in range(1, count + 1):
            ballots.append(
                Ballot(
                    voter=f"{prefix}_{i}",
                    approve=frozenset(template.approve),
                    disapprove=frozenset(template.disapprove),
                )
            )
    return ApprovalElection(candidates=tuple(spec.options), ballots=tuple(ballots))


def build_universe(spec: ScenarioSpec, option: str) -> SocialUniverse:
    """Agents carry the utility they get under ``option``."""
    agents = []
    societies = []
    for society, prefix, count in ((CARS, "car", spec.car_count), (PEDESTRIANS, "pedestrian", spec.pedestrian_count)):
        members = [f"{prefix}_{i}" for i in range(1, count + 1)]
        utility = spec.utility_table[option][society]
        agents.extend(Agent(id=m, traits=TraitVector(values={"utility": utility})) for m in members)
        if members:
            societies.append(Society(id=society, members=frozenset(members)))
    sd = DiscriminationFunction(
        axes=spec.axes,
        table={o: dict(spec.sd_table[o]) for o in spec.options},
        context_aggregation=spec.context_aggregation,
    )
    return SocialUniverse(
        dimension=len(spec.axes),
        agents=tuple(agents),
        societies=tuple(societies),
        sd=sd,
    )


def run_traffic_scenario(spec: ScenarioSpec) -> Report:
    """Run the configured rule on the scenario and report its social effect."""
    problems = check_scenario(spec)
    if problems:
        raise ValidationFailed(f"Scenario '{spec.id}' violates {len(problems)} constraint(s)", problems)

    election = build_election(spec)
    before = build_universe(spec, spec.status_quo)
    sd_scalars = {
        o: scalarize(evaluate_sd(before.sd, o), spec.scalarization) for o in spec.options
    }

    if spec.rule == "absolute-majority":
        winner, majority = absolute_majority(election)
        winners = winner.members
        audit = {"strict_majority": majority}
    elif spec.ldm_mode == "oav":
        report = oav_csi(before, election, spec.params.k, spec.tau, spec.scalarization)
        winners = report.final.members
        audit = report.to_output()
    else:
        report = pnm_tav(before, election, spec.params, spec.scalarization)
        winners = report.final.members
        audit = report.to_output()

    power_before = social_power_order(before)
    power_after = social_power_order(build_universe(spec, winners[0]))
    logger.info(f"Scenario '{spec.id}' ({spec.rule}): winners {list(winners)}")

    return Report(
        scenario=spec.id,
        rule=spec.rule if spec.rule == "absolute-majority" else f"ldm-wsr/{spec.ldm_mode}",
        winners=tuple(winners),
        tallies=tally(election),
        sd_scalars=sd_scalars,
        power_before=power_before,
        power_after=power_after,
        power_change=compare_power(power_before, power_after),
        audit=audit,
        spec=spec,
    )
