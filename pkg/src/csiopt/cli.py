"""Command-line interface for csi-opt."""

import csv
import functools
import io
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

import click
import numpy as np
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table

from .batch import load_manifest, run_batch
from .config import PROFILES_DIR, ensure_profiles_dir, get_default_profile, get_default_seed
from .descent import coordinate_descent, objective_from_spec
from .election import approval_score, ensure_valid, tally, validate_election
from .errors import CsiError
from .graph import validate_history
from .models.descent import DescentConfig
from .models.election import ApprovalElection, PavWeights
from .models.graph import PathHistory, PreferenceGraph
from .models.pipeline import PolicyState, StageParams
from .models.profile import RunProfile, list_profiles, load_profile
from .models.scenario import ScenarioSpec, load_scenario
from .models.universe import Scalarization, SocialUniverse
from .oracle import oracle_path, oracle_pav, oracle_tav
from .pipelines import minimax_tav, oav_csi, pa_step, pm_run, pnm_tav
from .rules import av_top_k, pav_exact, pav_greedy
from .scenario import check_scenario, run_traffic_scenario

# Results go to stdout; everything human-facing goes to stderr
console = Console(stderr=True)

NO_PATH_EXIT = 4


def handle_errors(fn):
    """Print library errors in red and exit with their code."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except CsiError as e:
            console.print(f"[red]Error: {e}[/red]")
            for v in getattr(e, "violations", []):
                console.print(f"[dim]  {v}[/dim]")
            sys.exit(e.exit_code)
        except (ValidationError, FileNotFoundError, json.JSONDecodeError) as e:
            console.print(f"[red]Error: {e}[/red]")
            sys.exit(2)

    return wrapper


def emit(data, out: Optional[str]) -> None:
    """Write canonical JSON to stdout and optionally to a file."""
    text = json.dumps(data, indent=2, sort_keys=True)
    click.echo(text)
    if out:
        Path(out).write_text(text + "\n")
        console.print(f"[dim]Saved: {out}[/dim]")


def emit_tallies(rows: list[dict], out: Optional[str]) -> None:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=["candidate", "approve", "disapprove"], lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    click.echo(buf.getvalue(), nl=False)
    if out:
        Path(out).write_text(buf.getvalue())


def load_election(path: str) -> ApprovalElection:
    if Path(path).suffix.lower() == ".csv":
        return ApprovalElection.from_csv(path)
    return ApprovalElection.from_json(path)


def resolve_profile(profile_id: Optional[str]) -> RunProfile:
    """Named profile, else the configured default, else built-in defaults."""
    if profile_id:
        return load_profile(profile_id)
    try:
        return load_profile(get_default_profile())
    except FileNotFoundError:
        return RunProfile(id="builtin", name="Built-in defaults")


def parse_weights(alpha: str, k: int) -> PavWeights:
    if alpha == "harmonic":
        return PavWeights.harmonic(k)
    return PavWeights.from_file(alpha)


@click.group()
@click.version_option(version="0.1.0")
@click.option("--verbose", "-v", is_flag=True, help="Log progress to stderr")
def cli(verbose: bool):
    """Approval committee rules and discrimination-minimizing pipelines.

    Every result is printed as JSON on stdout.
    """
    if verbose:
        logging.basicConfig(
            level=logging.DEBUG,
            format="%(message)s",
            handlers=[RichHandler(console=console, show_path=False)],
        )


@cli.command()
@click.argument("election_file", type=click.Path(exists=True))
@click.option("--rule", "-r", type=click.Choice(["av", "pav-exact", "pav-greedy"]), default="pav-exact")
@click.option("--k", "-k", type=int, required=True, help="Committee size")
@click.option("--alpha", default="harmonic", help="'harmonic' or a JSON file of PAV weights")
@click.option("--out", default=None, help="Also write the result to this file")
@handle_errors
def mwsr(election_file: str, rule: str, k: int, alpha: str, out: Optional[str]):
    """Run a multi-winner selection rule.

    Examples:

        csi-opt mwsr election.json --rule pav-exact --k 2

        csi-opt mwsr ballots.csv --rule av --k 3
    """
    election = load_election(election_file)
    ensure_valid(election)
    if rule == "av":
        committee = av_top_k(election, k)
        total = sum(approval_score(election, c) for c in committee.members)
        objective = Fraction(total)
        result = {
            "rule": "av",
            "committee": list(committee.members),
            "objective_num": objective.numerator,
            "objective_den": objective.denominator,
            "ties": 1,
        }
    else:
        w = parse_weights(alpha, k)
        fn = pav_exact if rule == "pav-exact" else pav_greedy
        result = fn(election, k, w).to_output()
    emit(result, out)


@cli.command()
@click.argument("election_file", type=click.Path(exists=True))
@click.option("--l", "l", type=int, required=True, help="Stage-one committee size")
@click.option("--k", "-k", type=int, required=True, help="Final committee size")
@click.option("--out", default=None, help="Also write the result to this file")
@handle_errors
def tav(election_file: str, l: int, k: int, out: Optional[str]):
    """Two-stage minimax approval vote."""
    report = minimax_tav(load_election(election_file), l, k)
    emit(report.to_output(), out)


@cli.command()
@click.argument("mode", type=click.Choice(["oav", "pnm", "pa", "pm"]))
@click.option("--universe", "-u", "universe_file", type=click.Path(exists=True), required=True)
@click.option("--election", "-e", "election_file", type=click.Path(exists=True), required=True)
@click.option("--graph", "-g", "graph_file", type=click.Path(exists=True), default=None,
              help="Preference graph (pa and pm only)")
@click.option("--l", "l", type=int, default=None)
@click.option("--j", "j", type=int, default=None)
@click.option("--k", "k", type=int, default=None)
@click.option("--tau", type=float, default=None, help="SD threshold (oav only)")
@click.option("--seed", type=int, default=None, help="Seed for every random choice")
@click.option("--steps", type=int, default=1, help="Aggregation steps (pm only)")
@click.option("--start", default=None, help="Comma-separated history to start from (pa and pm)")
@click.option("--profile", "-p", default=None, help="Run profile to use")
@click.option("--out", default=None, help="Also write the result to this file")
@handle_errors
def csi(
    mode: str,
    universe_file: str,
    election_file: str,
    graph_file: Optional[str],
    l: Optional[int],
    j: Optional[int],
    k: Optional[int],
    tau: Optional[float],
    seed: Optional[int],
    steps: int,
    start: Optional[str],
    profile: Optional[str],
    out: Optional[str],
):
    """Run a coherent social inclusion pipeline.

    Examples:

        csi-opt csi oav -u universe.json -e election.json --k 1 --tau 0.4

        csi-opt csi pm -u universe.json -e election.json -g graph.json --steps 3
    """
    prof = resolve_profile(profile)
    seed = get_default_seed() if seed is None else seed
    universe = prof.configure_universe(SocialUniverse.from_json(universe_file))
    election = load_election(election_file)
    descent = prof.descent.model_copy(update={"seed": seed})
    w = prof.weights()
    console.print(f"[dim]Profile: {prof.name}, seed {seed}[/dim]")

    if mode == "oav":
        threshold = prof.tau if tau is None else tau
        size = prof.stage.k if k is None else k
        emit(oav_csi(universe, election, size, threshold, prof.scalarization, descent).to_output(), out)
        return

    params = StageParams(
        l=l if l is not None else prof.stage.l,
        j=j if j is not None else prof.stage.j,
        k=k if k is not None else prof.stage.k,
    )
    if mode == "pnm":
        emit(pnm_tav(universe, election, params, prof.scalarization, w, descent).to_output(), out)
        return

    if graph_file is None:
        raise click.UsageError(f"csi {mode} needs --graph")
    graph = PreferenceGraph.from_json(graph_file)
    km = prof.knowledge_map_for(universe)
    state = PolicyState()
    if start:
        history = PathHistory(steps=tuple(s.strip() for s in start.split(",") if s.strip()))
        validate_history(graph, history)
        state = PolicyState(adopted=tuple(dict.fromkeys(history.steps)), history=history)

    if mode == "pa":
        new_state, report = pa_step(
            universe, graph, election, state, params, seed,
            prof.scalarization, prof.sp_selector, w, km, descent,
        )
        emit({"report": report.to_output(), "state": new_state.model_dump(mode="json")}, out)
        if report.audit.get("no_path"):
            sys.exit(NO_PATH_EXIT)
        return

    final_state, reports = pm_run(
        universe, graph, election, params, steps, seed,
        prof.scalarization, prof.sp_selector, w, km, descent, state=state,
    )
    emit(
        {
            "reports": [r.to_output() for r in reports],
            "state": final_state.model_dump(mode="json"),
        },
        out,
    )
    if reports and reports[-1].audit.get("no_path"):
        sys.exit(NO_PATH_EXIT)


@cli.command()
@click.argument("scenario_id", default="traffic-signals")
@click.option("--rule", type=click.Choice(["absolute-majority", "ldm-wsr"]), default=None)
@click.option("--mode", type=click.Choice(["oav", "pnm"]), default=None, help="LDM-WSR pipeline")
@click.option("--cars", type=int, default=None, help="Number of car drivers")
@click.option("--pedestrians", type=int, default=None, help="Number of pedestrians")
@click.option("--tau", type=float, default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
              help="csv prints the per-option tallies only")
@click.option("--out", default=None, help="Also write the result to this file")
@handle_errors
def scenario(
    scenario_id: str,
    rule: Optional[str],
    mode: Optional[str],
    cars: Optional[int],
    pedestrians: Optional[int],
    tau: Optional[float],
    fmt: str,
    out: Optional[str],
):
    """Run the traffic-signal policy scenario.

    Examples:

        csi-opt scenario --rule absolute-majority

        csi-opt scenario --cars 10 --pedestrians 10
    """
    spec = load_scenario(scenario_id)
    overrides = {
        key: value
        for key, value in (
            ("rule", rule),
            ("ldm_mode", mode),
            ("car_count", cars),
            ("pedestrian_count", pedestrians),
            ("tau", tau),
        )
        if value is not None
    }
    if overrides:
        spec = ScenarioSpec(**{**spec.model_dump(), **overrides})

    report = run_traffic_scenario(spec)
    console.print(f"[green]Winner: {', '.join(report.winners)}[/green] ({report.rule})")
    if fmt == "csv":
        emit_tallies(report.tallies, out)
    else:
        emit(report.to_output(), out)


@cli.command()
@click.argument("kind", type=click.Choice(["pav", "tav", "path"]))
@click.argument("instance_file", type=click.Path(exists=True))
@click.option("--k", "-k", type=int, default=None)
@click.option("--l", "l", type=int, default=None)
@click.option("--source", "sources", multiple=True, help="Path source node (repeatable)")
@click.option("--target", default=None, help="Path target node")
@click.option("--out", default=None, help="Also write the result to this file")
@handle_errors
def oracle(
    kind: str,
    instance_file: str,
    k: Optional[int],
    l: Optional[int],
    sources: tuple[str, ...],
    target: Optional[str],
    out: Optional[str],
):
    """Brute-force reference answers for small instances.

    Examples:

        csi-opt oracle pav election.json --k 2

        csi-opt oracle path graph.json --source A --target D
    """
    if kind == "pav":
        if k is None:
            raise click.UsageError("oracle pav needs --k")
        emit(oracle_pav(load_election(instance_file), k).to_output(), out)
    elif kind == "tav":
        if k is None or l is None:
            raise click.UsageError("oracle tav needs --l and --k")
        emit(oracle_tav(load_election(instance_file), l, k).to_output(), out)
    else:
        if not sources or target is None:
            raise click.UsageError("oracle path needs --source and --target")

        result = oracle_path(PreferenceGraph.from_json(instance_file), sources, target, Scalarization())
        emit({"path": list(result.path) if result.found else None, "cost": result.cost}, out)
        if not result.found:
            sys.exit(NO_PATH_EXIT)


@cli.command()
@click.argument("input_file", type=click.Path(exists=True))
@click.option("--kind", type=click.Choice(["election", "universe", "graph", "scenario"]), default="election")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
              help="csv prints the election tally instead of the verdict")
@click.option("--out", default=None, help="Also write the result to this file")
def validate(input_file: str, kind: str, fmt: str, out: Optional[str]):
    """Check an input file and list every violation.

    Exits 2 when the input is invalid.
    """
    violations: list = []
    extra: dict = {}
    try:
        if kind == "election":
            election = load_election(input_file)
            violations = [v.model_dump() for v in validate_election(election)]
            if not violations:
                extra["tally"] = tally(election)
        elif kind == "universe":
            SocialUniverse.from_json(input_file)
        elif kind == "graph":
            PreferenceGraph.from_json(input_file)
        else:
            violations = [{"reason": "scenario", "detail": p} for p in check_scenario(ScenarioSpec.from_yaml(Path(input_file)))]
    except ValidationError as e:
        violations = [{"reason": err["type"], "detail": err["msg"], "loc": list(err["loc"])} for err in e.errors()]
    except (CsiError, KeyError, json.JSONDecodeError) as e:
        violations = [{"reason": type(e).__name__, "detail": str(e)}]

    if fmt == "csv" and "tally" in extra:
        emit_tallies(extra["tally"], out)
    else:
        emit({"kind": kind, "valid": not violations, "violations": violations, **extra}, out)

    if violations:
        console.print(f"[red]{len(violations)} violation(s) in {input_file}[/red]")
        sys.exit(2)
    console.print(f"[green]{input_file} is a valid {kind}[/green]")


@cli.command()
@click.option("--objective", "objective_file", type=click.Path(exists=True), required=True,
              help="JSON objective spec: kind, center, scale, bounds")
@click.option("--x0", required=True, help="Comma-separated start point")
@click.option("--tol", type=float, default=1e-8)
@click.option("--step", type=float, default=1.0, help="Initial step for every coordinate")
@click.option("--max-evals", type=int, default=100_000)
@click.option("--restarts", type=int, default=0)
@click.option("--seed", type=int, default=None)
@click.option("--out", default=None, help="Also write the result to this file")
@handle_errors
def descend(
    objective_file: str,
    x0: str,
    tol: float,
    step: float,
    max_evals: int,
    restarts: int,
    seed: Optional[int],
    out: Optional[str],
):
    """Minimize a diagnostic objective with adaptive coordinate descent."""
    with open(objective_file, "r") as f:
        handle = objective_from_spec(json.load(f))
    start = np.asarray([float(x) for x in x0.split(",")], dtype=float)
    cfg = DescentConfig(
        initial_step=step,
        tol=tol,
        max_evals=max_evals,
        restarts=restarts,
        seed=get_default_seed() if seed is None else seed,
    )
    x_best, trace = coordinate_descent(handle, start, cfg)
    emit(
        {
            "x_best": list(x_best),
            "value": handle.eval(x_best),
            "evals_used": trace.evals_used,
            "accepted_moves": trace.accepted_moves,
            "converged": trace.converged,
        },
        out,
    )


@cli.command()
@click.argument("manifest_file", type=click.Path(exists=True))
@click.option("--concurrent", "-c", type=int, default=None, help="Max concurrent checks")
@click.option("--out", default=None, help="Also write the result to this file")
@handle_errors
def batch(manifest_file: str, concurrent: Optional[int], out: Optional[str]):
    """Compare fast answers against the oracles over a manifest.

    The manifest is a JSON array of checks:

        [
            {"check": "pav", "election": "e.json", "k": 2},
            {"check": "tav", "election": "e.json", "l": 3, "k": 1},
            {"check": "path", "graph": "g.json", "sources": ["A"], "target": "D"}
        ]

    Exits 1 when any check disagrees.
    """
    items = load_manifest(manifest_file)
    console.print(f"[cyan]Agreement Batch[/cyan]")
    console.print(f"[dim]Items: {len(items)}[/dim]")
    stats = run_batch(items, max_concurrent=concurrent)
    emit(stats.to_output(), out)

    colour = "green" if stats.disagreed == 0 and stats.failed == 0 else "yellow"
    console.print(
        f"[{colour}]Agreed: {stats.agreed}/{stats.total}, "
        f"disagreed: {stats.disagreed}, failed: {stats.failed}[/{colour}]"
    )
    if stats.disagreed:
        sys.exit(1)


@cli.command()
def profiles():
    """List available run profiles."""
    ensure_profiles_dir()
    available = list_profiles()

    if not available:
        console.print("[yellow]No profiles found.[/yellow]")
        console.print(f"[dim]Create profiles in: {PROFILES_DIR}[/dim]")
        return

    table = Table(title="Run Profiles")
    table.add_column("ID", style="cyan")
    table.add_column("Name", style="bold")
    table.add_column("Scalarization", style="green")
    table.add_column("l/j/k", style="yellow")
    table.add_column("Description", style="dim")

    for profile_id in available:
        try:
            prof = load_profile(profile_id)
            desc = prof.description[:40] + "..." if len(prof.description) > 40 else prof.description
            table.add_row(
                prof.id,
                prof.name,
                prof.scalarization.mode,
                f"{prof.stage.l}/{prof.stage.j}/{prof.stage.k}",
                desc or "-",
            )
        except (ValidationError, OSError) as e:
            table.add_row(profile_id, "[red]Error[/red]", "-", "-", str(e)[:40])

    console.print(table)
    emit(available, None)


@cli.command()
@click.argument("profile_id")
def info(profile_id: str):
    """Show detailed information about a profile."""
    try:
        prof = load_profile(profile_id)
    except FileNotFoundError:
        console.print(f"[red]Error: Profile '{profile_id}' not found[/red]")
        available = list_profiles()
        if available:
            console.print(f"[dim]Available profiles: {', '.join(available)}[/dim]")
        sys.exit(2)

    console.print(f"\n[bold cyan]{prof.name}[/bold cyan] ({prof.id})")
    if prof.description:
        console.print(f"[dim]{prof.description}[/dim]\n")

    console.print("[bold]Configuration:[/bold]")
    console.print(f"  Scalarization: {prof.scalarization.mode} (lambda_u={prof.scalarization.lambda_u})")
    console.print(f"  Stage sizes: l={prof.stage.l} j={prof.stage.j} k={prof.stage.k}")
    console.print(f"  Threshold tau: {prof.tau}")
    console.print(f"  SP selector: {prof.sp_selector.mode}")
    console.print(f"  Knowledge map: {prof.knowledge_map_source if prof.use_knowledge_map else 'off'}")

    console.print("\n[bold]Descent:[/bold]")
    console.print(Panel(json.dumps(prof.descent.model_dump(mode="json"), indent=2), border_style="dim"))
    emit(prof.model_dump(mode="json"), None)


if __name__ == "__main__":
    cli()
