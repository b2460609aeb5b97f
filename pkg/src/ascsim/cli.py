"""Command-line entry points: run, serve, assess, replay."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .agents import build_simulation
from .autonomy import (
    CapabilityProfile,
    EmptyLog,
    FunctionCapability,
    ProcessCapability,
    assess_scal,
    characteristics_check,
    classify_region,
    profile_from_scenario,
)
from .events import read_ndjson, write_ndjson
from .model import Role
from .scenario import ParseError, Scenario, ValidationError, load_scenario_file
from .server import DEFAULT_ADDR, Service, serve
from .state import fold


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ascsim", description="Supply chain simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--scenario", default="default.json", help="scenario file (default: packaged default.json)")
        p.add_argument("--seed", type=int, default=None, help="64-bit unsigned seed override")
        p.add_argument("--until", type=float, default=None, help="stop at this simulated second")
        p.add_argument("--time-scale", type=float, default=None, dest="time_scale",
                       help="simulated seconds per wall second (serve pacing)")

    run = sub.add_parser("run", help="run headless and write event log + snapshot")
    scenario_flags(run)
    run.add_argument("--out", default="ascsim-out", help="artifact directory")
    run.add_argument("--assess", action="store_true", help="print the autonomy assessment after the run")

    srv = sub.add_parser("serve", help="serve the HTTP API with paced simulated time")
    scenario_flags(srv)

    assess = sub.add_parser("assess", help="assess autonomy of a scenario run or a profile file")
    scenario_flags(assess)
    assess.add_argument("--profile", default=None, help="assess a capability profile JSON instead of running")

    replay = sub.add_parser("replay", help="rebuild the terminal snapshot from an event log")
    replay.add_argument("events", help="events.ndjson produced by a run")
    replay.add_argument("--scenario", default=None,
                        help="scenario file (default: scenario.json next to the event log)")
    replay.add_argument("--out", default=None, help="also write snapshot.json here")
    return parser


def _load(args) -> Scenario:
    return load_scenario_file(args.scenario, seed=args.seed, time_scale=getattr(args, "time_scale", None))


def _write_artifacts(out_dir: Path, scenario: Scenario, sim) -> dict[str, Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "events": out_dir / "events.ndjson",
        "snapshot": out_dir / "snapshot.json",
        "scenario": out_dir / "scenario.json",
    }
    write_ndjson(paths["events"], sim.log)
    paths["snapshot"].write_text(sim.state.snapshot_json() + "\n", encoding="utf-8")
    paths["scenario"].write_text(
        json.dumps(scenario.resolved_document(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    return paths


def _print_assessment(scenario: Scenario, events) -> int:
    try:
        profile, point = profile_from_scenario(scenario, events)
    except EmptyLog as exc:
        print(f"assessment unavailable: {exc}", file=sys.stderr)
        return 1
    level = assess_scal(profile)
    region = classify_region(point, scenario.manifold)
    print(f"L{level.level} {level.name}")
    for line in level.rationale:
        print(f"  - {line}")
    print(
        f"autonomy point: intelligence={point.intelligence:.2f} "
        f"automation={point.automation:.2f} -> {region.value}"
    )
    check = characteristics_check(profile)
    have = [name for name, flag in check["flags"].items() if flag]
    print(f"characteristics present: {', '.join(have) if have else 'none'}")
    if check["missing"]:
        print(f"characteristics missing: {', '.join(check['missing'])}")
    for violation in check["violations"]:
        print(f"  layering violation: {violation}")
    return 0


def _cmd_run(args) -> int:
    scenario = _load(args)
    sim, _ = build_simulation(scenario)
    sim.run_until_quiet(args.until)
    paths = _write_artifacts(Path(args.out), scenario, sim)
    print(
        f"run complete: {sim.log.last_seq} events, "
        f"sim time {sim.clock.now:.1f}s, artifacts in {paths['events'].parent}"
    )
    if args.assess:
        return _print_assessment(scenario, list(sim.log))
    return 0


def _cmd_serve(args) -> int:
    scenario = _load(args)
    addr = os.environ.get("ASCSIM_ADDR", DEFAULT_ADDR)
    token = os.environ.get("ASCSIM_TOKEN") or None
    static_dir = os.environ.get("ASCSIM_STATIC") or None
    if static_dir and not Path(static_dir).is_dir():
        print(f"static dir not found, ignoring: {static_dir}", file=sys.stderr)
        static_dir = None
    service = Service(
        scenario,
        time_scale=args.time_scale,
        token=token,
        until=args.until,
        static_dir=static_dir,
    )
    auth = "bearer token required" if token else "open access"
    print(f"listening on http://{addr} ({auth}, time scale {service.time_scale:g}x)")
    serve(service, addr)
    return 0


def _profile_from_file(path: str) -> CapabilityProfile:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    return CapabilityProfile(
        functions=tuple(
            FunctionCapability(
                f["name"], bool(f.get("automated", False)), bool(f.get("self_deciding", False))
            )
            for f in raw.get("functions", [])
        ),
        processes=tuple(
            ProcessCapability(
                p["name"],
                tuple(p.get("member_functions", [])),
                bool(p.get("streamlined", False)),
                bool(p.get("major", False)),
            )
            for p in raw.get("processes", [])
        ),
        all_conditions_autonomous=bool(raw.get("all_conditions_autonomous", False)),
        handles_unanticipated=bool(raw.get("handles_unanticipated", False)),
        self_learning=bool(raw.get("self_learning", False)),
        characteristics=dict(raw.get("characteristics", {})),
    )


def _cmd_assess(args) -> int:
    if args.profile:
        profile = _profile_from_file(args.profile)
        level = assess_scal(profile)
        print(f"L{level.level} {level.name}")
        for line in level.rationale:
            print(f"  - {line}")
        check = characteristics_check(profile)
        if check["missing"]:
            print(f"characteristics missing: {', '.join(check['missing'])}")
        for violation in check["violations"]:
            print(f"  layering violation: {violation}")
        return 0

    scenario = _load(args)
    sim, coordinator = build_simulation(scenario)
    sim.run_until_quiet(args.until)

    # cover every declared process at least once, so the rubric judges the
    # system's capability rather than this particular run's order mix
    completed = {
        sim.state.orders[a["order_id"]]["process"]
        for a in sim.state.assessments.values()
        if a["order_id"] in sim.state.orders
    }
    declared = [p.name for p in scenario.automation.processes]
    wholesaler = scenario.network.the_wholesaler()
    for process in declared:
        if process in completed or args.until is not None:
            continue
        if process == "replenishment":
            coordinator.place_order(wholesaler.id, scenario.default_lines_kg())
        elif process == "wholesale":
            retailers = scenario.network.by_role(Role.RETAILER)
            if not retailers:
                continue
            coordinator.place_order(retailers[0].id, scenario.default_lines_kg())
        else:
            continue
        sim.run_until_quiet()
    return _print_assessment(scenario, list(sim.log))


def _cmd_replay(args) -> int:
    events_path = Path(args.events)
    if not events_path.exists():
        print(f"event log not found: {events_path}", file=sys.stderr)
        return 2
    scenario_path = args.scenario or events_path.with_name("scenario.json")
    scenario = load_scenario_file(scenario_path)
    events = read_ndjson(events_path)
    state = fold(scenario.initial_ledgers(), events)
    snapshot = state.snapshot_json()
    print(snapshot)
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "snapshot.json").write_text(snapshot + "\n", encoding="utf-8")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "serve":
            return _cmd_serve(args)
        if args.command == "assess":
            return _cmd_assess(args)
        if args.command == "replay":
            return _cmd_replay(args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
