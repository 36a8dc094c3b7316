"""Command-line entry point.

`autonet run` drives a scenario to completion (or serves it live); the
client subcommands are thin HTTP clients for a running service.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .hai.solver import SolverRequest
from .host.config import InvalidConfig
from .knowledge.seeds import build_world_knowledge, load_seed
from .runner import BUNDLED, RunSpec, bundled_path, build_runtime, run_scenario
from .simnet.loader import DocumentError
from .simnet.model import FacilityError


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="autonet")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario")
    run.add_argument("--topology", help="topology file (default: bundled)")
    run.add_argument("--scenario", required=True,
                     help=f"scenario file or bundled name {sorted(BUNDLED)}")
    run.add_argument("--agents", help="agents file (default: bundled)")
    run.add_argument("--phase", choices=["copilot", "single", "multi"],
                     default="single")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--until", type=int, help="sim-ms horizon")
    run.add_argument("--trace-out", help="directory for trace and report files")
    run.add_argument("--serve", nargs="?", const="127.0.0.1:8000", default=None,
                     metavar="ADDR", help="serve HAI endpoints at ADDR")
    run.add_argument("--interactive", action="store_true",
                     help="line-based operator REPL")

    for name, help_text in (("snapshot", "fetch the dashboard snapshot"),
                            ("solve", "ask the problem solver"),
                            ("intent", "submit an intent"),
                            ("takeover", "toggle human takeover")):
        client = sub.add_parser(name, help=f"{help_text} from a running service")
        client.add_argument("--addr", default="http://127.0.0.1:8000")
        if name in ("solve", "intent"):
            client.add_argument("text")
        if name == "takeover":
            client.add_argument("state", choices=["on", "off"])

    dump = sub.add_parser("dump-knowledge", help="emit a seeded repository as JSON")
    dump.add_argument("--seed-file", default=None)

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _run(args)
        if args.command == "dump-knowledge":
            return _dump_knowledge(args)
        return _client(args)
    except (DocumentError, FacilityError, InvalidConfig, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _run(args) -> int:
    scenario_name = args.scenario
    if scenario_name not in BUNDLED and Path(scenario_name).exists():
        scenario_name = Path(args.scenario).stem
    spec = RunSpec.resolve(
        scenario=scenario_name if args.scenario in BUNDLED else args.scenario,
        topology=args.topology,
        events=None if args.scenario in BUNDLED else args.scenario,
        agents=args.agents, phase=args.phase, seed=args.seed, until=args.until)
    if args.serve is not None or args.interactive:
        return _run_live(args, spec)

    report, runtime = run_scenario(spec)
    if args.trace_out:
        out = Path(args.trace_out)
        out.mkdir(parents=True, exist_ok=True)
        runtime.trace.write(out / "trace.jsonl")
        for agent_id in sorted(runtime.agents):
            runtime.trace.write(out / f"trace_{agent_id}.jsonl", agent=agent_id)
        (out / "report.json").write_text(report.to_json() + "\n")
    print(report.to_json())
    return report.exit_status


def _run_live(args, spec: RunSpec) -> int:
    from .service.serve import ServeRuntime

    runtime = build_runtime(spec)
    serve = ServeRuntime(runtime, until=spec.until)
    serve.start()
    if args.interactive:
        return _repl(serve)
    import uvicorn

    from .service.app import create_app
    host, _, port = args.serve.partition(":")
    uvicorn.run(create_app(serve), host=host or "127.0.0.1",
                port=int(port or 8000), log_level="warning")
    serve.stop()
    return 0


def _repl(serve) -> int:
    """Line commands: snapshot | intent <text> | solve <text> |
    takeover on|off | quit."""
    agent = serve.runtime.hai_agent()
    if agent is None:
        print("no HAI agent in this phase", file=sys.stderr)
        return 2
    print("autonet> commands: snapshot, intent <text>, solve <text>, "
          "takeover on|off, quit")
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        command, _, rest = line.partition(" ")
        try:
            if command == "quit":
                break
            elif command == "snapshot":
                snap = serve.call(lambda: agent.hai.snapshot())
                print(json.dumps(snap.describe(), sort_keys=True))
            elif command == "intent":
                receipt = serve.call(lambda: agent.hai.submit(rest))
                print(json.dumps(receipt.describe(), sort_keys=True))
            elif command == "solve":
                response = serve.call(
                    lambda: agent.hai.solve(SolverRequest(text=rest)))
                print(json.dumps(response.describe(), sort_keys=True))
            elif command == "takeover":
                receipt = serve.call(lambda: agent.hai.takeover(rest == "on"))
                print(json.dumps(receipt.describe(), sort_keys=True))
            else:
                print(f"unknown command {command!r}", file=sys.stderr)
        except Exception as exc:
            print(f"error: {exc}", file=sys.stderr)
    serve.stop()
    return 0


def _client(args) -> int:
    import httpx

    base = args.addr.rstrip("/")
    if args.command == "snapshot":
        response = httpx.get(f"{base}/snapshot", timeout=10.0)
    elif args.command == "solve":
        response = httpx.post(f"{base}/solve", json={"text": args.text}, timeout=10.0)
    elif args.command == "intent":
        response = httpx.post(f"{base}/intent", json={"text": args.text}, timeout=10.0)
    else:
        response = httpx.post(f"{base}/takeover",
                              json={"enabled": args.state == "on"}, timeout=10.0)
    print(json.dumps(response.json(), sort_keys=True, indent=2))
    return 0 if response.is_success else 1


def _dump_knowledge(args) -> int:
    seed = load_seed(args.seed_file or bundled_path("knowledge_seed.json"))
    wk = build_world_knowledge("dump", seed)
    print(json.dumps(wk.dump(), sort_keys=True, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
