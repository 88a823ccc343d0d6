"""Headless runner and frame inspector.

Exit codes: 0 ok, 1 internal error, 2 bad input.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

from . import codec
from .scenario import ScenarioInvalid, load_scenario
from .sim_engine import run_scenario, trace_lines, write_trace


def cmd_run(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.seed is not None:
        scenario = dataclasses.replace(
            scenario, seed=args.seed,
            channel=dataclasses.replace(scenario.channel, rng_seed=args.seed))
    duration = args.duration if args.duration is not None else scenario.duration
    events, metrics = run_scenario(scenario, duration)
    if args.out:
        write_trace(events, args.out)
    print(f"ticks={int(round(duration / scenario.dt))}")
    for key, value in metrics.summary().items():
        print(f"{key}={value}")
    return 0


def cmd_frame(args) -> int:
    if args.op == "encode":
        address = int(args.value[0], 0)
        data = int(args.value[1], 0)
        print(codec.frame_to_hex(codec.encode_frame(address, data)))
    else:
        address, data = codec.hex_to_frame(args.value[0])
        print(f"address=0x{address:02X} data=0x{data:X}")
    return 0


def cmd_trace(args) -> int:
    scenario = load_scenario(args.scenario)
    events, _ = run_scenario(scenario)
    for line in trace_lines(events):
        print(line)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    port = int(os.environ.get("ZONEGOV_PORT", "8000"))
    uvicorn.run(create_app(config_path=args.config, ui_dir=args.ui),
                host=args.host, port=port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zonegov")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario, print metrics summary")
    run.add_argument("scenario", help="scenario file (json)")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--duration", type=float, default=None)
    run.add_argument("--out", default=None, help="write the event trace here")
    run.set_defaults(fn=cmd_run)

    frame = sub.add_parser("frame", help="encode/decode one beacon frame")
    frame.add_argument("op", choices=("encode", "decode"))
    frame.add_argument("value", nargs="+",
                       help="encode: ADDRESS DATA; decode: 4 hex digits")
    frame.set_defaults(fn=cmd_frame)

    trace = sub.add_parser("trace", help="run a scenario, print the trace")
    trace.add_argument("scenario")
    trace.set_defaults(fn=cmd_trace)

    serve = sub.add_parser("serve", help="start the control-plane service")
    serve.add_argument("--config", default=None, help="zone config file path")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--ui", default=None,
                       help="serve the operator console from this directory at /ui")
    serve.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ScenarioInvalid, codec.CodecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - last-resort boundary
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
