"""Command-line entry point.

Subcommands:
    serve         run the HTTP service
    seed-fixtures build the synthetic engagement cohort into a data dir
    replay        run the discussion state machine offline over a script
    export        export one client's history archive (therapist-authorized)
    stats         print engagement aggregate and brush table for a data dir
    run-script    drive a whole offline session end to end from a JSON script
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from arthomework.agents.discussion import DialogueEngine, DialogueState
from arthomework.agents.principles import DialoguePrinciple, default_principles
from arthomework.agents.providers import MockChatProvider
from arthomework.canvas.jobs import TERMINAL_STATUSES
from arthomework.core.types import new_id
from arthomework.service.config import ApiConfig
from arthomework.service.state import ServiceState


def _state_for(data_dir: str, workers: bool = True) -> ServiceState:
    config = ApiConfig(data_dir=Path(data_dir))
    return ServiceState(config, start_workers=workers)


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from arthomework.service.app import create_app

    if args.config:
        config = ApiConfig.from_file(args.config)
    else:
        config = ApiConfig(data_dir=Path(args.data_dir))
    if args.host:
        config.bind_host = args.host
    if args.port:
        config.bind_port = args.port
    app = create_app(config=config)
    uvicorn.run(app, host=config.bind_host, port=config.bind_port)
    return 0


def _cmd_seed_fixtures(args: argparse.Namespace) -> int:
    from arthomework.seeding import seed_engagement_cohort

    state = _state_for(args.data_dir, workers=False)
    summary = seed_engagement_cohort(state)
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


def _principles_from(payload: dict) -> list[DialoguePrinciple]:
    raw = payload.get("principles")
    if not raw:
        return default_principles()
    return [
        DialoguePrinciple(
            principle_id=entry.get("principle_id", new_id("prn")),
            statement=entry.get("statement", ""),
            example_questions=list(entry["example_questions"]),
            position=index + 1,
        )
        for index, entry in enumerate(raw)
    ]


def _cmd_replay(args: argparse.Namespace) -> int:
    payload = json.loads(Path(args.transcript).read_text(encoding="utf-8"))
    engine = DialogueEngine(
        therapist_name=payload.get("therapist_name", "Your therapist"),
        principles=_principles_from(payload),
        provider=MockChatProvider(),
    )
    state = DialogueState(session_id="replay")
    turn = engine.open(state)
    lines = [_trace_line(turn)]
    for message in payload.get("messages", []):
        if turn.state.concluded:
            break
        turn = engine.advance(turn.state, message)
        lines.append(_trace_line(turn))
    print("\n".join(lines))
    return 0


def _trace_line(turn) -> str:
    label = turn.kind if turn.step is None else f"{turn.kind} {turn.step}"
    return f"{label}: {turn.text}"


def _cmd_export(args: argparse.Namespace) -> int:
    state = _state_for(args.data_dir, workers=False)
    path = state.export_client(args.client, args.therapist, Path(args.out))
    print(json.dumps({"archive": str(path)}))
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    state = _state_for(args.data_dir, workers=False)
    result = {
        "engagement": state.engagement().to_dict(),
        "brush_table": state.brush_stats(args.client).to_dict(),
    }
    print(json.dumps(result, indent=2, sort_keys=True))
    return 0


def _cmd_run_script(args: argparse.Namespace) -> int:
    script = json.loads(Path(args.script).read_text(encoding="utf-8"))
    state = _state_for(args.data_dir)
    client = script["client"]
    state.ensure_client(client["id"], client.get("name", client["id"]), client["therapist_id"])

    session = state.create_session(
        client["id"], script.get("width"), script.get("height")
    )
    session_id = session.session_id
    for stroke in script.get("strokes", []):
        state.add_stroke(session_id, stroke["concept"], [tuple(p) for p in stroke["polygon"]])
    for text in script.get("utterances", []):
        state.add_art_utterance(session_id, text)

    generation = state.start_generation(session_id, script.get("style"))
    deadline = time.monotonic() + float(script.get("generation_timeout_s", 15))
    job = state.poll_job(generation["job_id"])
    while job.status not in TERMINAL_STATUSES and time.monotonic() < deadline:
        time.sleep(0.02)
        job = state.poll_job(generation["job_id"])

    image_sha256 = None
    if job.generated_image_ref:
        image_sha256 = hashlib.sha256(state.docs.load_bytes(job.generated_image_ref)).hexdigest()

    turns = [state.discussion_turn(session_id)]
    messages = list(script.get("discussion_messages", []))
    guard = 0
    while not turns[-1]["state"]["concluded"] and guard < 64:
        text = messages.pop(0) if messages else "I see."
        turns.append(state.discussion_turn(session_id, text))
        guard += 1

    state.close_session(session_id)
    record = state.get_record(session_id)

    export_path = None
    if script.get("export_to"):
        export_path = str(
            state.export_client(client["id"], client["therapist_id"], Path(script["export_to"]))
        )

    state.shutdown()
    print(
        json.dumps(
            {
                "session_id": session_id,
                "prompt": generation["prompt"],
                "job_status": job.status.value,
                "generated_image_ref": job.generated_image_ref,
                "image_sha256": image_sha256,
                "agent_turns": [t["kind"] for t in turns],
                "therapist_questions": record.therapist_questions,
                "export": export_path,
            },
            indent=2,
            sort_keys=True,
        )
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arthomework")
    commands = parser.add_subparsers(dest="command", required=True)

    serve = commands.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--config", help="JSON config file")
    serve.add_argument("--data-dir", default="./data")
    serve.add_argument("--host")
    serve.add_argument("--port", type=int)
    serve.set_defaults(func=_cmd_serve)

    seed = commands.add_parser("seed-fixtures", help="build the synthetic cohort")
    seed.add_argument("--data-dir", required=True)
    seed.set_defaults(func=_cmd_seed_fixtures)

    replay = commands.add_parser("replay", help="replay a discussion script offline")
    replay.add_argument("transcript")
    replay.set_defaults(func=_cmd_replay)

    export = commands.add_parser("export", help="export a client's history archive")
    export.add_argument("--data-dir", required=True)
    export.add_argument("--client", required=True)
    export.add_argument("--therapist", required=True)
    export.add_argument("--out", required=True)
    export.set_defaults(func=_cmd_export)

    stats = commands.add_parser("stats", help="print engagement aggregate and brush table")
    stats.add_argument("--data-dir", required=True)
    stats.add_argument("--client")
    stats.set_defaults(func=_cmd_stats)

    run = commands.add_parser("run-script", help="drive one offline session end to end")
    run.add_argument("script")
    run.add_argument("--data-dir", required=True)
    run.set_defaults(func=_cmd_run_script)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
