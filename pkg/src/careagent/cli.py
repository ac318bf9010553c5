"""Command line entry points: serve, chat, replay, tasks."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .config import load_config
from .engine import Engine
from .errors import AgentError
from .replay import replay


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="careagent", description="Conversational health agent engine")
    sub = parser.add_subparsers(dest="command", required=True)

    serve_p = sub.add_parser("serve", help="run the HTTP chat service")
    serve_p.add_argument("--config", required=True)

    chat_p = sub.add_parser("chat", help="interactive terminal chat")
    chat_p.add_argument("--config", required=True)
    chat_p.add_argument("--language", default=None)

    replay_p = sub.add_parser("replay", help="replay a scripted fixture against a golden transcript")
    replay_p.add_argument("--fixture", required=True)
    replay_p.add_argument("--golden", required=True)

    tasks_p = sub.add_parser("tasks", help="task registry commands")
    tasks_sub = tasks_p.add_subparsers(dest="tasks_command", required=True)
    tasks_list = tasks_sub.add_parser("list", help="list registered tasks")
    tasks_list.add_argument("--config", required=True)
    tasks_list.add_argument("--json", action="store_true", dest="as_json")

    return parser


def _cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    serve(load_config(args.config))
    return 0


def _cmd_chat(args: argparse.Namespace) -> int:
    engine = Engine(load_config(args.config))
    session = engine.create_session(language=args.language)
    print(f"session {session.session_id}; type a question, or /quit to leave")
    while True:
        try:
            query = input("you> ").strip()
        except (EOFError, KeyboardInterrupt):
            print()
            return 0
        if not query:
            continue
        if query in ("/quit", "/exit"):
            return 0
        try:
            result = engine.respond(session.session_id, query)
        except AgentError as exc:
            print(f"error: {exc}")
            continue
        print(f"agent> {result['answer']}")
        if result["tasks_used"]:
            print(f"      [tools: {', '.join(result['tasks_used'])}]")


def _cmd_replay(args: argparse.Namespace) -> int:
    report = replay(args.fixture, args.golden)
    print(report.summary())
    return 0 if report.passed else 1


def _cmd_tasks_list(args: argparse.Namespace) -> int:
    engine = Engine(load_config(args.config))
    summaries = engine.task_summaries()
    if args.as_json:
        print(json.dumps(summaries, indent=2))
    else:
        for task in summaries:
            stored = " [datapipe]" if task["output_type"] else ""
            print(f"{task['name']} ({task['chat_name']}){stored}: {task['description']}")
    return 0


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(name)s %(message)s")
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "serve":
            return _cmd_serve(args)
        if args.command == "chat":
            return _cmd_chat(args)
        if args.command == "replay":
            return _cmd_replay(args)
        if args.command == "tasks":
            return _cmd_tasks_list(args)
    except AgentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
