"""Operator CLI: serve the API, export phylogenies, run automated evolution,
and check store integrity.

Exit codes: 0 success, 2 usage/config errors, 3 domain/data errors,
4 integrity failures.
"""

from __future__ import annotations

import argparse
import logging
import signal
import sys
import threading

from .archive import graph_to_dot, open_store
from .config import ServerConfig, load_config
from .errors import CorruptStore, InvalidArgument, StemmaError, UnknownDomain
from .session import POLICIES, run_automated
from .server import serve

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_INTEGRITY = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stemma",
                                     description="interactive-evolution platform")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--config", help="path to key=value config file")
    p_serve.add_argument("--port", type=int, help="override the configured port")

    p_export = sub.add_parser("export", help="export a domain's phylogeny")
    p_export.add_argument("--store", required=True)
    p_export.add_argument("--domain", required=True)
    p_export.add_argument("--format", choices=("dot", "json"), default="json")
    p_export.add_argument("-o", "--output", help="output file (default stdout)")

    p_auto = sub.add_parser("auto", help="run automated evolution")
    p_auto.add_argument("--store", required=True)
    p_auto.add_argument("--domain", required=True)
    p_auto.add_argument("--policy", choices=sorted(POLICIES), default="random")
    p_auto.add_argument("--steps", type=int, required=True)
    p_auto.add_argument("--publish-every", type=int, default=5)
    p_auto.add_argument("--seed", type=int, default=0)

    p_validate = sub.add_parser("validate-store", help="check archive invariants")
    p_validate.add_argument("--store", required=True)
    return parser


def cmd_serve(args) -> int:
    if args.config:
        try:
            config = load_config(args.config)
        except FileNotFoundError:
            print(f"error: config file not found: {args.config}", file=sys.stderr)
            return EXIT_USAGE
        except InvalidArgument as exc:
            print(f"error: {exc.message}", file=sys.stderr)
            return EXIT_USAGE
    else:
        config = ServerConfig()
    if args.port is not None:
        config.port = args.port

    stop = threading.Event()

    def _stop(signum, frame):
        stop.set()

    # handlers go in before the socket opens: once the banner is printed,
    # SIGTERM/SIGINT are guaranteed to shut down cleanly
    signal.signal(signal.SIGINT, _stop)
    signal.signal(signal.SIGTERM, _stop)

    try:
        handle = serve(config)
    except CorruptStore as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return EXIT_DATA
    except InvalidArgument as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return EXIT_DATA
    print(f"listening on {handle.host}:{handle.port}", flush=True)
    stop.wait()
    handle.shutdown()
    return EXIT_OK


def cmd_export(args) -> int:
    try:
        archive = open_store(args.store)
    except CorruptStore as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return EXIT_DATA
    try:
        graph = archive.phylogeny(args.domain)
    except UnknownDomain as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return EXIT_DATA
    finally:
        archive.close()
    if args.format == "dot":
        text = graph_to_dot(graph)
    else:
        import json
        text = json.dumps(graph.to_json(), indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_auto(args) -> int:
    if args.steps < 1:
        print("error: --steps must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if args.publish_every < 1:
        print("error: --publish-every must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        archive = open_store(args.store)
    except CorruptStore as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return EXIT_DATA
    try:
        policy = POLICIES[args.policy]()
        result = run_automated(archive, args.domain, policy, args.steps,
                               args.publish_every, args.seed)
    except StemmaError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        archive.close()
        return EXIT_DATA
    for artifact_id in result.published_ids:
        print(artifact_id)
    archive.close()
    return EXIT_OK


def cmd_validate_store(args) -> int:
    try:
        archive = open_store(args.store)
    except CorruptStore as exc:
        print(f"integrity: {exc.message}", file=sys.stderr)
        return EXIT_INTEGRITY
    violations = archive.validate()
    archive.close()
    if violations:
        for v in violations:
            print(f"integrity: {v}", file=sys.stderr)
        print(f"{len(violations)} violation(s) found", file=sys.stderr)
        return EXIT_INTEGRITY
    print("store is valid")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    handlers = {
        "serve": cmd_serve,
        "export": cmd_export,
        "auto": cmd_auto,
        "validate-store": cmd_validate_store,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
