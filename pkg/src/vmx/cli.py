"""Command line front end.

    vmx ingest <manifest>
    vmx run --manifest <path> --task <name> [--backend live|scripted]
            [--script rules.json] [--seed N] [--min-support K]
            [--stages outcomes dai ...] [--out graphs/] [--run-dir runs/...]
    vmx validate <graph.json>
    vmx report <run-dir>
    vmx serve --graphs <dir> [--port 8000]

Exit codes: 0 ok, 2 validation failure, 3 stage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import graph as graph_store
from . import pipeline as pipeline_mod
from .corpus import ManifestError, load_corpus
from .gateway import Backend, GatewayConfig, ModelGateway, Script

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_STAGE = 3

log = logging.getLogger(__name__)


def _cmd_ingest(args) -> int:
    try:
        corpus = load_corpus(Path(args.manifest))
    except ManifestError as exc:
        print(f"manifest error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    print(f"task: {corpus.task_name}")
    print(f"videos ingested: {len(corpus)}")
    degraded = sum(1 for v in corpus.videos.values() if v.degraded)
    if degraded:
        print(f"degraded (no frames): {degraded}")
    if corpus.ingest_report:
        print(f"failures: {len(corpus.ingest_report)}")
        for failure in corpus.ingest_report:
            print(f"  {failure.source}: {failure.error}")
        return EXIT_VALIDATION
    return EXIT_OK


def _cmd_run(args) -> int:
    try:
        corpus = load_corpus(Path(args.manifest))
    except ManifestError as exc:
        print(f"manifest error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if corpus.task_name != args.task:
        print(
            f"manifest task {corpus.task_name!r} does not match --task {args.task!r}",
            file=sys.stderr,
        )
        return EXIT_VALIDATION

    gateway_config = GatewayConfig(
        backend=Backend(args.backend),
        model_name=args.model_name,
        asset_root=corpus.root,
    )
    script = Script.from_file(Path(args.script)) if args.script else None
    gateway = ModelGateway(gateway_config, script=script)
    config = pipeline_mod.PipelineConfig(
        min_support=args.min_support,
        seed=args.seed,
        stages=tuple(args.stages) if args.stages else pipeline_mod.STAGES,
        workers=args.workers,
    )
    run_dir = Path(args.run_dir) if args.run_dir else None
    try:
        task_graph, run = pipeline_mod.run_pipeline(corpus, gateway, config, run_dir=run_dir)
    except pipeline_mod.StageError as exc:
        print(f"stage error: {exc}", file=sys.stderr)
        return EXIT_STAGE
    finally:
        gateway.close()

    out_dir = Path(args.out)
    out_path = out_dir / f"{graph_store.task_slug(corpus.task_name)}.json"
    graph_store.save(task_graph, out_path)
    print(f"graph written: {out_path}")
    print(f"run dir: {run.run_dir}")
    summary = pipeline_mod.report(run)
    print(
        f"videos: {summary['videos_total']}  clustered: {summary['clustered']}  "
        f"calls: {sum(summary['call_counts'].values())}  "
        f"wall: {summary['wall_time_s']}s"
    )
    return EXIT_OK


def _cmd_validate(args) -> int:
    try:
        task_graph = graph_store.load(Path(args.graph))
        graph_store.validate(task_graph)
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"unreadable graph: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (graph_store.ConsistencyError, graph_store.VersionError) as exc:
        print(f"invalid graph: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    print(f"ok: {args.graph}")
    return EXIT_OK


def _cmd_report(args) -> int:
    path = Path(args.run_dir) / "report.json"
    try:
        print(path.read_text(encoding="utf-8").rstrip())
    except OSError as exc:
        print(f"no report at {path}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(Path(args.graphs))
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vmx", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load a task manifest and print the ingest report")
    p.add_argument("manifest")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("run", help="run the extraction pipeline for one task")
    p.add_argument("--manifest", required=True)
    p.add_argument("--task", required=True)
    p.add_argument("--backend", choices=["live", "scripted"], default="scripted")
    p.add_argument("--model-name", default="gpt-4o-2024-05-13", dest="model_name")
    p.add_argument("--script", help="scripted-backend ruleset file (JSON)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--min-support", type=int, default=None, dest="min_support")
    p.add_argument("--stages", nargs="*", choices=list(pipeline_mod.STAGES))
    p.add_argument("--workers", type=int, default=4)
    p.add_argument("--out", default="graphs")
    p.add_argument("--run-dir", dest="run_dir")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("validate", help="check a persisted graph's integrity")
    p.add_argument("graph")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("report", help="print the run report for a run directory")
    p.add_argument("run_dir")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("serve", help="serve graphs over the read-only HTTP API")
    p.add_argument("--graphs", required=True)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
