"""Command-line entry point.

Subcommands: `summarize` (one summary file per input document), `evaluate`
(corpus ROUGE/BERTScore report with histogram CSVs), `stats` (corpus
statistics table), and `provider-check` (embedding-service health probe).

Exit codes: 0 success, 1 input error, 2 provider/transport error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .embedding import (
    ProviderConfig,
    ExternalServiceProvider,
    StaticWordVectorProvider,
    TransportError,
    token_embedder_from_static,
)
from .evaluation import evaluate_corpus, gnuplot_script
from .ingest import EmptyDocumentError, ParseError, corpus_stats, load_document
from .pipeline import PipelineConfig, summarize_with_trace

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_TRANSPORT = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="longsumm",
        description="Graph-based long-document summarization and evaluation",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sm = sub.add_parser("summarize", help="summarize documents")
    sm.add_argument("inputs", nargs="+", help="document files (.json or .txt)")
    sm.add_argument("--config", help="config file (JSON or key=value)")
    sm.add_argument("--out", default=".", help="output directory")
    sm.add_argument("--provider", help="provider as kind:source")
    sm.add_argument("--strategy", choices=("pagerank", "mmr"))
    sm.add_argument("--mode", choices=("abstractive", "extractive"))
    sm.add_argument("--lambda", dest="mmr_lambda", type=float)
    sm.add_argument("--cutoff-ratio", type=float)
    sm.add_argument("--extended-ratio", type=float)
    sm.add_argument("--tau", type=float)
    sm.add_argument("--cap-words", type=int)
    sm.add_argument("--seed", type=int)
    sm.add_argument("--linker-window", type=int)
    sm.add_argument("--min-sentence-words", type=int)
    sm.add_argument("--max-sentence-words", type=int)
    sm.add_argument("--k-paths", type=int)
    sm.add_argument("--damping", type=float)
    sm.add_argument("--pagerank-tol", type=float)
    sm.add_argument("--pagerank-max-iter", type=int)
    sm.add_argument("--trace", action="store_true", help="also write stage traces")

    ev = sub.add_parser("evaluate", help="score candidate summaries")
    ev.add_argument("--cand", required=True, help="candidate directory")
    ev.add_argument("--ref", required=True, help="reference directory")
    ev.add_argument("--out", default=".", help="output directory")
    ev.add_argument(
        "--vectors", help="static word-vector file enabling BERTScore"
    )
    ev.add_argument(
        "--gnuplot", action="store_true", help="write gnuplot scripts for histograms"
    )

    st = sub.add_parser("stats", help="corpus statistics")
    st.add_argument("inputs", nargs="+", help="document files")
    st.add_argument("--refs", help="directory of reference summaries")
    st.add_argument("--out", help="also write stats JSON here")

    pc = sub.add_parser("provider-check", help="probe the embedding service")
    pc.add_argument("--url", required=True, help="service base URL")
    return parser


def _load_config(args: argparse.Namespace) -> PipelineConfig:
    if args.config:
        config = PipelineConfig.from_file(args.config)
    else:
        if not args.provider:
            raise ValueError("either --config or --provider is required")
        config = PipelineConfig(provider=ProviderConfig.parse(args.provider))
    overrides = {}
    for key in (
        "strategy",
        "mode",
        "mmr_lambda",
        "cutoff_ratio",
        "extended_ratio",
        "tau",
        "cap_words",
        "seed",
        "linker_window",
        "min_sentence_words",
        "max_sentence_words",
        "k_paths",
        "damping",
        "pagerank_tol",
        "pagerank_max_iter",
    ):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if args.provider and args.config:
        overrides["provider"] = ProviderConfig.parse(args.provider)
    if overrides:
        data = config.to_dict()
        data.update(overrides)
        config = PipelineConfig.from_mapping(data)
    return config.with_env_overrides()


def _cmd_summarize(args: argparse.Namespace) -> int:
    try:
        config = _load_config(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    had_input_error = False
    had_transport_error = False
    for raw_path in args.inputs:
        path = Path(raw_path)
        try:
            document = load_document(path)
            summary, trace = summarize_with_trace(document, config)
        except TransportError as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            had_transport_error = True
            continue
        except (ParseError, EmptyDocumentError, OSError, ValueError) as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            had_input_error = True
            continue
        doc_id = document.id or path.stem
        (out_dir / f"{doc_id}.summary.txt").write_text(
            summary.to_text(), encoding="utf-8"
        )
        report = summary.as_report()
        report["id"] = doc_id
        report["config"] = config.to_dict()
        (out_dir / f"{doc_id}.report.json").write_text(
            json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        if args.trace:
            (out_dir / f"{doc_id}.trace.json").write_text(
                json.dumps(trace.as_dict(), indent=2, sort_keys=True) + "\n",
                encoding="utf-8",
            )
        print(f"wrote {out_dir / (doc_id + '.summary.txt')}")
    if had_transport_error:
        return EXIT_TRANSPORT
    return EXIT_INPUT if had_input_error else EXIT_OK


def _read_summary_dir(directory: Path) -> dict[str, str]:
    """Map document id -> text for every .txt file in a directory.  The id is
    the file stem with a trailing `.summary` stripped."""
    out: dict[str, str] = {}
    for path in sorted(directory.glob("*.txt")):
        stem = path.stem
        if stem.endswith(".summary"):
            stem = stem[: -len(".summary")]
        out[stem] = path.read_text(encoding="utf-8")
    return out


def _cmd_evaluate(args: argparse.Namespace) -> int:
    cand_dir, ref_dir = Path(args.cand), Path(args.ref)
    if not cand_dir.is_dir() or not ref_dir.is_dir():
        print("error: --cand and --ref must be directories", file=sys.stderr)
        return EXIT_INPUT
    candidates = _read_summary_dir(cand_dir)
    references = _read_summary_dir(ref_dir)
    token_embedder = None
    if args.vectors:
        try:
            provider = StaticWordVectorProvider(args.vectors)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        token_embedder = token_embedder_from_static(provider)
    try:
        report = evaluate_corpus(candidates, references, token_embedder)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "eval.report.json").write_text(
        json.dumps(report.as_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    (out_dir / "eval.report.txt").write_text(report.format_table(), encoding="utf-8")
    for metric, histogram in report.histograms.items():
        csv_name = f"histogram_{metric}.csv"
        (out_dir / csv_name).write_text(histogram.to_csv(), encoding="utf-8")
        if args.gnuplot:
            (out_dir / f"histogram_{metric}.gp").write_text(
                gnuplot_script(csv_name), encoding="utf-8"
            )
    print(report.format_table())
    excluded = report.unmatched_candidates + report.unmatched_references
    if excluded:
        print(f"excluded ids: {', '.join(sorted(excluded))}")
    return EXIT_OK


def _cmd_stats(args: argparse.Namespace) -> int:
    documents = []
    had_error = False
    for raw_path in args.inputs:
        try:
            documents.append(load_document(Path(raw_path)))
        except (ParseError, EmptyDocumentError, OSError, ValueError) as exc:
            print(f"error: {raw_path}: {exc}", file=sys.stderr)
            had_error = True
    references = None
    if args.refs:
        references = []
        for path in sorted(Path(args.refs).glob("*")):
            if path.suffix.lower() not in (".txt", ".json"):
                continue
            try:
                references.append(load_document(path))
            except (ParseError, EmptyDocumentError, ValueError) as exc:
                print(f"error: {path}: {exc}", file=sys.stderr)
                had_error = True
    if not documents:
        print("error: no readable documents", file=sys.stderr)
        return EXIT_INPUT
    report = corpus_stats(documents, references)
    print(report.format_table())
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "stats.report.json").write_text(
            json.dumps(report.as_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
    return EXIT_INPUT if had_error else EXIT_OK


def _cmd_provider_check(args: argparse.Namespace) -> int:
    provider = ExternalServiceProvider(args.url)
    try:
        health = provider.health()
    except TransportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRANSPORT
    print(json.dumps(health, indent=2, sort_keys=True))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "summarize":
        return _cmd_summarize(args)
    if args.command == "evaluate":
        return _cmd_evaluate(args)
    if args.command == "stats":
        return _cmd_stats(args)
    return _cmd_provider_check(args)


if __name__ == "__main__":
    sys.exit(main())
