"""Command-line pipeline: dedup -> build-index -> count / stats / novelty / serve.

Each subcommand is a thin wrapper over the library modules.  Results go to
stdout (or --out); diagnostics go to stderr.  Exit codes: 0 success, 1 user
error, 2 internal error.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import dedup as dedup_mod
from . import stats
from .csa import FmIndex, build_fm_index, encode_corpus, load_index, save_index
from .csa.io import IndexFormatError
from .textprep import (
    IngestError,
    TokenSequence,
    prepare_document,
    read_jsonl_documents,
    read_plain_documents,
    tokenize_query,
)


class UserError(Exception):
    """Bad invocation or bad input; reported without a traceback."""


@dataclass
class PipelineConfig:
    """Defaults shared across subcommands, loaded from a key=value file.

    Explicit command-line flags always win over config values.
    """

    indexes: list[str] | None = None
    threshold: float | None = None
    permutations: int | None = None
    bands: int | None = None
    seed: int | None = None
    batch_size: int | None = None
    threads: int | None = None
    thresholds: list[int] | None = None
    ks: list[int] | None = None
    max_n: int | None = None
    bins: list[float] | None = None

    _INT_KEYS = ("permutations", "bands", "seed", "batch_size", "threads", "max_n")
    _INT_LIST_KEYS = ("thresholds", "ks")

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        p = Path(path)
        if not p.exists():
            raise UserError(f"config file not found: {path}")
        cfg = cls()
        for raw in p.read_text(encoding="utf-8").splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UserError(f"{path}: config line is not key=value: {raw!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            val = val.strip("'\"")
            if key == "indexes":
                cfg.indexes = [s.strip() for s in val.split(",") if s.strip()]
            elif key == "threshold":
                cfg.threshold = float(val)
            elif key in cls._INT_KEYS:
                setattr(cfg, key, int(val))
            elif key in cls._INT_LIST_KEYS:
                setattr(cfg, key, [int(s) for s in val.split(",") if s.strip()])
            elif key == "bins":
                cfg.bins = [float(s) for s in val.split(",") if s.strip()]
            else:
                raise UserError(f"{path}: unknown config key {key!r}")
        if cfg.indexes:
            missing = [s for s in cfg.indexes if not Path(s).exists()]
            if missing:
                raise UserError(f"{path}: index paths do not exist: {', '.join(missing)}")
        return cfg


def _pipeline_config(args) -> PipelineConfig:
    path = getattr(args, "config", None)
    return PipelineConfig.from_file(path) if path else PipelineConfig()


def _pick(*values, default=None):
    """First non-None of (CLI flag, config value, ...), else the default."""
    for v in values:
        if v is not None:
            return v
    return default


def _read_documents(path: str, input_format: str, corpus_id: str = ""):
    p = Path(path)
    if not p.exists():
        raise UserError(f"input file not found: {path}")
    if input_format == "auto":
        input_format = "text" if p.suffix in (".txt", ".text") else "jsonl"
    reader = read_plain_documents if input_format == "text" else read_jsonl_documents
    return reader(p, corpus_id)


def _load_docs_tokenized(path: str, input_format: str, corpus_id: str = "") -> list[TokenSequence]:
    return [prepare_document(d) for d in _read_documents(path, input_format, corpus_id)]


def _open_out(out: str | None):
    if out:
        return open(out, "w", encoding="utf-8")
    return contextlib.nullcontext(sys.stdout)


def _emit(payload, args, tsv_rows=None) -> None:
    """Write JSON (default) or TSV when --format tsv and rows are available."""
    with _open_out(getattr(args, "out", None)) as fh:
        if getattr(args, "format", "json") == "tsv" and tsv_rows is not None:
            for row in tsv_rows:
                fh.write("\t".join(str(x) for x in row) + "\n")
        else:
            json.dump(payload, fh, sort_keys=True, indent=2)
            fh.write("\n")


def _load_indexes(paths: list[str]) -> dict[str, FmIndex]:
    indexes: dict[str, FmIndex] = {}
    for path in paths:
        p = Path(path)
        if not p.exists():
            raise UserError(f"index file not found: {path}")
        try:
            idx = load_index(p)
        except IndexFormatError as exc:
            raise UserError(f"{path}: {exc}") from exc
        indexes[idx.meta.corpus_id or p.stem] = idx
    return indexes


def cmd_dedup(args) -> int:
    pc = _pipeline_config(args)
    docs = _load_docs_tokenized(args.input, args.input_format)
    permutations = _pick(args.permutations, pc.permutations, default=100)
    bands = _pick(args.bands, pc.bands, default=50)
    threshold = _pick(args.threshold, pc.threshold, default=0.95)
    seed = _pick(args.seed, pc.seed, default=0)
    batch_size = _pick(args.batch_size, pc.batch_size)
    threads = _pick(args.threads, pc.threads, default=1)
    if permutations % bands:
        raise UserError(f"--permutations {permutations} not divisible by --bands {bands}")
    cfg = dedup_mod.LshConfig(
        bands=bands,
        rows_per_band=permutations // bands,
        jaccard_threshold=threshold,
    )
    batch = dedup_mod.deduplicate(docs, cfg, seed=seed, batch_size=batch_size, threads=threads)
    if args.ledger:
        with open(args.ledger, "w", encoding="utf-8") as fh:
            for rec in batch.result.removals:
                fh.write(json.dumps({
                    "removed_id": rec.removed_id,
                    "kept_id": rec.kept_id,
                    "exact_jaccard": rec.exact_jaccard,
                }, sort_keys=True) + "\n")
    retained = set(batch.result.retained)
    by_id = {d.doc_id: d for d in docs}
    with _open_out(args.out) as fh:
        for doc_id in batch.result.retained:
            fh.write(json.dumps({
                "doc_id": doc_id,
                "text": " ".join(by_id[doc_id].tokens),
            }, sort_keys=True) + "\n")
    print(
        f"dedup: kept {len(retained)} of {batch.result.input_count}, "
        f"removed {batch.result.removed_count}",
        file=sys.stderr,
    )
    return 0


def cmd_build_index(args) -> int:
    docs = _load_docs_tokenized(args.corpus, args.input_format, args.corpus_id)
    encoded = encode_corpus(docs)
    index = build_fm_index(encoded, corpus_id=args.corpus_id)
    size = save_index(index, args.out)
    print(
        f"build-index: {encoded.doc_count} docs, {encoded.token_count} tokens, "
        f"sigma {encoded.vocabulary.sigma}, {size} bytes -> {args.out}",
        file=sys.stderr,
    )
    return 0


def _indexes_for(args, pc: PipelineConfig) -> dict[str, FmIndex]:
    paths = _pick(args.index, pc.indexes)
    if not paths:
        raise UserError("no index files given; pass --index or set indexes in --config")
    return _load_indexes(paths)


def cmd_count(args) -> int:
    indexes = _indexes_for(args, _pipeline_config(args))
    tokens = tokenize_query(args.q)
    if not tokens:
        raise UserError("query is empty after tokenization")
    per_corpus = {cid: idx.count(tokens) for cid, idx in sorted(indexes.items())}
    payload = {"query_tokens": tokens, "per_corpus": per_corpus,
               "total": sum(per_corpus.values())}
    tsv = [[" ".join(tokens), *per_corpus.values(), payload["total"]]]
    _emit(payload, args, tsv_rows=[["query", *per_corpus.keys(), "total"]] + tsv)
    return 0


def cmd_stats(args) -> int:
    pc = _pipeline_config(args)
    indexes = _indexes_for(args, pc)
    path = Path(args.ngrams)
    if not path.exists():
        raise UserError(f"n-gram file not found: {args.ngrams}")
    grid = stats.ThresholdGrid(tuple(_pick(args.thresholds, pc.thresholds,
                                           default=stats.DEFAULT_THRESHOLDS)))
    ks = _pick(args.ks, pc.ks)
    max_n = _pick(args.max_n, pc.max_n, default=6)
    edges = _pick(args.bins, pc.bins)
    bins = stats.LengthBins(tuple(zip(edges, edges[1:]))) if edges else stats.LengthBins()
    rows = []
    table_rows = []
    instances = []
    line_no = 0
    for raw_line in path.read_text(encoding="utf-8", errors="replace").splitlines():
        tokens = tokenize_query(raw_line)
        if not tokens:
            continue
        line_no += 1
        counts = {cid: idx.count(tokens) for cid, idx in sorted(indexes.items())}
        rows.append({"line": line_no, "tokens": tokens, "counts": counts,
                     "total": sum(counts.values())})
        instances.append(stats.instance_overlap(
            f"line-{line_no}", tokens, indexes, ks=ks, grid=grid, bins=bins))
        if args.table:
            for row in stats.count_table(tokens, indexes, max_n=max_n):
                table_rows.append([line_no, row.n, " ".join(row.tokens),
                                   *[row.counts[c] for c in sorted(row.counts)], row.total])
    payload = {"line_count": line_no, "rows": rows}
    if instances:
        from .service import benchmark_to_dict

        payload["benchmark"] = benchmark_to_dict(stats.aggregate_benchmark(instances))
    corpus_ids = sorted(indexes)
    tsv = [["line", "total", *corpus_ids, "ngram"]] + [
        [r["line"], r["total"], *[r["counts"][c] for c in corpus_ids], " ".join(r["tokens"])]
        for r in rows
    ]
    if args.table:
        payload["table"] = [
            {"line": t[0], "n": t[1], "tokens": t[2],
             "counts": dict(zip(corpus_ids, t[3:-1])), "total": t[-1]}
            for t in table_rows
        ]
    _emit(payload, args, tsv_rows=tsv)
    return 0


def cmd_novelty(args) -> int:
    indexes = _indexes_for(args, _pipeline_config(args))
    if args.text is not None:
        text = args.text
    else:
        p = Path(args.file)
        if not p.exists():
            raise UserError(f"text file not found: {args.file}")
        text = p.read_text(encoding="utf-8", errors="replace")
    from .service import novelty_report

    payload = novelty_report(text, indexes, min_len=args.min_len, threshold=args.threshold)
    tsv = [["start", "end", "total_count", "span"]] + [
        [s["start"], s["end"], s["total_count"],
         " ".join(payload["tokens"][s["start"]:s["end"]])]
        for s in payload["spans"]
    ]
    _emit(payload, args, tsv_rows=tsv)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    if args.config:
        if not Path(args.config).exists():
            raise UserError(f"config file not found: {args.config}")
        config = ServiceConfig.from_file(args.config)
    else:
        config = ServiceConfig.from_env()
    if args.index:
        config.index_paths = args.index
    if args.host:
        config.host = args.host
    if args.port:
        config.port = args.port
    if args.workers:
        config.workers = args.workers
    if not config.index_paths:
        raise UserError("no indexes configured; pass --index or set index_paths")
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gramdex",
                                     description="token-level corpus indexing and overlap statistics")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", help="write results to this file instead of stdout")
        p.add_argument("--format", choices=("json", "tsv"), default="json")
        p.add_argument("--config", help="key=value pipeline config supplying defaults")

    p = sub.add_parser("dedup", help="remove near-duplicate documents")
    p.add_argument("--input", required=True, help="JSONL corpus (doc_id, text)")
    p.add_argument("--input-format", choices=("auto", "jsonl", "text"), default="auto")
    p.add_argument("--threshold", type=float, help="Jaccard removal threshold (default 0.95)")
    p.add_argument("--permutations", type=int, help="signature length (default 100)")
    p.add_argument("--bands", type=int, help="LSH bands (default 50)")
    p.add_argument("--seed", type=int, help="hash seed (default 0)")
    p.add_argument("--batch-size", type=int, help="deduplicate in batches of this many docs")
    p.add_argument("--threads", type=int, help="signature-computation workers (default 1)")
    p.add_argument("--ledger", help="write removal records as JSONL here")
    p.add_argument("--out", help="write retained documents as JSONL here")
    p.add_argument("--config", help="key=value pipeline config supplying defaults")
    p.set_defaults(func=cmd_dedup)

    p = sub.add_parser("build-index", help="build a searchable index from a corpus")
    p.add_argument("--corpus", required=True, help="JSONL corpus (doc_id, text)")
    p.add_argument("--input-format", choices=("auto", "jsonl", "text"), default="auto")
    p.add_argument("--corpus-id", required=True)
    p.add_argument("--out", required=True, help="index output path (.koala)")
    p.set_defaults(func=cmd_build_index)

    p = sub.add_parser("count", help="count a phrase in the indexed corpora")
    p.add_argument("--index", action="append", help="index file (repeatable)")
    p.add_argument("--q", required=True, help="query text")
    add_common(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("stats", help="overlap statistics for an n-gram file")
    p.add_argument("--index", action="append", help="index file (repeatable)")
    p.add_argument("--ngrams", required=True, help="plain text file, one n-gram per line")
    p.add_argument("--thresholds", type=int, nargs="+",
                   help=f"frequency thresholds (default {' '.join(map(str, stats.DEFAULT_THRESHOLDS))})")
    p.add_argument("--ks", type=int, nargs="+", help="k values for the hit-ratio matrix")
    p.add_argument("--max-n", type=int, help="largest n for --table rows (default 6)")
    p.add_argument("--bins", type=float, nargs="+",
                   help="relative-length bin edges (default 0 0.25 0.5 0.75 1)")
    p.add_argument("--table", action="store_true", help="include per-corpus n-gram count table")
    add_common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("novelty", help="highlight memorized spans in generated text")
    p.add_argument("--index", action="append", help="index file (repeatable)")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--text")
    group.add_argument("--file")
    p.add_argument("--min-len", type=int, default=2)
    p.add_argument("--threshold", type=int, default=1)
    add_common(p)
    p.set_defaults(func=cmd_novelty)

    p = sub.add_parser("serve", help="run the HTTP query service")
    p.add_argument("--config", help="key=value service config file")
    p.add_argument("--index", action="append", help="index file (repeatable)")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--workers", "--threads", dest="workers", type=int,
                   help="batch-job worker threads")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UserError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except IngestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception:
        import traceback

        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
