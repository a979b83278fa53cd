"""HTTP service over a collection of built indexes.

Endpoints: live phrase counts, synchronous overlap reports for small n-gram
files (raw body capped at 2 MiB before any decoding), queued batch jobs for
large files, and a novelty checker for generated text.  Indexes are loaded
once, checksum-verified, and shared immutably across request handlers; the
registry swaps atomically on reload.  Responses are serialized with sorted
keys so identical queries against the same registry snapshot produce
byte-identical bodies.
"""

from __future__ import annotations

import json
import logging
import os
import queue
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from fastapi import FastAPI, Request, Response

from . import stats
from .csa import FmIndex, load_index
from .textprep import tokenize_query

log = logging.getLogger("gramdex.service")

LIVE_LIMIT_BYTES = 2 * 1024 * 1024
BATCH_LIMIT_BYTES = 512 * 1024 * 1024
NOVELTY_LIMIT_BYTES = 64 * 1024
MAX_QUERY_TOKENS = 256
# lines longer than this still get count rows but are excluded from the
# aggregate matrices: all-substring tallies grow quadratically with length
MAX_INSTANCE_TOKENS = 2048


@dataclass
class ServiceConfig:
    """Runtime configuration; file values are overridden by environment."""

    index_paths: list[str] = field(default_factory=list)
    data_dir: str = "gramdex-data"
    frontend_dir: str = ""
    live_limit_bytes: int = LIVE_LIMIT_BYTES
    batch_limit_bytes: int = BATCH_LIMIT_BYTES
    novelty_limit_bytes: int = NOVELTY_LIMIT_BYTES
    max_query_tokens: int = MAX_QUERY_TOKENS
    max_instance_tokens: int = MAX_INSTANCE_TOKENS
    workers: int = 1
    retention_days: float = 7.0
    host: str = "127.0.0.1"
    port: int = 8080

    _INT_KEYS = (
        "live_limit_bytes",
        "batch_limit_bytes",
        "novelty_limit_bytes",
        "max_query_tokens",
        "max_instance_tokens",
        "workers",
        "port",
    )

    @classmethod
    def from_file(cls, path: str | Path, env: Mapping[str, str] | None = None) -> "ServiceConfig":
        """Parse key=value lines ('#' comments); GRAMDEX_<KEY> env vars win."""
        values: dict[str, str] = {}
        for raw in Path(path).read_text(encoding="utf-8").splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line is not key=value: {raw!r}")
            key, val = line.split("=", 1)
            values[key.strip()] = val.strip().strip("'\"")
        return cls._from_values(values, env)

    @classmethod
    def from_env(cls, env: Mapping[str, str] | None = None) -> "ServiceConfig":
        return cls._from_values({}, env)

    @classmethod
    def _from_values(cls, values: dict[str, str], env: Mapping[str, str] | None) -> "ServiceConfig":
        env = os.environ if env is None else env
        cfg = cls()
        for key in list(values):
            prefixed = f"GRAMDEX_{key.upper()}"
            if prefixed in env:
                values[key] = env[prefixed]
        for name in (
            "index_paths",
            "data_dir",
            "frontend_dir",
            "host",
            "retention_days",
            *cls._INT_KEYS,
        ):
            prefixed = f"GRAMDEX_{name.upper()}"
            if name not in values and prefixed in env:
                values[name] = env[prefixed]
        for key, val in values.items():
            if key == "index_paths":
                cfg.index_paths = [p.strip() for p in val.split(",") if p.strip()]
            elif key == "retention_days":
                cfg.retention_days = float(val)
            elif key in cls._INT_KEYS:
                setattr(cfg, key, int(val))
            elif hasattr(cfg, key):
                setattr(cfg, key, val)
            else:
                raise ValueError(f"unknown config key {key!r}")
        return cfg


@dataclass
class IndexEntry:
    index: FmIndex
    path: str
    size_bytes: int


class IndexRegistry:
    """corpus_id -> loaded, checksum-verified FmIndex; reloads swap atomically."""

    def __init__(self):
        self._entries: dict[str, IndexEntry] = {}
        self._lock = threading.Lock()

    def register(self, corpus_id: str, index: FmIndex, path: str = "", size_bytes: int = 0) -> None:
        with self._lock:
            entries = dict(self._entries)
            entries[corpus_id] = IndexEntry(index=index, path=path, size_bytes=size_bytes)
            self._entries = entries

    def load_paths(self, paths: list[str]) -> None:
        """Load index files and swap the whole registry in one step."""
        entries: dict[str, IndexEntry] = {}
        for path in paths:
            index = load_index(path)
            cid = index.meta.corpus_id or Path(path).stem
            entries[cid] = IndexEntry(index=index, path=str(path), size_bytes=os.path.getsize(path))
            log.info("loaded index %s from %s", cid, path)
        with self._lock:
            self._entries = entries

    def snapshot(self) -> dict[str, IndexEntry]:
        return self._entries

    def indexes(self) -> dict[str, FmIndex]:
        return {cid: e.index for cid, e in self._entries.items()}


@dataclass
class JobRecord:
    job_id: str
    status: str  # queued -> running -> done | failed
    created_at: float
    params: dict[str, Any]
    started_at: float | None = None
    finished_at: float | None = None
    error: str | None = None
    result_path: str | None = None

    def public(self) -> dict[str, Any]:
        out = {
            "job_id": self.job_id,
            "status": self.status,
            "created_at": self.created_at,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
        }
        if self.status == "done":
            out["result_url"] = f"/jobs/{self.job_id}/result"
        if self.status == "failed":
            out["error"] = self.error
        return out


class JobStore:
    """FIFO batch-job queue with file-backed results and retention expiry."""

    def __init__(self, data_dir: str | Path, registry: IndexRegistry, workers: int = 1,
                 retention_days: float = 7.0, max_instance_tokens: int = MAX_INSTANCE_TOKENS):
        self.dir = Path(data_dir) / "jobs"
        self.dir.mkdir(parents=True, exist_ok=True)
        self.registry = registry
        self.retention_seconds = retention_days * 86400
        self.max_instance_tokens = max_instance_tokens
        self._jobs: dict[str, JobRecord] = {}
        self._queue: queue.Queue[str] = queue.Queue()
        self._lock = threading.Lock()
        self._threads = [
            threading.Thread(target=self._worker, name=f"gramdex-job-{i}", daemon=True)
            for i in range(max(1, workers))
        ]
        for t in self._threads:
            t.start()

    def submit(self, payload: bytes, params: dict[str, Any]) -> str:
        self.prune()
        job_id = secrets.token_urlsafe(16)
        (self.dir / f"{job_id}.input").write_bytes(payload)
        record = JobRecord(job_id=job_id, status="queued", created_at=time.time(), params=params)
        with self._lock:
            self._jobs[job_id] = record
        self._queue.put(job_id)
        return job_id

    def get(self, job_id: str) -> JobRecord | None:
        with self._lock:
            record = self._jobs.get(job_id)
            if record and self.retention_seconds > 0:
                if time.time() - record.created_at > self.retention_seconds:
                    return None
            return record

    def result_bytes(self, job_id: str) -> bytes | None:
        record = self.get(job_id)
        if record is None or record.status != "done" or record.result_path is None:
            return None
        return Path(record.result_path).read_bytes()

    def prune(self) -> None:
        if self.retention_seconds <= 0:
            return
        cutoff = time.time() - self.retention_seconds
        with self._lock:
            stale = [jid for jid, r in self._jobs.items() if r.created_at < cutoff]
            for jid in stale:
                del self._jobs[jid]
                for suffix in (".input", ".result.json"):
                    try:
                        (self.dir / f"{jid}{suffix}").unlink(missing_ok=True)
                    except OSError:
                        pass

    def _worker(self) -> None:
        while True:
            job_id = self._queue.get()
            with self._lock:
                record = self._jobs.get(job_id)
                if record is None:
                    continue
                record.status = "running"
                record.started_at = time.time()
            try:
                payload = (self.dir / f"{job_id}.input").read_bytes()
                report = overlap_report(payload.decode("utf-8"), self.registry.indexes(),
                                        record.params, self.max_instance_tokens)
                path = self.dir / f"{job_id}.result.json"
                path.write_text(_dumps(report), encoding="utf-8")
                with self._lock:
                    record.result_path = str(path)
                    record.status = "done"
                    record.finished_at = time.time()
            except Exception as exc:  # job isolation: a bad file must not kill the worker
                log.exception("job %s failed", job_id)
                with self._lock:
                    record.status = "failed"
                    record.error = str(exc)
                    record.finished_at = time.time()
            finally:
                (self.dir / f"{job_id}.input").unlink(missing_ok=True)


def _dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _json_response(payload: Any, status_code: int = 200) -> Response:
    return Response(content=_dumps(payload), status_code=status_code,
                    media_type="application/json")


def _error(status_code: int, message: str) -> Response:
    return _json_response({"error": message}, status_code=status_code)


def _overlap_params(query: Mapping[str, str]) -> dict[str, Any]:
    params: dict[str, Any] = {}
    if "thresholds" in query:
        params["thresholds"] = [int(x) for x in query["thresholds"].split(",") if x]
    if "ks" in query:
        params["ks"] = [int(x) for x in query["ks"].split(",") if x]
    if "max_n" in query:
        params["max_n"] = int(query["max_n"])
    return params


def benchmark_to_dict(agg: stats.BenchmarkOverlap) -> dict[str, Any]:
    return {
        "ks": list(agg.ks),
        "thresholds": list(agg.grid.thresholds),
        "bins": [list(b) for b in agg.bins.bins],
        "instance_count": agg.instance_count,
        "hit_ratio": {str(k): agg.hit_ratio_mean[k] for k in agg.ks},
        "hit_ratio_support": {str(k): agg.hit_ratio_support[k] for k in agg.ks},
        "hit_length_ratio": agg.hit_length_ratio_mean,
        "hit_length_ratio_support": agg.hit_length_ratio_support,
    }


def overlap_report(text: str, indexes: Mapping[str, FmIndex],
                   params: Mapping[str, Any] | None = None,
                   max_instance_tokens: int = MAX_INSTANCE_TOKENS) -> dict[str, Any]:
    """Per-line count rows plus aggregated overlap matrices for an n-gram file.

    Lines longer than max_instance_tokens keep their count row but are left
    out of the aggregation (their all-substring tally would be quadratic).
    """
    params = params or {}
    grid = stats.ThresholdGrid(tuple(params.get("thresholds", stats.DEFAULT_THRESHOLDS)))
    ks = params.get("ks")
    rows = []
    instances = []
    skipped = 0
    line_no = 0
    for raw_line in text.splitlines():
        tokens = tokenize_query(raw_line)
        if not tokens:
            continue
        line_no += 1
        counts = {cid: idx.count(tokens) for cid, idx in indexes.items()}
        rows.append({
            "line": line_no,
            "tokens": tokens,
            "counts": counts,
            "total": sum(counts.values()),
        })
        if len(tokens) > max_instance_tokens:
            skipped += 1
            continue
        instances.append(
            stats.instance_overlap(f"line-{line_no}", tokens, indexes, ks=ks, grid=grid)
        )
    report: dict[str, Any] = {"line_count": line_no, "rows": rows}
    if skipped:
        report["skipped_instances"] = skipped
    if instances:
        report["benchmark"] = benchmark_to_dict(stats.aggregate_benchmark(instances))
    return report


def novelty_report(text: str, indexes: Mapping[str, FmIndex], min_len: int,
                   threshold: int) -> dict[str, Any]:
    """Maximal matched spans plus the count of every min_len-token window."""
    tokens = tokenize_query(text)
    spans = stats.highlight_overlaps(tokens, indexes, min_len=min_len, threshold=threshold)
    window_counts = []
    for i in range(max(0, len(tokens) - min_len + 1)):
        window_counts.append(stats.total_count(tokens[i : i + min_len], indexes))
    return {
        "tokens": tokens,
        "min_len": min_len,
        "threshold": threshold,
        "spans": [
            {"start": s.start, "end": s.end, "total_count": s.total_count} for s in spans
        ],
        "window_counts": window_counts,
    }


def create_app(config: ServiceConfig | None = None,
               registry: IndexRegistry | None = None) -> FastAPI:
    """Build the application; indexes come from the registry or config paths."""
    config = config or ServiceConfig()
    if registry is None:
        registry = IndexRegistry()
        if config.index_paths:
            registry.load_paths(config.index_paths)
    jobs = JobStore(config.data_dir, registry, workers=config.workers,
                    retention_days=config.retention_days,
                    max_instance_tokens=config.max_instance_tokens)
    app = FastAPI(title="gramdex", docs_url=None, redoc_url=None)
    app.state.registry = registry
    app.state.jobs = jobs
    app.state.config = config

    @app.middleware("http")
    async def request_log(request: Request, call_next):
        start = time.monotonic()
        response = await call_next(request)
        log.info(
            '%s %s -> %d (%.1f ms)',
            request.method, request.url.path, response.status_code,
            (time.monotonic() - start) * 1000,
        )
        return response

    @app.get("/corpora")
    async def corpora() -> Response:
        entries = registry.snapshot()
        out = [
            {
                "corpus_id": cid,
                "token_count": e.index.meta.token_count,
                "doc_count": e.index.meta.doc_count,
                "index_size": e.size_bytes,
            }
            for cid, e in sorted(entries.items())
        ]
        return _json_response(out)

    def _no_corpora() -> Response | None:
        if not registry.snapshot():
            return _error(503, "no corpora loaded")
        return None

    @app.get("/count")
    async def count(q: str = "", corpus: str = "all") -> Response:
        if (err := _no_corpora()) is not None:
            return err
        indexes = registry.indexes()
        tokens = tokenize_query(q)
        if not tokens:
            return _error(400, "query is empty after tokenization")
        if len(tokens) > config.max_query_tokens:
            return _error(400, f"query exceeds {config.max_query_tokens} tokens")
        if corpus != "all":
            if corpus not in indexes:
                return _error(404, f"unknown corpus {corpus!r}")
            indexes = {corpus: indexes[corpus]}
        per_corpus = {cid: idx.count(tokens) for cid, idx in sorted(indexes.items())}
        return _json_response({
            "query_tokens": tokens,
            "per_corpus": per_corpus,
            "total": sum(per_corpus.values()),
        })

    async def _read_ngram_body(request: Request, limit: int) -> bytes | Response:
        body = await request.body()
        if len(body) > limit:
            return _error(413, f"body is {len(body)} bytes, limit is {limit}")
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("multipart/form-data"):
            form = await request.form()
            for value in form.values():
                if hasattr(value, "read"):
                    return await value.read()
            return _error(400, "multipart request carries no file field")
        return body

    @app.post("/overlap")
    async def overlap(request: Request) -> Response:
        if (err := _no_corpora()) is not None:
            return err
        data = await _read_ngram_body(request, config.live_limit_bytes)
        if isinstance(data, Response):
            return data
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError:
            return _error(400, "file is not valid UTF-8")
        try:
            params = _overlap_params(request.query_params)
        except ValueError as exc:
            return _error(400, f"bad parameter: {exc}")
        return _json_response(overlap_report(text, registry.indexes(), params,
                                              config.max_instance_tokens))

    @app.post("/jobs")
    async def submit_job(request: Request) -> Response:
        if (err := _no_corpora()) is not None:
            return err
        data = await _read_ngram_body(request, config.batch_limit_bytes)
        if isinstance(data, Response):
            return data
        try:
            params = _overlap_params(request.query_params)
        except ValueError as exc:
            return _error(400, f"bad parameter: {exc}")
        job_id = jobs.submit(data, params)
        return _json_response({"job_id": job_id}, status_code=202)

    @app.get("/jobs/{job_id}")
    async def job_status(job_id: str) -> Response:
        record = jobs.get(job_id)
        if record is None:
            return _error(404, f"unknown job {job_id!r}")
        return _json_response(record.public())

    @app.get("/jobs/{job_id}/result")
    async def job_result(job_id: str) -> Response:
        blob = jobs.result_bytes(job_id)
        if blob is None:
            return _error(404, f"no result for job {job_id!r}")
        return Response(content=blob, media_type="application/json")

    @app.post("/novelty")
    async def novelty(request: Request) -> Response:
        if (err := _no_corpora()) is not None:
            return err
        body = await request.body()
        if len(body) > config.novelty_limit_bytes + 4096:
            return _error(413, f"request exceeds the {config.novelty_limit_bytes}-byte text limit")
        try:
            payload = json.loads(body)
        except json.JSONDecodeError:
            return _error(400, "body must be JSON")
        text = payload.get("text")
        if not isinstance(text, str) or not text:
            return _error(400, "field 'text' (non-empty string) is required")
        if len(text.encode("utf-8")) > config.novelty_limit_bytes:
            return _error(413, f"text exceeds {config.novelty_limit_bytes} bytes")
        min_len = int(payload.get("min_len", 1))
        threshold = int(payload.get("threshold", 1))
        if min_len < 1 or threshold < 1:
            return _error(400, "min_len and threshold must be >= 1")
        return _json_response(novelty_report(text, registry.indexes(), min_len, threshold))

    if config.frontend_dir and Path(config.frontend_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.frontend_dir, html=True), name="console")

    return app
